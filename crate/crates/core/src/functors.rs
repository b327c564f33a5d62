//! Hom, Ext, and Tor of finitely presented graded modules, computed as
//! subquotients of block modules over a free resolution of the first
//! argument.
//!
//! Block convention: Hom(F, N) and F (x) N for F free of rank r are the
//! ambient module R^{r*n}, n = rank N, position (i, m) stored at i*n + m.

use crate::error::{Error, Result};
use crate::fpmodule::FpModule;
use crate::groebner::kernel_with_relations;
use crate::maps::ModuleMap;
use crate::modelem::{Matrix, ModElem};
use crate::poly::Polynomial;
use crate::rescache::free_resolution;
use crate::subquot::SubQuot;
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

/// Generator degrees of a block module: position (i, m) gets
/// inner[m] + sign * outer[i] (sign -1 for Hom, +1 for tensor).
fn block_twists(outer: &[i64], inner: &[i64], sign: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity(outer.len() * inner.len());
    for a in outer {
        for c in inner {
            out.push(c + sign * a);
        }
    }
    out
}

/// Relations of a block module: one copy of the inner module's relations
/// per outer block.
fn block_relations(outer_rank: usize, inner: &FpModule) -> Vec<ModElem> {
    let n = inner.rank();
    let mut out = Vec::with_capacity(outer_rank * inner.relations.ncols());
    for i in 0..outer_rank {
        for q in &inner.relations.cols {
            out.push(q.offset_positions(i * n));
        }
    }
    out
}

/// Pullback along d: F' -> F of Hom blocks with inner rank n: a map
/// R^{d.rows * n} -> R^{d.ncols() * n}. Column (i, m) sends the hom
/// "generator i of F to e_m" to its composite with d.
pub fn hom_induced(d: &Matrix, n: usize) -> Matrix {
    let r0 = d.rows;
    let r1 = d.ncols();
    let mut cols = Vec::with_capacity(r0 * n);
    for i in 0..r0 {
        for m in 0..n {
            let mut comps: Vec<(usize, Polynomial)> = Vec::new();
            for j in 0..r1 {
                let p = d.entry(i, j);
                if !p.is_zero() {
                    comps.push((j * n + m, p));
                }
            }
            cols.push(ModElem { comps });
        }
    }
    Matrix::new(r1 * n, cols)
}

/// d (x) N for d: F' -> F: a map R^{d.ncols() * n} -> R^{d.rows * n}.
pub fn tensor_induced(d: &Matrix, n: usize) -> Matrix {
    let r1 = d.ncols();
    let mut cols = Vec::with_capacity(r1 * n);
    for k in 0..r1 {
        for m in 0..n {
            let comps: Vec<(usize, Polynomial)> = d.cols[k]
                .comps
                .iter()
                .map(|(i, p)| (i * n + m, p.clone()))
                .collect();
            cols.push(ModElem { comps });
        }
    }
    Matrix::new(d.rows * n, cols)
}

/// Hom(M, N) together with the ambient data needed to read a generator
/// back as an actual homomorphism M -> N.
pub struct HomData {
    pub source: FpModule,
    pub target: FpModule,
    /// Ambient block R^{rank M * rank N} modulo blockwise target relations;
    /// `sub.module` is the minimal presentation of Hom(M, N).
    pub sub: SubQuot,
}

impl HomData {
    pub fn module(&self) -> &FpModule {
        &self.sub.module
    }

    /// Ambient block vector for the element with the given coordinates
    /// over `sub.module`'s generators.
    pub fn ambient_of(&self, coords: &[Polynomial]) -> ModElem {
        let ctx = self.source.ring.actx();
        let mut acc = ModElem::zero();
        for (t, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&self.sub.gens[t].mul_poly(c, ctx), ctx);
        }
        self.source.ring.reduce_elem(&acc)
    }

    /// The homomorphism matrix (target.rank rows, source.rank columns) of
    /// an ambient block vector.
    pub fn matrix_of(&self, ambient: &ModElem) -> Matrix {
        let n = self.target.rank();
        let mut cols = vec![ModElem::zero(); self.source.rank()];
        for (pos, p) in &ambient.comps {
            cols[pos / n].comps.push((pos % n, p.clone()));
        }
        Matrix::new(n, cols)
    }

    /// Generator t of Hom(M, N) as a certified degree-zero map; a generator
    /// of degree d raises degrees by d, so the source is twisted to absorb d.
    pub fn generator_map(&self, t: usize) -> Result<ModuleMap> {
        let d = self.sub.module.gen_degrees[t];
        ModuleMap::new(
            self.source.twist(-d),
            self.target.clone(),
            self.matrix_of(&self.sub.gens[t]),
        )
    }
}

/// Hom(M, N) on M's presentation as given (generators of the result are
/// homomorphisms written over M's own generators).
pub fn hom_with_data(m: &FpModule, n: &FpModule) -> Result<HomData> {
    m.same_ring(n)?;
    let ring = &m.ring;
    let nn = n.rank();
    let h0_twists = block_twists(&m.gen_degrees, &n.gen_degrees, -1);
    let h0_rels = block_relations(m.rank(), n);
    let r1 = m.relations.ncols();
    let sub = if r1 == 0 || m.rank() == 0 || nn == 0 {
        SubQuot::whole(ring, &h0_twists, &h0_rels)?
    } else {
        let delta = hom_induced(&m.relations, nn);
        let h1_rank = r1 * nn;
        let mut extra = block_relations(r1, n);
        extra.extend(ring.quotient_columns(h1_rank + h0_twists.len()));
        let taus = kernel_with_relations(ring.actx(), h1_rank, &delta.cols, &extra, None, None);
        SubQuot::present(ring, &h0_twists, &taus, &h0_rels)?
    };
    Ok(HomData { source: m.clone(), target: n.clone(), sub })
}

pub fn hom(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    Ok(hom_with_data(m, n)?.sub.module.clone())
}

/// Scans across many cohomological indices repeat the same block kernels,
/// so Ext results are memoized process-wide like resolutions are.
static EXT_CACHE: LazyLock<Mutex<HashMap<(FpModule, FpModule, usize), FpModule>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Ext^i(M, N) from a minimal free resolution of M, for i <= bound.
pub fn ext(m: &FpModule, n: &FpModule, i: usize, bound: usize) -> Result<FpModule> {
    m.same_ring(n)?;
    if i > bound {
        return Err(Error::InvalidInput(format!(
            "cohomological index {i} exceeds bound {bound}"
        )));
    }
    let key = (m.clone(), n.clone(), i);
    if let Some(e) = EXT_CACHE.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let result = ext_uncached(m, n, i)?;
    EXT_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| result.clone());
    Ok(result)
}

fn ext_uncached(m: &FpModule, n: &FpModule, i: usize) -> Result<FpModule> {
    if i == 0 {
        return hom(m, n);
    }
    let ring = &m.ring;
    let nn = n.rank();
    let res = free_resolution(m, i + 1);
    let ri = res.betti(i);
    if ri == 0 || nn == 0 {
        return Ok(FpModule::zero(ring.clone()));
    }
    let hi_twists = block_twists(res.twist_row(i), &n.gen_degrees, -1);
    let hi_rank = ri * nn;
    let r_next = res.betti(i + 1);
    let gens: Vec<ModElem> = if r_next == 0 {
        (0..hi_rank).map(|t| ModElem::unit(t, ring.nvars())).collect()
    } else {
        let delta_next = hom_induced(&res.differentials[i], nn);
        let next_rank = r_next * nn;
        let mut extra = block_relations(r_next, n);
        extra.extend(ring.quotient_columns(next_rank + hi_rank));
        kernel_with_relations(ring.actx(), next_rank, &delta_next.cols, &extra, None, None)
    };
    let mut denoms = block_relations(ri, n);
    denoms.extend(hom_induced(&res.differentials[i - 1], nn).cols);
    Ok(SubQuot::present(ring, &hi_twists, &gens, &denoms)?.module)
}

/// Tor_i(M, N) from a minimal free resolution of M.
pub fn tor(m: &FpModule, n: &FpModule, i: usize) -> Result<FpModule> {
    m.same_ring(n)?;
    let ring = &m.ring;
    let nn = n.rank();
    let res = free_resolution(m, i + 1);
    let ri = res.betti(i);
    if ri == 0 || nn == 0 {
        return Ok(FpModule::zero(ring.clone()));
    }
    let ti_twists = block_twists(res.twist_row(i), &n.gen_degrees, 1);
    let ti_rank = ri * nn;
    let gens: Vec<ModElem> = if i == 0 {
        (0..ti_rank).map(|t| ModElem::unit(t, ring.nvars())).collect()
    } else {
        let t_i = tensor_induced(&res.differentials[i - 1], nn);
        let prev_rank = res.betti(i - 1) * nn;
        let mut extra = block_relations(res.betti(i - 1), n);
        extra.extend(ring.quotient_columns(prev_rank + ti_rank));
        kernel_with_relations(ring.actx(), prev_rank, &t_i.cols, &extra, None, None)
    };
    let mut denoms = block_relations(ri, n);
    if res.betti(i + 1) > 0 {
        denoms.extend(tensor_induced(&res.differentials[i], nn).cols);
    }
    Ok(SubQuot::present(ring, &ti_twists, &gens, &denoms)?.module)
}
