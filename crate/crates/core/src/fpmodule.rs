//! Finitely presented graded modules M = coker(relations) over a graded
//! quotient ring, with minimal presentations, Hilbert series, Krull
//! dimension, and annihilators.

use crate::error::{Error, Result};
use crate::groebner::{kernel_with_relations, normal_form, ModuleGB};
use crate::modelem::{Matrix, ModElem};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use crate::ring::Ring;

/// A graded module given by generators (with degrees) and homogeneous
/// relation columns; the cokernel of `relations` on the free module with
/// generator degrees `gen_degrees`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpModule {
    pub ring: Ring,
    pub gen_degrees: Vec<i64>,
    pub relations: Matrix,
}

/// Minimal presentation together with the surviving generator indices.
/// Survivors keep their meaning: the minimal module's generator t is the
/// image of original generator kept[t].
pub struct MinimalData {
    pub module: FpModule,
    pub kept: Vec<usize>,
}

impl FpModule {
    /// Validating constructor: entries are normal-formed, zero columns are
    /// dropped, and every column must be homogeneous for the twists.
    pub fn new(ring: Ring, gen_degrees: Vec<i64>, relation_cols: Vec<ModElem>) -> Result<Self> {
        let mut cols = Vec::with_capacity(relation_cols.len());
        for col in &relation_cols {
            if let Some(m) = col.max_position() {
                if m >= gen_degrees.len() {
                    return Err(Error::RankMismatch { expected: gen_degrees.len(), got: m + 1 });
                }
            }
            let reduced = ring.reduce_elem(col);
            if reduced.is_zero() {
                continue;
            }
            if !reduced.is_homogeneous(&gen_degrees) {
                return Err(Error::NotHomogeneous(format!("relation column {reduced:?}")));
            }
            cols.push(reduced);
        }
        Ok(FpModule { relations: Matrix::new(gen_degrees.len(), cols), ring, gen_degrees })
    }

    pub fn zero(ring: Ring) -> Self {
        FpModule { ring, gen_degrees: vec![], relations: Matrix::zero(0) }
    }

    pub fn free(ring: Ring, twists: Vec<i64>) -> Self {
        let rank = twists.len();
        FpModule { ring, gen_degrees: twists, relations: Matrix::zero(rank) }
    }

    /// R itself as a module.
    pub fn ring_module(ring: Ring) -> Self {
        FpModule::free(ring, vec![0])
    }

    /// Cyclic module R/(ideal_gens), one generator in degree 0.
    pub fn cyclic(ring: Ring, ideal_gens: &[Polynomial]) -> Result<Self> {
        let cols = ideal_gens
            .iter()
            .map(|g| ModElem::single(0, g.clone()))
            .collect();
        FpModule::new(ring, vec![0], cols)
    }

    /// The residue field k = R/(x_1..x_n).
    pub fn residue_field(ring: Ring) -> Self {
        let n = ring.nvars();
        let cols = (0..n)
            .map(|v| ModElem::single(0, Polynomial::var(n, v)))
            .collect();
        let relations = Matrix::new(1, cols);
        FpModule { ring, gen_degrees: vec![0], relations }
    }

    pub fn rank(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn same_ring(&self, other: &FpModule) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Degree of each relation column.
    pub fn relation_degrees(&self) -> Vec<i64> {
        self.relations
            .cols
            .iter()
            .map(|c| c.homogeneous_degree(&self.gen_degrees).expect("columns homogeneous"))
            .collect()
    }

    /// M(a): degrees drop by a, so M(a)_d = M_{d+a}.
    pub fn twist(&self, a: i64) -> FpModule {
        FpModule {
            ring: self.ring.clone(),
            gen_degrees: self.gen_degrees.iter().map(|d| d - a).collect(),
            relations: self.relations.clone(),
        }
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule> {
        self.same_ring(other)?;
        let mut gen_degrees = self.gen_degrees.clone();
        gen_degrees.extend_from_slice(&other.gen_degrees);
        Ok(FpModule {
            ring: self.ring.clone(),
            gen_degrees,
            relations: self.relations.direct_sum(&other.relations),
        })
    }

    /// Reduced basis of the relation submodule over R (quotient columns
    /// folded in), the workhorse for membership and Hilbert data.
    pub fn relations_gb(&self) -> std::sync::Arc<ModuleGB> {
        crate::rescache::relations_gb(self)
    }

    /// Canonical representative of v in M's free cover.
    pub fn reduce(&self, v: &ModElem) -> ModElem {
        normal_form(v, &self.relations_gb(), self.ring.actx())
    }

    pub fn is_zero_module(&self) -> bool {
        if self.gen_degrees.is_empty() {
            return true;
        }
        let gb = self.relations_gb();
        let n = self.ring.nvars();
        (0..self.rank()).all(|i| {
            normal_form(&ModElem::unit(i, n), &gb, self.ring.actx()).is_zero()
        })
    }

    /// Minimal presentation: relation entries pushed into the graded maximal
    /// ideal by unit pivoting, then a minimal set of relation columns.
    pub fn minimal_presentation(&self) -> FpModule {
        self.minimal_data().module
    }

    pub fn minimal_data(&self) -> MinimalData {
        let ctx = self.ring.actx();
        let field = self.ring.field();
        // live generator indices and working columns (normal-formed)
        let mut kept: Vec<usize> = (0..self.rank()).collect();
        let mut degs = self.gen_degrees.clone();
        let mut cols: Vec<ModElem> = self
            .relations
            .cols
            .iter()
            .map(|c| self.ring.reduce_elem(c))
            .filter(|c| !c.is_zero())
            .collect();

        // unit pivoting: a constant entry c at (row i, col j) lets generator
        // i be rewritten in the others; clear row i from every other column
        // and delete row i and column j
        'pivot: loop {
            for j in 0..cols.len() {
                let unit = cols[j].comps.iter().find_map(|(pos, p)| {
                    p.constant_value().map(|c| (*pos, c))
                });
                if let Some((row, c)) = unit {
                    let pivot = cols[j].clone();
                    let cinv = field.inv(c).unwrap();
                    let mut next: Vec<ModElem> = Vec::with_capacity(cols.len() - 1);
                    for (jj, col) in cols.iter().enumerate() {
                        if jj == j {
                            continue;
                        }
                        let coeff = col.get(row).cloned().unwrap_or_else(Polynomial::zero);
                        let mut new_col = if coeff.is_zero() {
                            col.clone()
                        } else {
                            let factor = coeff.scale(field.neg(cinv), field);
                            col.add(&pivot.mul_poly(&factor, ctx), ctx)
                        };
                        new_col.comps.retain(|(pos, _)| *pos != row);
                        let new_col = self.ring.reduce_elem(&new_col);
                        if !new_col.is_zero() {
                            next.push(new_col);
                        }
                    }
                    // renumber positions above the deleted row
                    let renumber = |col: &ModElem| ModElem {
                        comps: col
                            .comps
                            .iter()
                            .map(|(pos, p)| (if *pos > row { *pos - 1 } else { *pos }, p.clone()))
                            .collect(),
                    };
                    cols = next.iter().map(renumber).collect();
                    kept.remove(row);
                    degs.remove(row);
                    continue 'pivot;
                }
            }
            break;
        }

        let keep_cols = minimal_generators(&self.ring, &degs, &cols);
        let cols: Vec<ModElem> = keep_cols.into_iter().map(|j| cols[j].clone()).collect();
        let module = FpModule {
            ring: self.ring.clone(),
            relations: Matrix::new(degs.len(), cols),
            gen_degrees: degs,
        };
        MinimalData { module, kept }
    }

    /// dim_k M_d for d = 0..=cap.
    pub fn hilbert_series(&self, cap: i64) -> Vec<usize> {
        self.hilbert_window(0, cap)
    }

    /// dim_k M_d for d = lo..=hi, by counting standard monomials per
    /// position against the relation basis leads.
    pub fn hilbert_window(&self, lo: i64, hi: i64) -> Vec<usize> {
        if hi < lo {
            return vec![];
        }
        let leads = self.lead_monomials();
        let n = self.ring.nvars();
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        for d in lo..=hi {
            let mut count = 0usize;
            for (i, &g) in self.gen_degrees.iter().enumerate() {
                let local = d - g;
                if local < 0 {
                    continue;
                }
                for m in monomials_of_degree(n, local as u32) {
                    if !leads[i].iter().any(|l| l.divides(&m)) {
                        count += 1;
                    }
                }
            }
            out.push(count);
        }
        out
    }

    /// Lead monomials of the relation basis, grouped by position. The
    /// relation basis of a rank-0 module is artificially rank 1, so its
    /// entries are skipped rather than indexed.
    fn lead_monomials(&self) -> Vec<Vec<Monomial>> {
        let mut leads: Vec<Vec<Monomial>> = vec![Vec::new(); self.rank()];
        if self.rank() == 0 {
            return leads;
        }
        let gb = self.relations_gb();
        for g in &gb.gens {
            let (pos, m, _) = g.lead().unwrap();
            leads[pos].push(m.clone());
        }
        leads
    }

    /// Krull dimension; None is the zero module's dimension (minus infinity).
    pub fn krull_dim(&self) -> Option<usize> {
        if self.is_zero_module() {
            return None;
        }
        // the initial module of the relations has the same Hilbert function,
        // and splits by position into monomial quotients of the ambient ring
        let leads = self.lead_monomials();
        let n = self.ring.nvars();
        let mut best = 0usize;
        for pos_leads in &leads {
            best = best.max(monomial_quotient_dim(n, pos_leads));
        }
        Some(best)
    }

    /// Generators of ann_R(M) = {r : r M = 0}, minimalized.
    pub fn annihilator(&self) -> Vec<Polynomial> {
        let min = self.minimal_presentation();
        let r = min.rank();
        if r == 0 {
            // ann(0) = R
            return vec![Polynomial::one(self.ring.nvars())];
        }
        let ctx = self.ring.actx();
        // one kernel: r |-> (r g_1, .., r g_r) into the direct sum of r
        // copies of M's free cover, relations blockwise
        let big_rank = r * r;
        let mut candidate = ModElem::zero();
        for i in 0..r {
            candidate = candidate.add(
                &ModElem::unit(i, ctx.nvars).offset_positions(i * r),
                ctx,
            );
        }
        let mut extra: Vec<ModElem> = Vec::new();
        for block in 0..r {
            for col in &min.relations.cols {
                extra.push(col.offset_positions(block * r));
            }
        }
        extra.extend(self.ring.quotient_columns(big_rank + 1));
        let taus = kernel_with_relations(ctx, big_rank, &[candidate], &extra, None, None);
        let gens: Vec<ModElem> = taus
            .iter()
            .map(|t| {
                let p = t.get(0).cloned().unwrap_or_else(Polynomial::zero);
                ModElem::single(0, self.ring.normal_form(&p))
            })
            .filter(|e| !e.is_zero())
            .collect();
        let keep = minimal_generators(&self.ring, &[0], &gens);
        keep.into_iter()
            .map(|j| gens[j].comps[0].1.clone())
            .collect()
    }

    /// ann(M) is contained in the ideal with the given reduced basis.
    pub fn annihilator_contained_in(&self, ideal_gb: &ModuleGB) -> bool {
        self.annihilator()
            .iter()
            .all(|g| ideal_gb.contains(&ModElem::single(0, g.clone()), self.ring.actx()))
    }
}

/// Indices forming a minimal generating set of the R-span of `cols`
/// (ascending degree greedy; a kept column is never in the span of the
/// other kept columns, by the graded Nakayama argument).
pub fn minimal_generators(ring: &Ring, twists: &[i64], cols: &[ModElem]) -> Vec<usize> {
    let ctx = ring.actx();
    let mut order: Vec<usize> = (0..cols.len()).collect();
    let degree = |j: usize| {
        cols[j]
            .homogeneous_degree(twists)
            .expect("minimal_generators needs homogeneous columns")
    };
    order.sort_by_key(|&j| (degree(j), j));
    order.retain(|&j| !cols[j].is_zero());

    // monomial fast path: span membership is lead divisibility
    let monomial_world = cols.iter().all(|c| c.comps.len() <= 1 && c.comps.iter().all(|(_, p)| p.terms.len() == 1))
        && ring.quotient().iter().all(|q| q.terms.len() == 1);
    if monomial_world {
        let rank = twists.len().max(1);
        let mut kept_leads: Vec<Vec<Monomial>> = vec![Vec::new(); rank];
        for q in ring.quotient() {
            let m = q.lead().unwrap().0.clone();
            for pos_leads in kept_leads.iter_mut() {
                pos_leads.push(m.clone());
            }
        }
        let mut kept = Vec::new();
        for j in order {
            let (pos, m, _) = cols[j].lead().unwrap();
            if !kept_leads[pos].iter().any(|l| l.divides(m)) {
                kept_leads[pos].push(m.clone());
                kept.push(j);
            }
        }
        kept.sort();
        return kept;
    }

    let rank = twists.len().max(1);
    let quotient_cols = ring.quotient_columns(rank);
    let mut kept: Vec<usize> = Vec::new();
    let mut basis_inputs: Vec<ModElem> = quotient_cols;
    let mut gb = crate::groebner::buchberger(
        ctx,
        rank,
        &basis_inputs,
        crate::groebner::BuchbergerOptions::default(),
    );
    for j in order {
        if !gb.contains(&cols[j], ctx) {
            kept.push(j);
            basis_inputs.push(cols[j].clone());
            gb = crate::groebner::buchberger(
                ctx,
                rank,
                &basis_inputs,
                crate::groebner::BuchbergerOptions::default(),
            );
        }
    }
    kept.sort();
    kept
}

/// Krull dimension of P/J for the monomial ideal J: the largest set of
/// variables meeting no generator's support.
fn monomial_quotient_dim(nvars: usize, gens: &[Monomial]) -> usize {
    if gens.iter().any(|m| m.is_one()) {
        return 0;
    }
    let supports: Vec<u32> = gens
        .iter()
        .map(|m| {
            let mut mask = 0u32;
            for (v, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    mask |= 1 << v;
                }
            }
            mask
        })
        .collect();
    let mut best = 0usize;
    for subset in 0u32..(1 << nvars) {
        if supports.iter().any(|s| s & !subset == 0) {
            continue; // some generator survives on these variables
        }
        best = best.max(subset.count_ones() as usize);
    }
    best
}
