//! Graded isomorphism testing: fast invariant separation, then a randomized
//! search through the degree-zero homomorphism space with certified
//! two-sided inverses. "Iso" and "NotIso" verdicts are always proofs;
//! failure to decide is reported as Unknown.

use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::fpmodule::FpModule;
use crate::groebner::ModuleGB;
use crate::linalg::FpMat;
use crate::maps::ModuleMap;
use crate::modelem::{Matrix, ModElem};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rescache::relations_gb;
use crate::ring::Ring;
use crate::subquot::SubQuot;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// Invariant that separates the two modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotIsoReason {
    GeneratorDegrees,
    RelationDegrees,
    HilbertSeries,
    Annihilator,
}

/// A certified graded isomorphism: both composites were checked to be
/// identities modulo relations.
#[derive(Debug, Clone)]
pub struct IsoWitness {
    pub forward: ModuleMap,
    pub backward: ModuleMap,
}

#[derive(Debug, Clone)]
pub enum IsoVerdict {
    Iso(Box<IsoWitness>),
    NotIso(NotIsoReason),
    Unknown,
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Iso(_))
    }
}

/// Minimal model of a module plus the coordinates of each original
/// generator over the kept ones.
struct MinModel {
    sub: SubQuot,
    kept: Vec<usize>,
}

fn minimal_model(m: &FpModule) -> Result<MinModel> {
    let kept = m.minimal_data().kept;
    let units: Vec<ModElem> = kept
        .iter()
        .map(|&j| ModElem::unit(j, m.ring.nvars()))
        .collect();
    let sub = SubQuot::present(&m.ring, &m.gen_degrees, &units, &m.relations.cols)?;
    if sub.gens.len() != kept.len() {
        return Err(Error::Internal(
            "minimal generating set shrank during re-presentation".into(),
        ));
    }
    Ok(MinModel { sub, kept })
}

/// One monomial coordinate of the degree-zero hom space between two
/// minimal models (source generator, target generator, monomial).
struct Unknown {
    src_gen: usize,
    tgt_gen: usize,
    mono: Monomial,
}

/// The degree-zero homomorphism space A -> B as explicit matrices over
/// module generators, one per F_p basis vector.
struct HomSpace {
    unknowns: Vec<Unknown>,
    basis: Vec<Vec<Fp>>,
}

impl HomSpace {
    /// The matrix (over module generators) of the combination sum_b c_b * basis_b.
    fn matrix(&self, coeffs: &[Fp], a: &FpModule, b: &FpModule) -> Matrix {
        let ring = &a.ring;
        let ctx = ring.actx();
        let mut cols = vec![ModElem::zero(); a.rank()];
        for (u, unk) in self.unknowns.iter().enumerate() {
            let mut total = Fp(0);
            for (c, vec) in coeffs.iter().zip(&self.basis) {
                total = ring.field().add(total, ring.field().mul(*c, vec[u]));
            }
            if total.0 == 0 {
                continue;
            }
            let term = ModElem::single(
                unk.tgt_gen,
                Polynomial::monomial(unk.mono.clone(), total),
            );
            cols[unk.src_gen] = cols[unk.src_gen].add(&term, ctx);
        }
        Matrix::new(b.rank(), cols)
    }
}

/// Degree-zero hom space between minimal models a and b: unknowns are
/// monomial coordinates, constraints say every relation of a maps into
/// the relation span of b.
fn hom_space(a: &FpModule, b: &FpModule) -> HomSpace {
    let ring = &a.ring;
    let field = ring.field();
    let ctx = ring.actx();
    let mut unknowns = Vec::new();
    for (j, aj) in a.gen_degrees.iter().enumerate() {
        for (m, cm) in b.gen_degrees.iter().enumerate() {
            for mono in ring.standard_monomials(aj - cm) {
                unknowns.push(Unknown { src_gen: j, tgt_gen: m, mono });
            }
        }
    }
    let gb = relations_gb(b);
    let mut rows: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, Fp)>> = Vec::new();
    for (r, rel) in a.relations.cols.iter().enumerate() {
        for (u, unk) in unknowns.iter().enumerate() {
            let rho_j = rel.get(unk.src_gen).cloned().unwrap_or_default();
            if rho_j.is_zero() {
                continue;
            }
            let contrib = ModElem::single(
                unk.tgt_gen,
                rho_j.mul_term(&unk.mono, field.one(), field),
            );
            let nf = crate::groebner::normal_form(&contrib, &gb, ctx);
            for (pos, poly) in &nf.comps {
                for (mono, coeff) in &poly.terms {
                    let key = (r, *pos, mono.clone());
                    let next = entries.len();
                    let row = *rows.entry(key).or_insert(next);
                    if row == entries.len() {
                        entries.push(Vec::new());
                    }
                    entries[row].push((u, *coeff));
                }
            }
        }
    }
    let mut mat = FpMat::zero(entries.len(), unknowns.len());
    for (i, row) in entries.iter().enumerate() {
        for (j, c) in row {
            let cur = mat.get(i, *j);
            mat.set(i, *j, field.add(cur, *c));
        }
    }
    let basis = mat.nullspace(field);
    HomSpace { unknowns, basis }
}

/// phi's columns applied symbolically: the composite psi(phi(e_j)) expanded
/// as linear constraints on psi's basis coefficients, demanding identity
/// mod a's relations. Every basis combination is well-defined already, so
/// the only constraints are the identity ones. Returns Some(psi basis
/// coefficients) when solvable.
fn solve_left_inverse(
    a: &FpModule,
    phi: &Matrix,
    back: &HomSpace,
    gb_back_target: &Arc<ModuleGB>,
) -> Option<Vec<Fp>> {
    let ring = &a.ring;
    let field = ring.field();
    let ctx = ring.actx();
    // raw rows over the unknown coordinates: psi(phi(e_j)) = e_j per generator
    let mut rows: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, Fp)>> = Vec::new();
    let mut rhs_rows: HashMap<usize, Fp> = HashMap::new();
    let touch = |rows: &mut HashMap<(usize, usize, Monomial), usize>,
                     entries: &mut Vec<Vec<(usize, Fp)>>,
                     key: (usize, usize, Monomial)|
     -> usize {
        let next = entries.len();
        let row = *rows.entry(key).or_insert(next);
        if row == entries.len() {
            entries.push(Vec::new());
        }
        row
    };
    for j in 0..a.rank() {
        let image = &phi.cols[j];
        for (v, unk) in back.unknowns.iter().enumerate() {
            let q = image.get(unk.src_gen).cloned().unwrap_or_default();
            if q.is_zero() {
                continue;
            }
            let contrib = ModElem::single(
                unk.tgt_gen,
                q.mul_term(&unk.mono, field.one(), field),
            );
            let nf = crate::groebner::normal_form(&contrib, gb_back_target, ctx);
            for (pos, poly) in &nf.comps {
                for (mono, coeff) in &poly.terms {
                    let row = touch(&mut rows, &mut entries, (j, *pos, mono.clone()));
                    entries[row].push((v, *coeff));
                }
            }
        }
        // right-hand side: e_j itself (already in normal form for a minimal model)
        let row = touch(&mut rows, &mut entries, (j, j, Monomial::one(ring.nvars())));
        rhs_rows.insert(row, field.one());
    }
    // contract the raw unknown coordinates down to basis coefficients so the
    // solution plugs straight into HomSpace::matrix
    let mut mat = FpMat::zero(entries.len(), back.basis.len());
    let mut rhs = vec![Fp(0); entries.len()];
    for (i, row) in entries.iter().enumerate() {
        for (v, c) in row {
            for (bi, bvec) in back.basis.iter().enumerate() {
                if bvec[*v].0 == 0 {
                    continue;
                }
                let cur = mat.get(i, bi);
                mat.set(i, bi, field.add(cur, field.mul(*c, bvec[*v])));
            }
        }
    }
    for (i, c) in rhs_rows {
        rhs[i] = c;
    }
    mat.solve(&rhs, field)
}

/// The composite outer(inner(e_j)) equals the identity modulo target
/// relations for every generator.
fn composite_is_identity(inner: &Matrix, outer: &Matrix, m: &FpModule) -> bool {
    let ctx = m.ring.actx();
    let gb = relations_gb(m);
    (0..m.rank()).all(|j| {
        let image = outer.apply(&inner.cols[j], ctx);
        let diff = image.sub(&ModElem::unit(j, m.ring.nvars()), ctx);
        gb.contains(&diff, ctx)
    })
}

fn ideal_gb(ring: &Ring, gens: &[Polynomial]) -> ModuleGB {
    let cols: Vec<ModElem> = gens
        .iter()
        .map(|g| ModElem::single(0, g.clone()))
        .collect();
    ring.r_gb(1, &cols, false)
}

fn same_ideal(ring: &Ring, a: &[Polynomial], b: &[Polynomial]) -> bool {
    let ctx = ring.actx();
    let gb_a = ideal_gb(ring, a);
    let gb_b = ideal_gb(ring, b);
    a.iter().all(|g| gb_b.contains(&ModElem::single(0, g.clone()), ctx))
        && b.iter().all(|g| gb_a.contains(&ModElem::single(0, g.clone()), ctx))
}

/// Graded isomorphism search. Invariants first (certifying NotIso), then
/// up to `trials` random degree-zero maps with solved inverses (certifying
/// Iso over the original presentations). Anything else is Unknown.
pub fn is_isomorphic(m: &FpModule, n: &FpModule, trials: usize, seed: u64) -> Result<IsoVerdict> {
    m.same_ring(n)?;
    let ma = minimal_model(m)?;
    let mb = minimal_model(n)?;
    let a = &ma.sub.module;
    let b = &mb.sub.module;

    let mut da = a.gen_degrees.clone();
    let mut db = b.gen_degrees.clone();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(IsoVerdict::NotIso(NotIsoReason::GeneratorDegrees));
    }
    let mut ra = a.relation_degrees();
    let mut rb = b.relation_degrees();
    ra.sort_unstable();
    rb.sort_unstable();
    if ra != rb {
        return Ok(IsoVerdict::NotIso(NotIsoReason::RelationDegrees));
    }
    if a.rank() == 0 {
        // both zero: the zero maps are a (vacuous) certified isomorphism
        let forward = ModuleMap::zero_map(m, n);
        let backward = ModuleMap::zero_map(n, m);
        return Ok(IsoVerdict::Iso(Box::new(IsoWitness { forward, backward })));
    }
    let lo = *a.gen_degrees.iter().min().unwrap();
    let hi_gen = *a.gen_degrees.iter().max().unwrap();
    let hi_rel = ra.iter().max().copied().unwrap_or(hi_gen);
    let hi = hi_gen.max(hi_rel) + 4;
    if a.hilbert_window(lo, hi) != b.hilbert_window(lo, hi) {
        return Ok(IsoVerdict::NotIso(NotIsoReason::HilbertSeries));
    }
    if !same_ideal(&m.ring, &a.annihilator(), &b.annihilator()) {
        return Ok(IsoVerdict::NotIso(NotIsoReason::Annihilator));
    }

    let forward_space = hom_space(a, b);
    if forward_space.basis.is_empty() {
        return Ok(IsoVerdict::Unknown);
    }
    let backward_space = hom_space(b, a);
    if backward_space.basis.is_empty() {
        return Ok(IsoVerdict::Unknown);
    }
    let gb_a = relations_gb(a);
    let p = m.ring.field().p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        // first candidate: sum of the basis; afterwards random combinations
        let coeffs: Vec<Fp> = if trial == 0 {
            vec![Fp(1); forward_space.basis.len()]
        } else {
            (0..forward_space.basis.len())
                .map(|_| Fp(rng.random_range(0..p)))
                .collect()
        };
        let phi = forward_space.matrix(&coeffs, a, b);
        let Some(psi_coeffs) = solve_left_inverse(a, &phi, &backward_space, &gb_a) else {
            continue;
        };
        let psi = backward_space.matrix(&psi_coeffs, b, a);
        // the solve certified psi phi = id on a; confirm phi psi = id on b
        if !composite_is_identity(&psi, &phi, b) {
            continue;
        }
        debug_assert!(composite_is_identity(&phi, &psi, a));
        let witness = lift_witness(m, n, &ma, &mb, &phi, &psi)?;
        return Ok(IsoVerdict::Iso(Box::new(witness)));
    }
    Ok(IsoVerdict::Unknown)
}

/// Transport an isomorphism between minimal models to the original
/// presentations and certify it there.
fn lift_witness(
    m: &FpModule,
    n: &FpModule,
    ma: &MinModel,
    mb: &MinModel,
    phi: &Matrix,
    psi: &Matrix,
) -> Result<IsoWitness> {
    let ctx = m.ring.actx();
    let embed = |col: &ModElem, kept: &[usize]| -> ModElem {
        let comps = col
            .comps
            .iter()
            .map(|(pos, p)| (kept[*pos], p.clone()))
            .collect();
        ModElem { comps }
    };
    let mut fwd_cols = Vec::with_capacity(m.rank());
    for j in 0..m.rank() {
        let coords = ma.sub.coords(&ModElem::unit(j, m.ring.nvars()))?;
        let mut acc = ModElem::zero();
        for (t, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&phi.cols[t].mul_poly(c, ctx), ctx);
        }
        fwd_cols.push(embed(&m.ring.reduce_elem(&acc), &mb.kept));
    }
    let forward = ModuleMap::new(m.clone(), n.clone(), Matrix::new(n.rank(), fwd_cols))?;
    let mut bwd_cols = Vec::with_capacity(n.rank());
    for j in 0..n.rank() {
        let coords = mb.sub.coords(&ModElem::unit(j, n.ring.nvars()))?;
        let mut acc = ModElem::zero();
        for (t, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&psi.cols[t].mul_poly(c, ctx), ctx);
        }
        bwd_cols.push(embed(&n.ring.reduce_elem(&acc), &ma.kept));
    }
    let backward = ModuleMap::new(n.clone(), m.clone(), Matrix::new(m.rank(), bwd_cols))?;
    if !composite_is_identity(&forward.matrix, &backward.matrix, m)
        || !composite_is_identity(&backward.matrix, &forward.matrix, n)
    {
        return Err(Error::Internal(
            "lifted isomorphism failed the identity check".into(),
        ));
    }
    Ok(IsoWitness { forward, backward })
}
