//! Shared fixtures and an independent degreewise Ext oracle for the
//! integration suites: the oracle reuses resolution differentials and
//! normal forms but recomputes every homology rank by dense row reduction
//! with its own modular arithmetic.

use grmod::rescache::free_resolution;
use grmod::{FpModule, ModElem, Monomial, Polynomial, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[allow(dead_code)]
pub fn fixture_rings() -> Vec<(&'static str, Ring)> {
    vec![
        ("line", grmod::parse_ring(101, &["x"], "grevlex", &[]).unwrap()),
        (
            "dual_numbers",
            grmod::parse_ring(101, &["x"], "grevlex", &["x^2"]).unwrap(),
        ),
        (
            "cross",
            grmod::parse_ring(101, &["x", "y"], "grevlex", &["x*y"]).unwrap(),
        ),
        ("plane", grmod::parse_ring(101, &["x", "y"], "grevlex", &[]).unwrap()),
        (
            "pinched",
            grmod::parse_ring(101, &["x", "y"], "grevlex", &["x^2", "x*y"]).unwrap(),
        ),
    ]
}

/// A deterministic homogeneous cokernel: small random presentation drawn
/// from the seed, guaranteed nonzero.
#[allow(dead_code)]
pub fn random_coker(ring: &Ring, seed: u64) -> FpModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rank = rng.random_range(1..=2usize);
        let gen_degrees: Vec<i64> = (0..rank).map(|_| rng.random_range(0..=1i64)).collect();
        let ncols = rng.random_range(1..=3usize);
        let ctx = ring.actx();
        let mut cols = Vec::with_capacity(ncols);
        for _ in 0..ncols {
            let col_degree = rng.random_range(1..=2i64);
            let mut comps: Vec<(usize, Polynomial)> = Vec::new();
            for (j, g) in gen_degrees.iter().enumerate() {
                let local = col_degree - g;
                if local < 0 {
                    continue;
                }
                let mut p = Polynomial::zero();
                for mu in ring.standard_monomials(local) {
                    let c = rng.random_range(0..101u32);
                    p = p.add(&Polynomial::monomial(mu, grmod::Fp(c)), ctx.field, ctx.order);
                }
                p = ring.normal_form(&p);
                if !p.is_zero() {
                    comps.push((j, p));
                }
            }
            cols.push(ModElem { comps });
        }
        if let Ok(m) = FpModule::new(ring.clone(), gen_degrees, cols) {
            if !m.is_zero_module() {
                return m;
            }
        }
    }
}

/// The standard fixture family over a ring: the ring, the residue field,
/// the cyclic quotient by the first variable, the first syzygy of the
/// residue field, and a seeded random cokernel.
#[allow(dead_code)]
pub fn fixture_modules(ring: &Ring, seed: u64) -> Vec<(String, FpModule)> {
    let first_var = ring.parse_poly("x").unwrap();
    vec![
        ("R".to_string(), FpModule::ring_module(ring.clone())),
        ("k".to_string(), FpModule::residue_field(ring.clone())),
        (
            "R/(x)".to_string(),
            FpModule::cyclic(ring.clone(), &[first_var]).unwrap(),
        ),
        (
            "syz1 k".to_string(),
            grmod::syzygy(&FpModule::residue_field(ring.clone()), 1),
        ),
        ("random".to_string(), random_coker(ring, seed)),
    ]
}

/// Row reduction rank over F_p with self-contained arithmetic.
#[allow(dead_code)]
pub fn rank_mod_p(p: u64, rows: usize, cols: usize, data: &mut [u64]) -> usize {
    assert_eq!(data.len(), rows * cols);
    let inv = |a: u64| -> u64 {
        // Fermat inverse
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| data[r * cols + col] % p != 0) else {
            continue;
        };
        for c in 0..cols {
            data.swap(row * cols + c, pivot * cols + c);
        }
        let s = inv(data[row * cols + col]);
        for c in 0..cols {
            data[row * cols + c] = data[row * cols + c] % p * s % p;
        }
        for r in 0..rows {
            if r != row && data[r * cols + col] % p != 0 {
                let f = data[r * cols + col] % p;
                for c in 0..cols {
                    let sub = f * data[row * cols + c] % p;
                    data[r * cols + c] = (data[r * cols + c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// The basis of N_e: pairs (generator position, standard monomial) not
/// reducible by the relation basis leads.
#[allow(dead_code)]
fn graded_basis(n: &FpModule, e: i64) -> Vec<(usize, Monomial)> {
    let gb = n.relations_gb();
    let leads: Vec<(usize, Monomial)> = gb
        .gens
        .iter()
        .filter_map(|g| g.lead().map(|(pos, m, _)| (pos, m.clone())))
        .collect();
    let mut out = Vec::new();
    for (j, &g) in n.gen_degrees.iter().enumerate() {
        for mu in n.ring.standard_monomials(e - g) {
            let reducible = leads
                .iter()
                .any(|(pos, lm)| *pos == j && lm.divides(&mu));
            if !reducible {
                out.push((j, mu));
            }
        }
    }
    out
}

/// Graded dimensions dim Ext^i(M, N)_d for d = lo..=hi, computed degree by
/// degree as kernel-modulo-image ranks of the dualized resolution.
#[allow(dead_code)]
pub fn ext_graded_dims_oracle(
    m: &FpModule,
    n: &FpModule,
    i: usize,
    lo: i64,
    hi: i64,
) -> Vec<usize> {
    let p = 101u64;
    let res = free_resolution(m, i + 1);
    let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for d in lo..=hi {
        // hom-space bases at the three relevant resolution spots
        let basis_at = |j: usize| -> Vec<(usize, (usize, Monomial))> {
            let mut b = Vec::new();
            for (a, &t) in res.twist_row(j).iter().enumerate() {
                for nb in graded_basis(n, t + d) {
                    b.push((a, nb));
                }
            }
            b
        };
        // matrix of precomposition with d_{j+1} from Hom(F_j, N)_d to
        // Hom(F_{j+1}, N)_d, rows indexed by the target basis
        let matrix_of = |j: usize| -> (usize, usize, Vec<u64>) {
            let src = basis_at(j);
            let tgt = basis_at(j + 1);
            let mut index: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
            for (row, (l, (posm, mono))) in tgt.iter().enumerate() {
                index.insert((*l, *posm, mono.clone()), row);
            }
            let mut data = vec![0u64; tgt.len() * src.len()];
            if res.betti(j + 1) == 0 || src.is_empty() || tgt.is_empty() {
                return (tgt.len(), src.len(), data);
            }
            let dmat = &res.differentials[j];
            let ctx = n.ring.actx();
            for (colidx, (a, (posm, mono))) in src.iter().enumerate() {
                // the basis map sends gen a to mono * e_posm
                let phi_val = ModElem::single(*posm, Polynomial::one(n.ring.nvars()))
                    .mul_term(mono, grmod::Fp(1), ctx);
                for (l, col) in dmat.cols.iter().enumerate() {
                    let Some(entry) = col.get(*a) else { continue };
                    let image = n.reduce(&phi_val.mul_poly(entry, ctx));
                    for (pos, poly) in &image.comps {
                        for (mu, c) in &poly.terms {
                            let row = index[&(l, *pos, mu.clone())];
                            data[row * src.len() + colidx] =
                                (data[row * src.len() + colidx] + c.0 as u64) % p;
                        }
                    }
                }
            }
            (tgt.len(), src.len(), data)
        };
        let dim_i = basis_at(i).len();
        let (orows, ocols, mut odata) = matrix_of(i);
        debug_assert_eq!(ocols, dim_i);
        let rank_out = rank_mod_p(p, orows, ocols, &mut odata);
        let rank_in = if i == 0 {
            0
        } else {
            let (irows, icols, mut idata) = matrix_of(i - 1);
            debug_assert_eq!(irows, dim_i);
            rank_mod_p(p, irows, icols, &mut idata)
        };
        out.push(dim_i - rank_out - rank_in);
    }
    out
}
