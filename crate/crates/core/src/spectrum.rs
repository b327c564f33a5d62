//! Prime-indexed invariants without materializing localizations: grade,
//! local depth and dimensions via annihilator-support tests, pointwise
//! evaluation and validation of grade-bounded functions on a declared
//! prime list, and checkable membership witnesses for resolving classes.

use crate::error::{Error, Result};
use crate::fpmodule::FpModule;
use crate::functors::{ext, tor};
use crate::groebner::ModuleGB;
use crate::homalg::{Bounded, BoundedVerdict, Dualizer};
use crate::iso::{is_isomorphic, IsoVerdict};
use crate::maps::{certify_ses, ModuleMap};
use crate::modelem::{Matrix, ModElem};
use crate::poly::{Homogeneity, Polynomial};
use crate::rescache::syzygy;
use crate::ring::Ring;
use std::collections::{BTreeMap, BTreeSet};

/// A named prime with user-asserted primality and declared containments;
/// the ideal arithmetic is verified at load, primality is not.
#[derive(Debug, Clone)]
pub struct PrimeRecord {
    pub label: String,
    pub gens: Vec<Polynomial>,
    /// Labels of primes asserted to be contained in this one.
    pub declared_inclusions: Vec<String>,
}

/// A validated prime: proper homogeneous ideal with a fixed basis, and
/// every declared containment verified by normal forms.
#[derive(Debug)]
pub struct Prime {
    pub label: String,
    pub gens: Vec<Polynomial>,
    pub declared_inclusions: Vec<String>,
    gb: ModuleGB,
}

impl Prime {
    /// The quotient module R/p.
    pub fn quotient(&self, ring: &Ring) -> Result<FpModule> {
        FpModule::cyclic(ring.clone(), &self.gens)
    }

    /// ann(M) lies inside p, i.e. M is supported at p.
    pub fn supports(&self, m: &FpModule) -> bool {
        m.annihilator_contained_in(&self.gb)
    }
}

fn ideal_basis(ring: &Ring, gens: &[Polynomial]) -> Result<(Vec<Polynomial>, ModuleGB)> {
    let mut clean: Vec<Polynomial> = Vec::new();
    for g in gens {
        let nf = ring.normal_form(g);
        match nf.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(_) => clean.push(nf),
            Homogeneity::Mixed => {
                return Err(Error::NotHomogeneous("ideal generator".into()))
            }
        }
    }
    let cols: Vec<ModElem> = clean.iter().map(|g| ModElem::single(0, g.clone())).collect();
    let gb = ring.r_gb(1, &cols, false);
    Ok((clean, gb))
}

fn is_proper(ring: &Ring, gb: &ModuleGB) -> bool {
    !gb.contains(&ModElem::unit(0, ring.nvars()), ring.actx())
}

/// Validate a prime list: unique labels, proper homogeneous ideals, and
/// declared inclusions that actually hold.
pub fn validate_primes(ring: &Ring, records: &[PrimeRecord]) -> Result<Vec<Prime>> {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for rec in records {
        if !seen.insert(rec.label.as_str()) {
            return Err(Error::InvalidInput(format!(
                "duplicate prime label '{}'",
                rec.label
            )));
        }
    }
    let mut primes: Vec<Prime> = Vec::with_capacity(records.len());
    for rec in records {
        let (gens, gb) = ideal_basis(ring, &rec.gens)?;
        if !is_proper(ring, &gb) {
            return Err(Error::UnitIdeal);
        }
        primes.push(Prime {
            label: rec.label.clone(),
            gens,
            declared_inclusions: rec.declared_inclusions.clone(),
            gb,
        });
    }
    for (qi, rec) in records.iter().enumerate() {
        for small in &rec.declared_inclusions {
            let p = primes
                .iter()
                .find(|p| &p.label == small)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "inclusion references undeclared prime '{small}'"
                    ))
                })?;
            let holds = p.gens.iter().all(|g| {
                primes[qi]
                    .gb
                    .contains(&ModElem::single(0, g.clone()), ring.actx())
            });
            if !holds {
                return Err(Error::InvalidInput(format!(
                    "declared inclusion {} in {} does not hold",
                    small, rec.label
                )));
            }
        }
    }
    Ok(primes)
}

/// grade I = min { i : Ext^i(R/I, R) != 0 }, at most the variable count.
pub fn grade(ring: &Ring, ideal_gens: &[Polynomial]) -> Result<usize> {
    let (gens, gb) = ideal_basis(ring, ideal_gens)?;
    if !is_proper(ring, &gb) {
        return Err(Error::UnitIdeal);
    }
    let quotient = FpModule::cyclic(ring.clone(), &gens)?;
    let rm = FpModule::ring_module(ring.clone());
    let cap = ring.nvars();
    for i in 0..=cap {
        if !ext(&quotient, &rm, i, cap)?.is_zero_module() {
            return Ok(i);
        }
    }
    Err(Error::Internal(
        "grade scan exhausted the variable count on a proper ideal".into(),
    ))
}

/// depth of M_p over R_p: the least i with Ext^i(R/p, M) supported at p;
/// Infinite exactly when M_p = 0.
pub fn local_depth(m: &FpModule, p: &Prime) -> Result<Bounded> {
    if m.is_zero_module() || !p.supports(m) {
        return Ok(Bounded::Infinite);
    }
    let ring = &m.ring;
    let quotient = p.quotient(ring)?;
    let cap = ring.nvars();
    for i in 0..=cap {
        if p.supports(&ext(&quotient, m, i, cap)?) {
            return Ok(Bounded::Finite(i));
        }
    }
    Err(Error::Internal(
        "local depth scan exhausted the variable count on a supported module".into(),
    ))
}

/// Projective dimension of M_p over R_p, certified within the bound: the
/// scan stops at the first Tor_i(M, R/p) not supported at p, and reports
/// Infinite when support persists at the bound itself.
pub fn local_pd(m: &FpModule, p: &Prime, bound: usize) -> Result<BoundedVerdict> {
    if m.is_zero_module() || !p.supports(m) {
        return Ok(BoundedVerdict { value: Bounded::Finite(0), bound });
    }
    let quotient = p.quotient(&m.ring)?;
    for i in 1..=bound {
        if !p.supports(&tor(m, &quotient, i)?) {
            return Ok(BoundedVerdict { value: Bounded::Finite(i - 1), bound });
        }
    }
    Ok(BoundedVerdict { value: Bounded::Infinite, bound })
}

/// C-dimension of X_p over R_p: 0 when X_p = 0, Infinite when
/// Ext^i(X, C) stays supported at p through the bound, and otherwise the
/// local depth difference of the ring and the module.
pub fn local_gcdim(
    x: &FpModule,
    d: &Dualizer,
    p: &Prime,
    bound: usize,
) -> Result<BoundedVerdict> {
    d.assert_certified(bound)?;
    x.same_ring(&d.module)?;
    if x.is_zero_module() || !p.supports(x) {
        return Ok(BoundedVerdict { value: Bounded::Finite(0), bound });
    }
    if p.supports(&ext(x, &d.module, bound, bound)?) {
        return Ok(BoundedVerdict { value: Bounded::Infinite, bound });
    }
    let rm = FpModule::ring_module(x.ring.clone());
    let ring_depth = match local_depth(&rm, p)? {
        Bounded::Finite(n) => n,
        Bounded::Infinite => {
            return Err(Error::Internal("ring unsupported at a proper prime".into()))
        }
    };
    let module_depth = match local_depth(x, p)? {
        Bounded::Finite(n) => n,
        Bounded::Infinite => {
            return Err(Error::Internal("supported module reported empty localization".into()))
        }
    };
    if module_depth > ring_depth {
        return Err(Error::ABViolation(format!(
            "local module depth {module_depth} exceeds local ring depth {ring_depth}"
        )));
    }
    Ok(BoundedVerdict {
        value: Bounded::Finite(ring_depth - module_depth),
        bound,
    })
}

/// Which notion of local dimension a pointwise table is built from.
#[derive(Debug, Clone, Copy)]
pub enum MKind<'a> {
    Projectives,
    Dualizer(&'a Dualizer),
}

impl MKind<'_> {
    fn local_dim(&self, m: &FpModule, p: &Prime, bound: usize) -> Result<Bounded> {
        Ok(match self {
            MKind::Projectives => local_pd(m, p, bound)?.value,
            MKind::Dualizer(d) => local_gcdim(m, d, p, bound)?.value,
        })
    }
}

/// A pointwise function on the declared prime list.
pub type GradeFnTable = BTreeMap<String, Bounded>;

/// The pointwise supremum over S of the chosen local dimension.
pub fn phi(
    s: &[FpModule],
    kind: MKind<'_>,
    primes: &[Prime],
    bound: usize,
) -> Result<GradeFnTable> {
    if s.is_empty() {
        return Err(Error::InvalidInput("empty module set".into()));
    }
    let mut table = GradeFnTable::new();
    for p in primes {
        let mut best = Bounded::Finite(0);
        for m in s {
            best = best.max(kind.local_dim(m, p, bound)?);
        }
        table.insert(p.label.clone(), best);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradeViolation {
    /// f exceeds the grade of the prime itself.
    GradeBound { label: String, value: Bounded, grade: usize },
    /// f decreases along a declared containment.
    Monotonicity { smaller: String, larger: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradeConsistency {
    Yes,
    No(GradeViolation),
}

impl GradeConsistency {
    pub fn is_yes(&self) -> bool {
        matches!(self, GradeConsistency::Yes)
    }
}

/// f is grade consistent when it never exceeds the grade of a prime and
/// never decreases along a declared containment.
pub fn is_grade_consistent(
    ring: &Ring,
    f: &GradeFnTable,
    primes: &[Prime],
) -> Result<GradeConsistency> {
    let value_of = |label: &str| -> Result<Bounded> {
        f.get(label).copied().ok_or_else(|| {
            Error::InvalidInput(format!("table has no entry for prime '{label}'"))
        })
    };
    for p in primes {
        let v = value_of(&p.label)?;
        let g = grade(ring, &p.gens)?;
        let exceeds = match v {
            Bounded::Infinite => true,
            Bounded::Finite(n) => n > g,
        };
        if exceeds {
            return Ok(GradeConsistency::No(GradeViolation::GradeBound {
                label: p.label.clone(),
                value: v,
                grade: g,
            }));
        }
    }
    for q in primes {
        for small in &q.declared_inclusions {
            if value_of(small)? > value_of(&q.label)? {
                return Ok(GradeConsistency::No(GradeViolation::Monotonicity {
                    smaller: small.clone(),
                    larger: q.label.clone(),
                }));
            }
        }
    }
    Ok(GradeConsistency::Yes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaVerdict {
    Yes,
    /// A prime where the local dimension exceeds the table value.
    No { witness: String },
}

impl LambdaVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, LambdaVerdict::Yes)
    }
}

/// X lies in the class cut out by f when its local dimension is at most
/// f(p) at every declared prime; the verdict is relative to that list.
pub fn lambda_member(
    x: &FpModule,
    f: &GradeFnTable,
    kind: MKind<'_>,
    primes: &[Prime],
    bound: usize,
) -> Result<LambdaVerdict> {
    for p in primes {
        let allowed = f.get(&p.label).copied().ok_or_else(|| {
            Error::InvalidInput(format!("table has no entry for prime '{}'", p.label))
        })?;
        if kind.local_dim(x, p, bound)? > allowed {
            return Ok(LambdaVerdict::No { witness: p.label.clone() });
        }
    }
    Ok(LambdaVerdict::Yes)
}

/// One construction step in a resolving-class membership witness; children
/// always point at earlier nodes, so the witness is acyclic by shape.
#[derive(Debug, Clone)]
pub enum WitnessNode {
    /// A module taken from the declared base set.
    Generator { index: usize },
    /// A free module with the given twists.
    Free { twists: Vec<i64> },
    /// The middle of a stored short exact sequence between two built nodes.
    Extension {
        left: usize,
        right: usize,
        middle: FpModule,
        incl: Matrix,
        proj: Matrix,
    },
    /// The first syzygy of a built node.
    Syzygy { child: usize },
    /// A direct summand of a built node, with its stored complement.
    Summand {
        child: usize,
        summand: FpModule,
        complement: FpModule,
    },
}

#[derive(Debug, Clone)]
pub struct ResolvingWitness {
    pub nodes: Vec<WitnessNode>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessVerdict {
    Valid,
    Invalid { node: usize, reason: String },
}

impl WitnessVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, WitnessVerdict::Valid)
    }
}

/// Re-verify every certificate in a witness and compare its root against
/// the target; Valid soundly certifies membership in the resolving class
/// generated by the base set together with the free modules.
pub fn check_resolving_witness(
    w: &ResolvingWitness,
    base: &[FpModule],
    target: &FpModule,
    trials: usize,
    seed: u64,
) -> Result<WitnessVerdict> {
    let ring = &target.ring;
    let invalid = |node: usize, reason: &str| WitnessVerdict::Invalid {
        node,
        reason: reason.to_string(),
    };
    let mut values: Vec<FpModule> = Vec::with_capacity(w.nodes.len());
    for (idx, node) in w.nodes.iter().enumerate() {
        let earlier = |child: usize| child < idx;
        let module = match node {
            WitnessNode::Generator { index } => {
                let Some(m) = base.get(*index) else {
                    values.push(FpModule::zero(ring.clone()));
                    return Ok(invalid(idx, "generator index outside the base set"));
                };
                m.clone()
            }
            WitnessNode::Free { twists } => FpModule::free(ring.clone(), twists.clone()),
            WitnessNode::Extension { left, right, middle, incl, proj } => {
                if !earlier(*left) || !earlier(*right) {
                    return Ok(invalid(idx, "extension references a later node"));
                }
                let f = match ModuleMap::new(values[*left].clone(), middle.clone(), incl.clone()) {
                    Ok(f) => f,
                    Err(e) => {
                        return Ok(invalid(idx, &format!("stored inclusion is not a map: {e}")))
                    }
                };
                let g = match ModuleMap::new(middle.clone(), values[*right].clone(), proj.clone()) {
                    Ok(g) => g,
                    Err(e) => {
                        return Ok(invalid(idx, &format!("stored projection is not a map: {e}")))
                    }
                };
                match certify_ses(&f, &g) {
                    Ok(cert) if cert.ok() => middle.clone(),
                    Ok(_) => return Ok(invalid(idx, "stored sequence is not exact")),
                    Err(e) => {
                        return Ok(invalid(idx, &format!("sequence could not be checked: {e}")))
                    }
                }
            }
            WitnessNode::Syzygy { child } => {
                if !earlier(*child) {
                    return Ok(invalid(idx, "syzygy references a later node"));
                }
                syzygy(&values[*child], 1)
            }
            WitnessNode::Summand { child, summand, complement } => {
                if !earlier(*child) {
                    return Ok(invalid(idx, "summand references a later node"));
                }
                let sum = match summand.direct_sum(complement) {
                    Ok(s) => s,
                    Err(e) => {
                        return Ok(invalid(idx, &format!("stored complement is unusable: {e}")))
                    }
                };
                match is_isomorphic(&values[*child], &sum, trials, seed)? {
                    IsoVerdict::Iso(_) => summand.clone(),
                    _ => {
                        return Ok(invalid(
                            idx,
                            "direct sum decomposition could not be certified",
                        ))
                    }
                }
            }
        };
        values.push(module);
    }
    if w.root >= values.len() {
        return Ok(invalid(w.root, "root index outside the node list"));
    }
    match is_isomorphic(&values[w.root], target, trials, seed)? {
        IsoVerdict::Iso(_) => Ok(WitnessVerdict::Valid),
        _ => Ok(invalid(
            w.root,
            "root module could not be certified isomorphic to the target",
        )),
    }
}
