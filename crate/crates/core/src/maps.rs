//! Degree-zero homomorphisms between finitely presented graded modules,
//! with kernel/image/cokernel constructions and exactness certificates.

use crate::error::{Error, Result};
use crate::fpmodule::FpModule;
use crate::modelem::{Matrix, ModElem};
use crate::rescache::relations_gb;
use crate::ring::Ring;
use crate::subquot::SubQuot;

/// A map source -> target: column j is the image of source generator j,
/// written over target generators. Constructors certify homogeneity and
/// that source relations land in target relations.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: FpModule,
    pub target: FpModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: FpModule, target: FpModule, matrix: Matrix) -> Result<ModuleMap> {
        source.same_ring(&target)?;
        if matrix.rows != target.rank() || matrix.ncols() != source.rank() {
            return Err(Error::RankMismatch {
                expected: target.rank(),
                got: matrix.rows,
            });
        }
        let ring = source.ring.clone();
        let cols: Vec<ModElem> = matrix.cols.iter().map(|c| ring.reduce_elem(c)).collect();
        for (j, col) in cols.iter().enumerate() {
            if col.is_zero() {
                continue;
            }
            match col.homogeneous_degree(&target.gen_degrees) {
                Some(d) if d == source.gen_degrees[j] => {}
                _ => {
                    return Err(Error::NotHomogeneous(format!(
                        "image of generator {j} is not homogeneous of degree {}",
                        source.gen_degrees[j]
                    )))
                }
            }
        }
        let matrix = Matrix::new(target.rank(), cols);
        let gb = relations_gb(&target);
        let ctx = ring.actx();
        for rel in &source.relations.cols {
            let image = matrix.apply(rel, ctx);
            if !gb.contains(&image, ctx) {
                return Err(Error::InvalidInput(
                    "matrix does not send source relations into target relations".into(),
                ));
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.rank(), m.ring.nvars()),
        }
    }

    pub fn zero_map(source: &FpModule, target: &FpModule) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::new(target.rank(), vec![ModElem::zero(); source.rank()]),
        }
    }

    /// self o inner, defined when inner.target and self.source coincide.
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if inner.target != self.source {
            return Err(Error::InvalidInput(
                "composition needs matching middle module".into(),
            ));
        }
        let ctx = self.source.ring.actx();
        let matrix = self.matrix.compose(&inner.matrix, ctx);
        Ok(ModuleMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: Matrix::new(
                self.target.rank(),
                matrix.cols.iter().map(|c| self.target.ring.reduce_elem(c)).collect(),
            ),
        })
    }

    pub fn is_zero_map(&self) -> bool {
        let gb = relations_gb(&self.target);
        let ctx = self.target.ring.actx();
        self.matrix.cols.iter().all(|c| gb.contains(c, ctx))
    }

    /// Generators of ker over source generators: vectors tau with
    /// matrix(tau) in span(target relations).
    pub fn kernel_taus(&self) -> Vec<ModElem> {
        let ring = &self.source.ring;
        let ctx = ring.actx();
        let mut extra = self.target.relations.cols.clone();
        extra.extend(ring.quotient_columns(self.target.rank() + self.matrix.ncols()));
        kernel_taus_reduced(ctx, self.target.rank(), &self.matrix.cols, &extra, ring)
    }

    /// ker as a subquotient of source: generators are ambient vectors over
    /// source generators, module is the minimal presentation.
    pub fn kernel(&self) -> Result<SubQuot> {
        let taus = self.kernel_taus();
        SubQuot::present(
            &self.source.ring,
            &self.source.gen_degrees,
            &taus,
            &self.source.relations.cols,
        )
    }

    /// im as a subquotient of target spanned by the matrix columns.
    pub fn image(&self) -> Result<SubQuot> {
        SubQuot::present(
            &self.target.ring,
            &self.target.gen_degrees,
            &self.matrix.cols,
            &self.target.relations.cols,
        )
    }

    /// coker on the target's own generators (no minimalization).
    pub fn cokernel_full(&self) -> Result<FpModule> {
        let mut rels = self.target.relations.cols.clone();
        rels.extend(self.matrix.cols.iter().cloned());
        FpModule::new(
            self.target.ring.clone(),
            self.target.gen_degrees.clone(),
            rels,
        )
    }

    pub fn cokernel(&self) -> Result<FpModule> {
        Ok(self.cokernel_full()?.minimal_presentation())
    }

    pub fn is_injective(&self) -> bool {
        let gb = relations_gb(&self.source);
        let ctx = self.source.ring.actx();
        self.kernel_taus().iter().all(|t| gb.contains(t, ctx))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_full().map(|c| c.is_zero_module()).unwrap_or(false)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Kernel generators reduced mod the quotient ideal, zero rows dropped.
fn kernel_taus_reduced(
    ctx: crate::modelem::ArithCtx,
    rank: usize,
    cols: &[ModElem],
    extra: &[ModElem],
    ring: &Ring,
) -> Vec<ModElem> {
    crate::groebner::kernel_with_relations(ctx, rank, cols, extra, None, None)
        .into_iter()
        .map(|t| ring.reduce_elem(&t))
        .filter(|t| !t.is_zero())
        .collect()
}

/// Certificate that g o f = 0 and ker g = im f at the middle module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactnessReport {
    pub composite_zero: bool,
    pub kernel_in_image: bool,
}

impl ExactnessReport {
    pub fn ok(&self) -> bool {
        self.composite_zero && self.kernel_in_image
    }
}

/// Exactness at f.target for a pair A -f-> B -g-> C.
pub fn exact_at(f: &ModuleMap, g: &ModuleMap) -> Result<ExactnessReport> {
    if f.target != g.source {
        return Err(Error::InvalidInput(
            "exactness check needs f.target = g.source".into(),
        ));
    }
    let composite_zero = g.compose(f)?.is_zero_map();
    let b = &f.target;
    let ring = &b.ring;
    let ctx = ring.actx();
    // span(f columns) + span(B relations) must absorb every kernel generator
    let mut span = f.matrix.cols.clone();
    span.extend(b.relations.cols.iter().cloned());
    let gb = ring.r_gb(b.rank(), &span, false);
    let kernel_in_image = g.kernel_taus().iter().all(|t| gb.contains(t, ctx));
    Ok(ExactnessReport { composite_zero, kernel_in_image })
}

/// Certificate for 0 -> A -f-> B -g-> C -> 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SesReport {
    pub injective: bool,
    pub middle: ExactnessReport,
    pub surjective: bool,
}

impl SesReport {
    pub fn ok(&self) -> bool {
        self.injective && self.middle.ok() && self.surjective
    }
}

pub fn certify_ses(f: &ModuleMap, g: &ModuleMap) -> Result<SesReport> {
    Ok(SesReport {
        injective: f.is_injective(),
        middle: exact_at(f, g)?,
        surjective: g.is_surjective(),
    })
}
