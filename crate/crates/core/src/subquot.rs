//! Subquotients U/V of twisted free modules, presented as finitely
//! presented modules with coordinate lookup back into the ambient module.
//!
//! Kernels, images, and homology all arrive in this shape: U is spanned by
//! explicit ambient vectors, V by the vectors declared zero.

use crate::error::{Error, Result};
use crate::fpmodule::FpModule;
use crate::groebner::{
    buchberger, kernel_with_relations, normal_form_with_cofactors, BuchbergerOptions, ModuleGB,
};
use crate::modelem::{Matrix, ModElem};
use crate::poly::Polynomial;
use crate::ring::Ring;
use std::sync::OnceLock;

/// U/V inside R^r with generator twists: `gens` span U over V, `denoms`
/// span V; `module` is a minimal presentation whose generator t is the
/// class of `gens[t]`.
pub struct SubQuot {
    pub ring: Ring,
    pub ambient_twists: Vec<i64>,
    pub gens: Vec<ModElem>,
    pub denoms: Vec<ModElem>,
    pub module: FpModule,
    /// Tracked basis of span(gens) + span(denoms) + I-columns, built on the
    /// first coordinate lookup.
    engine: OnceLock<ModuleGB>,
}

impl SubQuot {
    /// Present span(gens)/span(denoms) minimally. Zero generators are
    /// dropped; the survivors live on in `gens` aligned with `module`.
    pub fn present(
        ring: &Ring,
        ambient_twists: &[i64],
        raw_gens: &[ModElem],
        raw_denoms: &[ModElem],
    ) -> Result<SubQuot> {
        let rank = ambient_twists.len();
        let mut gens: Vec<ModElem> = Vec::with_capacity(raw_gens.len());
        for g in raw_gens {
            check_rank(rank, g)?;
            let g = ring.reduce_elem(g);
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous(ambient_twists) {
                return Err(Error::NotHomogeneous(format!("subquotient generator {g:?}")));
            }
            gens.push(g);
        }
        let mut denoms: Vec<ModElem> = Vec::with_capacity(raw_denoms.len());
        for v in raw_denoms {
            check_rank(rank, v)?;
            let v = ring.reduce_elem(v);
            if v.is_zero() {
                continue;
            }
            if !v.is_homogeneous(ambient_twists) {
                return Err(Error::NotHomogeneous(format!("subquotient denominator {v:?}")));
            }
            denoms.push(v);
        }

        let ctx = ring.actx();
        let mut extra = denoms.clone();
        extra.extend(ring.quotient_columns(rank + gens.len()));
        let taus = kernel_with_relations(ctx, rank, &gens, &extra, None, None);
        let degs: Vec<i64> = gens
            .iter()
            .map(|g| g.homogeneous_degree(ambient_twists).unwrap())
            .collect();
        let raw = FpModule::new(ring.clone(), degs, taus)?;
        let data = raw.minimal_data();
        let gens: Vec<ModElem> = data.kept.iter().map(|&j| gens[j].clone()).collect();
        Ok(SubQuot {
            ring: ring.clone(),
            ambient_twists: ambient_twists.to_vec(),
            gens,
            denoms,
            module: data.module,
            engine: OnceLock::new(),
        })
    }

    /// The full ambient module modulo span(denoms): U is everything.
    pub fn whole(ring: &Ring, ambient_twists: &[i64], denoms: &[ModElem]) -> Result<SubQuot> {
        let units: Vec<ModElem> = (0..ambient_twists.len())
            .map(|i| ModElem::unit(i, ring.nvars()))
            .collect();
        SubQuot::present(ring, ambient_twists, &units, denoms)
    }

    fn engine(&self) -> &ModuleGB {
        self.engine.get_or_init(|| {
            let rank = self.ambient_twists.len();
            let mut inputs = self.gens.clone();
            inputs.extend(self.denoms.iter().cloned());
            inputs.extend(self.ring.quotient_columns(rank));
            buchberger(
                self.ring.actx(),
                rank.max(1),
                &inputs,
                BuchbergerOptions { track: true, ..Default::default() },
            )
        })
    }

    /// Coordinates of an ambient vector over `module`'s generators; errors
    /// when the vector does not lie in U + V.
    pub fn coords(&self, v: &ModElem) -> Result<Vec<Polynomial>> {
        check_rank(self.ambient_twists.len(), v)?;
        if v.is_zero() {
            return Ok(vec![Polynomial::zero(); self.gens.len()]);
        }
        let ctx = self.ring.actx();
        let gb = self.engine();
        let (rem, cof) = normal_form_with_cofactors(v, gb, ctx);
        if !rem.is_zero() {
            return Err(Error::InvalidInput(
                "ambient element lies outside the subquotient".into(),
            ));
        }
        let exprs = gb.exprs.as_ref().expect("engine tracks expressions");
        let mut out = vec![Polynomial::zero(); self.gens.len()];
        for (k, q) in cof.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let e = &exprs[k][j];
                if e.is_zero() {
                    continue;
                }
                let prod = q.mul(e, ctx.field, ctx.order);
                *slot = slot.add(&prod, ctx.field, ctx.order);
            }
        }
        Ok(out.into_iter().map(|p| self.ring.normal_form(&p)).collect())
    }

    pub fn contains(&self, v: &ModElem) -> bool {
        self.coords(v).is_ok()
    }

    /// Coordinates of several ambient vectors, as a relation-shaped matrix
    /// over `module`'s generators (column per input).
    pub fn coords_matrix(&self, vs: &[ModElem]) -> Result<Matrix> {
        let cols = vs
            .iter()
            .map(|v| Ok(ModElem::from_dense(self.coords(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::new(self.module.rank(), cols))
    }
}

fn check_rank(rank: usize, v: &ModElem) -> Result<()> {
    if let Some(m) = v.max_position() {
        if m >= rank {
            return Err(Error::RankMismatch { expected: rank, got: m + 1 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ring;

    fn plane() -> Ring {
        parse_ring(101, &["x", "y"], "grevlex", &[]).unwrap()
    }

    #[test]
    fn maximal_ideal_as_subquotient_of_the_ring() {
        // U = (x, y) inside R, V = 0: two generators, one Koszul relation
        let r = plane();
        let x = ModElem::single(0, r.parse_poly("x").unwrap());
        let y = ModElem::single(0, r.parse_poly("y").unwrap());
        let sq = SubQuot::present(&r, &[0], &[x.clone(), y.clone()], &[]).unwrap();
        assert_eq!(sq.module.gen_degrees, vec![1, 1]);
        assert_eq!(sq.module.relations.ncols(), 1);
        // coordinates recover combinations: x*y = y*(x) = x*(y)
        let xy = ModElem::single(0, r.parse_poly("x*y").unwrap());
        let coords = sq.coords(&xy).unwrap();
        let ctx = r.actx();
        let rebuilt = x
            .mul_poly(&coords[0], ctx)
            .add(&y.mul_poly(&coords[1], ctx), ctx);
        assert_eq!(r.reduce_elem(&rebuilt.sub(&xy, ctx)), ModElem::zero());
    }

    #[test]
    fn quotient_by_denominators_kills_membership() {
        // U = (x), V = (x^2): the class of x^3 is zero, so coords succeed
        // and rebuild x^3 only modulo V
        let r = plane();
        let x = ModElem::single(0, r.parse_poly("x").unwrap());
        let x2 = ModElem::single(0, r.parse_poly("x^2").unwrap());
        let sq = SubQuot::present(&r, &[0], &[x], &[x2]).unwrap();
        // one generator of degree 1 with relations x*e and y*e... x*x = x^2
        // in V, y*x not: relations are exactly multiples killing x mod (x^2)
        assert_eq!(sq.module.gen_degrees, vec![1]);
        let one = ModElem::single(0, r.parse_poly("1").unwrap());
        assert!(!sq.contains(&one));
    }

    #[test]
    fn whole_presents_a_cokernel() {
        let r = plane();
        let x = ModElem::single(0, r.parse_poly("x").unwrap());
        let sq = SubQuot::whole(&r, &[0], &[x]).unwrap();
        assert_eq!(sq.module.gen_degrees, vec![0]);
        assert_eq!(sq.module.relations.ncols(), 1);
    }

    #[test]
    fn rejects_out_of_range_positions() {
        let r = plane();
        let v = ModElem::unit(3, 2);
        assert!(matches!(
            SubQuot::present(&r, &[0], &[v], &[]),
            Err(Error::RankMismatch { .. })
        ));
    }
}
