//! Sparse elements of free modules R^r and matrices stored as columns.
//!
//! Positions are ordered position-over-term: a term in component i beats any
//! term in component j > i, ties broken by the ring's monomial order. The
//! component list is kept sorted ascending by position, so the module lead
//! term is the lead term of the first component.

use crate::fp::{FieldChar, Fp};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Homogeneity, Polynomial};

#[derive(Debug, Clone, Copy)]
pub struct ArithCtx<'a> {
    pub field: &'a FieldChar,
    pub order: MonomialOrder,
    pub nvars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ModElem {
    /// (position, nonzero polynomial), strictly ascending positions.
    pub comps: Vec<(usize, Polynomial)>,
}

impl ModElem {
    pub fn zero() -> Self {
        ModElem { comps: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn unit(pos: usize, nvars: usize) -> Self {
        ModElem { comps: vec![(pos, Polynomial::one(nvars))] }
    }

    pub fn single(pos: usize, p: Polynomial) -> Self {
        if p.is_zero() {
            ModElem::zero()
        } else {
            ModElem { comps: vec![(pos, p)] }
        }
    }

    pub fn from_dense(polys: Vec<Polynomial>) -> Self {
        ModElem {
            comps: polys
                .into_iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn to_dense(&self, rank: usize) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(); rank];
        for (pos, p) in &self.comps {
            out[*pos] = p.clone();
        }
        out
    }

    pub fn get(&self, pos: usize) -> Option<&Polynomial> {
        self.comps
            .binary_search_by_key(&pos, |(i, _)| *i)
            .ok()
            .map(|idx| &self.comps[idx].1)
    }

    pub fn max_position(&self) -> Option<usize> {
        self.comps.last().map(|(i, _)| *i)
    }

    /// Lead term under position-over-term: (position, monomial, coefficient).
    pub fn lead(&self) -> Option<(usize, &Monomial, Fp)> {
        self.comps.first().map(|(pos, p)| {
            let (m, c) = p.lead().expect("components are nonzero");
            (*pos, m, *c)
        })
    }

    pub fn add(&self, other: &ModElem, ctx: ArithCtx) -> ModElem {
        let mut out = Vec::with_capacity(self.comps.len() + other.comps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.comps.len() && j < other.comps.len() {
            let (pa, a) = &self.comps[i];
            let (pb, b) = &other.comps[j];
            match pa.cmp(pb) {
                std::cmp::Ordering::Less => {
                    out.push((*pa, a.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*pb, b.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = a.add(b, ctx.field, ctx.order);
                    if !s.is_zero() {
                        out.push((*pa, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.comps[i..].iter().cloned());
        out.extend(other.comps[j..].iter().cloned());
        ModElem { comps: out }
    }

    pub fn neg(&self, ctx: ArithCtx) -> ModElem {
        ModElem {
            comps: self
                .comps
                .iter()
                .map(|(i, p)| (*i, p.neg(ctx.field)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModElem, ctx: ArithCtx) -> ModElem {
        self.add(&other.neg(ctx), ctx)
    }

    pub fn scale(&self, c: Fp, ctx: ArithCtx) -> ModElem {
        if c.0 == 0 {
            return ModElem::zero();
        }
        ModElem {
            comps: self
                .comps
                .iter()
                .map(|(i, p)| (*i, p.scale(c, ctx.field)))
                .collect(),
        }
    }

    /// Multiply by the term c*m.
    pub fn mul_term(&self, m: &Monomial, c: Fp, ctx: ArithCtx) -> ModElem {
        if c.0 == 0 {
            return ModElem::zero();
        }
        ModElem {
            comps: self
                .comps
                .iter()
                .map(|(i, p)| (*i, p.mul_term(m, c, ctx.field)))
                .collect(),
        }
    }

    pub fn mul_poly(&self, f: &Polynomial, ctx: ArithCtx) -> ModElem {
        if f.is_zero() {
            return ModElem::zero();
        }
        ModElem {
            comps: self
                .comps
                .iter()
                .map(|(i, p)| (*i, p.mul(f, ctx.field, ctx.order)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn make_monic(&self, ctx: ArithCtx) -> ModElem {
        match self.lead() {
            None => ModElem::zero(),
            Some((_, _, c)) => {
                let inv = ctx.field.inv(c).expect("lead coefficient nonzero");
                self.scale(inv, ctx)
            }
        }
    }

    /// Total degree with respect to the twists, or None for zero / mixed.
    pub fn homogeneous_degree(&self, twists: &[i64]) -> Option<i64> {
        let mut deg: Option<i64> = None;
        for (pos, p) in &self.comps {
            match p.homogeneity() {
                Homogeneity::Zero => continue,
                Homogeneity::Mixed => return None,
                Homogeneity::Degree(d) => {
                    let total = d as i64 + twists[*pos];
                    match deg {
                        None => deg = Some(total),
                        Some(t) if t == total => {}
                        Some(_) => return None,
                    }
                }
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, twists: &[i64]) -> bool {
        self.is_zero() || self.homogeneous_degree(twists).is_some()
    }

    /// Shift every position up by `offset`, embedding into a larger free module.
    pub fn offset_positions(&self, offset: usize) -> ModElem {
        ModElem {
            comps: self
                .comps
                .iter()
                .map(|(i, p)| (*i + offset, p.clone()))
                .collect(),
        }
    }
}

/// Columns-as-relations matrix over a free module with `rows` components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<ModElem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: Vec<ModElem>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.max_position().map_or(true, |m| m < rows)));
        Matrix { rows, cols }
    }

    pub fn zero(rows: usize) -> Self {
        Matrix { rows, cols: Vec::new() }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Matrix {
            rows: n,
            cols: (0..n).map(|i| ModElem::unit(i, nvars)).collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Polynomial {
        self.cols[col].get(row).cloned().unwrap_or_default()
    }

    /// Matrix * vector, the vector's positions indexing columns.
    pub fn apply(&self, v: &ModElem, ctx: ArithCtx) -> ModElem {
        let mut acc = ModElem::zero();
        for (j, f) in &v.comps {
            acc = acc.add(&self.cols[*j].mul_poly(f, ctx), ctx);
        }
        acc
    }

    /// self * other as composition of maps acting on the left.
    pub fn compose(&self, other: &Matrix, ctx: ArithCtx) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c, ctx)).collect(),
        }
    }

    /// Block-diagonal stack: self on positions [0, self.rows), other shifted up.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| c.offset_positions(self.rows)));
        Matrix { rows: self.rows + other.rows, cols }
    }

    /// Transpose with entries kept verbatim (dualizing free modules).
    pub fn transpose(&self) -> Matrix {
        let mut cols: Vec<ModElem> = vec![ModElem::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, p) in &col.comps {
                cols[*i].comps.push((j, p.clone()));
            }
        }
        for c in &mut cols {
            c.comps.sort_by_key(|(i, _)| *i);
        }
        Matrix { rows: self.cols.len(), cols }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::FieldChar;

    fn ctx(f: &FieldChar) -> ArithCtx<'_> {
        ArithCtx { field: f, order: MonomialOrder::Grevlex, nvars: 2 }
    }

    fn xp() -> Polynomial {
        Polynomial::var(2, 0)
    }

    fn yp() -> Polynomial {
        Polynomial::var(2, 1)
    }

    #[test]
    fn lead_is_position_over_term() {
        let f = FieldChar::new(101).unwrap();
        let c = ctx(&f);
        let v = ModElem::from_dense(vec![yp(), xp()]);
        let (pos, m, _) = v.lead().unwrap();
        assert_eq!(pos, 0);
        assert_eq!(m, &Monomial::var(2, 1));
        let w = v.sub(&ModElem::single(0, yp()), c);
        assert_eq!(w.lead().unwrap().0, 1);
    }

    #[test]
    fn matrix_apply_and_compose() {
        let f = FieldChar::new(101).unwrap();
        let c = ctx(&f);
        // d = [x y] : R^2 -> R
        let d = Matrix::new(1, vec![ModElem::single(0, xp()), ModElem::single(0, yp())]);
        let koszul = ModElem::from_dense(vec![yp(), xp().neg(&f)]);
        assert!(d.apply(&koszul, c).is_zero());
        let id = Matrix::identity(2, 2);
        assert_eq!(d.compose(&id, c), d);
    }

    #[test]
    fn homogeneous_degrees_respect_twists() {
        let v = ModElem::from_dense(vec![xp(), Polynomial::one(2)]);
        assert_eq!(v.homogeneous_degree(&[0, 1]), Some(1));
        assert!(!v.is_homogeneous(&[0, 0]));
        assert!(ModElem::zero().is_homogeneous(&[0, 0]));
    }

    #[test]
    fn transpose_swaps_indices() {
        let m = Matrix::new(2, vec![ModElem::from_dense(vec![xp(), yp()])]);
        let t = m.transpose();
        assert_eq!(t.rows, 1);
        assert_eq!(t.ncols(), 2);
        assert_eq!(t.entry(0, 0), xp());
        assert_eq!(t.entry(0, 1), yp());
    }
}
