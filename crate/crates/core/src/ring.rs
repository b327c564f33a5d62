//! Graded quotient rings R = F_p[x_1..x_n]/I with canonical normal forms.
//!
//! Only homogeneous ideals in the standard grading are admitted, so the
//! graded maximal ideal (x_1..x_n) plays the role of the maximal ideal of a
//! local ring throughout the library.

use crate::error::{Error, Result};
use crate::fp::FieldChar;
use crate::groebner::{buchberger, BuchbergerOptions, ModuleGB};
use crate::modelem::{ArithCtx, ModElem};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{parse_polynomial, poly_to_string, Homogeneity, Polynomial};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
pub struct RingData {
    pub field: FieldChar,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    /// Reduced Groebner basis of the defining ideal; empty for a polynomial
    /// ring. Canonical, so structural equality decides ring equality.
    pub quotient: Vec<Polynomial>,
    /// The same basis wrapped once for division.
    quotient_gb: ModuleGB,
}

impl PartialEq for RingData {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.vars == other.vars
            && self.order == other.order
            && self.quotient == other.quotient
    }
}
impl Eq for RingData {}

/// A graded quotient ring, cheaply cloneable; equality is structural.
#[derive(Clone)]
pub struct Ring {
    data: Arc<RingData>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || *self.data == *other.data
    }
}
impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[{}]", self.data.field.p(), self.data.vars.join(","))?;
        if !self.data.quotient.is_empty() {
            let gens: Vec<String> = self
                .data
                .quotient
                .iter()
                .map(|g| poly_to_string(g, &self.data.vars))
                .collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.data.field.p().hash(state);
        self.data.vars.hash(state);
        self.data.order.name().hash(state);
        self.data.quotient.hash(state);
    }
}

/// Quotient ring of F_p[vars] by the homogeneous ideal (ideal_gens).
pub fn make_ring(
    p: u64,
    vars: &[&str],
    order: MonomialOrder,
    ideal_gens: &[Polynomial],
) -> Result<Ring> {
    let field = FieldChar::new(p)?;
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    if vars.is_empty() {
        return Err(Error::InvalidInput("a ring needs at least one variable".into()));
    }
    {
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(Error::InvalidInput("duplicate variable name".into()));
        }
    }
    let ctx = ArithCtx { field: &field, order, nvars: vars.len() };
    for g in ideal_gens {
        match g.homogeneity() {
            Homogeneity::Mixed => {
                return Err(Error::NotHomogeneous(poly_to_string(g, &vars)))
            }
            Homogeneity::Degree(0) => return Err(Error::UnitIdeal),
            _ => {}
        }
    }
    let inputs: Vec<ModElem> = ideal_gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ModElem::single(0, g.clone()))
        .collect();
    let gb = buchberger(ctx, 1, &inputs, BuchbergerOptions::default());
    let quotient: Vec<Polynomial> = gb.gens.iter().map(|g| g.comps[0].1.clone()).collect();
    if quotient.iter().any(|g| matches!(g.homogeneity(), Homogeneity::Degree(0))) {
        return Err(Error::UnitIdeal);
    }
    let quotient_gb = ModuleGB::from_reduced(
        1,
        quotient.iter().map(|g| ModElem::single(0, g.clone())).collect(),
    );
    Ok(Ring { data: Arc::new(RingData { field, vars, order, quotient, quotient_gb }) })
}

/// Ring from textual ideal generators, for tests and the command layer.
pub fn parse_ring(p: u64, vars: &[&str], order: &str, ideal_texts: &[&str]) -> Result<Ring> {
    let order = MonomialOrder::parse(order)?;
    let field = FieldChar::new(p)?;
    let var_names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let gens: Vec<Polynomial> = ideal_texts
        .iter()
        .map(|t| {
            parse_polynomial(t, &var_names, &field, order)
                .map_err(|e| Error::InvalidInput(format!("{t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    make_ring(p, vars, order, &gens)
}

impl Ring {
    pub fn field(&self) -> &FieldChar {
        &self.data.field
    }
    pub fn vars(&self) -> &[String] {
        &self.data.vars
    }
    pub fn nvars(&self) -> usize {
        self.data.vars.len()
    }
    pub fn order(&self) -> MonomialOrder {
        self.data.order
    }
    pub fn quotient(&self) -> &[Polynomial] {
        &self.data.quotient
    }
    pub fn actx(&self) -> ArithCtx<'_> {
        ArithCtx {
            field: &self.data.field,
            order: self.data.order,
            nvars: self.data.vars.len(),
        }
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial(text, &self.data.vars, &self.data.field, self.data.order)
            .map_err(|e| Error::InvalidInput(format!("{text:?}: {e}")))
    }

    pub fn poly_string(&self, f: &Polynomial) -> String {
        poly_to_string(f, &self.data.vars)
    }

    /// Canonical representative of f + I. F_p-linear, idempotent, degreewise.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        if f.is_zero() || self.data.quotient.is_empty() {
            return f.clone();
        }
        let work = ModElem::single(0, f.clone());
        let mut nf = crate::groebner::normal_form(&work, &self.data.quotient_gb, self.actx());
        nf.comps.pop().map(|(_, p)| p).unwrap_or_else(Polynomial::zero)
    }

    /// The monomials of degree d that survive reduction: an F_p basis of R_d.
    pub fn standard_monomials(&self, d: i64) -> Vec<Monomial> {
        if d < 0 {
            return Vec::new();
        }
        crate::monomial::monomials_of_degree(self.nvars(), d as u32)
            .into_iter()
            .filter(|m| {
                !self
                    .data
                    .quotient
                    .iter()
                    .any(|g| g.lead().is_some_and(|(lm, _)| lm.divides(m)))
            })
            .collect()
    }

    /// The quotient ideal's generators planted in every position of R^rank;
    /// appending these turns ambient-ring submodule computations into
    /// R-module ones.
    pub fn quotient_columns(&self, rank: usize) -> Vec<ModElem> {
        let mut cols = Vec::with_capacity(rank * self.data.quotient.len());
        for i in 0..rank {
            for g in &self.data.quotient {
                cols.push(ModElem::single(i, g.clone()));
            }
        }
        cols
    }

    /// Reduce every component of v by the quotient ideal.
    pub fn reduce_elem(&self, v: &ModElem) -> ModElem {
        let comps: Vec<(usize, Polynomial)> = v
            .comps
            .iter()
            .map(|(p, q)| (*p, self.normal_form(q)))
            .filter(|(_, q)| !q.is_zero())
            .collect();
        ModElem { comps }
    }

    /// Groebner basis of the R-submodule of R^rank spanned by cols.
    pub fn r_gb(&self, rank: usize, cols: &[ModElem], track: bool) -> ModuleGB {
        let ctx = self.actx();
        let mut inputs = cols.to_vec();
        inputs.extend(self.quotient_columns(rank));
        buchberger(
            ctx,
            rank,
            &inputs,
            BuchbergerOptions { track, ..Default::default() },
        )
    }

    /// Generators of {tau : cols . tau = 0 in R^rank over R}.
    pub fn r_kernel(&self, rank: usize, cols: &[ModElem]) -> Vec<ModElem> {
        // quotient columns in the tag block too, so syzygy coordinates stay
        // reduced during elimination; they add nothing to the span
        crate::groebner::kernel_with_relations(
            self.actx(),
            rank,
            cols,
            &self.quotient_columns(rank + cols.len()),
            None,
            None,
        )
    }
}
