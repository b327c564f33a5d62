//! Monomials in a fixed number of variables and the three supported orders.

use crate::error::{Error, Result};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    Deglex,
}

impl MonomialOrder {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            "deglex" => Ok(MonomialOrder::Deglex),
            other => Err(Error::BadOrder(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::Deglex => "deglex",
        }
    }
}

/// Exponent vector under the standard grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// other / self; caller guarantees divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn cmp_order(&self, other: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::Lex => self.exps.cmp(&other.exps),
            MonomialOrder::Deglex => self
                .degree()
                .cmp(&other.degree())
                .then_with(|| self.exps.cmp(&other.exps)),
            MonomialOrder::Grevlex => self.degree().cmp(&other.degree()).then_with(|| {
                // ties: the rightmost differing exponent decides, smaller wins
                for i in (0..self.exps.len()).rev() {
                    match self.exps[i].cmp(&other.exps[i]) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// All monomials of the given total degree, in a deterministic order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fill(&mut out, &mut current, 0, degree);
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial { exps: current.clone() });
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
        current[pos] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial { exps: exps.to_vec() }
    }

    #[test]
    fn lex_prefers_leftmost_variables() {
        // x^2 > x*y > y^3 under lex with x > y
        assert_eq!(m(&[2, 0]).cmp_order(&m(&[1, 1]), MonomialOrder::Lex), Ordering::Greater);
        assert_eq!(m(&[1, 1]).cmp_order(&m(&[0, 3]), MonomialOrder::Lex), Ordering::Greater);
    }

    #[test]
    fn grevlex_breaks_degree_ties_by_last_variable() {
        // degree first: y^3 > x^2
        assert_eq!(
            m(&[0, 3]).cmp_order(&m(&[2, 0]), MonomialOrder::Grevlex),
            Ordering::Greater
        );
        // equal degree: x^2 > x*y > y^2 (smaller last exponent wins)
        assert_eq!(
            m(&[2, 0]).cmp_order(&m(&[1, 1]), MonomialOrder::Grevlex),
            Ordering::Greater
        );
        assert_eq!(
            m(&[1, 1]).cmp_order(&m(&[0, 2]), MonomialOrder::Grevlex),
            Ordering::Greater
        );
        // three variables: x*z vs y^2 — rightmost difference is z, so y^2 wins
        assert_eq!(
            m(&[0, 2, 0]).cmp_order(&m(&[1, 0, 1]), MonomialOrder::Grevlex),
            Ordering::Greater
        );
    }

    #[test]
    fn deglex_is_degree_then_lex() {
        assert_eq!(
            m(&[0, 3]).cmp_order(&m(&[2, 0]), MonomialOrder::Deglex),
            Ordering::Greater
        );
        assert_eq!(
            m(&[1, 1]).cmp_order(&m(&[0, 2]), MonomialOrder::Deglex),
            Ordering::Greater
        );
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert!(!a.divides(&b));
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert!(m(&[1, 1]).divides(&a));
        assert_eq!(m(&[1, 1]).div_into(&a), m(&[1, 0]));
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomials_of_degree(3, 4).len(), 15); // C(6,2)
        assert_eq!(monomials_of_degree(1, 5).len(), 1);
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial::one(2)]);
    }

    #[test]
    fn orders_are_multiplicative() {
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex, MonomialOrder::Deglex] {
            let ms = monomials_of_degree(3, 3);
            let f = m(&[1, 0, 2]);
            for a in &ms {
                for b in &ms {
                    let rel = a.cmp_order(b, order);
                    assert_eq!(a.mul(&f).cmp_order(&b.mul(&f), order), rel);
                }
            }
        }
    }
}
