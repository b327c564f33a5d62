//! Sparse multivariate polynomials over F_p, stored sorted descending in a
//! fixed monomial order.

use crate::fp::{FieldChar, Fp};
use crate::monomial::{Monomial, MonomialOrder};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    /// Strictly descending monomials, nonzero coefficients only.
    pub terms: Vec<(Monomial, Fp)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Mixed,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(c: Fp, nvars: usize) -> Self {
        if c.0 == 0 {
            Self::zero()
        } else {
            Polynomial { terms: vec![(Monomial::one(nvars), c)] }
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Fp(1), nvars)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Polynomial { terms: vec![(Monomial::var(nvars, i), Fp(1))] }
    }

    pub fn monomial(m: Monomial, c: Fp) -> Self {
        if c.0 == 0 {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    pub fn lead(&self) -> Option<&(Monomial, Fp)> {
        self.terms.first()
    }

    /// Nonzero constants are exactly the units of a graded quotient ring.
    pub fn constant_value(&self) -> Option<Fp> {
        match self.terms.as_slice() {
            [] => Some(Fp(0)),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut deg = None;
        for (m, _) in &self.terms {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d == m.degree() => {}
                Some(_) => return Homogeneity::Mixed,
            }
        }
        match deg {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Degree(d),
        }
    }

    /// Collect raw terms into canonical form: combine, drop zeros, sort descending.
    pub fn from_terms(field: &FieldChar, order: MonomialOrder, terms: Vec<(Monomial, Fp)>) -> Self {
        let mut map: HashMap<Monomial, Fp> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            let e = map.entry(m).or_insert(Fp(0));
            *e = field.add(*e, c);
        }
        let mut out: Vec<(Monomial, Fp)> = map.into_iter().filter(|(_, c)| c.0 != 0).collect();
        out.sort_by(|a, b| b.0.cmp_order(&a.0, order));
        Polynomial { terms: out }
    }

    pub fn add(&self, other: &Polynomial, field: &FieldChar, order: MonomialOrder) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp_order(mb, order) {
                Ordering::Greater => {
                    out.push((ma.clone(), *ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), *cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(*ca, *cb);
                    if c.0 != 0 {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { terms: out }
    }

    pub fn neg(&self, field: &FieldChar) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial, field: &FieldChar, order: MonomialOrder) -> Polynomial {
        self.add(&other.neg(field), field, order)
    }

    pub fn scale(&self, c: Fp, field: &FieldChar) -> Polynomial {
        if c.0 == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(*a, c))).collect(),
        }
    }

    /// Multiply by a single term c*m; preserves sortedness.
    pub fn mul_term(&self, m: &Monomial, c: Fp, field: &FieldChar) -> Polynomial {
        if c.0 == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), field.mul(*cc, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, field: &FieldChar, order: MonomialOrder) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                raw.push((ma.mul(mb), field.mul(*ca, *cb)));
            }
        }
        Polynomial::from_terms(field, order, raw)
    }

    pub fn make_monic(&self, field: &FieldChar) -> Polynomial {
        match self.lead() {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = field.inv(*c).expect("lead coefficient is nonzero");
                self.scale(inv, field)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    /// Byte offset into the parsed text.
    pub pos: usize,
    pub expected: String,
}

impl std::fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "expected {} at offset {}", self.expected, self.pos)
    }
}

impl std::error::Error for PolyParseError {}

/// Parse the textual syntax `3*x^2*y + 7*y^3`: decimal coefficients, explicit
/// `*` and `^`, terms separated by `+`/`-`.
pub fn parse_polynomial(
    text: &str,
    vars: &[String],
    field: &FieldChar,
    order: MonomialOrder,
) -> std::result::Result<Polynomial, PolyParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut terms: Vec<(Monomial, Fp)> = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(PolyParseError { pos, expected: "polynomial".into() });
    }
    let mut first = true;
    while pos < bytes.len() {
        // sign separator (optional before the first term)
        let mut negate = false;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            negate = bytes[pos] == b'-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(PolyParseError { pos, expected: "'+' or '-'".into() });
        }
        first = false;

        // term: factors joined by '*'
        let mut coeff = Fp(1);
        let mut mono = Monomial::one(vars.len());
        loop {
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n: u64 = text[start..pos]
                    .parse()
                    .map_err(|_| PolyParseError { pos: start, expected: "integer".into() })?;
                coeff = field.mul(coeff, Fp((n % field.p() as u64) as u32));
            } else if pos < bytes.len() && (bytes[pos].is_ascii_alphabetic() || bytes[pos] == b'_') {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                let name = &text[start..pos];
                let vi = vars.iter().position(|v| v == name).ok_or(PolyParseError {
                    pos: start,
                    expected: format!("variable (one of {})", vars.join(", ")),
                })?;
                let mut exp = 1u32;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if start == pos {
                        return Err(PolyParseError { pos, expected: "exponent".into() });
                    }
                    exp = text[start..pos]
                        .parse()
                        .map_err(|_| PolyParseError { pos: start, expected: "exponent".into() })?;
                }
                mono.exps[vi] += exp;
            } else {
                return Err(PolyParseError { pos, expected: "coefficient or variable".into() });
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        if negate {
            coeff = field.neg(coeff);
        }
        terms.push((mono, coeff));
        skip_ws(&mut pos);
    }
    Ok(Polynomial::from_terms(field, order, terms))
}

/// Inverse of the parser, up to canonical residues: `100*x` rather than `-x`.
pub fn poly_to_string(p: &Polynomial, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let mut pieces: Vec<String> = Vec::new();
        if c.0 != 1 || m.is_one() {
            pieces.push(c.0.to_string());
        }
        for (vi, &e) in m.exps.iter().enumerate() {
            if e == 1 {
                pieces.push(vars[vi].clone());
            } else if e > 1 {
                let mut s = String::new();
                let _ = write!(s, "{}^{}", vars[vi], e);
                pieces.push(s);
            }
        }
        out.push_str(&pieces.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FieldChar, Vec<String>) {
        (
            FieldChar::new(101).unwrap(),
            vec!["x".to_string(), "y".to_string()],
        )
    }

    fn parse(s: &str) -> Polynomial {
        let (f, vars) = setup();
        parse_polynomial(s, &vars, &f, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn parser_handles_the_documented_syntax() {
        let p = parse("3*x^2*y + 7*y^3");
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.terms[0], (Monomial { exps: vec![2, 1] }, Fp(3))); // x^2*y leads under grevlex
        assert_eq!(p.terms[1], (Monomial { exps: vec![0, 3] }, Fp(7)));
    }

    #[test]
    fn parser_folds_signs_and_duplicates() {
        assert_eq!(parse("x - x"), Polynomial::zero());
        assert_eq!(parse("-x"), parse("100*x"));
        assert_eq!(parse("2*x + 3*x"), parse("5*x"));
        assert_eq!(parse("102"), parse("1"));
    }

    #[test]
    fn parser_rejects_junk() {
        let (f, vars) = setup();
        assert!(parse_polynomial("", &vars, &f, MonomialOrder::Grevlex).is_err());
        assert!(parse_polynomial("x +", &vars, &f, MonomialOrder::Grevlex).is_err());
        assert!(parse_polynomial("z", &vars, &f, MonomialOrder::Grevlex).is_err());
        assert!(parse_polynomial("x^", &vars, &f, MonomialOrder::Grevlex).is_err());
        let err = parse_polynomial("x ? y", &vars, &f, MonomialOrder::Grevlex).unwrap_err();
        assert_eq!(err.pos, 2);
    }

    #[test]
    fn printer_round_trips() {
        let (f, vars) = setup();
        for s in ["3*x^2*y + 7*y^3", "x", "1", "0", "100*x*y + 1", "x^2 + 2*x*y + y^2"] {
            let p = if s == "0" {
                Polynomial::zero()
            } else {
                parse(s)
            };
            let printed = poly_to_string(&p, &vars);
            let q = if printed == "0" {
                Polynomial::zero()
            } else {
                parse_polynomial(&printed, &vars, &f, MonomialOrder::Grevlex).unwrap()
            };
            assert_eq!(p, q, "round trip failed for {s} -> {printed}");
        }
    }

    #[test]
    fn arithmetic_matches_hand_expansion() {
        let (f, _) = setup();
        let o = MonomialOrder::Grevlex;
        let a = parse("x + y");
        let b = parse("x - y");
        assert_eq!(a.mul(&b, &f, o), parse("x^2 - y^2"));
        assert_eq!(a.mul(&a, &f, o), parse("x^2 + 2*x*y + y^2"));
        assert_eq!(a.sub(&a, &f, o), Polynomial::zero());
    }

    #[test]
    fn homogeneity_detection() {
        assert_eq!(parse("x^2 + x*y").homogeneity(), Homogeneity::Degree(2));
        assert_eq!(parse("x + x*y").homogeneity(), Homogeneity::Mixed);
        assert_eq!(Polynomial::zero().homogeneity(), Homogeneity::Zero);
    }
}
