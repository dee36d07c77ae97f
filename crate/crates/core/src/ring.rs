//! Positively graded quotient rings of weighted polynomial rings.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner;
use crate::limits::GbLimits;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;

#[derive(Debug)]
struct RingData {
    field: Field,
    vars: Vec<String>,
    weights: Vec<u32>,
    relations: Vec<Polynomial>,
    order: MonomialOrder,
    /// Reduced Gröbner basis of the defining ideal under `order`.
    quotient_gb: Vec<Polynomial>,
}

/// The ambient algebra R: a positively graded quotient of a weighted
/// polynomial ring over an exact field. Immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct GradedRing(Arc<RingData>);

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.vars == other.0.vars
                && self.0.weights == other.0.weights
                && self.0.relations == other.0.relations
                && self.0.order == other.0.order)
    }
}
impl Eq for GradedRing {}

impl GradedRing {
    /// Polynomial ring without relations.
    pub fn polynomial(field: Field, vars: &[&str], weights: &[u32]) -> Result<GradedRing> {
        Self::build(field, vars, weights, Vec::new(), MonomialOrder::DegRevLex)
    }

    /// Quotient ring with relation texts parsed in the ambient polynomial ring.
    pub fn quotient(
        field: Field,
        vars: &[&str],
        weights: &[u32],
        relation_texts: &[&str],
    ) -> Result<GradedRing> {
        let ambient = Self::polynomial(field, vars, weights)?;
        let relations = relation_texts
            .iter()
            .map(|t| ambient.parse(t))
            .collect::<Result<Vec<_>>>()?;
        Self::build(field, vars, weights, relations, MonomialOrder::DegRevLex)
    }

    pub fn with_relations(&self, relations: Vec<Polynomial>) -> Result<GradedRing> {
        Self::build(
            self.0.field,
            &self.0.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &self.0.weights,
            relations,
            self.0.order.clone(),
        )
    }

    pub fn build(
        field: Field,
        vars: &[&str],
        weights: &[u32],
        relations: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Result<GradedRing> {
        if vars.len() != weights.len() {
            return Err(Error::InvalidRing(
                "variable and weight counts differ".into(),
            ));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidRing("weights must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in vars {
            if !seen.insert(v.to_string()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        for r in &relations {
            if !r.is_homogeneous(weights) {
                return Err(Error::InvalidRing(
                    "relation is not homogeneous under the weights".into(),
                ));
            }
        }
        let relations: Vec<Polynomial> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let quotient_gb = if relations.is_empty() {
            Vec::new()
        } else {
            groebner::ring_gb_raw(
                &field,
                weights,
                &order,
                relations.clone(),
                &GbLimits::default(),
            )?
        };
        if quotient_gb.iter().any(|g| g.leading().map(|(m, _)| m.is_one()).unwrap_or(false)) {
            return Err(Error::InvalidRing("defining ideal is the unit ideal".into()));
        }
        Ok(GradedRing(Arc::new(RingData {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
            relations,
            order,
            quotient_gb,
        })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.0.weights
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.0.relations
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.0.order
    }

    pub fn quotient_gb(&self) -> &[Polynomial] {
        &self.0.quotient_gb
    }

    pub fn is_standard_graded(&self) -> bool {
        self.0.weights.iter().all(|&w| w == 1)
    }

    pub fn var_poly(&self, idx: usize) -> Polynomial {
        Polynomial::monomial(Monomial::var(self.nvars(), idx), self.field().one())
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero()
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::constant(self.field(), self.field().one(), self.nvars())
    }

    fn check_same_vars(&self, p: &Polynomial) -> Result<()> {
        if p.terms.iter().any(|(m, _)| m.nvars() != self.nvars()) {
            return Err(Error::RingMismatch(
                "polynomial has a different number of variables".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(a)?;
        self.check_same_vars(b)?;
        Ok(a.add(b, self.field(), self.order(), self.weights()))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(a)?;
        self.check_same_vars(b)?;
        Ok(a.mul(b, self.field(), self.order(), self.weights()))
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(a)?;
        self.check_same_vars(b)?;
        Ok(a.sub(b, self.field(), self.order(), self.weights()))
    }

    /// Normal form modulo the defining ideal; the canonical representative
    /// of a residue class.
    pub fn nf(&self, p: &Polynomial) -> Polynomial {
        if self.0.quotient_gb.is_empty() {
            return p.clone();
        }
        groebner::nf_raw(
            self.field(),
            self.weights(),
            self.order(),
            p,
            &self.0.quotient_gb,
        )
    }

    /// Monomials of R of weighted degree d that survive in the quotient
    /// (not divisible by any leading term of the defining ideal's basis).
    pub fn std_monomials(&self, d: i64) -> Vec<Monomial> {
        monomials_of_degree(self.weights(), d)
            .into_iter()
            .filter(|m| {
                !self
                    .0
                    .quotient_gb
                    .iter()
                    .any(|g| g.leading().map(|(lm, _)| lm.divides(m)).unwrap_or(false))
            })
            .collect()
    }

    /// dim_k of the degree-d piece of R.
    pub fn dim_at(&self, d: i64) -> usize {
        self.std_monomials(d).len()
    }

    // ---- parsing ----------------------------------------------------------

    /// Parse a polynomial in the ASCII grammar:
    /// `expr := term (('+'|'-') term)*`,
    /// `term := [coefficient] ('*'? var ('^' posint)?)*`.
    /// Whitespace is ignored. A coefficient cleared by the characteristic
    /// simply drops the term.
    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let n = bytes.len();
        let skip_ws = |pos: &mut usize| {
            while *pos < n && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let mut acc = Polynomial::zero();
        let mut expect_term = true;
        let mut sign_negative = false;
        skip_ws(&mut pos);
        if pos < n && bytes[pos] == b'-' {
            sign_negative = true;
            pos += 1;
        } else if pos < n && bytes[pos] == b'+' {
            pos += 1;
        }
        loop {
            skip_ws(&mut pos);
            if pos >= n {
                if expect_term {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected a term".into(),
                    });
                }
                break;
            }
            if expect_term {
                let term = self.parse_term(bytes, &mut pos)?;
                let term = if sign_negative { term.neg(self.field()) } else { term };
                acc = acc.add(&term, self.field(), self.order(), self.weights());
                expect_term = false;
            } else {
                match bytes[pos] {
                    b'+' => {
                        sign_negative = false;
                        pos += 1;
                        expect_term = true;
                    }
                    b'-' => {
                        sign_negative = true;
                        pos += 1;
                        expect_term = true;
                    }
                    _ => {
                        return Err(Error::Syntax {
                            pos,
                            msg: format!("expected '+' or '-', found `{}`", bytes[pos] as char),
                        })
                    }
                }
            }
        }
        Ok(acc)
    }

    fn parse_term(&self, bytes: &[u8], pos: &mut usize) -> Result<Polynomial> {
        let n = bytes.len();
        let skip_ws = |pos: &mut usize| {
            while *pos < n && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let parse_uint = |pos: &mut usize| -> Result<i64> {
            let start = *pos;
            while *pos < n && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return Err(Error::Syntax {
                    pos: start,
                    msg: "expected an integer".into(),
                });
            }
            std::str::from_utf8(&bytes[start..*pos])
                .unwrap()
                .parse::<i64>()
                .map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "integer out of range".into(),
                })
        };

        skip_ws(pos);
        let mut coeff = self.field().one();
        let mut saw_anything = false;
        if *pos < n && bytes[*pos].is_ascii_digit() {
            let v = parse_uint(pos)?;
            coeff = self.field().from_i64(v);
            // extension of the grammar: rational coefficient `a/b`
            if *pos < n && bytes[*pos] == b'/' {
                *pos += 1;
                let d = parse_uint(pos)?;
                if d == 0 {
                    return Err(Error::Syntax {
                        pos: *pos,
                        msg: "zero denominator".into(),
                    });
                }
                coeff = self.field().div(&coeff, &self.field().from_i64(d));
            }
            saw_anything = true;
        }
        let mut exps = vec![0u32; self.nvars()];
        loop {
            skip_ws(pos);
            let mut p = *pos;
            if p < n && bytes[p] == b'*' {
                p += 1;
                skip_ws(&mut p);
            }
            if p >= n || !(bytes[p].is_ascii_alphabetic() || bytes[p] == b'_') {
                break;
            }
            *pos = p;
            let start = *pos;
            while *pos < n
                && (bytes[*pos].is_ascii_alphanumeric() || bytes[*pos] == b'_')
            {
                *pos += 1;
            }
            let name = std::str::from_utf8(&bytes[start..*pos]).unwrap();
            let idx = self
                .0
                .vars
                .iter()
                .position(|v| v == name)
                .ok_or(Error::UnknownVariable {
                    pos: start,
                    name: name.to_string(),
                })?;
            let mut exp = 1u32;
            skip_ws(pos);
            if *pos < n && bytes[*pos] == b'^' {
                *pos += 1;
                skip_ws(pos);
                let e = parse_uint(pos)?;
                if e <= 0 {
                    return Err(Error::Syntax {
                        pos: *pos,
                        msg: "exponent must be positive".into(),
                    });
                }
                exp = e as u32;
            }
            exps[idx] += exp;
            saw_anything = true;
        }
        if !saw_anything {
            return Err(Error::Syntax {
                pos: *pos,
                msg: "expected a term".into(),
            });
        }
        if self.field().is_zero(&coeff) {
            return Ok(Polynomial::zero());
        }
        Ok(Polynomial::monomial(Monomial(exps), coeff))
    }

    // ---- printing ---------------------------------------------------------

    pub fn monomial_string(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            if e == 1 {
                parts.push(self.0.vars[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.0.vars[i], e));
            }
        }
        parts.join("*")
    }

    pub fn poly_string(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let f = self.field();
        let mut out = String::new();
        for (i, (m, c)) in p.terms.iter().enumerate() {
            let neg = f.is_negative(c);
            let abs = if neg { f.neg(c) } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = f.format(&abs);
            if m.is_one() {
                out.push_str(&coeff_str);
            } else if f.is_one(&abs) {
                out.push_str(&self.monomial_string(m));
            } else {
                out.push_str(&coeff_str);
                out.push('*');
                out.push_str(&self.monomial_string(m));
            }
        }
        out
    }

    /// Generators of the irrelevant maximal ideal (all variables).
    pub fn irrelevant_gens(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var_poly(i)).collect()
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.0.field, self.0.vars.join(","))?;
        if self.0.weights.iter().any(|&w| w != 1) {
            let ws: Vec<String> = self.0.weights.iter().map(|w| w.to_string()).collect();
            write!(f, " wt ({})", ws.join(","))?;
        }
        if !self.0.relations.is_empty() {
            let rs: Vec<String> = self.0.relations.iter().map(|r| self.poly_string(r)).collect();
            write!(f, " / ({})", rs.join(", "))?;
        }
        Ok(())
    }
}
