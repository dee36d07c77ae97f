//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are stored as a vector of (monomial, coefficient) pairs sorted in
//! strictly descending order under the active monomial order; no zero
//! coefficients are ever stored. The sorted-dense representation gives
//! deterministic iteration order and hence reproducible output everywhere.

use crate::field::{Coeff, Field};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    pub terms: Vec<(Monomial, Coeff)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(field: &Field, c: Coeff, nvars: usize) -> Self {
        if field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::one(nvars), c)],
            }
        }
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        Polynomial { terms: vec![(m, c)] }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Weighted degree of the highest-degree term, or None for zero.
    pub fn degree(&self, weights: &[u32]) -> Option<i64> {
        self.terms.iter().map(|(m, _)| m.degree(weights)).max()
    }

    /// Some(d) iff nonzero and every term has weighted degree d.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<i64> {
        let mut it = self.terms.iter();
        let d = it.next()?.0.degree(weights);
        for (m, _) in it {
            if m.degree(weights) != d {
                return None;
            }
        }
        Some(d)
    }

    /// True for the zero polynomial or when all terms share one degree.
    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        self.is_zero() || self.homogeneous_degree(weights).is_some()
    }

    /// Merge-add two polynomials sorted under the same order.
    pub fn add(&self, other: &Polynomial, field: &Field, order: &MonomialOrder, weights: &[u32]) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0, weights) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(&self.terms[i].1, &other.terms[j].1);
                    if !field.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
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

    pub fn neg(&self, field: &Field) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial, field: &Field, order: &MonomialOrder, weights: &[u32]) -> Polynomial {
        self.add(&other.neg(field), field, order, weights)
    }

    /// Multiply by a single term; preserves sortedness.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff, field: &Field) -> Polynomial {
        if field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), field.mul(tc, c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff, field: &Field) -> Polynomial {
        if field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, tc)| (m.clone(), field.mul(tc, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, field: &Field, order: &MonomialOrder, weights: &[u32]) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c, field), field, order, weights);
        }
        acc
    }

    /// Divide every coefficient by the leading coefficient.
    pub fn monic(&self, field: &Field) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some((_, lc)) => {
                if field.is_one(lc) {
                    self.clone()
                } else {
                    let inv = field.inv(lc);
                    self.scale(&inv, field)
                }
            }
        }
    }

    /// Re-sort terms descending under a (possibly different) order,
    /// merging any equal monomials.
    pub fn resorted(&self, field: &Field, order: &MonomialOrder, weights: &[u32]) -> Polynomial {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0, weights));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = field.add(&last.1, &c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Polynomial { terms: out }
    }

    /// Evaluate at a point of the coefficient field.
    pub fn eval(&self, point: &[Coeff], field: &Field) -> Coeff {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = field.mul(&t, &point[i]);
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Substitute polynomials for the variables (used by lift maps).
    pub fn substitute(
        &self,
        images: &[Polynomial],
        field: &Field,
        order: &MonomialOrder,
        weights: &[u32],
        nvars_out: usize,
    ) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(field, c.clone(), nvars_out);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&images[i], field, order, weights);
                }
            }
            acc = acc.add(&t, field, order, weights);
        }
        acc
    }
}
