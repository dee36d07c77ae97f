//! Elements of free modules: one polynomial per component.

use crate::field::{Coeff, Field};
use crate::monomial::Monomial;
use crate::order::{ModuleOrder, MonomialOrder};
use crate::poly::Polynomial;

/// An element of a free module ⊕ R(−a_i), stored dense by component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecPoly {
    pub comps: Vec<Polynomial>,
}

impl VecPoly {
    pub fn zero(ncomps: usize) -> Self {
        VecPoly {
            comps: vec![Polynomial::zero(); ncomps],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn ncomps(&self) -> usize {
        self.comps.len()
    }

    /// Basis element times a polynomial.
    pub fn from_component(ncomps: usize, idx: usize, p: Polynomial) -> Self {
        let mut v = VecPoly::zero(ncomps);
        v.comps[idx] = p;
        v
    }

    /// Leading module term under the given order: (monomial, component, coeff).
    pub fn leading<'a>(
        &'a self,
        morder: &ModuleOrder,
        weights: &[u32],
    ) -> Option<(&'a Monomial, usize, &'a Coeff)> {
        let mut best: Option<(&Monomial, usize, &Coeff)> = None;
        for (ci, p) in self.comps.iter().enumerate() {
            if let Some((m, c)) = p.leading() {
                best = match best {
                    None => Some((m, ci, c)),
                    Some((bm, bc, _)) => {
                        if morder.cmp(m, ci, bm, bc, weights) == std::cmp::Ordering::Greater {
                            Some((m, ci, c))
                        } else {
                            best
                        }
                    }
                };
            }
        }
        best
    }

    pub fn add(&self, other: &VecPoly, field: &Field, order: &MonomialOrder, weights: &[u32]) -> VecPoly {
        VecPoly {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b, field, order, weights))
                .collect(),
        }
    }

    pub fn sub(&self, other: &VecPoly, field: &Field, order: &MonomialOrder, weights: &[u32]) -> VecPoly {
        VecPoly {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b, field, order, weights))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff, field: &Field) -> VecPoly {
        VecPoly {
            comps: self.comps.iter().map(|p| p.mul_term(m, c, field)).collect(),
        }
    }

    pub fn mul_poly(&self, q: &Polynomial, field: &Field, order: &MonomialOrder, weights: &[u32]) -> VecPoly {
        VecPoly {
            comps: self
                .comps
                .iter()
                .map(|p| p.mul(q, field, order, weights))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff, field: &Field) -> VecPoly {
        VecPoly {
            comps: self.comps.iter().map(|p| p.scale(c, field)).collect(),
        }
    }

    pub fn monic(&self, morder: &ModuleOrder, weights: &[u32], field: &Field) -> VecPoly {
        match self.leading(morder, weights) {
            None => self.clone(),
            Some((_, _, lc)) => {
                if field.is_one(lc) {
                    self.clone()
                } else {
                    let inv = field.inv(lc);
                    self.scale(&inv, field)
                }
            }
        }
    }

    /// Homogeneous degree with respect to component twists, if any.
    /// A component entry p sitting over twist a contributes degree deg(p) + a.
    pub fn homogeneous_degree(&self, twists: &[i64], weights: &[u32]) -> Option<i64> {
        let mut deg: Option<i64> = None;
        for (ci, p) in self.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let d = p.homogeneous_degree(weights)? + twists[ci];
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, twists: &[i64], weights: &[u32]) -> bool {
        self.is_zero() || self.homogeneous_degree(twists, weights).is_some()
    }

    pub fn term_count(&self) -> usize {
        self.comps.iter().map(|p| p.terms.len()).sum()
    }
}
