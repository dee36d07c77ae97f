//! Monomials as exponent vectors with weighted degrees.

/// A monomial in a fixed set of variables, stored as an exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Weighted degree Σ exponents[j] · weights[j].
    pub fn degree(&self, weights: &[u32]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(&b, &a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| e * k).collect())
    }
}

/// All monomials of exact weighted degree `d` in the given weights,
/// in lexicographic order of exponent vectors.
pub fn monomials_of_degree(weights: &[u32], d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let mut exps = vec![0u32; weights.len()];
    fn rec(weights: &[u32], idx: usize, remaining: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == weights.len() {
            if remaining == 0 {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        if idx + 1 == weights.len() {
            let w = weights[idx] as i64;
            if remaining % w == 0 {
                exps[idx] = (remaining / w) as u32;
                out.push(Monomial(exps.clone()));
                exps[idx] = 0;
            }
            return;
        }
        let w = weights[idx] as i64;
        let max = remaining / w;
        for e in (0..=max).rev() {
            exps[idx] = e as u32;
            rec(weights, idx + 1, remaining - e * w, exps, out);
        }
        exps[idx] = 0;
    }
    rec(weights, 0, d, &mut exps, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_weighted() {
        let m = Monomial(vec![1, 2]);
        assert_eq!(m.degree(&[1, 1]), 3);
        assert_eq!(m.degree(&[2, 3]), 8);
    }

    #[test]
    fn divisibility_and_quotient() {
        let a = Monomial(vec![1, 0]);
        let b = Monomial(vec![2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.div_into(&b), Monomial(vec![1, 1]));
    }

    #[test]
    fn enumeration_counts() {
        // standard grading: dim of degree-d piece of k[x,y] is d+1
        for d in 0..6 {
            assert_eq!(monomials_of_degree(&[1, 1], d).len(), (d + 1) as usize);
        }
        // weights (2,3): degree 6 has x^3, y^2
        assert_eq!(monomials_of_degree(&[2, 3], 6).len(), 2);
        // degree 1 in weights (2,3) is empty
        assert!(monomials_of_degree(&[2, 3], 1).is_empty());
    }
}
