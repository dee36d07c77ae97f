//! Degreewise Čech local cohomology over affine semigroup rings, for
//! monomial ideals: the polynomial semigroup ℕ^e and its mod-n Veronese
//! subsemigroup.
//!
//! For each multidegree in a box, the Čech complex on the generators has a
//! zero- or one-dimensional piece per subset, present exactly when the
//! multidegree lies in that subset's localized semigroup. Localization
//! membership is decided by a bounded search whose bound stabilizes for
//! these two semigroup families. Cohomology is exact kernel/image rank
//! arithmetic over the coefficient field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gmod::RowSpan;
use crate::monomial::monomials_of_degree;

/// ℕ^e, or its subsemigroup of points with total weighted degree ≡ 0 mod n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupRing {
    pub rank: usize,
    pub weights: Vec<u32>,
    /// None: all of ℕ^e. Some(n): the mod-n Veronese subsemigroup.
    pub modulus: Option<u32>,
}

impl SemigroupRing {
    pub fn full(rank: usize) -> Self {
        SemigroupRing {
            rank,
            weights: vec![1; rank],
            modulus: None,
        }
    }

    pub fn veronese(rank: usize, n: u32) -> Self {
        SemigroupRing {
            rank,
            weights: vec![1; rank],
            modulus: Some(n),
        }
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        if a.iter().any(|&c| c < 0) {
            return false;
        }
        match self.modulus {
            None => true,
            Some(n) => self.total_degree(a).rem_euclid(n as i64) == 0,
        }
    }

    pub fn total_degree(&self, a: &[i64]) -> i64 {
        a.iter()
            .zip(&self.weights)
            .map(|(&c, &w)| c * w as i64)
            .sum()
    }

    /// Membership of `a` in the localization at the face sum `v`:
    /// a + t·v lands in the semigroup for some 0 ≤ t ≤ t_max.
    fn localized_member(&self, a: &[i64], v: &[i64], t_max: i64) -> bool {
        let mut cur = a.to_vec();
        for _ in 0..=t_max {
            if self.contains(&cur) {
                return true;
            }
            for (c, &d) in cur.iter_mut().zip(v) {
                *c += d;
            }
        }
        false
    }
}

/// Multidegree-indexed local cohomology dimensions over a box.
#[derive(Debug, Clone)]
pub struct CechWindow {
    pub gens: Vec<Vec<u32>>,
    pub index: usize,
    pub box_bound: i64,
    /// Exact dim_k at each multidegree with a nonzero piece.
    pub dims: BTreeMap<Vec<i64>, usize>,
    /// Sums by total weighted degree.
    pub coarse: BTreeMap<i64, usize>,
    /// Set when a nonzero piece touches the box boundary: coarse sums may
    /// then miss contributions from outside the box.
    pub boundary_flag: bool,
}

/// Dimensions of every cohomology index of the Čech complex at one
/// multidegree.
fn cech_fiber(
    s: &SemigroupRing,
    gens: &[Vec<u32>],
    a: &[i64],
    t_max: i64,
    field: &Field,
) -> Vec<usize> {
    let g = gens.len();
    // presence of each subset's piece
    let nsub = 1usize << g;
    let mut present = vec![false; nsub];
    for (mask, slot) in present.iter_mut().enumerate() {
        let mut v = vec![0i64; s.rank];
        for (j, gen) in gens.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                for (c, &e) in v.iter_mut().zip(gen) {
                    *c += e as i64;
                }
            }
        }
        *slot = s.localized_member(a, &v, t_max);
    }
    // index subsets by cardinality
    let mut by_card: Vec<Vec<usize>> = vec![Vec::new(); g + 1];
    for mask in 0..nsub {
        if present[mask] {
            by_card[mask.count_ones() as usize].push(mask);
        }
    }
    // differential ranks: d^j : C^j -> C^{j+1}
    let mut ranks = vec![0usize; g + 1];
    for j in 0..g {
        let src = &by_card[j];
        let tgt = &by_card[j + 1];
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let tgt_index: BTreeMap<usize, usize> =
            tgt.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut span = RowSpan::new(*field, tgt.len());
        for &sm in src {
            let mut col = vec![field.zero(); tgt.len()];
            for add in 0..g {
                if (sm >> add) & 1 == 1 {
                    continue;
                }
                let tm = sm | (1 << add);
                if let Some(&ti) = tgt_index.get(&tm) {
                    // sign: parity of the position of `add` within tm
                    let pos = (tm & ((1 << add) - 1)).count_ones();
                    let one = field.one();
                    col[ti] = if pos % 2 == 0 { one } else { field.neg(&one) };
                }
            }
            span.insert(col);
        }
        ranks[j] = span.rank();
    }
    let mut dims = vec![0usize; g + 1];
    for j in 0..=g {
        let c = by_card[j].len();
        let r_out = if j < g { ranks[j] } else { 0 };
        let r_in = if j > 0 { ranks[j - 1] } else { 0 };
        dims[j] = c - r_out - r_in;
    }
    dims
}

/// Enumerate the box [-B, B]^e, optionally restricted to a total-degree
/// window.
fn box_multidegrees(
    s: &SemigroupRing,
    box_bound: i64,
    total_window: Option<(i64, i64)>,
) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-box_bound; s.rank];
    loop {
        let keep = match total_window {
            None => true,
            Some((lo, hi)) => {
                let t = s.total_degree(&cur);
                t >= lo && t <= hi
            }
        };
        if keep {
            out.push(cur.clone());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == s.rank {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= box_bound {
                break;
            }
            cur[i] = -box_bound;
            i += 1;
        }
    }
}

/// The i-th local cohomology of the semigroup ring supported on the
/// monomial ideal, degreewise over the box.
pub fn cech_window(
    s: &SemigroupRing,
    gens: &[Vec<u32>],
    index: usize,
    box_bound: i64,
    total_window: Option<(i64, i64)>,
    field: &Field,
) -> Result<CechWindow> {
    if gens.is_empty() {
        return Err(Error::InvalidModule("need at least one generator".into()));
    }
    if gens.iter().any(|g| g.len() != s.rank) {
        return Err(Error::InvalidModule(
            "generator exponent vector has the wrong rank".into(),
        ));
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Err(Error::InvalidModule("generators must be nonzero".into()));
    }
    if box_bound < 0 {
        return Err(Error::InvalidModule("empty box".into()));
    }
    if box_bound > 40 {
        return Err(Error::ResourceLimit {
            limit: "cech_box".into(),
            detail: format!("box bound {box_bound} too large"),
        });
    }
    let max_w = *s.weights.iter().max().unwrap() as i64;
    let t_max = s.rank as i64 * box_bound * max_w + s.modulus.unwrap_or(1) as i64;
    let mut dims = BTreeMap::new();
    let mut coarse = BTreeMap::new();
    let mut boundary_flag = false;
    for a in box_multidegrees(s, box_bound, total_window) {
        let fiber = cech_fiber(s, gens, &a, t_max, field);
        let h = fiber.get(index).copied().unwrap_or(0);
        if h > 0 {
            if a.iter().any(|&c| c.abs() == box_bound) {
                boundary_flag = true;
            }
            *coarse.entry(s.total_degree(&a)).or_insert(0) += h;
            dims.insert(a, h);
        }
    }
    Ok(CechWindow {
        gens: gens.to_vec(),
        index,
        box_bound,
        dims,
        coarse,
        boundary_flag,
    })
}

/// Rank-nullity audit: at every multidegree of the box the alternating sum
/// of cohomology dims equals the alternating sum of term counts.
pub fn euler_audit(
    s: &SemigroupRing,
    gens: &[Vec<u32>],
    box_bound: i64,
    field: &Field,
) -> Result<bool> {
    let max_w = *s.weights.iter().max().unwrap() as i64;
    let t_max = s.rank as i64 * box_bound * max_w + s.modulus.unwrap_or(1) as i64;
    for a in box_multidegrees(s, box_bound, None) {
        let fiber = cech_fiber(s, gens, &a, t_max, field);
        let mut terms: i64 = 0;
        let g = gens.len();
        for mask in 0..(1usize << g) {
            let mut v = vec![0i64; s.rank];
            for (j, gen) in gens.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    for (c, &e) in v.iter_mut().zip(gen) {
                        *c += e as i64;
                    }
                }
            }
            if s.localized_member(&a, &v, t_max) {
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                terms += sign;
            }
        }
        let homology: i64 = fiber
            .iter()
            .enumerate()
            .map(|(j, &h)| if j % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum();
        if terms != homology {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators, up to radical, of the contraction of a monomial ideal to the
/// mod-n subsemigroup: each generator is padded by every monomial of the
/// minimal complementary degree.
pub fn contract_monomial_ideal(gens: &[Vec<u32>], weights: &[u32], n: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        let deg: i64 = g.iter().zip(weights).map(|(&e, &w)| e as i64 * w as i64).sum();
        let delta = (-deg).rem_euclid(n as i64);
        if delta == 0 {
            out.push(g.clone());
            continue;
        }
        for u in monomials_of_degree(weights, delta) {
            let padded: Vec<u32> = g.iter().zip(&u.0).map(|(&a, &b)| a + b).collect();
            out.push(padded);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Comparison of coarse dimensions across the Veronese: the ambient side at
/// total degrees divisible by n against the subsemigroup side with the
/// contracted generators.
#[derive(Debug, Clone)]
pub struct VeroneseCohReport {
    pub pass: bool,
    pub mismatches: Vec<(i64, usize, usize)>,
    pub ambient_boundary: bool,
    pub veronese_boundary: bool,
    pub ambient_coarse: BTreeMap<i64, usize>,
    pub veronese_coarse: BTreeMap<i64, usize>,
}

pub fn verify_veronese_localcoh(
    gens: &[Vec<u32>],
    rank: usize,
    n: u32,
    index: usize,
    box_bound: i64,
    field: &Field,
) -> Result<VeroneseCohReport> {
    let ambient = SemigroupRing::full(rank);
    let sub = SemigroupRing::veronese(rank, n);
    let contracted = contract_monomial_ideal(gens, &ambient.weights, n);
    // compare totals inside the box radius; the boundary flags report
    // whether these coarse sums are complete
    let lo = -box_bound;
    let hi = box_bound;
    let window = Some((lo, hi));
    let win_a = cech_window(&ambient, gens, index, box_bound, window, field)?;
    let win_v = cech_window(&sub, &contracted, index, box_bound, window, field)?;
    let mut mismatches = Vec::new();
    let mut ambient_coarse = BTreeMap::new();
    let mut veronese_coarse = BTreeMap::new();
    let mut t = lo;
    while t <= hi {
        if t.rem_euclid(n as i64) == 0 {
            let da = *win_a.coarse.get(&t).unwrap_or(&0);
            let dv = *win_v.coarse.get(&t).unwrap_or(&0);
            if da > 0 {
                ambient_coarse.insert(t, da);
            }
            if dv > 0 {
                veronese_coarse.insert(t, dv);
            }
            if da != dv {
                mismatches.push((t, da, dv));
            }
        }
        t += 1;
    }
    Ok(VeroneseCohReport {
        pass: mismatches.is_empty(),
        mismatches,
        ambient_boundary: win_a.boundary_flag,
        veronese_boundary: win_v.boundary_flag,
        ambient_coarse,
        veronese_coarse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> Field {
        Field::Rationals
    }

    #[test]
    fn top_cohomology_of_plane_at_irrelevant() {
        let s = SemigroupRing::full(2);
        let gens = vec![vec![1, 0], vec![0, 1]];
        let w = cech_window(&s, &gens, 2, 4, None, &qq()).unwrap();
        assert_eq!(w.dims.get(&vec![-1, -1]), Some(&1));
        assert_eq!(w.coarse.get(&-2), Some(&1));
        assert_eq!(w.coarse.get(&-3), Some(&2));
        // pieces exist exactly when both coordinates are negative
        assert!(w.dims.keys().all(|a| a[0] < 0 && a[1] < 0));
    }

    #[test]
    fn index_zero_of_height_one_ideal_vanishes() {
        let s = SemigroupRing::full(2);
        let gens = vec![vec![1, 0]];
        let w = cech_window(&s, &gens, 0, 4, None, &qq()).unwrap();
        assert!(w.dims.is_empty());
    }

    #[test]
    fn first_cohomology_supported_on_x() {
        let s = SemigroupRing::full(2);
        let gens = vec![vec![1, 0]];
        let w = cech_window(&s, &gens, 1, 4, None, &qq()).unwrap();
        assert_eq!(w.dims.get(&vec![-1, 3]), Some(&1));
        // pieces: first coordinate negative, second nonnegative
        assert!(w.dims.keys().all(|a| a[0] < 0 && a[1] >= 0));
    }

    #[test]
    fn vanishing_above_the_rank() {
        let s = SemigroupRing::full(2);
        let gens = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let w = cech_window(&s, &gens, 3, 3, None, &qq()).unwrap();
        assert!(w.dims.is_empty(), "cohomology above the rank must vanish");
    }

    #[test]
    fn top_cohomology_in_three_coordinates() {
        let s = SemigroupRing::full(3);
        let gens = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let w = cech_window(&s, &gens, 3, 3, None, &qq()).unwrap();
        // pieces exactly where all coordinates are negative
        assert_eq!(w.dims.get(&vec![-1, -1, -1]), Some(&1));
        assert_eq!(w.coarse.get(&-3), Some(&1));
        assert_eq!(w.coarse.get(&-4), Some(&3));
        assert!(w.dims.keys().all(|a| a.iter().all(|&c| c < 0)));
        // nothing in lower indices
        for i in 0..3 {
            let wi = cech_window(&s, &gens, i, 2, None, &qq()).unwrap();
            assert!(wi.dims.is_empty(), "index {i}");
        }
    }

    #[test]
    fn euler_characteristic_audit() {
        let s = SemigroupRing::full(2);
        assert!(euler_audit(&s, &[vec![1, 0], vec![0, 1]], 3, &qq()).unwrap());
        assert!(euler_audit(&s, &[vec![2, 1]], 3, &qq()).unwrap());
        let v = SemigroupRing::veronese(2, 2);
        assert!(euler_audit(&v, &[vec![2, 0], vec![1, 1], vec![0, 2]], 3, &qq()).unwrap());
    }

    #[test]
    fn radical_invariance_under_squaring() {
        let s = SemigroupRing::full(2);
        let gens = vec![vec![1, 0], vec![0, 1]];
        let squared: Vec<Vec<u32>> = gens.iter().map(|g| g.iter().map(|&e| 2 * e).collect()).collect();
        for i in 0..=2 {
            let a = cech_window(&s, &gens, i, 3, None, &qq()).unwrap();
            let b = cech_window(&s, &squared, i, 3, None, &qq()).unwrap();
            assert_eq!(a.dims, b.dims, "index {i}");
        }
    }

    #[test]
    fn contraction_of_degree_one_generators() {
        // (x) with n = 2 contracts to (x^2, xy)
        let out = contract_monomial_ideal(&[vec![1, 0]], &[1, 1], 2);
        assert_eq!(out, vec![vec![1, 1], vec![2, 0]]);
        // generators already of degree 0 mod n stay put
        let out2 = contract_monomial_ideal(&[vec![1, 1]], &[1, 1], 2);
        assert_eq!(out2, vec![vec![1, 1]]);
        // (xy) with n = 3 pads by the degree-1 complements
        let out3 = contract_monomial_ideal(&[vec![1, 1]], &[1, 1], 3);
        assert_eq!(out3, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn veronese_window_check_top_cohomology() {
        let rep = verify_veronese_localcoh(&[vec![1, 0], vec![0, 1]], 2, 2, 2, 6, &qq()).unwrap();
        assert!(rep.pass, "mismatches: {:?}", rep.mismatches);
        assert!(!rep.ambient_boundary);
        assert!(!rep.veronese_boundary);
        assert_eq!(rep.ambient_coarse.get(&-2), Some(&1));
        assert_eq!(rep.ambient_coarse.get(&-4), Some(&3));
        assert_eq!(rep.ambient_coarse.get(&-6), Some(&5));
    }

    #[test]
    fn veronese_window_check_index_one() {
        let rep = verify_veronese_localcoh(&[vec![1, 0]], 2, 2, 1, 5, &qq()).unwrap();
        assert!(rep.pass, "mismatches: {:?}", rep.mismatches);
    }

    #[test]
    fn veronese_window_index_zero_vanishes() {
        let rep = verify_veronese_localcoh(&[vec![1, 0], vec![0, 1]], 2, 2, 0, 4, &qq()).unwrap();
        assert!(rep.pass);
        assert!(rep.ambient_coarse.is_empty());
        assert!(rep.veronese_coarse.is_empty());
    }
}
