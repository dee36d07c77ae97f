//! Minimal graded free resolutions, Betti tables, truncated Poincaré
//! series, and graded Ext modules.
//!
//! Resolutions are built by iterated syzygies. After each syzygy step the
//! new differential is minimalized by unit-pivot elimination: a degree-zero
//! entry marks a redundant generator, which is split off by graded row and
//! column operations before the next step. Over the positively graded rings
//! here a homogeneous entry is a unit exactly when it is a nonzero constant,
//! so minimality is a simple scan.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gmod::GradedModule;
use crate::groebner;
use crate::homalg::{self, GradedMap};
use crate::limits::GbLimits;
use crate::poly::Polynomial;
use crate::ring::GradedRing;
use crate::vecpoly::VecPoly;

/// One differential F_i → F_{i−1} of a graded complex of free modules.
#[derive(Debug, Clone)]
pub struct DiffMatrix {
    /// One column per generator of F_i, living in F_{i−1}.
    pub columns: Vec<VecPoly>,
    /// Twists of F_i.
    pub source_twists: Vec<i64>,
    /// Twists of F_{i−1}.
    pub target_twists: Vec<i64>,
}

/// A graded free resolution of a module through homological degree `i_max`.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub ring: GradedRing,
    /// Twists of F_0.
    pub f0_twists: Vec<i64>,
    /// differentials[i] is d_{i+1} : F_{i+1} → F_i.
    pub differentials: Vec<DiffMatrix>,
    pub i_max: usize,
    pub minimal: bool,
}

impl Resolution {
    /// Twists of F_i.
    pub fn twists(&self, i: usize) -> &[i64] {
        if i == 0 {
            &self.f0_twists
        } else {
            &self.differentials[i - 1].source_twists
        }
    }

    pub fn rank(&self, i: usize) -> usize {
        self.twists(i).len()
    }

    /// d_i for 1 ≤ i ≤ i_max.
    pub fn differential(&self, i: usize) -> &DiffMatrix {
        &self.differentials[i - 1]
    }

    /// Exact check that consecutive differentials compose to zero.
    pub fn composes_to_zero(&self) -> bool {
        let ring = &self.ring;
        for i in 1..self.differentials.len() {
            let d = &self.differentials[i - 1];
            let e = &self.differentials[i];
            for col in &e.columns {
                let mut acc = VecPoly::zero(d.target_twists.len());
                for (j, p) in col.comps.iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    acc = acc.add(
                        &d.columns[j].mul_poly(p, ring.field(), ring.order(), ring.weights()),
                        ring.field(),
                        ring.order(),
                        ring.weights(),
                    );
                }
                for p in &acc.comps {
                    if !ring.nf(p).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Scan for unit entries; a minimal resolution has none.
    pub fn has_unit_entry(&self) -> bool {
        self.differentials
            .iter()
            .any(|d| d.columns.iter().any(|c| column_has_unit(c)))
    }
}

fn column_has_unit(c: &VecPoly) -> bool {
    c.comps.iter().any(is_unit_entry)
}

fn is_unit_entry(p: &Polynomial) -> bool {
    p.terms.len() == 1 && p.terms[0].0.is_one()
        || (!p.is_zero() && p.terms.iter().all(|(m, _)| m.is_one()))
}

/// Unit-pivot elimination on a differential S, updating the previous
/// differential (whose source is S's target) under the induced basis change.
fn prune_pair(s: &mut DiffMatrix, prev: Option<&mut DiffMatrix>, ring: &GradedRing) {
    let field = ring.field();
    let order = ring.order();
    let weights = ring.weights();
    let mut prev = prev;
    loop {
        // find a unit entry (j0 = row/component, l0 = column)
        let mut unit: Option<(usize, usize)> = None;
        'outer: for (l, col) in s.columns.iter().enumerate() {
            for (j, p) in col.comps.iter().enumerate() {
                if is_unit_entry(p) {
                    unit = Some((j, l));
                    break 'outer;
                }
            }
        }
        let (j0, l0) = match unit {
            Some(u) => u,
            None => break,
        };
        let u = s.columns[l0].comps[j0].terms[0].1.clone();
        let u_inv = field.inv(&u);
        // column operations: clear row j0 in the other columns
        let pivot_col = s.columns[l0].clone();
        for l in 0..s.columns.len() {
            if l == l0 {
                continue;
            }
            let entry = s.columns[l].comps[j0].clone();
            if entry.is_zero() {
                continue;
            }
            let c = entry.scale(&u_inv, field);
            let sub = pivot_col.mul_poly(&c, field, order, weights);
            s.columns[l] = s.columns[l].sub(&sub, field, order, weights);
            s.columns[l].comps = s.columns[l].comps.iter().map(|p| ring.nf(p)).collect();
        }
        // row operations: clear column l0 outside the pivot row, tracking the
        // basis change of the target free module in `prev`
        let col_l0 = s.columns[l0].clone();
        let mut qs: Vec<(usize, Polynomial)> = Vec::new();
        for (j, p) in col_l0.comps.iter().enumerate() {
            if j != j0 && !p.is_zero() {
                qs.push((j, p.scale(&u_inv, field)));
            }
        }
        for (j, q) in &qs {
            // row_j -= q · row_j0 across all columns of s
            for col in s.columns.iter_mut() {
                let delta = col.comps[j0].mul(q, field, order, weights);
                col.comps[*j] = ring.nf(&col.comps[*j].sub(&delta, field, order, weights));
            }
        }
        if let Some(prev) = prev.as_deref_mut() {
            // new basis vector e'_{j0} = e_{j0} + Σ q_j e_j, so the image of
            // the j0-th generator gains Σ q_j · (image of e_j)
            let mut add = VecPoly::zero(prev.target_twists.len());
            for (j, q) in &qs {
                add = add.add(
                    &prev.columns[*j].mul_poly(q, field, order, weights),
                    field,
                    order,
                    weights,
                );
            }
            prev.columns[j0] = prev.columns[j0].add(&add, field, order, weights);
            prev.columns[j0].comps = prev.columns[j0].comps.iter().map(|p| ring.nf(p)).collect();
        }
        // delete column l0 and row j0
        s.columns.remove(l0);
        s.source_twists.remove(l0);
        for col in s.columns.iter_mut() {
            col.comps.remove(j0);
        }
        s.target_twists.remove(j0);
        if let Some(prev) = prev.as_deref_mut() {
            prev.columns.remove(j0);
            prev.source_twists.remove(j0);
        }
        // drop columns that became zero
        let mut l = 0;
        while l < s.columns.len() {
            if s.columns[l].is_zero() {
                s.columns.remove(l);
                s.source_twists.remove(l);
            } else {
                l += 1;
            }
        }
    }
}

/// Minimalize a presentation alone: eliminate unit pivots from the
/// presentation matrix, shrinking the generator list where redundant.
pub fn pruned_presentation(m: &GradedModule) -> GradedModule {
    let ring = m.ring().clone();
    let mut d1 = DiffMatrix {
        columns: m.columns().to_vec(),
        source_twists: m.source_twists().to_vec(),
        target_twists: m.target_twists().to_vec(),
    };
    prune_pair(&mut d1, None, &ring);
    GradedModule::new(&ring, d1.target_twists, d1.columns)
        .expect("pruning preserves gradedness")
}

/// Minimal graded free resolution of M through homological degree `i_max`.
pub fn minimal_free_resolution(
    m: &GradedModule,
    i_max: usize,
    limits: &GbLimits,
) -> Result<Resolution> {
    let ring = m.ring().clone();
    let mut d1 = DiffMatrix {
        columns: m.columns().to_vec(),
        source_twists: m.source_twists().to_vec(),
        target_twists: m.target_twists().to_vec(),
    };
    prune_pair(&mut d1, None, &ring);
    let f0 = d1.target_twists.clone();
    let mut diffs = vec![d1];
    for _ in 1..i_max.max(1) {
        let last = diffs.last().unwrap();
        let syz = groebner::syzygies(&last.columns, &last.target_twists, &ring, limits)?;
        let mut next = DiffMatrix {
            columns: syz.columns,
            source_twists: syz.source_twists,
            target_twists: last.source_twists.clone(),
        };
        prune_pair(&mut next, Some(diffs.last_mut().unwrap()), &ring);
        diffs.push(next);
    }
    if i_max == 0 {
        diffs.clear();
    }
    Ok(Resolution {
        ring,
        f0_twists: f0,
        differentials: diffs,
        i_max,
        minimal: true,
    })
}

/// Graded Betti numbers β(i, z): the number of twists equal to z in step i
/// of a minimal resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64), usize>,
    pub i_max: usize,
}

impl BettiTable {
    pub fn get(&self, i: usize, z: i64) -> usize {
        *self.entries.get(&(i, z)).unwrap_or(&0)
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries
            .iter()
            .filter(|((bi, _), _)| *bi == i)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..=self.i_max).map(|i| self.total(i)).collect()
    }
}

pub fn betti_table(m: &GradedModule, i_max: usize, limits: &GbLimits) -> Result<BettiTable> {
    let res = minimal_free_resolution(m, i_max, limits)?;
    Ok(betti_from_resolution(&res))
}

pub fn betti_from_resolution(res: &Resolution) -> BettiTable {
    let mut entries = BTreeMap::new();
    for i in 0..=res.i_max {
        for &z in res.twists(i) {
            *entries.entry((i, z)).or_insert(0) += 1;
        }
    }
    BettiTable {
        entries,
        i_max: res.i_max,
    }
}

/// Total Betti numbers Σ_z β(i, z) for i = 0..i_max.
pub fn poincare_truncated(m: &GradedModule, i_max: usize, limits: &GbLimits) -> Result<Vec<usize>> {
    Ok(betti_table(m, i_max, limits)?.totals())
}

/// The graded module Ext^i(N, M) = H^i(Hom(F_•(N), M)), computed from a
/// minimal resolution of the first argument.
pub fn ext_module(
    n: &GradedModule,
    m: &GradedModule,
    i: usize,
    limits: &GbLimits,
) -> Result<GradedModule> {
    if n.ring() != m.ring() {
        return Err(Error::RingMismatch("Ext of modules over different rings".into()));
    }
    let res = minimal_free_resolution(n, i + 1, limits)?;
    ext_from_resolution(&res, m, i, limits)
}

/// Ext^i from an already-computed resolution of the first argument
/// (which must extend to homological degree i+1).
pub fn ext_from_resolution(
    res: &Resolution,
    m: &GradedModule,
    i: usize,
    limits: &GbLimits,
) -> Result<GradedModule> {
    let d_next = hom_step(res, m, i)?; // Hom(F_i, M) -> Hom(F_{i+1}, M)
    if i == 0 {
        return d_next.kernel(limits);
    }
    let d_prev = hom_step(res, m, i - 1)?; // Hom(F_{i-1}, M) -> Hom(F_i, M)
    homalg::homology(&d_prev, &d_next, limits)
}

/// The induced map Hom(F_j, M) → Hom(F_{j+1}, M).
fn hom_step(res: &Resolution, m: &GradedModule, j: usize) -> Result<GradedMap> {
    let d = res.differential(j + 1);
    homalg::hom_induced(m, &d.columns, &d.target_twists, &d.source_twists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn qq_xy() -> GradedRing {
        GradedRing::polynomial(Field::Rationals, &["x", "y"], &[1, 1]).unwrap()
    }

    fn lims() -> GbLimits {
        GbLimits::default()
    }

    #[test]
    fn koszul_resolution_of_residue_field() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        let res = minimal_free_resolution(&k, 3, &lims()).unwrap();
        let b = betti_from_resolution(&res);
        assert_eq!(b.totals(), vec![1, 2, 1, 0]);
        assert_eq!(b.get(0, 0), 1);
        assert_eq!(b.get(1, 1), 2);
        assert_eq!(b.get(2, 2), 1);
        assert!(res.composes_to_zero());
        assert!(!res.has_unit_entry());
    }

    #[test]
    fn free_module_resolves_in_length_zero() {
        let r = qq_xy();
        let f = GradedModule::free(&r, vec![0, -1, 2]);
        let res = minimal_free_resolution(&f, 4, &lims()).unwrap();
        for i in 1..=4 {
            assert_eq!(res.rank(i), 0, "free module must have no higher syzygies");
        }
    }

    #[test]
    fn betti_of_square_of_max_ideal_quotient() {
        let r = qq_xy();
        let m = GradedModule::cyclic(
            &r,
            &[
                r.parse("x^2").unwrap(),
                r.parse("x*y").unwrap(),
                r.parse("y^2").unwrap(),
            ],
        )
        .unwrap();
        let b = betti_table(&m, 2, &lims()).unwrap();
        assert_eq!(b.get(0, 0), 1);
        assert_eq!(b.get(1, 2), 3);
        assert_eq!(b.get(2, 3), 2);
    }

    #[test]
    fn redundant_generators_are_pruned() {
        let r = qq_xy();
        // coker [x; 1] presents the zero module... actually coker of the
        // column (x, 1): generator e2 = -x e1, so the module is free of rank 1
        let m = GradedModule::from_rows(&r, vec![0, 1], &[vec!["x"], vec!["-1"]]).unwrap();
        let res = minimal_free_resolution(&m, 2, &lims()).unwrap();
        assert_eq!(res.rank(0), 1);
        assert_eq!(res.rank(1), 0);
    }

    #[test]
    fn betti_invariant_under_generator_permutation() {
        let r = qq_xy();
        let a = GradedModule::cyclic(
            &r,
            &[r.parse("x^2").unwrap(), r.parse("x*y").unwrap(), r.parse("y^2").unwrap()],
        )
        .unwrap();
        let b = GradedModule::cyclic(
            &r,
            &[r.parse("y^2").unwrap(), r.parse("x^2").unwrap(), r.parse("x*y").unwrap()],
        )
        .unwrap();
        assert_eq!(
            betti_table(&a, 3, &lims()).unwrap(),
            betti_table(&b, 3, &lims()).unwrap()
        );
    }

    #[test]
    fn resolution_over_quotient_ring_is_periodic() {
        // k over the hypersurface QQ[x,y]/(x^2) has Poincaré series
        // (1+t)^2/(1-t^2) = 1 + 2t + 2t^2 + ...
        let r = GradedRing::quotient(Field::Rationals, &["x", "y"], &[1, 1], &["x^2"]).unwrap();
        let k = GradedModule::residue_field(&r);
        let b = betti_table(&k, 4, &lims()).unwrap();
        assert_eq!(b.totals(), vec![1, 2, 2, 2, 2]);
        let res = minimal_free_resolution(&k, 4, &lims()).unwrap();
        assert!(res.composes_to_zero());
        assert!(!res.has_unit_entry());
    }

    #[test]
    fn ext0_of_ring_is_the_module() {
        let r = qq_xy();
        let rm = GradedModule::ring_module(&r);
        let m = GradedModule::cyclic(&r, &[r.parse("x^2").unwrap()]).unwrap();
        let e = ext_module(&rm, &m, 0, &lims()).unwrap();
        assert_eq!(
            e.hilbert_window(0, 4, &lims()).unwrap(),
            m.hilbert_window(0, 4, &lims()).unwrap()
        );
    }

    #[test]
    fn ext_of_residue_field_into_ring() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        let rm = GradedModule::ring_module(&r);
        // Ext^0 = Ext^1 = 0, Ext^2 one-dimensional concentrated in degree -2
        let e0 = ext_module(&k, &rm, 0, &lims()).unwrap();
        assert_eq!(e0.hilbert_window(-3, 3, &lims()).unwrap().dims.values().sum::<usize>(), 0);
        let e1 = ext_module(&k, &rm, 1, &lims()).unwrap();
        assert_eq!(e1.hilbert_window(-3, 3, &lims()).unwrap().dims.values().sum::<usize>(), 0);
        let e2 = ext_module(&k, &rm, 2, &lims()).unwrap();
        let w = e2.hilbert_window(-3, 3, &lims()).unwrap();
        assert_eq!(w.dim(-2), 1);
        assert_eq!(w.dims.values().sum::<usize>(), 1);
    }

    #[test]
    fn ext1_of_residue_field_into_itself() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        let e1 = ext_module(&k, &k, 1, &lims()).unwrap();
        assert!(e1.is_finite_length(&lims()).unwrap());
        assert_eq!(e1.length(&lims()).unwrap(), 2);
    }

    #[test]
    fn resolution_edges() {
        let r = qq_xy();
        // homological bound zero: just the generators
        let k = GradedModule::residue_field(&r);
        let res0 = minimal_free_resolution(&k, 0, &lims()).unwrap();
        assert_eq!(res0.rank(0), 1);
        let b0 = betti_from_resolution(&res0);
        assert_eq!(b0.totals(), vec![1]);
        // the zero module resolves to nothing
        let z = GradedModule::zero(&r);
        let resz = minimal_free_resolution(&z, 3, &lims()).unwrap();
        for i in 0..=3 {
            assert_eq!(resz.rank(i), 0);
        }
    }

    #[test]
    fn ext_self_dimensions_match_betti_totals() {
        // dim Ext^i(k, k) = Σ_z β(i, z) over each test ring
        for ring in [
            qq_xy(),
            GradedRing::quotient(Field::Rationals, &["x", "y"], &[1, 1], &["x*y"]).unwrap(),
        ] {
            let k = GradedModule::residue_field(&ring);
            let b = betti_table(&k, 3, &lims()).unwrap();
            for i in 0..=3 {
                let e = ext_module(&k, &k, i, &lims()).unwrap();
                assert_eq!(
                    e.length(&lims()).unwrap(),
                    b.total(i),
                    "Ext^{i}(k,k) over {ring}"
                );
            }
        }
    }
}
