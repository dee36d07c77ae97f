//! Gröbner bases over quotient rings, normal forms, syzygies, elimination.
//!
//! All computations run over the ambient polynomial ring; quotient-ring
//! questions append the defining ideal's basis. Syzygies use the classical
//! extended-module construction: generators (f_i, ε_i) in F ⊕ R^r under a
//! component-block order that makes every F-term dominate every ε-term, so
//! basis elements with vanishing F-part cut out exactly the syzygy module.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::limits::GbLimits;
use crate::order::{ModuleOrder, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::GradedRing;
use crate::vecpoly::VecPoly;

// ---- low-level engine ------------------------------------------------------

/// Full normal form of `v` against `basis` (all monic, sorted under `morder`).
pub(crate) fn module_nf_raw(
    field: &Field,
    weights: &[u32],
    morder: &ModuleOrder,
    v: &VecPoly,
    basis: &[VecPoly],
) -> VecPoly {
    let ncomps = v.ncomps();
    // index basis by leading component
    let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); ncomps];
    for (i, g) in basis.iter().enumerate() {
        if let Some((_, c, _)) = g.leading(morder, weights) {
            if c < ncomps {
                by_comp[c].push(i);
            }
        }
    }
    let mut rem = v.clone();
    let mut out = VecPoly::zero(ncomps);
    while let Some((lm, lc_comp, lc)) = rem.leading(morder, weights) {
        let lm = lm.clone();
        let lc = lc.clone();
        let mut reduced = false;
        for &gi in &by_comp[lc_comp] {
            let g = &basis[gi];
            let (gm, _, gc) = g.leading(morder, weights).unwrap();
            if gm.divides(&lm) {
                let q = gm.div_into(&lm);
                let factor = field.div(&lc, gc);
                rem = rem.sub(&g.mul_term(&q, &factor, field), field, &morder.ring_order, weights);
                reduced = true;
                break;
            }
        }
        if !reduced {
            // move the leading term to the remainder
            let t = VecPoly::from_component(
                ncomps,
                lc_comp,
                Polynomial::monomial(lm.clone(), lc.clone()),
            );
            rem = rem.sub(&t, field, &morder.ring_order, weights);
            out.comps[lc_comp]
                .terms
                .push((lm, lc));
        }
    }
    out
}

fn s_element(
    field: &Field,
    weights: &[u32],
    morder: &ModuleOrder,
    f: &VecPoly,
    g: &VecPoly,
) -> Option<VecPoly> {
    let (fm, fc, fcoef) = f.leading(morder, weights)?;
    let (gm, gc, gcoef) = g.leading(morder, weights)?;
    if fc != gc {
        return None;
    }
    let l = fm.lcm(gm);
    let uf = fm.div_into(&l);
    let ug = gm.div_into(&l);
    let a = field.inv(fcoef);
    let b = field.inv(gcoef);
    Some(
        f.mul_term(&uf, &a, field)
            .sub(&g.mul_term(&ug, &b, field), field, &morder.ring_order, weights),
    )
}

/// True when every term of the element lives in a single component.
fn single_component(v: &VecPoly) -> bool {
    v.comps.iter().filter(|p| !p.is_zero()).count() <= 1
}

/// Buchberger's algorithm over a free module. Returns the reduced basis,
/// elements monic and pairwise tail-reduced, sorted ascending by leading term.
pub(crate) fn module_gb_raw(
    field: &Field,
    weights: &[u32],
    morder: &ModuleOrder,
    gens: Vec<VecPoly>,
    limits: &GbLimits,
) -> Result<Vec<VecPoly>> {
    let mut basis: Vec<VecPoly> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let red = module_nf_raw(field, weights, morder, &g, &basis);
        if !red.is_zero() {
            basis.push(red.monic(morder, weights, field));
        }
    }
    // pair queue keyed by (lcm degree, i, j) for the normal selection strategy
    let mut pairs: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
    let mut processed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let pair_key = |basis: &[VecPoly], i: usize, j: usize| -> Option<(i64, usize, usize)> {
        let (mi, ci, _) = basis[i].leading(morder, weights)?;
        let (mj, cj, _) = basis[j].leading(morder, weights)?;
        if ci != cj {
            return None;
        }
        Some((mi.lcm(mj).degree(weights), i, j))
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if let Some(k) = pair_key(&basis, i, j) {
                pairs.insert(k);
            }
        }
    }
    while let Some(&(deg, i, j)) = pairs.iter().next() {
        pairs.remove(&(deg, i, j));
        processed.insert((i, j));
        let (mi, ci, _) = basis[i].leading(morder, weights).unwrap();
        let (mj, _, _) = basis[j].leading(morder, weights).unwrap();
        // product criterion: valid only for elements concentrated in one component
        if mi.coprime(mj) && single_component(&basis[i]) && single_component(&basis[j]) {
            continue;
        }
        // chain criterion
        let l = mi.lcm(mj);
        let ci_ = ci;
        let mut skip = false;
        for (k, h) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            if let Some((mk, ck, _)) = h.leading(morder, weights) {
                if ck == ci_
                    && mk.divides(&l)
                    && processed.contains(&(i.min(k), i.max(k)))
                    && processed.contains(&(j.min(k), j.max(k)))
                {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        let s = match s_element(field, weights, morder, &basis[i], &basis[j]) {
            Some(s) => s,
            None => continue,
        };
        let red = module_nf_raw(field, weights, morder, &s, &basis);
        if red.is_zero() {
            continue;
        }
        if red.term_count() > limits.max_terms {
            return Err(Error::ResourceLimit {
                limit: "max_terms".into(),
                detail: format!("{} terms in one element", red.term_count()),
            });
        }
        if let Some((m, _, _)) = red.leading(morder, weights) {
            let d = m.degree(weights);
            if d > limits.max_degree {
                return Err(Error::ResourceLimit {
                    limit: "max_degree".into(),
                    detail: format!("leading degree {d}"),
                });
            }
        }
        let new_idx = basis.len();
        basis.push(red.monic(morder, weights, field));
        if basis.len() > limits.max_basis {
            return Err(Error::ResourceLimit {
                limit: "max_basis".into(),
                detail: format!("{} basis elements", basis.len()),
            });
        }
        for k in 0..new_idx {
            if let Some(key) = pair_key(&basis, k, new_idx) {
                pairs.insert(key);
            }
        }
    }
    Ok(reduce_basis(field, weights, morder, basis))
}

/// Minimalize and tail-reduce a Gröbner basis; canonical deterministic order.
fn reduce_basis(
    field: &Field,
    weights: &[u32],
    morder: &ModuleOrder,
    mut basis: Vec<VecPoly>,
) -> Vec<VecPoly> {
    // sort ascending by leading term so small leading terms are kept first
    basis.sort_by(|a, b| cmp_leading(a, b, morder, weights));
    let mut kept: Vec<VecPoly> = Vec::new();
    for g in basis {
        let (gm, gc, _) = match g.leading(morder, weights) {
            Some(l) => l,
            None => continue,
        };
        let redundant = kept.iter().any(|h| {
            let (hm, hc, _) = h.leading(morder, weights).unwrap();
            hc == gc && hm.divides(gm)
        });
        if !redundant {
            kept.push(g);
        }
    }
    // tail-reduce each against the others
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let mut others = Vec::with_capacity(kept.len() - 1);
        for (j, h) in kept.iter().enumerate() {
            if j != i {
                others.push(h.clone());
            }
        }
        let red = module_nf_raw(field, weights, morder, &kept[i], &others);
        if !red.is_zero() {
            out.push(red.monic(morder, weights, field));
        }
    }
    out.sort_by(|a, b| cmp_leading(a, b, morder, weights));
    out
}

fn cmp_leading(a: &VecPoly, b: &VecPoly, morder: &ModuleOrder, weights: &[u32]) -> Ordering {
    match (a.leading(morder, weights), b.leading(morder, weights)) {
        (Some((ma, ca, _)), Some((mb, cb, _))) => morder
            .cmp(ma, ca, mb, cb, weights)
            .then_with(|| ca.cmp(&cb)),
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Ring-level reduced Gröbner basis (rank-one module).
pub(crate) fn ring_gb_raw(
    field: &Field,
    weights: &[u32],
    order: &MonomialOrder,
    gens: Vec<Polynomial>,
    limits: &GbLimits,
) -> Result<Vec<Polynomial>> {
    let morder = ModuleOrder::flat(order.clone(), 1);
    let gens = gens
        .into_iter()
        .map(|p| VecPoly { comps: vec![p] })
        .collect();
    let gb = module_gb_raw(field, weights, &morder, gens, limits)?;
    Ok(gb.into_iter().map(|v| v.comps.into_iter().next().unwrap()).collect())
}

/// Ring-level normal form.
pub(crate) fn nf_raw(
    field: &Field,
    weights: &[u32],
    order: &MonomialOrder,
    p: &Polynomial,
    basis: &[Polynomial],
) -> Polynomial {
    let morder = ModuleOrder::flat(order.clone(), 1);
    let basis: Vec<VecPoly> = basis
        .iter()
        .map(|g| VecPoly { comps: vec![g.clone()] })
        .collect();
    let v = VecPoly { comps: vec![p.clone()] };
    module_nf_raw(field, weights, &morder, &v, &basis)
        .comps
        .into_iter()
        .next()
        .unwrap()
}

// crate-internal entry points for the module layer
pub(crate) fn module_gb_for_gmod(
    ring: &GradedRing,
    morder: &ModuleOrder,
    gens: Vec<VecPoly>,
    limits: &GbLimits,
) -> Result<Vec<VecPoly>> {
    module_gb_raw(ring.field(), ring.weights(), morder, gens, limits)
}

pub(crate) fn module_nf_for_gmod(
    ring: &GradedRing,
    morder: &ModuleOrder,
    v: &VecPoly,
    basis: &[VecPoly],
) -> VecPoly {
    module_nf_raw(ring.field(), ring.weights(), morder, v, basis)
}

// ---- public surface --------------------------------------------------------

/// A reduced Gröbner basis of an ideal of a graded quotient ring. The
/// defining ideal of the ring is folded in, so normal forms are canonical
/// representatives of residue classes.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub ambient: GradedRing,
    pub is_reduced: bool,
}

/// Reduced Gröbner basis of (gens) + J in the ambient ring, deterministic
/// for fixed inputs and order.
pub fn groebner_basis(
    gens: &[Polynomial],
    ring: &GradedRing,
    order: Option<MonomialOrder>,
    limits: &GbLimits,
) -> Result<GroebnerBasis> {
    let order = order.unwrap_or_else(|| ring.order().clone());
    let mut all: Vec<Polynomial> = Vec::new();
    for g in gens {
        all.push(g.resorted(ring.field(), &order, ring.weights()));
    }
    for g in ring.quotient_gb() {
        all.push(g.resorted(ring.field(), &order, ring.weights()));
    }
    let basis = ring_gb_raw(ring.field(), ring.weights(), &order, all, limits)?;
    Ok(GroebnerBasis {
        generators: basis,
        order,
        ambient: ring.clone(),
        is_reduced: true,
    })
}

/// Normal form of `f` against the basis: no term of the result is divisible
/// by any leading term; k-linear in `f`; zero iff `f` lies in the ideal.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    let ring = &gb.ambient;
    let f = f.resorted(ring.field(), &gb.order, ring.weights());
    let nf = nf_raw(ring.field(), ring.weights(), &gb.order, &f, &gb.generators);
    nf.resorted(ring.field(), ring.order(), ring.weights())
}

/// Membership in (gens)+J.
pub fn ideal_member(f: &Polynomial, gb: &GroebnerBasis) -> bool {
    normal_form(f, gb).is_zero()
}

/// Checks the Buchberger criterion on a ring-level basis: every S-polynomial
/// reduces to zero. Used by the verification suites.
pub fn buchberger_criterion_holds(gb: &GroebnerBasis) -> bool {
    let ring = &gb.ambient;
    let morder = ModuleOrder::flat(gb.order.clone(), 1);
    let basis: Vec<VecPoly> = gb
        .generators
        .iter()
        .map(|g| VecPoly { comps: vec![g.clone()] })
        .collect();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if let Some(s) = s_element(ring.field(), ring.weights(), &morder, &basis[i], &basis[j])
            {
                let r = module_nf_raw(ring.field(), ring.weights(), &morder, &s, &basis);
                if !r.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Relations among module elements: columns generate the full syzygy module.
#[derive(Debug, Clone)]
pub struct SyzygyMatrix {
    /// Each column is a vector of polynomials, one per input element.
    pub columns: Vec<VecPoly>,
    /// Degree of each column (twist of its source basis vector).
    pub source_twists: Vec<i64>,
    /// Twists of the free module the input elements live in.
    pub target_twists: Vec<i64>,
}

/// Compute generators of the syzygy module of homogeneous elements of
/// ⊕ R(−t_j) over the quotient ring, with graded source twists.
pub fn syzygies(
    elements: &[VecPoly],
    target_twists: &[i64],
    ring: &GradedRing,
    limits: &GbLimits,
) -> Result<SyzygyMatrix> {
    let s = target_twists.len();
    let r = elements.len();
    let field = ring.field();
    let weights = ring.weights();
    let rord = ring.order().clone();
    let mut elem_degrees = Vec::with_capacity(r);
    for e in elements {
        if e.ncomps() != s {
            return Err(Error::InvalidModule(
                "element has wrong number of components".into(),
            ));
        }
        if !e.is_homogeneous(target_twists, weights) {
            return Err(Error::InvalidModule(
                "syzygy input element is not homogeneous".into(),
            ));
        }
        elem_degrees.push(e.homogeneous_degree(target_twists, weights).unwrap_or(0));
    }
    // extended module: F-part components 0..s, tag components s..s+r
    let next = s + r;
    let morder = ModuleOrder {
        ring_order: rord.clone(),
        blocks: {
            let mut b = vec![0u8; s];
            b.extend(vec![1u8; r]);
            b
        },
    };
    let mut gens: Vec<VecPoly> = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        let mut v = VecPoly::zero(next);
        for (j, p) in e.comps.iter().enumerate() {
            v.comps[j] = p.resorted(field, &rord, weights);
        }
        v.comps[s + i] = Polynomial::constant(field, field.one(), ring.nvars());
        gens.push(v);
    }
    for g in ring.quotient_gb() {
        for j in 0..s {
            gens.push(VecPoly::from_component(next, j, g.clone()));
        }
    }
    let gb = module_gb_raw(field, weights, &morder, gens, limits)?;
    let mut columns: Vec<VecPoly> = Vec::new();
    for v in gb {
        if v.comps[..s].iter().all(|p| p.is_zero()) {
            let mut col = VecPoly {
                comps: v.comps[s..].to_vec(),
            };
            col.comps = col.comps.iter().map(|p| ring.nf(p)).collect();
            if !col.is_zero() {
                columns.push(col);
            }
        }
    }
    let mut source_twists = Vec::with_capacity(columns.len());
    for c in &columns {
        let d = c
            .homogeneous_degree(&elem_degrees, weights)
            .ok_or_else(|| Error::InvalidModule("syzygy column not homogeneous".into()))?;
        source_twists.push(d);
    }
    // deterministic column order: by degree, then structurally
    let mut idx: Vec<usize> = (0..columns.len()).collect();
    idx.sort_by(|&a, &b| {
        source_twists[a]
            .cmp(&source_twists[b])
            .then_with(|| column_sort_key(&columns[a], field).cmp(&column_sort_key(&columns[b], field)))
    });
    let columns: Vec<VecPoly> = idx.iter().map(|&i| columns[i].clone()).collect();
    let source_twists: Vec<i64> = idx.iter().map(|&i| source_twists[i]).collect();
    Ok(SyzygyMatrix {
        columns,
        source_twists,
        target_twists: target_twists.to_vec(),
    })
}

fn column_sort_key(v: &VecPoly, field: &Field) -> String {
    let mut s = String::new();
    for (ci, p) in v.comps.iter().enumerate() {
        for (m, c) in &p.terms {
            s.push_str(&format!("{ci}:{:?}:{};", m.0, field.format(c)));
        }
    }
    s
}

/// Exactness check: matrix · elements = 0 in the quotient ring.
pub fn syzygy_check(
    syz: &SyzygyMatrix,
    elements: &[VecPoly],
    ring: &GradedRing,
) -> bool {
    let field = ring.field();
    let weights = ring.weights();
    let rord = ring.order();
    let s = syz.target_twists.len();
    for col in &syz.columns {
        let mut acc = VecPoly::zero(s);
        for (i, coeff) in col.comps.iter().enumerate() {
            acc = acc.add(&elements[i].mul_poly(coeff, field, rord, weights), field, rord, weights);
        }
        for p in &acc.comps {
            if !ring.nf(p).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Generators of ((gens)+J) ∩ k[keep variables], via a block elimination order.
pub fn eliminate(
    gens: &[Polynomial],
    ring: &GradedRing,
    keep: &[bool],
    limits: &GbLimits,
) -> Result<Vec<Polynomial>> {
    if keep.len() != ring.nvars() {
        return Err(Error::RingMismatch("keep mask has wrong length".into()));
    }
    let eliminate: Vec<bool> = keep.iter().map(|&k| !k).collect();
    let order = MonomialOrder::Elim { eliminate: eliminate.clone() };
    let gb = groebner_basis(gens, ring, Some(order), limits)?;
    let mut out = Vec::new();
    for g in &gb.generators {
        let pure = g
            .terms
            .iter()
            .all(|(m, _)| m.0.iter().enumerate().all(|(i, &e)| e == 0 || keep[i]));
        if pure {
            out.push(g.resorted(ring.field(), ring.order(), ring.weights()));
        }
    }
    Ok(out)
}
