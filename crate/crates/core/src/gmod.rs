//! Graded modules as finite presentations coker(F1 → F0).
//!
//! A module is a free module ⊕ R(−t_i) modulo the column span of a
//! homogeneous matrix. Degreewise dimensions come from standard module
//! monomials under a cached Gröbner basis of the column module (defining
//! ideal folded in). Twists may be negative; Matlis duals of finite-length
//! modules live in nonpositive degrees.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::groebner;
use crate::limits::GbLimits;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::order::ModuleOrder;
use crate::poly::Polynomial;
use crate::ring::GradedRing;
use crate::vecpoly::VecPoly;

#[derive(Debug)]
struct PresentationCore {
    cols: Vec<VecPoly>,
    /// Reduced Gröbner basis of the column module plus J·F0, flat order.
    gb: OnceLock<std::result::Result<Vec<VecPoly>, Error>>,
}

/// A finitely presented graded module over a [`GradedRing`].
#[derive(Debug, Clone)]
pub struct GradedModule {
    ring: GradedRing,
    target_twists: Vec<i64>,
    source_twists: Vec<i64>,
    core: Arc<PresentationCore>,
}

/// Exact degreewise dimensions over a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertWindow {
    pub lo: i64,
    pub hi: i64,
    pub dims: BTreeMap<i64, usize>,
}

impl HilbertWindow {
    pub fn dim(&self, d: i64) -> usize {
        *self.dims.get(&d).unwrap_or(&0)
    }
}

/// Reduced Gröbner basis of a submodule of a free module over the quotient
/// ring: generators plus J times every basis vector, flat order.
pub(crate) fn submodule_gb(
    ring: &GradedRing,
    ncomps: usize,
    gens: &[VecPoly],
    limits: &GbLimits,
) -> Result<Vec<VecPoly>> {
    let morder = ModuleOrder::flat(ring.order().clone(), ncomps.max(1));
    let mut all: Vec<VecPoly> = gens.to_vec();
    for g in ring.quotient_gb() {
        for j in 0..ncomps {
            all.push(VecPoly::from_component(ncomps, j, g.clone()));
        }
    }
    module_gb(ring, &morder, all, limits)
}

fn module_gb(
    ring: &GradedRing,
    morder: &ModuleOrder,
    gens: Vec<VecPoly>,
    limits: &GbLimits,
) -> Result<Vec<VecPoly>> {
    crate::groebner::module_gb_for_gmod(ring, morder, gens, limits)
}

impl GradedModule {
    /// Build from target twists and presentation columns (each column a
    /// homogeneous element of ⊕ R(−t_i)). Columns are normalized modulo the
    /// defining ideal.
    pub fn new(ring: &GradedRing, target_twists: Vec<i64>, cols: Vec<VecPoly>) -> Result<Self> {
        let s = target_twists.len();
        let mut norm_cols = Vec::with_capacity(cols.len());
        let mut source_twists = Vec::with_capacity(cols.len());
        for c in cols {
            if c.ncomps() != s {
                return Err(Error::InvalidModule(format!(
                    "presentation column has {} components, expected {s}",
                    c.ncomps()
                )));
            }
            let c = VecPoly {
                comps: c.comps.iter().map(|p| ring.nf(p)).collect(),
            };
            if c.is_zero() {
                continue;
            }
            match c.homogeneous_degree(&target_twists, ring.weights()) {
                Some(d) => source_twists.push(d),
                None => {
                    return Err(Error::InvalidModule(
                        "presentation column is not homogeneous with respect to the twists".into(),
                    ))
                }
            }
            norm_cols.push(c);
        }
        Ok(GradedModule {
            ring: ring.clone(),
            target_twists,
            source_twists,
            core: Arc::new(PresentationCore {
                cols: norm_cols,
                gb: OnceLock::new(),
            }),
        })
    }

    /// The zero module (empty target twists).
    pub fn zero(ring: &GradedRing) -> Self {
        GradedModule::new(ring, Vec::new(), Vec::new()).unwrap()
    }

    /// Free module ⊕ R(−t_i).
    pub fn free(ring: &GradedRing, twists: Vec<i64>) -> Self {
        GradedModule::new(ring, twists, Vec::new()).unwrap()
    }

    /// Rank-one free module R.
    pub fn ring_module(ring: &GradedRing) -> Self {
        Self::free(ring, vec![0])
    }

    /// Build from a row-major string matrix: rows indexed by F0 generators.
    pub fn from_rows(ring: &GradedRing, twists: Vec<i64>, rows: &[Vec<&str>]) -> Result<Self> {
        if rows.len() != twists.len() {
            return Err(Error::InvalidModule(
                "row count does not match the twist list".into(),
            ));
        }
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidModule("ragged matrix".into()));
        }
        let mut cols = Vec::with_capacity(ncols);
        for j in 0..ncols {
            let mut comps = Vec::with_capacity(rows.len());
            for row in rows {
                comps.push(ring.parse(row[j])?);
            }
            cols.push(VecPoly { comps });
        }
        GradedModule::new(ring, twists, cols)
    }

    /// Cyclic module R/(gens).
    pub fn cyclic(ring: &GradedRing, gens: &[Polynomial]) -> Result<Self> {
        let cols = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| VecPoly { comps: vec![g.clone()] })
            .collect();
        GradedModule::new(ring, vec![0], cols)
    }

    /// The residue field k = R/m as a module.
    pub fn residue_field(ring: &GradedRing) -> Self {
        Self::cyclic(ring, &ring.irrelevant_gens()).unwrap()
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn target_twists(&self) -> &[i64] {
        &self.target_twists
    }

    pub fn source_twists(&self) -> &[i64] {
        &self.source_twists
    }

    pub fn columns(&self) -> &[VecPoly] {
        &self.core.cols
    }

    pub fn ngens(&self) -> usize {
        self.target_twists.len()
    }

    /// Shift all twists up by k: shift(M, k) realizes M(−k).
    pub fn shift(&self, k: i64) -> Self {
        GradedModule {
            ring: self.ring.clone(),
            target_twists: self.target_twists.iter().map(|t| t + k).collect(),
            source_twists: self.source_twists.iter().map(|t| t + k).collect(),
            core: Arc::clone(&self.core),
        }
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("direct sum over different rings".into()));
        }
        let s1 = self.ngens();
        let s2 = other.ngens();
        let mut twists = self.target_twists.clone();
        twists.extend_from_slice(&other.target_twists);
        let mut cols = Vec::with_capacity(self.core.cols.len() + other.core.cols.len());
        for c in &self.core.cols {
            let mut v = c.comps.clone();
            v.extend(vec![Polynomial::zero(); s2]);
            cols.push(VecPoly { comps: v });
        }
        for c in &other.core.cols {
            let mut v = vec![Polynomial::zero(); s1];
            v.extend(c.comps.clone());
            cols.push(VecPoly { comps: v });
        }
        GradedModule::new(&self.ring, twists, cols)
    }

    /// Cached Gröbner basis of the column module plus J·F0.
    pub fn presentation_gb(&self, limits: &GbLimits) -> Result<&[VecPoly]> {
        let res = self.core.gb.get_or_init(|| {
            submodule_gb(&self.ring, self.ngens(), &self.core.cols, limits)
        });
        match res {
            Ok(gb) => Ok(gb),
            Err(e) => Err(e.clone()),
        }
    }

    /// Leading monomials of the presentation basis, per component.
    fn lt_table(&self, limits: &GbLimits) -> Result<Vec<Vec<Monomial>>> {
        let gb = self.presentation_gb(limits)?;
        let morder = ModuleOrder::flat(self.ring.order().clone(), self.ngens().max(1));
        let mut table = vec![Vec::new(); self.ngens()];
        for g in gb {
            if let Some((m, c, _)) = g.leading(&morder, self.ring.weights()) {
                table[c].push(m.clone());
            }
        }
        Ok(table)
    }

    /// Standard module monomials of degree d: pairs (component, monomial).
    pub fn std_monomials_at(&self, d: i64, limits: &GbLimits) -> Result<Vec<(usize, Monomial)>> {
        let table = self.lt_table(limits)?;
        let mut out = Vec::new();
        for (i, &t) in self.target_twists.iter().enumerate() {
            for m in monomials_of_degree(self.ring.weights(), d - t) {
                if !table[i].iter().any(|lt| lt.divides(&m)) {
                    out.push((i, m));
                }
            }
        }
        Ok(out)
    }

    pub fn dim_at(&self, d: i64, limits: &GbLimits) -> Result<usize> {
        Ok(self.std_monomials_at(d, limits)?.len())
    }

    /// Exact dimensions dim_k M_d for lo ≤ d ≤ hi.
    pub fn hilbert_window(&self, lo: i64, hi: i64, limits: &GbLimits) -> Result<HilbertWindow> {
        if lo > hi {
            return Err(Error::InvalidModule("window with lo > hi".into()));
        }
        let mut dims = BTreeMap::new();
        for d in lo..=hi {
            dims.insert(d, self.dim_at(d, limits)?);
        }
        Ok(HilbertWindow { lo, hi, dims })
    }

    /// Membership of a homogeneous element of F0 in the presentation submodule.
    pub fn in_presentation(&self, v: &VecPoly, limits: &GbLimits) -> Result<bool> {
        let gb = self.presentation_gb(limits)?;
        let morder = ModuleOrder::flat(self.ring.order().clone(), self.ngens().max(1));
        let nf = crate::groebner::module_nf_for_gmod(&self.ring, &morder, v, gb);
        Ok(nf.is_zero())
    }

    // ---- torsion ----------------------------------------------------------

    /// Generators of {f in F0 : x_l f in W + J·F0 for every variable x_l},
    /// one syzygy computation over a stacked free module.
    fn colon_by_irrelevant(&self, w_gens: &[VecPoly], limits: &GbLimits) -> Result<Vec<VecPoly>> {
        let ring = &self.ring;
        let s = self.ngens();
        let v = ring.nvars();
        if s == 0 {
            return Ok(Vec::new());
        }
        // stacked module: component (l, i) has twist t_i - w_l
        let ncomps = v * s;
        let mut twists = Vec::with_capacity(ncomps);
        for l in 0..v {
            for &t in &self.target_twists {
                twists.push(t - ring.weights()[l] as i64);
            }
        }
        let mut elements = Vec::new();
        // one column per F0 basis vector: (x_1 e_j, ..., x_v e_j)
        for j in 0..s {
            let mut col = VecPoly::zero(ncomps);
            for l in 0..v {
                col.comps[l * s + j] = ring.var_poly(l);
            }
            elements.push(col);
        }
        // W embedded in each block
        for c in w_gens {
            for l in 0..v {
                let mut col = VecPoly::zero(ncomps);
                for (i, p) in c.comps.iter().enumerate() {
                    col.comps[l * s + i] = p.clone();
                }
                elements.push(col);
            }
        }
        let syz = groebner::syzygies(&elements, &twists, ring, limits)?;
        let mut out = Vec::new();
        for col in &syz.columns {
            let first = VecPoly {
                comps: col.comps[..s].to_vec(),
            };
            if !first.is_zero() {
                out.push(first);
            }
        }
        Ok(out)
    }

    /// The m-torsion submodule Γ_m(M), computed as the stabilizing chain of
    /// colon submodules; stabilization is detected by Gröbner basis equality.
    pub fn torsion_submodule(&self, limits: &GbLimits) -> Result<GradedModule> {
        let gens = self.torsion_generators(limits)?;
        self.submodule(&gens, limits)
    }

    /// Generators (in F0) of the torsion submodule's preimage.
    pub(crate) fn torsion_generators(&self, limits: &GbLimits) -> Result<Vec<VecPoly>> {
        let ring = &self.ring;
        let s = self.ngens();
        let mut w: Vec<VecPoly> = self.core.cols.clone();
        let mut w_gb = submodule_gb(ring, s, &w, limits)?;
        loop {
            let next = self.colon_by_irrelevant(&w, limits)?;
            let mut candidate = w.clone();
            candidate.extend(next);
            let c_gb = submodule_gb(ring, s, &candidate, limits)?;
            if c_gb == w_gb {
                break;
            }
            w = candidate;
            w_gb = c_gb;
        }
        Ok(w)
    }

    /// Present the submodule of M generated by classes of the given F0
    /// elements: generators become the new free cover.
    pub fn submodule(&self, gens: &[VecPoly], limits: &GbLimits) -> Result<GradedModule> {
        let ring = &self.ring;
        let mut kept = Vec::new();
        for g in gens {
            let g = VecPoly { comps: g.comps.iter().map(|p| ring.nf(p)).collect() };
            if !g.is_zero() && !self.in_presentation(&g, limits)? {
                kept.push(g);
            }
        }
        if kept.is_empty() {
            return Ok(GradedModule::zero(ring));
        }
        let mut twists = Vec::with_capacity(kept.len());
        for g in &kept {
            twists.push(
                g.homogeneous_degree(&self.target_twists, ring.weights())
                    .ok_or_else(|| Error::InvalidModule("submodule generator not homogeneous".into()))?,
            );
        }
        // relations: syzygies of the generators modulo the presentation
        let mut combined = kept.clone();
        combined.extend(self.core.cols.iter().cloned());
        let syz = groebner::syzygies(&combined, &self.target_twists, ring, limits)?;
        let mut rel_cols = Vec::new();
        for col in &syz.columns {
            let first = VecPoly { comps: col.comps[..kept.len()].to_vec() };
            if !first.is_zero() {
                rel_cols.push(first);
            }
        }
        GradedModule::new(ring, twists, rel_cols)
    }

    /// Quotient of M by the submodule generated by the given F0 elements.
    pub fn quotient_by(&self, gens: &[VecPoly]) -> Result<GradedModule> {
        let mut cols = self.core.cols.clone();
        cols.extend(gens.iter().cloned());
        GradedModule::new(&self.ring, self.target_twists.clone(), cols)
    }

    /// M / Γ_m(M).
    pub fn torsion_free_quotient(&self, limits: &GbLimits) -> Result<GradedModule> {
        let gens = self.torsion_generators(limits)?;
        self.quotient_by(&gens)
    }

    // ---- finite length ----------------------------------------------------

    /// Finite length iff the annihilator is m-primary, decided soundly and
    /// completely from the leading-term module: every component must see a
    /// pure power of every variable (a component with a unit leading term
    /// carries no standard monomials at all).
    pub fn is_finite_length(&self, limits: &GbLimits) -> Result<bool> {
        let table = self.lt_table(limits)?;
        let v = self.ring.nvars();
        for comp in &table {
            if comp.iter().any(|m| m.is_one()) {
                continue;
            }
            for l in 0..v {
                let has_pure = comp.iter().any(|m| {
                    m.0.iter().enumerate().all(|(i, &e)| if i == l { e > 0 } else { e == 0 })
                });
                if !has_pure {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All standard module monomials of a finite-length module, sorted by
    /// (degree, component, monomial).
    pub fn all_std_monomials(&self, limits: &GbLimits) -> Result<Vec<(usize, Monomial)>> {
        if !self.is_finite_length(limits)? {
            return Err(Error::NotFiniteLength(
                "standard monomial set is infinite".into(),
            ));
        }
        let table = self.lt_table(limits)?;
        let v = self.ring.nvars();
        let mut out = Vec::new();
        for (i, comp) in table.iter().enumerate() {
            if comp.iter().any(|m| m.is_one()) {
                continue;
            }
            // bound per variable from pure powers
            let mut bounds = vec![0u32; v];
            for l in 0..v {
                for m in comp {
                    if m.0.iter().enumerate().all(|(k, &e)| if k == l { e > 0 } else { e == 0 }) {
                        let e = m.0[l];
                        if bounds[l] == 0 || e < bounds[l] {
                            bounds[l] = e;
                        }
                    }
                }
            }
            let mut stack = vec![vec![0u32; 0]];
            while let Some(partial) = stack.pop() {
                if partial.len() == v {
                    let m = Monomial(partial);
                    if !comp.iter().any(|lt| lt.divides(&m)) {
                        out.push((i, m));
                    }
                    continue;
                }
                let l = partial.len();
                for e in 0..bounds[l] {
                    let mut next = partial.clone();
                    next.push(e);
                    stack.push(next);
                }
            }
        }
        let weights = self.ring.weights().to_vec();
        let twists = self.target_twists.clone();
        out.sort_by(|a, b| {
            let da = a.1.degree(&weights) + twists[a.0];
            let db = b.1.degree(&weights) + twists[b.0];
            da.cmp(&db).then_with(|| a.0.cmp(&b.0)).then_with(|| a.1.cmp(&b.1))
        });
        Ok(out)
    }

    pub fn length(&self, limits: &GbLimits) -> Result<usize> {
        Ok(self.all_std_monomials(limits)?.len())
    }

    /// Max generator degree of the presentation (largest target twist).
    pub fn max_gen_degree(&self) -> Option<i64> {
        self.target_twists.iter().copied().max()
    }

    // ---- truncated action data and Matlis duality ---------------------------

    /// Per-degree bases and variable action matrices over a window covering
    /// the whole module (finite length only).
    pub(crate) fn action_data(&self, limits: &GbLimits) -> Result<ActionData> {
        let std = self.all_std_monomials(limits)?;
        let weights = self.ring.weights();
        if std.is_empty() {
            return Ok(ActionData {
                lo: 0,
                hi: -1,
                bases: BTreeMap::new(),
                actions: BTreeMap::new(),
            });
        }
        let deg_of = |e: &(usize, Monomial)| e.1.degree(weights) + self.target_twists[e.0];
        let lo = std.iter().map(&deg_of).min().unwrap();
        let hi = std.iter().map(&deg_of).max().unwrap();
        let mut bases: BTreeMap<i64, Vec<(usize, Monomial)>> = BTreeMap::new();
        for e in std {
            bases.entry(deg_of(&e)).or_default().push(e);
        }
        let gb = self.presentation_gb(limits)?.to_vec();
        let morder = ModuleOrder::flat(self.ring.order().clone(), self.ngens().max(1));
        let field = self.ring.field();
        let mut actions: BTreeMap<(usize, i64), Vec<Vec<Coeff>>> = BTreeMap::new();
        for l in 0..self.ring.nvars() {
            let w = weights[l] as i64;
            for d in lo..=hi {
                let src = match bases.get(&d) {
                    Some(b) => b,
                    None => continue,
                };
                let tgt = bases.get(&(d + w)).cloned().unwrap_or_default();
                // matrix: rows = tgt basis, cols = src basis
                let mut mat = vec![vec![field.zero(); src.len()]; tgt.len()];
                for (cj, (comp, m)) in src.iter().enumerate() {
                    let xm = m.mul(&Monomial::var(self.ring.nvars(), l));
                    let v = VecPoly::from_component(
                        self.ngens(),
                        *comp,
                        Polynomial::monomial(xm, field.one()),
                    );
                    let nf = crate::groebner::module_nf_for_gmod(&self.ring, &morder, &v, &gb);
                    for (ci, p) in nf.comps.iter().enumerate() {
                        for (mm, cc) in &p.terms {
                            let row = tgt
                                .iter()
                                .position(|(bc, bm)| *bc == ci && bm == mm)
                                .expect("normal form must be supported on standard monomials");
                            mat[row][cj] = cc.clone();
                        }
                    }
                }
                actions.insert((l, d), mat);
            }
        }
        Ok(ActionData { lo, hi, bases, actions })
    }

    /// Graded Matlis dual of a finite-length module: [M^v]_d = (M_{-d})^*,
    /// variables acting by the transposed matrices; rebuilt as a finite
    /// presentation.
    pub fn matlis_dual(&self, limits: &GbLimits) -> Result<GradedModule> {
        if !self.is_finite_length(limits)? {
            return Err(Error::NotFiniteLength(
                "the graded dual of an infinite-length module is not finitely presented".into(),
            ));
        }
        let data = self.action_data(limits)?;
        if data.bases.is_empty() {
            return Ok(GradedModule::zero(&self.ring));
        }
        let field = self.ring.field();
        let (lo, hi) = (data.lo, data.hi);
        let dual_lo = -hi;
        let dual_hi = -lo;
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for d in dual_lo..=dual_hi {
            dims.insert(d, data.bases.get(&(-d)).map(|b| b.len()).unwrap_or(0));
        }
        // dual action of x_l at dual degree e: transpose of x_l : M_{-e-w} -> M_{-e}
        let mut actions: BTreeMap<(usize, i64), Vec<Vec<Coeff>>> = BTreeMap::new();
        for l in 0..self.ring.nvars() {
            let w = self.ring.weights()[l] as i64;
            for e in dual_lo..=dual_hi {
                let rows = *dims.get(&(e + w)).unwrap_or(&0);
                let cols = *dims.get(&e).unwrap_or(&0);
                if rows == 0 || cols == 0 {
                    continue;
                }
                // original matrix: M_{-e-w} -> M_{-e}, dims: cols0 = dim M_{-e-w} = rows, rows0 = dim M_{-e} = cols
                let orig = data
                    .actions
                    .get(&(l, -e - w))
                    .cloned()
                    .unwrap_or_else(|| vec![vec![field.zero(); rows]; cols]);
                let mut mat = vec![vec![field.zero(); cols]; rows];
                for (r, row) in orig.iter().enumerate() {
                    for (c, val) in row.iter().enumerate() {
                        // orig[r][c]: source index c in M_{-e-w}, target index r in M_{-e}
                        mat[c][r] = val.clone();
                    }
                }
                actions.insert((l, e), mat);
            }
        }
        module_from_action(&self.ring, dual_lo, dual_hi, &dims, &actions)
    }

    /// Generators of the annihilator ideal of M.
    pub fn annihilator(&self, limits: &GbLimits) -> Result<Vec<Polynomial>> {
        let ring = &self.ring;
        let s = self.ngens();
        if s == 0 {
            return Ok(vec![ring.one()]);
        }
        // map R -> ⊕_g M(t_g), 1 -> (e_g)_g; stacked component (g, i) twist t_i - t_g
        let ncomps = s * s;
        let mut twists = Vec::with_capacity(ncomps);
        for g in 0..s {
            for i in 0..s {
                twists.push(self.target_twists[i] - self.target_twists[g]);
            }
        }
        let mut elements = Vec::new();
        let mut col0 = VecPoly::zero(ncomps);
        for g in 0..s {
            col0.comps[g * s + g] = ring.one();
        }
        elements.push(col0);
        for c in &self.core.cols {
            for g in 0..s {
                let mut col = VecPoly::zero(ncomps);
                for (i, p) in c.comps.iter().enumerate() {
                    col.comps[g * s + i] = p.clone();
                }
                elements.push(col);
            }
        }
        let syz = groebner::syzygies(&elements, &twists, ring, limits)?;
        let mut out = Vec::new();
        for col in &syz.columns {
            let f = &col.comps[0];
            if !f.is_zero() {
                out.push(ring.nf(f));
            }
        }
        out.retain(|f| !f.is_zero());
        Ok(out)
    }
}

/// Per-degree bases (standard module monomial labels) and per-variable
/// action matrices of a finite-length module.
pub(crate) struct ActionData {
    pub lo: i64,
    pub hi: i64,
    pub bases: BTreeMap<i64, Vec<(usize, Monomial)>>,
    /// (variable, source degree) -> matrix with rows indexed by the basis of
    /// the target degree and columns by the source degree.
    pub actions: BTreeMap<(usize, i64), Vec<Vec<Coeff>>>,
}

/// Rebuild a finite presentation from truncated action data: degreewise
/// dimensions and variable action matrices on a window outside which the
/// module vanishes.
pub(crate) fn module_from_action(
    ring: &GradedRing,
    lo: i64,
    hi: i64,
    dims: &BTreeMap<i64, usize>,
    actions: &BTreeMap<(usize, i64), Vec<Vec<Coeff>>>,
) -> Result<GradedModule> {
    let field = ring.field();
    let nv = ring.nvars();
    let weights = ring.weights();
    let dim_at = |d: i64| -> usize {
        if d < lo || d > hi {
            0
        } else {
            *dims.get(&d).unwrap_or(&0)
        }
    };
    // 1. pick generators degree by degree: complements of sum of variable images
    let mut gens: Vec<(i64, Vec<Coeff>)> = Vec::new();
    for d in lo..=hi {
        let n = dim_at(d);
        if n == 0 {
            continue;
        }
        let mut image_cols: Vec<Vec<Coeff>> = Vec::new();
        for l in 0..nv {
            let w = weights[l] as i64;
            if dim_at(d - w) == 0 {
                continue;
            }
            if let Some(mat) = actions.get(&(l, d - w)) {
                for c in 0..dim_at(d - w) {
                    image_cols.push((0..n).map(|r| mat[r][c].clone()).collect());
                }
            }
        }
        let mut span = RowSpan::new(field.clone(), n);
        for col in &image_cols {
            span.insert(col.clone());
        }
        for r in 0..n {
            let mut unit = vec![field.zero(); n];
            unit[r] = field.one();
            if !span.contains(&unit) {
                span.insert(unit.clone());
                gens.push((d, unit));
            }
        }
    }
    if gens.is_empty() {
        return Ok(GradedModule::zero(ring));
    }
    let gen_twists: Vec<i64> = gens.iter().map(|(d, _)| *d).collect();
    // evaluation of monomial · generator, memoized
    let max_w = *weights.iter().max().unwrap() as i64;
    let mut eval: BTreeMap<(usize, Monomial), Vec<Coeff>> = BTreeMap::new();
    let apply_var = |l: usize, d: i64, v: &[Coeff]| -> Vec<Coeff> {
        let w = weights[l] as i64;
        let n_tgt = dim_at(d + w);
        if n_tgt == 0 || v.is_empty() {
            return vec![field.zero(); n_tgt];
        }
        match actions.get(&(l, d)) {
            None => vec![field.zero(); n_tgt],
            Some(mat) => (0..n_tgt)
                .map(|r| {
                    let mut acc = field.zero();
                    for (c, val) in v.iter().enumerate() {
                        acc = field.add(&acc, &field.mul(&mat[r][c], val));
                    }
                    acc
                })
                .collect(),
        }
    };
    let mut eval_mono = |g: usize, m: &Monomial| -> Vec<Coeff> {
        if let Some(v) = eval.get(&(g, m.clone())) {
            return v.clone();
        }
        let mut stackless: Vec<Monomial> = Vec::new();
        let mut cur = m.clone();
        while !cur.is_one() && !eval.contains_key(&(g, cur.clone())) {
            stackless.push(cur.clone());
            let l = cur.0.iter().position(|&e| e > 0).unwrap();
            let mut prev = cur.clone();
            prev.0[l] -= 1;
            cur = prev;
        }
        if cur.is_one() && !eval.contains_key(&(g, cur.clone())) {
            eval.insert((g, cur.clone()), gens[g].1.clone());
        }
        while let Some(next) = stackless.pop() {
            let l = next.0.iter().position(|&e| e > 0).unwrap();
            let mut prev = next.clone();
            prev.0[l] -= 1;
            let base = eval.get(&(g, prev.clone())).unwrap().clone();
            let d = prev.degree(weights) + gen_twists[g];
            let v = apply_var(l, d, &base);
            eval.insert((g, next), v);
        }
        eval.get(&(g, m.clone())).unwrap().clone()
    };
    // 2. relations: kernel of evaluation, degrees up to hi + max weight
    let mut rel_cols: Vec<VecPoly> = Vec::new();
    for d in lo..=(hi + max_w) {
        // basis of [F0]_d: (g, standard ring monomial of degree d - d_g)
        let mut labels: Vec<(usize, Monomial)> = Vec::new();
        for (g, &dg) in gen_twists.iter().enumerate() {
            for m in ring.std_monomials(d - dg) {
                labels.push((g, m));
            }
        }
        if labels.is_empty() {
            continue;
        }
        let n = dim_at(d);
        let cols: Vec<Vec<Coeff>> = labels
            .iter()
            .map(|(g, m)| {
                let v = eval_mono(*g, m);
                debug_assert!(v.len() == n);
                v
            })
            .collect();
        for kv in kernel_basis(field, n, &cols) {
            let mut comps = vec![Polynomial::zero(); gen_twists.len()];
            for (idx, c) in kv.iter().enumerate() {
                if !field.is_zero(c) {
                    let (g, m) = &labels[idx];
                    let t = Polynomial::monomial(m.clone(), c.clone());
                    comps[*g] = comps[*g].add(&t, field, ring.order(), ring.weights());
                }
            }
            rel_cols.push(VecPoly { comps });
        }
    }
    GradedModule::new(ring, gen_twists, rel_cols)
}

/// Incremental row-space membership via Gaussian elimination.
pub struct RowSpan {
    field: crate::field::Field,
    n: usize,
    /// reduced rows with their pivot column
    rows: Vec<(usize, Vec<Coeff>)>,
}

impl RowSpan {
    pub fn new(field: crate::field::Field, n: usize) -> Self {
        RowSpan { field, n, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Coeff]) -> Vec<Coeff> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if !f.is_zero(&v[*piv]) {
                let c = v[*piv].clone();
                for i in 0..self.n {
                    let t = f.mul(&c, &row[i]);
                    v[i] = f.sub(&v[i], &t);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Coeff]) -> bool {
        self.reduce(v).iter().all(|c| self.field.is_zero(c))
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: Vec<Coeff>) -> bool {
        let f = self.field.clone();
        let red = self.reduce(&v);
        match red.iter().position(|c| !f.is_zero(c)) {
            None => false,
            Some(piv) => {
                let inv = f.inv(&red[piv]);
                let row: Vec<Coeff> = red.iter().map(|c| f.mul(c, &inv)).collect();
                self.rows.push((piv, row));
                true
            }
        }
    }
}

/// Basis of the kernel of the linear map k^m -> k^n with the given columns.
/// Rows [col_j | e_j] are eliminated on the first n coordinates; rows never
/// chosen as pivots end with a zero head, and their tails span the kernel.
pub(crate) fn kernel_basis(
    field: &crate::field::Field,
    n: usize,
    cols: &[Vec<Coeff>],
) -> Vec<Vec<Coeff>> {
    let m = cols.len();
    let mut rows: Vec<Vec<Coeff>> = Vec::with_capacity(m);
    for (j, col) in cols.iter().enumerate() {
        let mut r = col.clone();
        let mut tail = vec![field.zero(); m];
        tail[j] = field.one();
        r.extend(tail);
        rows.push(r);
    }
    let mut used = vec![false; m];
    for c in 0..n {
        let sel = (0..m).find(|&ri| !used[ri] && !field.is_zero(&rows[ri][c]));
        let ri = match sel {
            Some(r) => r,
            None => continue,
        };
        used[ri] = true;
        let inv = field.inv(&rows[ri][c].clone());
        for k in 0..rows[ri].len() {
            rows[ri][k] = field.mul(&rows[ri][k], &inv);
        }
        let pivot_row = rows[ri].clone();
        for (rj, row) in rows.iter_mut().enumerate() {
            if rj != ri && !field.is_zero(&row[c]) {
                let fct = row[c].clone();
                for k in 0..row.len() {
                    let t = field.mul(&fct, &pivot_row[k]);
                    row[k] = field.sub(&row[k], &t);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (ri, row) in rows.iter().enumerate() {
        if !used[ri] {
            debug_assert!(row[..n].iter().all(|c| field.is_zero(c)));
            out.push(row[n..].to_vec());
        }
    }
    out
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

    fn cyclic(r: &GradedRing, gens: &[&str]) -> GradedModule {
        let polys: Vec<Polynomial> = gens.iter().map(|t| r.parse(t).unwrap()).collect();
        GradedModule::cyclic(r, &polys).unwrap()
    }

    fn dims(m: &GradedModule, lo: i64, hi: i64) -> Vec<usize> {
        let w = m.hilbert_window(lo, hi, &lims()).unwrap();
        (lo..=hi).map(|d| w.dim(d)).collect()
    }

    #[test]
    fn hilbert_of_polynomial_ring() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        assert_eq!(dims(&m, 0, 3), vec![1, 2, 3, 4]);
    }

    #[test]
    fn hilbert_of_square_quotient() {
        let r = qq_xy();
        let m = cyclic(&r, &["x^2", "x*y", "y^2"]);
        assert_eq!(dims(&m, 0, 2), vec![1, 2, 0]);
    }

    #[test]
    fn shift_identity_and_twist() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        assert_eq!(dims(&m.shift(0), 0, 2), dims(&m, 0, 2));
        let m1 = m.shift(1); // R(-1)
        assert_eq!(m1.dim_at(0, &lims()).unwrap(), 0);
        assert_eq!(m1.dim_at(1, &lims()).unwrap(), 1);
    }

    #[test]
    fn shift_composition_is_additive() {
        let r = qq_xy();
        let mut rng = crate::rng::SplitMix64::new(3);
        for _ in 0..5 {
            let a = rng.int_in(-3, 3);
            let b = rng.int_in(-3, 3);
            let m = cyclic(&r, &["x^2"]);
            let lhs = m.shift(a).shift(b);
            let rhs = m.shift(a + b);
            assert_eq!(lhs.target_twists(), rhs.target_twists());
        }
    }

    #[test]
    fn direct_sum_additivity() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let s = m.shift(1).direct_sum(&m).unwrap(); // R(-1) ⊕ R
        assert_eq!(s.dim_at(1, &lims()).unwrap(), 3);
    }

    #[test]
    fn torsion_of_domain_is_zero() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let t = m.torsion_submodule(&lims()).unwrap();
        assert_eq!(t.ngens(), 0);
    }

    #[test]
    fn torsion_of_finite_length_is_everything() {
        let r = qq_xy();
        let m = cyclic(&r, &["x^2", "x*y", "y^3"]);
        let t = m.torsion_submodule(&lims()).unwrap();
        let wm = m.hilbert_window(0, 4, &lims()).unwrap();
        let wt = t.hilbert_window(0, 4, &lims()).unwrap();
        assert_eq!(wm, wt);
    }

    #[test]
    fn torsion_picks_out_summand() {
        let r = qq_xy();
        let free = GradedModule::ring_module(&r);
        let fl = cyclic(&r, &["x", "y"]); // k
        let m = free.direct_sum(&fl).unwrap();
        let t = m.torsion_submodule(&lims()).unwrap();
        assert_eq!(dims(&t, 0, 3), vec![1, 0, 0, 0]);
        // quotient by torsion is torsion free
        let q = m.torsion_free_quotient(&lims()).unwrap();
        let tq = q.torsion_submodule(&lims()).unwrap();
        assert_eq!(tq.ngens(), 0);
        // idempotence
        let tt = t.torsion_submodule(&lims()).unwrap();
        assert_eq!(
            t.hilbert_window(0, 3, &lims()).unwrap(),
            tt.hilbert_window(0, 3, &lims()).unwrap()
        );
    }

    #[test]
    fn finite_length_detection() {
        let r = qq_xy();
        assert!(!GradedModule::ring_module(&r).is_finite_length(&lims()).unwrap());
        assert!(!cyclic(&r, &["x"]).is_finite_length(&lims()).unwrap());
        let m = cyclic(&r, &["x^2", "x*y", "y^3"]);
        assert!(m.is_finite_length(&lims()).unwrap());
        // standard monomials 1, x, y, y^2
        assert_eq!(m.length(&lims()).unwrap(), 4);
    }

    #[test]
    fn dual_of_residue_field_is_itself() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        let d = k.matlis_dual(&lims()).unwrap();
        assert_eq!(dims(&d, -1, 1), vec![0, 1, 0]);
    }

    #[test]
    fn dual_reflects_window_and_biduality_holds() {
        let r = qq_xy();
        let m = cyclic(&r, &["x^2", "y"]); // dims 1,1 in degrees 0,1
        assert_eq!(dims(&m, 0, 2), vec![1, 1, 0]);
        let d = m.matlis_dual(&lims()).unwrap();
        assert_eq!(dims(&d, -2, 0), vec![0, 1, 1]);
        let dd = d.matlis_dual(&lims()).unwrap();
        assert_eq!(dims(&dd, 0, 2), dims(&m, 0, 2));
        // biduality also respects the module structure: equal annihilators
        let a1 = m.annihilator(&lims()).unwrap();
        let a2 = dd.annihilator(&lims()).unwrap();
        let g1 = crate::groebner::groebner_basis(&a1, &r, None, &lims()).unwrap();
        let g2 = crate::groebner::groebner_basis(&a2, &r, None, &lims()).unwrap();
        assert_eq!(g1.generators, g2.generators);
    }

    #[test]
    fn dual_of_square_of_max_ideal() {
        let r = qq_xy();
        let m = cyclic(&r, &["x^2", "x*y", "y^2"]); // R/(x,y)^2
        let d = m.matlis_dual(&lims()).unwrap();
        assert_eq!(dims(&d, -1, 0), vec![2, 1]);
    }

    #[test]
    fn annihilator_of_cyclic_module() {
        let r = qq_xy();
        let m = cyclic(&r, &["x^2", "y"]);
        let ann = m.annihilator(&lims()).unwrap();
        let gb = crate::groebner::groebner_basis(&ann, &r, None, &lims()).unwrap();
        assert!(crate::groebner::ideal_member(&r.parse("x^2").unwrap(), &gb));
        assert!(crate::groebner::ideal_member(&r.parse("y").unwrap(), &gb));
        assert!(!crate::groebner::ideal_member(&r.parse("x").unwrap(), &gb));
    }

    #[test]
    fn module_over_quotient_ring() {
        // R = QQ[x,y]/(x^2): hilbert 1,2,2,2,...
        let r = GradedRing::quotient(Field::Rationals, &["x", "y"], &[1, 1], &["x^2"]).unwrap();
        let m = GradedModule::ring_module(&r);
        assert_eq!(dims(&m, 0, 3), vec![1, 2, 2, 2]);
    }

    #[test]
    fn presentation_rejects_inhomogeneous_columns() {
        let r = qq_xy();
        let bad = GradedModule::from_rows(&r, vec![0], &[vec!["x + x^2"]]);
        assert!(bad.is_err());
    }
}
