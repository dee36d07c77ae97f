//! Independent brute-force engine certifying Gröbner-path results.
//!
//! Everything here is degreewise exact linear algebra built directly from
//! presentations: full monomial bases, relation spans, row reduction.
//! The Ext path shares nothing with the Gröbner machinery beyond field
//! arithmetic, so agreement between the two is a meaningful check. The one
//! exception is `rank_over_domain_bruteforce`, which by design decides minor
//! vanishing with normal forms: it is the independent counterpart of the
//! randomized evaluation rank, not of the Ext pipeline.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::gmod::GradedModule;
use crate::groebner::GroebnerBasis;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use crate::ring::GradedRing;

// ---- local row reduction (kept self-contained on purpose) ------------------

struct Rref {
    field: Field,
    n: usize,
    rows: Vec<(usize, Vec<Coeff>)>,
}

impl Rref {
    fn new(field: Field, n: usize) -> Self {
        Rref { field, n, rows: Vec::new() }
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

    /// Insert; returns false if the vector was already in the span.
    fn insert(&mut self, v: &[Coeff]) -> bool {
        let f = self.field;
        let red = self.reduce(v);
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

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(i, _)| *i).collect();
        p.sort_unstable();
        p
    }
}

fn matrix_rank(field: &Field, cols: &[Vec<Coeff>], n: usize) -> usize {
    let mut r = Rref::new(*field, n);
    for c in cols {
        r.insert(c);
    }
    r.rank()
}

fn kernel_of_columns(field: &Field, n: usize, cols: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    // rows [col_j | e_j], eliminate on the head
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
        let pivot = rows[ri].clone();
        for (rj, row) in rows.iter_mut().enumerate() {
            if rj != ri && !field.is_zero(&row[c]) {
                let fct = row[c].clone();
                for k in 0..row.len() {
                    let t = field.mul(&fct, &pivot[k]);
                    row[k] = field.sub(&row[k], &t);
                }
            }
        }
    }
    rows.into_iter()
        .enumerate()
        .filter(|(ri, _)| !used[*ri])
        .map(|(_, row)| row[n..].to_vec())
        .collect()
}

// ---- degreewise truncation of a module -------------------------------------

/// One graded piece: a quotient of the labelled ambient space spanned by
/// (component, monomial) pairs by the degreewise relation span.
struct DegSpace {
    ambient: Vec<(usize, Monomial)>,
    index: BTreeMap<(usize, Monomial), usize>,
    rref: Rref,
    /// quotient basis = ambient labels away from the pivots
    free: Vec<usize>,
}

impl DegSpace {
    fn dim(&self) -> usize {
        self.free.len()
    }

    /// Project an ambient vector to quotient coordinates.
    fn project(&self, v: &[Coeff]) -> Vec<Coeff> {
        let red = self.rref.reduce(v);
        self.free.iter().map(|&i| red[i].clone()).collect()
    }

    /// Ambient representative of quotient coordinates (free labels as-is).
    fn lift(&self, field: &Field, coords: &[Coeff]) -> Vec<Coeff> {
        let mut v = vec![field.zero(); self.ambient.len()];
        for (k, &i) in self.free.iter().enumerate() {
            v[i] = coords[k].clone();
        }
        v
    }
}

/// Exact degreewise realization of a module over a window: per-degree bases
/// (monomial labels) and per-generator action matrices.
pub struct TruncatedModule {
    ring: GradedRing,
    pub lo: i64,
    pub hi: i64,
    spaces: BTreeMap<i64, DegSpace>,
}

impl TruncatedModule {
    pub fn dim(&self, d: i64) -> usize {
        self.spaces.get(&d).map(|s| s.dim()).unwrap_or(0)
    }

    pub fn dims(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|d| self.dim(d)).collect()
    }

    /// Quotient basis labels at a degree.
    pub fn labels(&self, d: i64) -> Vec<(usize, Monomial)> {
        self.spaces
            .get(&d)
            .map(|s| s.free.iter().map(|&i| s.ambient[i].clone()).collect())
            .unwrap_or_default()
    }

    /// Apply a variable to quotient coordinates at degree d.
    fn apply_var(&self, l: usize, d: i64, coords: &[Coeff]) -> Vec<Coeff> {
        let field = self.ring.field();
        let w = self.ring.weights()[l] as i64;
        let tgt = match self.spaces.get(&(d + w)) {
            Some(t) => t,
            None => return Vec::new(),
        };
        let src = match self.spaces.get(&d) {
            Some(s) => s,
            None => return vec![field.zero(); tgt.dim()],
        };
        let mut ambient_tgt = vec![field.zero(); tgt.ambient.len()];
        for (k, &i) in src.free.iter().enumerate() {
            if field.is_zero(&coords[k]) {
                continue;
            }
            let (comp, mono) = &src.ambient[i];
            let shifted = mono.mul(&Monomial::var(self.ring.nvars(), l));
            if let Some(&j) = tgt.index.get(&(*comp, shifted)) {
                ambient_tgt[j] = field.add(&ambient_tgt[j], &coords[k]);
            }
        }
        tgt.project(&ambient_tgt)
    }

    /// Apply a monomial (variable by variable) to quotient coordinates.
    fn apply_mono(&self, m: &Monomial, d: i64, coords: &[Coeff]) -> Vec<Coeff> {
        let mut cur = coords.to_vec();
        let mut deg = d;
        for (l, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                cur = self.apply_var(l, deg, &cur);
                deg += self.ring.weights()[l] as i64;
                if cur.is_empty() {
                    return Vec::new();
                }
            }
        }
        cur
    }

    /// Action matrix of a variable: rows over the degree d+w basis, columns
    /// over the degree d basis.
    pub fn action_matrix(&self, l: usize, d: i64) -> Vec<Vec<Coeff>> {
        let field = self.ring.field();
        let n_src = self.dim(d);
        let w = self.ring.weights()[l] as i64;
        let n_tgt = self.dim(d + w);
        let mut cols = Vec::with_capacity(n_src);
        for k in 0..n_src {
            let mut unit = vec![field.zero(); n_src];
            unit[k] = field.one();
            let img = self.apply_var(l, d, &unit);
            cols.push(if img.is_empty() { vec![field.zero(); n_tgt] } else { img });
        }
        // transpose into row-major
        let mut mat = vec![vec![field.zero(); n_src]; n_tgt];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                mat[r][c] = v.clone();
            }
        }
        mat
    }
}

/// Exact degreewise realization of M on [lo, hi], built from the raw
/// presentation by linear algebra alone.
pub fn truncate(m: &GradedModule, lo: i64, hi: i64) -> Result<TruncatedModule> {
    if lo > hi {
        return Err(Error::InvalidModule("window with lo > hi".into()));
    }
    let ring = m.ring().clone();
    let field = ring.field();
    let weights = ring.weights();
    let twists = m.target_twists().to_vec();
    let mut spaces = BTreeMap::new();
    for d in lo..=hi {
        let mut ambient = Vec::new();
        for (i, &t) in twists.iter().enumerate() {
            for mono in monomials_of_degree(weights, d - t) {
                ambient.push((i, mono));
            }
        }
        let index: BTreeMap<(usize, Monomial), usize> = ambient
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, lab)| (lab, k))
            .collect();
        let mut rref = Rref::new(*field, ambient.len());
        let accumulate = |v: &mut Vec<Coeff>, p: &Polynomial, comp: usize, mult: &Monomial| {
            for (mono, c) in &p.terms {
                let key = (comp, mono.mul(mult));
                if let Some(&k) = index.get(&key) {
                    v[k] = field.add(&v[k], c);
                }
            }
        };
        // presentation columns times monomials: one relation vector per
        // (column, multiplier), all components together
        for (j, col) in m.columns().iter().enumerate() {
            let cdeg = m.source_twists()[j];
            for mult in monomials_of_degree(weights, d - cdeg) {
                let mut v = vec![field.zero(); ambient.len()];
                for (comp, p) in col.comps.iter().enumerate() {
                    if !p.is_zero() {
                        accumulate(&mut v, p, comp, &mult);
                    }
                }
                if v.iter().any(|c| !field.is_zero(c)) {
                    rref.insert(&v);
                }
            }
        }
        // defining relations times monomials, separately in every component
        for rel in ring.relations() {
            let rdeg = rel.homogeneous_degree(weights).unwrap_or(0);
            for (i, &t) in twists.iter().enumerate() {
                for mult in monomials_of_degree(weights, d - rdeg - t) {
                    let mut v = vec![field.zero(); ambient.len()];
                    accumulate(&mut v, rel, i, &mult);
                    if v.iter().any(|c| !field.is_zero(c)) {
                        rref.insert(&v);
                    }
                }
            }
        }
        let pivots = rref.pivots();
        let mut free = Vec::new();
        let mut pi = 0;
        for k in 0..ambient.len() {
            if pi < pivots.len() && pivots[pi] == k {
                pi += 1;
            } else {
                free.push(k);
            }
        }
        spaces.insert(d, DegSpace { ambient, index, rref, free });
    }
    Ok(TruncatedModule { ring, lo, hi, spaces })
}

// ---- truncated free resolutions and Ext dims --------------------------------

/// A free level of the truncated resolution: generator degrees plus each
/// generator's ambient coordinates over (previous-level generator, monomial).
struct FreeLevel {
    twists: Vec<i64>,
    /// For each generator: list of ((prev generator index, monomial), coeff).
    columns: Vec<Vec<((usize, Monomial), Coeff)>>,
}

/// Graded Ext dimensions within a certified window, by brute force.
pub struct ExtDims {
    pub dims: BTreeMap<(usize, i64), usize>,
    pub window_sufficient: bool,
    pub z_lo: i64,
    pub z_hi: i64,
}

/// Build Hom complexes of a truncated free resolution of N degreewise and
/// take kernel/image ranks. Exact within the certified window; the
/// `window_sufficient` flag reports whether the internal widening sufficed.
pub fn ext_dims_bruteforce(
    n: &GradedModule,
    m: &GradedModule,
    i_max: usize,
    z_lo: i64,
    z_hi: i64,
) -> Result<ExtDims> {
    if n.ring() != m.ring() {
        return Err(Error::RingMismatch("Ext of modules over different rings".into()));
    }
    let ring = n.ring().clone();
    let field = *ring.field();
    let max_w = *ring.weights().iter().max().unwrap() as i64;
    // widen the N-side window: each syzygy step can raise generator degrees
    // by roughly the spread of the presentation, the relation degrees, and
    // the weights
    let n_lo = n.target_twists().iter().copied().min().unwrap_or(0);
    let spread = {
        let rel_deg = ring
            .relations()
            .iter()
            .filter_map(|r| r.homogeneous_degree(ring.weights()))
            .max()
            .unwrap_or(0);
        let pres_deg = n
            .source_twists()
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            .saturating_sub(n_lo);
        rel_deg.max(pres_deg).max(max_w) + max_w
    };
    let n_hi = n.max_gen_degree().unwrap_or(0) + (i_max as i64 + 2) * spread + 2;
    let t_n = truncate(n, n_lo, n_hi)?;

    // level 0: degreewise minimal generators of N
    let mut levels: Vec<FreeLevel> = Vec::new();
    let gen0 = degreewise_generators(&t_n, n_lo, n_hi, &field);
    levels.push(FreeLevel {
        twists: gen0.iter().map(|(d, _)| *d).collect(),
        columns: Vec::new(), // filled only for levels >= 1
    });
    let mut window_ok = true;
    // rolling state: the free cover two levels back hosts the previous
    // kernel; the current cover maps onto it with the recorded images
    let mut cover_back: Option<TruncatedModule> = None;
    let mut kern_back: Option<KernelSpaces> = None;
    let mut cover_cur: TruncatedModule = free_cover(&ring, &levels[0].twists, n_lo, n_hi)?;
    let mut images_cur: Vec<(i64, Vec<Coeff>)> = gen0;

    for _j in 1..=(i_max + 1) {
        let (kern, gens) = {
            let target_view: TargetData = match (&kern_back, &cover_back) {
                (Some(k), Some(c)) => TargetData::Kernel { cover: c, spaces: k },
                _ => TargetData::Module(&t_n),
            };
            let kern = kernel_spaces(&cover_cur, &target_view, &images_cur, &field)?;
            let gens = kernel_generators(&cover_cur, &kern, &field);
            (kern, gens)
        };
        // window check: generators crowding the top band are a red flag
        if gens.iter().any(|(d, _)| *d > n_hi - max_w * 2) {
            window_ok = false;
        }
        let twists: Vec<i64> = gens.iter().map(|(d, _)| *d).collect();
        // columns over (prev generator, monomial) labels
        let mut columns = Vec::with_capacity(gens.len());
        for (d, kcoords) in &gens {
            let amb = kern.lift(&cover_cur, *d, kcoords, &field);
            let space = cover_cur.spaces.get(d).unwrap();
            let full = space.lift(&field, &amb);
            let mut col = Vec::new();
            for (k, c) in full.iter().enumerate() {
                if !field.is_zero(c) {
                    col.push((space.ambient[k].clone(), c.clone()));
                }
            }
            columns.push(col);
        }
        let new_cover = free_cover(&ring, &twists, n_lo, n_hi)?;
        levels.push(FreeLevel { twists, columns });
        cover_back = Some(std::mem::replace(&mut cover_cur, new_cover));
        kern_back = Some(kern);
        images_cur = gens;
    }

    // M-side truncation wide enough for every Hom piece
    let all_twists: Vec<i64> = levels.iter().flat_map(|l| l.twists.iter().copied()).collect();
    let (min_t, max_t) = match (all_twists.iter().min(), all_twists.iter().max()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => (0, 0),
    };
    let t_m = truncate(m, z_lo + min_t, z_hi + max_t)?;

    // Hom complex dims and differentials per internal degree z
    let mut dims = BTreeMap::new();
    for z in z_lo..=z_hi {
        // C_j = ⊕_g M_{z + d_{j,g}}
        let piece = |j: usize| -> Vec<(i64, usize)> {
            levels[j]
                .twists
                .iter()
                .map(|&d| (z + d, t_m.dim(z + d)))
                .collect()
        };
        let hom_matrix = |j: usize| -> Vec<Vec<Coeff>> {
            // map C_{j-1} -> C_j given by level j columns; returns columns of
            // the matrix (one per source coordinate)
            let src = piece(j - 1);
            let tgt = piece(j);
            let tgt_total: usize = tgt.iter().map(|(_, k)| k).sum();
            let mut cols = Vec::new();
            for (g_prev, &(dsrc, ksrc)) in src.iter().enumerate() {
                for b in 0..ksrc {
                    let mut phi = vec![field.zero(); ksrc];
                    phi[b] = field.one();
                    // image: for each generator h of level j
                    let mut out = vec![field.zero(); tgt_total];
                    let mut offset = 0;
                    for (h, &(dtgt, ktgt)) in tgt.iter().enumerate() {
                        if ktgt > 0 {
                            for ((gp, mono), c) in &levels[j].columns[h] {
                                if *gp == g_prev {
                                    let img = t_m.apply_mono(mono, dsrc, &phi);
                                    if !img.is_empty() {
                                        for (r, v) in img.iter().enumerate() {
                                            let t = field.mul(c, v);
                                            out[offset + r] = field.add(&out[offset + r], &t);
                                        }
                                    }
                                }
                            }
                        }
                        offset += ktgt;
                        let _ = dtgt;
                    }
                    cols.push(out);
                }
            }
            cols
        };
        for i in 0..=i_max {
            let c_i: usize = piece(i).iter().map(|(_, k)| k).sum();
            let rank_out = {
                let tgt_total: usize = piece(i + 1).iter().map(|(_, k)| k).sum();
                let cols = hom_matrix(i + 1);
                matrix_rank(&field, &cols, tgt_total)
            };
            let rank_in = if i == 0 {
                0
            } else {
                let cols = hom_matrix(i);
                matrix_rank(&field, &cols, c_i)
            };
            let h = c_i - rank_out - rank_in;
            if h > 0 {
                dims.insert((i, z), h);
            }
        }
    }
    Ok(ExtDims {
        dims,
        window_sufficient: window_ok,
        z_lo,
        z_hi,
    })
}

/// Truncation of a free module ⊕ R(−d_g) (relations: J only).
fn free_cover(ring: &GradedRing, twists: &[i64], lo: i64, hi: i64) -> Result<TruncatedModule> {
    let f = GradedModule::free(ring, twists.to_vec());
    truncate(&f, lo, hi)
}

/// Degreewise minimal generators of a truncated module: complements of the
/// span of variable images, degree by degree.
fn degreewise_generators(
    t: &TruncatedModule,
    lo: i64,
    hi: i64,
    field: &Field,
) -> Vec<(i64, Vec<Coeff>)> {
    let mut out = Vec::new();
    for d in lo..=hi {
        let nd = t.dim(d);
        if nd == 0 {
            continue;
        }
        let mut span = Rref::new(*field, nd);
        for l in 0..t.ring.nvars() {
            let w = t.ring.weights()[l] as i64;
            let ns = t.dim(d - w);
            for k in 0..ns {
                let mut unit = vec![field.zero(); ns];
                unit[k] = field.one();
                let img = t.apply_var(l, d - w, &unit);
                if !img.is_empty() {
                    span.insert(&img);
                }
            }
        }
        for k in 0..nd {
            let mut unit = vec![field.zero(); nd];
            unit[k] = field.one();
            if span.insert(&unit) {
                out.push((d, unit));
            }
        }
    }
    out
}

/// Degreewise kernel of the map from a free cover to a target, stored as
/// per-degree bases in the free cover's quotient coordinates.
struct KernelSpaces {
    bases: BTreeMap<i64, Vec<Vec<Coeff>>>,
}

impl KernelSpaces {
    fn dim(&self, d: i64) -> usize {
        self.bases.get(&d).map(|b| b.len()).unwrap_or(0)
    }

    /// Express free-cover coordinates of a kernel element in the kernel basis
    /// ... and back: here we lift kernel coordinates to free-cover coords.
    fn lift(
        &self,
        _free: &TruncatedModule,
        d: i64,
        coords: &[Coeff],
        field: &Field,
    ) -> Vec<Coeff> {
        let basis = self.bases.get(&d).cloned().unwrap_or_default();
        let dim_amb = basis.first().map(|b| b.len()).unwrap_or(0);
        let mut v = vec![field.zero(); dim_amb];
        for (bi, b) in basis.iter().enumerate() {
            if field.is_zero(&coords[bi]) {
                continue;
            }
            for (k, c) in b.iter().enumerate() {
                let t = field.mul(&coords[bi], c);
                v[k] = field.add(&v[k], &t);
            }
        }
        v
    }

    /// Express a free-cover coordinate vector (lying in the kernel) in the
    /// kernel basis at degree d.
    fn express(&self, d: i64, v: &[Coeff], field: &Field) -> Vec<Coeff> {
        let basis = match self.bases.get(&d) {
            Some(b) if !b.is_empty() => b,
            _ => return Vec::new(),
        };
        // solve Σ λ_i basis_i = v by elimination with an augmented system
        let nb = basis.len();
        let amb = basis[0].len();
        let mut cols: Vec<Vec<Coeff>> = basis.to_vec();
        cols.push(v.to_vec());
        // kernel of [basis | v] gives a relation with last coordinate -1
        let ker = kernel_of_columns(field, amb, &cols);
        for rel in ker {
            if !field.is_zero(&rel[nb]) {
                let scale = field.neg(&field.inv(&rel[nb]));
                return (0..nb).map(|i| field.mul(&rel[i], &scale)).collect();
            }
        }
        Vec::new()
    }
}

enum TargetData<'a> {
    Module(&'a TruncatedModule),
    Kernel {
        cover: &'a TruncatedModule,
        spaces: &'a KernelSpaces,
    },
}

impl TargetLike for TargetData<'_> {
    fn dim(&self, d: i64) -> usize {
        match self {
            TargetData::Module(t) => TruncatedModule::dim(t, d),
            TargetData::Kernel { spaces, .. } => spaces.dim(d),
        }
    }
    fn apply_mono(&self, m: &Monomial, d: i64, coords: &[Coeff], field: &Field) -> Vec<Coeff> {
        match self {
            TargetData::Module(t) => TruncatedModule::apply_mono(t, m, d, coords),
            TargetData::Kernel { cover, spaces } => {
                KernelInCover { cover, spaces }.apply_mono(m, d, coords, field)
            }
        }
    }
}

fn kernel_spaces(
    free: &TruncatedModule,
    target: &impl TargetLike,
    images: &[(i64, Vec<Coeff>)],
    field: &Field,
) -> Result<KernelSpaces> {
    let mut bases = BTreeMap::new();
    for d in free.lo..=free.hi {
        let nd = free.dim(d);
        if nd == 0 {
            continue;
        }
        let tgt_dim = target.dim(d);
        let mut cols = Vec::with_capacity(nd);
        for k in 0..nd {
            let mut unit = vec![field.zero(); nd];
            unit[k] = field.one();
            let img = eval_free(free, target, images, d, &unit, field);
            debug_assert!(img.len() == tgt_dim);
            cols.push(img);
        }
        let ker = kernel_of_columns(field, tgt_dim, &cols);
        bases.insert(d, ker);
    }
    Ok(KernelSpaces { bases })
}

/// Evaluate the free cover map at degree d: free-cover quotient coordinates
/// are supported on labels (g, monomial); each maps to monomial · image(g).
fn eval_free(
    free: &TruncatedModule,
    target: &impl TargetLike,
    images: &[(i64, Vec<Coeff>)],
    d: i64,
    coords: &[Coeff],
    field: &Field,
) -> Vec<Coeff> {
    let tgt_dim = target.dim(d);
    let mut out = vec![field.zero(); tgt_dim];
    let space = match free.spaces.get(&d) {
        Some(s) => s,
        None => return out,
    };
    for (k, &amb_idx) in space.free.iter().enumerate() {
        if field.is_zero(&coords[k]) {
            continue;
        }
        let (g, mono) = &space.ambient[amb_idx];
        let (gdeg, gvec) = &images[*g];
        let img = target.apply_mono(mono, *gdeg, gvec, field);
        if img.is_empty() {
            continue;
        }
        for (r, v) in img.iter().enumerate() {
            let t = field.mul(&coords[k], v);
            out[r] = field.add(&out[r], &t);
        }
    }
    out
}

/// Common view over "module truncation" and "kernel inside a free cover".
trait TargetLike {
    fn dim(&self, d: i64) -> usize;
    fn apply_mono(&self, m: &Monomial, d: i64, coords: &[Coeff], field: &Field) -> Vec<Coeff>;
}

impl TargetLike for TruncatedModule {
    fn dim(&self, d: i64) -> usize {
        TruncatedModule::dim(self, d)
    }
    fn apply_mono(&self, m: &Monomial, d: i64, coords: &[Coeff], _field: &Field) -> Vec<Coeff> {
        TruncatedModule::apply_mono(self, m, d, coords)
    }
}

/// Kernel spaces viewed inside their free cover.
struct KernelInCover<'a> {
    cover: &'a TruncatedModule,
    spaces: &'a KernelSpaces,
}

impl<'a> TargetLike for KernelInCover<'a> {
    fn dim(&self, d: i64) -> usize {
        self.spaces.dim(d)
    }
    fn apply_mono(&self, m: &Monomial, d: i64, coords: &[Coeff], field: &Field) -> Vec<Coeff> {
        // lift to cover coords, act there, express back in the kernel basis
        let cover_coords = self.spaces.lift(self.cover, d, coords, field);
        if cover_coords.is_empty() {
            let deg = d + m.degree(self.cover.ring.weights());
            return vec![field.zero(); self.spaces.dim(deg)];
        }
        let acted = self.cover.apply_mono(m, d, &cover_coords);
        let deg = d + m.degree(self.cover.ring.weights());
        if acted.is_empty() {
            return Vec::new();
        }
        self.spaces.express(deg, &acted, field)
    }
}

fn kernel_generators(
    free: &TruncatedModule,
    kern: &KernelSpaces,
    field: &Field,
) -> Vec<(i64, Vec<Coeff>)> {
    // minimal generators of the kernel, degreewise: complement of variable
    // images inside each kernel piece
    let view = KernelInCover { cover: free, spaces: kern };
    let mut out = Vec::new();
    for d in free.lo..=free.hi {
        let nd = view.dim(d);
        if nd == 0 {
            continue;
        }
        let mut span = Rref::new(*field, nd);
        for l in 0..free.ring.nvars() {
            let w = free.ring.weights()[l] as i64;
            let ns = view.dim(d - w);
            for k in 0..ns {
                let mut unit = vec![field.zero(); ns];
                unit[k] = field.one();
                let img = view.apply_mono(&Monomial::var(free.ring.nvars(), l), d - w, &unit, field);
                if !img.is_empty() {
                    span.insert(&img);
                }
            }
        }
        for k in 0..nd {
            let mut unit = vec![field.zero(); nd];
            unit[k] = field.one();
            if span.insert(&unit) {
                out.push((d, unit));
            }
        }
    }
    out
}

// ---- exact rank by minor expansion ------------------------------------------

/// Rank of a matrix over the domain R/𝔭 via exact minor expansion, minor
/// vanishing decided by normal forms. The minor order is capped at 6 and
/// the long dimension at 24, keeping the work at the scale of a full 6×6
/// expansion.
pub fn rank_over_domain_bruteforce(
    rows: &[Vec<Polynomial>],
    prime_gb: &GroebnerBasis,
) -> Result<usize> {
    let nr = rows.len();
    let nc = rows.first().map(|r| r.len()).unwrap_or(0);
    if nr.min(nc) > 6 || nr.max(nc) > 24 {
        return Err(Error::SizeLimit(format!(
            "minor expansion limited to order 6, got {nr}x{nc}"
        )));
    }
    let ring = &prime_gb.ambient;
    let max_r = nr.min(nc);
    for r in (1..=max_r).rev() {
        for rowset in subsets(nr, r) {
            for colset in subsets(nc, r) {
                let det = minor_det(rows, &rowset, &colset, ring);
                if !crate::groebner::normal_form(&det, prime_gb).is_zero() {
                    return Ok(r);
                }
            }
        }
    }
    Ok(0)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn minor_det(
    rows: &[Vec<Polynomial>],
    rowset: &[usize],
    colset: &[usize],
    ring: &GradedRing,
) -> Polynomial {
    // cofactor expansion along the first row of the minor
    if rowset.len() == 1 {
        return rows[rowset[0]][colset[0]].clone();
    }
    let field = ring.field();
    let mut acc = Polynomial::zero();
    for (j, &c) in colset.iter().enumerate() {
        let entry = &rows[rowset[0]][c];
        if entry.is_zero() {
            continue;
        }
        let sub_rows: Vec<usize> = rowset[1..].to_vec();
        let sub_cols: Vec<usize> = colset
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let sub = minor_det(rows, &sub_rows, &sub_cols, ring);
        let term = entry.mul(&sub, field, ring.order(), ring.weights());
        if j % 2 == 0 {
            acc = acc.add(&term, field, ring.order(), ring.weights());
        } else {
            acc = acc.sub(&term, field, ring.order(), ring.weights());
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::GbLimits;

    fn qq(vars: &[&str]) -> GradedRing {
        let w = vec![1u32; vars.len()];
        GradedRing::polynomial(Field::Rationals, vars, &w).unwrap()
    }

    #[test]
    fn truncate_univariate_ring() {
        let r = qq(&["x"]);
        let m = GradedModule::ring_module(&r);
        let t = truncate(&m, 0, 3).unwrap();
        assert_eq!(t.dims(0, 3), vec![1, 1, 1, 1]);
        // x acts as the shift
        let a = t.action_matrix(0, 1);
        assert_eq!(a.len(), 1);
        assert!(r.field().is_one(&a[0][0]));
    }

    #[test]
    fn truncate_with_relation() {
        let r = qq(&["x"]);
        let m = GradedModule::cyclic(&r, &[r.parse("x^2").unwrap()]).unwrap();
        let t = truncate(&m, 0, 3).unwrap();
        assert_eq!(t.dims(0, 3), vec![1, 1, 0, 0]);
    }

    #[test]
    fn truncate_quotient_ring() {
        let r = GradedRing::quotient(Field::Rationals, &["x", "y"], &[1, 1], &["x*y"]).unwrap();
        let m = GradedModule::ring_module(&r);
        let t = truncate(&m, 0, 2).unwrap();
        assert_eq!(t.dims(0, 2), vec![1, 2, 2]);
    }

    #[test]
    fn truncation_dims_agree_with_hilbert_window() {
        let r = qq(&["x", "y"]);
        let m = GradedModule::cyclic(
            &r,
            &[r.parse("x^2").unwrap(), r.parse("x*y").unwrap()],
        )
        .unwrap();
        let t = truncate(&m, 0, 5).unwrap();
        let w = m.hilbert_window(0, 5, &GbLimits::default()).unwrap();
        for d in 0..=5 {
            assert_eq!(t.dim(d), w.dim(d), "at degree {d}");
        }
    }

    #[test]
    fn ext_of_residue_field_into_itself() {
        let r = qq(&["x", "y"]);
        let k = GradedModule::residue_field(&r);
        let e = ext_dims_bruteforce(&k, &k, 2, -4, 2).unwrap();
        assert!(e.window_sufficient);
        // Ext^0(k,k) = k at z = 0
        assert_eq!(e.dims.get(&(0, 0)), Some(&1));
        // Ext^1(k,k): two classes in degree -1
        assert_eq!(e.dims.get(&(1, -1)), Some(&2));
        let total1: usize = e.dims.iter().filter(|((i, _), _)| *i == 1).map(|(_, v)| v).sum();
        assert_eq!(total1, 2);
        // Ext^2(k,k): one class
        let total2: usize = e.dims.iter().filter(|((i, _), _)| *i == 2).map(|(_, v)| v).sum();
        assert_eq!(total2, 1);
    }

    #[test]
    fn ext_of_residue_field_into_ring() {
        let r = qq(&["x", "y"]);
        let k = GradedModule::residue_field(&r);
        let rm = GradedModule::ring_module(&r);
        let e = ext_dims_bruteforce(&k, &rm, 2, -4, 4).unwrap();
        assert!(e.window_sufficient);
        let total0: usize = e.dims.iter().filter(|((i, _), _)| *i == 0).map(|(_, v)| v).sum();
        let total1: usize = e.dims.iter().filter(|((i, _), _)| *i == 1).map(|(_, v)| v).sum();
        let total2: usize = e.dims.iter().filter(|((i, _), _)| *i == 2).map(|(_, v)| v).sum();
        assert_eq!((total0, total1, total2), (0, 0, 1));
        assert_eq!(e.dims.get(&(2, -2)), Some(&1));
    }

    #[test]
    fn ideal_membership_agrees_with_degreewise_projection() {
        // f lies in the ideal exactly when its class in the truncated
        // quotient vanishes, for small ideals in up to three variables
        let rings_and_ideals: Vec<(GradedRing, Vec<&str>)> = vec![
            (qq(&["x", "y"]), vec!["x^2", "x*y"]),
            (qq(&["x", "y"]), vec!["x^2 - y^2"]),
            (qq(&["x", "y", "z"]), vec!["x*y - z^2", "x^2 - y*z"]),
            (qq(&["x", "y", "z"]), vec!["x^3", "y^4", "z^2"]),
        ];
        let mut rng = crate::rng::SplitMix64::new(314);
        for (r, gens) in rings_and_ideals {
            let polys: Vec<Polynomial> = gens.iter().map(|t| r.parse(t).unwrap()).collect();
            let gb = crate::groebner::groebner_basis(&polys, &r, None, &GbLimits::default())
                .unwrap();
            let quotient = GradedModule::cyclic(&r, &polys).unwrap();
            let t = truncate(&quotient, 0, 6).unwrap();
            for _ in 0..30 {
                let d = rng.int_in(1, 5);
                let f = random_homog(&r, &mut rng, d);
                if f.is_zero() {
                    continue;
                }
                let member = crate::groebner::ideal_member(&f, &gb);
                // project f into the truncated quotient at degree d
                let space = t.spaces.get(&d).unwrap();
                let mut v = vec![r.field().zero(); space.ambient.len()];
                for (mono, c) in &f.terms {
                    let idx = space.index[&(0usize, mono.clone())];
                    v[idx] = c.clone();
                }
                let class = space.project(&v);
                let vanishes = class.iter().all(|c| r.field().is_zero(c));
                assert_eq!(member, vanishes, "membership of {} in {gens:?}", r.poly_string(&f));
            }
        }
    }

    fn random_homog(r: &GradedRing, rng: &mut crate::rng::SplitMix64, d: i64) -> Polynomial {
        let mut p = Polynomial::zero();
        for m in crate::monomial::monomials_of_degree(r.weights(), d) {
            let c = rng.int_in(-2, 2);
            if c != 0 {
                let t = Polynomial::monomial(m, r.field().from_i64(c));
                p = p.add(&t, r.field(), r.order(), r.weights());
            }
        }
        p
    }

    #[test]
    fn syzygy_module_dims_match_bruteforce_kernels() {
        // the columns produced by the syzygy computation must span, in each
        // degree, exactly the kernel of the evaluation map computed here by
        // raw linear algebra
        let r = qq(&["x", "y"]);
        for gens in [vec!["x^2", "x*y", "y^2"], vec!["x", "y"], vec!["x^2 - y^2", "x*y"]] {
            let polys: Vec<crate::poly::Polynomial> =
                gens.iter().map(|t| r.parse(t).unwrap()).collect();
            let elements: Vec<crate::vecpoly::VecPoly> = polys
                .iter()
                .map(|p| crate::vecpoly::VecPoly { comps: vec![p.clone()] })
                .collect();
            let syz =
                crate::groebner::syzygies(&elements, &[0], &r, &GbLimits::default()).unwrap();
            // present the syzygy module as a submodule of the free module on
            // the elements and read dims off the Gröbner path
            let free = GradedModule::free(
                &r,
                polys
                    .iter()
                    .map(|p| p.homogeneous_degree(r.weights()).unwrap())
                    .collect(),
            );
            let k_mod = free.submodule(&syz.columns, &GbLimits::default()).unwrap();
            // brute force: kernel of evaluation at each degree
            let target = truncate(&GradedModule::ring_module(&r), 0, 8).unwrap();
            for d in 0..=6i64 {
                let mut cols = Vec::new();
                for p in &polys {
                    let pd = p.homogeneous_degree(r.weights()).unwrap();
                    for m in crate::monomial::monomials_of_degree(r.weights(), d - pd) {
                        // coordinates of m·p inside the ring truncation
                        let space_dim = target.dim(d);
                        let mut vec_out = vec![r.field().zero(); space_dim];
                        let labels = target.labels(d);
                        for (mono, c) in &p.terms {
                            let mm = mono.mul(&m);
                            if let Some(idx) = labels.iter().position(|(_, lm)| *lm == mm) {
                                vec_out[idx] = r.field().add(&vec_out[idx], c);
                            }
                        }
                        cols.push(vec_out);
                    }
                }
                let ker = kernel_of_columns(r.field(), target.dim(d), &cols);
                let expected = ker.len();
                let got = k_mod.dim_at(d, &GbLimits::default()).unwrap();
                assert_eq!(got, expected, "syzygies of {gens:?} at degree {d}");
            }
        }
    }

    #[test]
    fn rank_of_zero_and_identity() {
        let r = qq(&["x", "y"]);
        let quotient_gb =
            crate::groebner::groebner_basis(&[r.parse("x").unwrap()], &r, None, &GbLimits::default())
                .unwrap();
        let zero = vec![vec![Polynomial::zero(), Polynomial::zero()]];
        assert_eq!(rank_over_domain_bruteforce(&zero, &quotient_gb).unwrap(), 0);
        let id = vec![
            vec![r.one(), Polynomial::zero()],
            vec![Polynomial::zero(), r.one()],
        ];
        assert_eq!(rank_over_domain_bruteforce(&id, &quotient_gb).unwrap(), 2);
    }

    #[test]
    fn rank_detects_proportional_rows() {
        let r = qq(&["x", "y"]);
        let gb = crate::groebner::groebner_basis(&[], &r, None, &GbLimits::default()).unwrap();
        let m = vec![
            vec![r.parse("x").unwrap(), r.parse("y").unwrap()],
            vec![r.parse("y*x").unwrap(), r.parse("y^2").unwrap()],
        ];
        assert_eq!(rank_over_domain_bruteforce(&m, &gb).unwrap(), 1);
    }

    #[test]
    fn rank_size_limit() {
        let r = qq(&["x"]);
        let gb = crate::groebner::groebner_basis(&[], &r, None, &GbLimits::default()).unwrap();
        let big = vec![vec![Polynomial::zero(); 7]; 7];
        assert!(matches!(
            rank_over_domain_bruteforce(&big, &gb),
            Err(Error::SizeLimit(_))
        ));
    }
}
