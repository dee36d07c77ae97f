//! Bass numbers at the irrelevant maximal ideal and at graded primes,
//! translation to non-homogeneous primes through the largest homogeneous
//! subideal, shift-isomorphism classification, the torsion indicator, and
//! the Veronese transfer check.
//!
//! At the irrelevant ideal the table is dim_k Ext^i(k, M) with a degree
//! refinement; at a graded prime 𝔭 it is the rank of Ext^i(R/𝔭, M) over the
//! domain R/𝔭. Rank certification runs up to three routes: exact Gaussian
//! elimination with normal-form zero tests, randomized evaluation at points
//! of the vanishing locus, and exact minor expansion on small matrices. Any
//! disagreement is a hard error.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::gmod::{kernel_basis, GradedModule};
use crate::groebner::{self, GroebnerBasis};
use crate::limits::GbLimits;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::resolve;
use crate::ring::GradedRing;
use crate::rng::SplitMix64;
use crate::veronese;

/// How to find random rational points on the vanishing locus of a prime.
#[derive(Debug, Clone)]
pub enum PointSampler {
    /// Zero every variable that generates the ideal, randomize the rest,
    /// keep points where all generators and relations vanish.
    Direct,
    /// Push points of a source prime through a polynomial map (used for
    /// Veronese contractions, where the lift map parametrizes the image).
    Mapped {
        source: Box<PrimeSpec>,
        images: Vec<Polynomial>,
    },
}

/// A prime ideal with cached Gröbner data. Primality is the caller's
/// assertion; strict mode runs a randomized sanity check.
#[derive(Debug, Clone)]
pub struct PrimeSpec {
    ring: GradedRing,
    pub generators: Vec<Polynomial>,
    pub is_homogeneous: bool,
    gb: Arc<OnceLock<std::result::Result<GroebnerBasis, Error>>>,
    pub sampler: PointSampler,
}

impl PrimeSpec {
    pub fn new(ring: &GradedRing, generators: Vec<Polynomial>) -> Result<Self> {
        let gens: Vec<Polynomial> = generators
            .iter()
            .map(|g| ring.nf(g))
            .filter(|g| !g.is_zero())
            .collect();
        let is_homogeneous = gens.iter().all(|g| g.is_homogeneous(ring.weights()));
        Ok(PrimeSpec {
            ring: ring.clone(),
            generators: gens,
            is_homogeneous,
            gb: Arc::new(OnceLock::new()),
            sampler: PointSampler::Direct,
        })
    }

    pub fn parse(ring: &GradedRing, texts: &[&str]) -> Result<Self> {
        let gens = texts
            .iter()
            .map(|t| ring.parse(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }

    pub fn with_sampler(mut self, sampler: PointSampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    /// Reduced Gröbner basis of 𝔭 + J, cached.
    pub fn groebner(&self, limits: &GbLimits) -> Result<&GroebnerBasis> {
        let res = self.gb.get_or_init(|| {
            groebner::groebner_basis(&self.generators, &self.ring, None, limits)
        });
        match res {
            Ok(gb) => Ok(gb),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn contains(&self, f: &Polynomial, limits: &GbLimits) -> Result<bool> {
        Ok(groebner::normal_form(f, self.groebner(limits)?).is_zero())
    }

    /// True when the prime is the irrelevant maximal ideal.
    pub fn is_irrelevant(&self, limits: &GbLimits) -> Result<bool> {
        for i in 0..self.ring.nvars() {
            if !self.contains(&self.ring.var_poly(i), limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_proper(&self, limits: &GbLimits) -> Result<bool> {
        Ok(!self
            .groebner(limits)?
            .generators
            .iter()
            .any(|g| g.leading().map(|(m, _)| m.is_one()).unwrap_or(false)))
    }

    /// Randomized irreducibility sanity check: products of small monomials
    /// and of random nonzero residues must stay nonzero. Catches blatant
    /// non-primes like squares and monomial products; not a proof.
    pub fn primality_sanity(&self, limits: &GbLimits, seed: u64) -> Result<()> {
        if !self.is_proper(limits)? {
            return Err(Error::NotPrime("ideal is the unit ideal".into()));
        }
        let gb = self.groebner(limits)?;
        let ring = &self.ring;
        // zero divisors among low-degree monomials
        let mut small: Vec<Polynomial> = Vec::new();
        for d in 1..=2 {
            for m in crate::monomial::monomials_of_degree(ring.weights(), d) {
                let p = Polynomial::monomial(m, ring.field().one());
                if !groebner::normal_form(&p, gb).is_zero() {
                    small.push(p);
                }
            }
        }
        for a in &small {
            for b in &small {
                let prod = a.mul(b, ring.field(), ring.order(), ring.weights());
                if groebner::normal_form(&prod, gb).is_zero() {
                    return Err(Error::NotPrime(format!(
                        "{} and {} are zero divisors modulo the ideal",
                        ring.poly_string(a),
                        ring.poly_string(b)
                    )));
                }
            }
        }
        let mut rng = SplitMix64::new(seed ^ 0x9d5f);
        let random_nonzero = |rng: &mut SplitMix64| -> Option<Polynomial> {
            for _ in 0..20 {
                let d = rng.int_in(1, 2);
                let mut p = Polynomial::zero();
                for m in crate::monomial::monomials_of_degree(ring.weights(), d) {
                    let c = rng.int_in(-2, 2);
                    if c != 0 {
                        let t = Polynomial::monomial(m, ring.field().from_i64(c));
                        p = p.add(&t, ring.field(), ring.order(), ring.weights());
                    }
                }
                let nf = groebner::normal_form(&p, gb);
                if !nf.is_zero() {
                    return Some(nf);
                }
            }
            None
        };
        for _ in 0..20 {
            let (f, g) = match (random_nonzero(&mut rng), random_nonzero(&mut rng)) {
                (Some(f), Some(g)) => (f, g),
                _ => return Ok(()), // residue ring too small to sample; give up quietly
            };
            let prod = f.mul(&g, ring.field(), ring.order(), ring.weights());
            if groebner::normal_form(&prod, gb).is_zero() {
                return Err(Error::NotPrime(
                    "found nonzero residues with zero product".into(),
                ));
            }
        }
        Ok(())
    }

    /// A random rational point of the vanishing locus, away from the origin
    /// where possible.
    pub fn sample_point(&self, rng: &mut SplitMix64, limits: &GbLimits) -> Option<Vec<Coeff>> {
        let ring = &self.ring;
        let field = ring.field();
        match &self.sampler {
            PointSampler::Mapped { source, images } => {
                for _ in 0..24 {
                    let base = source.sample_point(rng, limits)?;
                    let pt: Vec<Coeff> = images.iter().map(|im| im.eval(&base, source.ring().field())).collect();
                    if self.vanishes_at(&pt) {
                        return Some(pt);
                    }
                }
                None
            }
            PointSampler::Direct => {
                // variables that are themselves generators get zeroed
                let mut zeroed = vec![false; ring.nvars()];
                for g in &self.generators {
                    if g.terms.len() == 1 {
                        let (m, _) = &g.terms[0];
                        if m.0.iter().sum::<u32>() == 1 {
                            let idx = m.0.iter().position(|&e| e == 1).unwrap();
                            zeroed[idx] = true;
                        }
                    }
                }
                for _ in 0..24 {
                    let pt: Vec<Coeff> = (0..ring.nvars())
                        .map(|i| {
                            if zeroed[i] {
                                field.zero()
                            } else {
                                let mut v = rng.int_in(-50, 50);
                                if v == 0 {
                                    v = 1;
                                }
                                field.from_i64(v)
                            }
                        })
                        .collect();
                    if self.vanishes_at(&pt) {
                        return Some(pt);
                    }
                }
                None
            }
        }
    }

    fn vanishes_at(&self, pt: &[Coeff]) -> bool {
        let field = self.ring.field();
        self.generators
            .iter()
            .chain(self.ring.relations())
            .all(|g| field.is_zero(&g.eval(pt, field)))
    }
}

/// Bass numbers of a module at one prime, with an optional degree
/// refinement at the irrelevant ideal: refined (i, z) counts the degree-(-z)
/// piece of Ext^i(k, M), matching the multiplicity of the shifted injective
/// hull E(k)(-z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BassTable {
    pub prime_label: String,
    pub i_max: usize,
    pub entries: BTreeMap<usize, usize>,
    pub refined: BTreeMap<(usize, i64), usize>,
    pub flags: Vec<String>,
}

impl BassTable {
    pub fn entry(&self, i: usize) -> usize {
        *self.entries.get(&i).unwrap_or(&0)
    }

    pub fn entry_vec(&self) -> Vec<usize> {
        (0..=self.i_max).map(|i| self.entry(i)).collect()
    }

    pub fn refined_at(&self, i: usize, z: i64) -> usize {
        *self.refined.get(&(i, z)).unwrap_or(&0)
    }
}

/// Bass numbers at the irrelevant maximal ideal: dim_k Ext^i(k, M) with
/// degree refinement, for i ≤ i_max.
pub fn bass_at_irrelevant(m: &GradedModule, i_max: usize, limits: &GbLimits) -> Result<BassTable> {
    let ring = m.ring();
    let k = GradedModule::residue_field(ring);
    let res = resolve::minimal_free_resolution(&k, i_max + 1, limits)?;
    let mut entries = BTreeMap::new();
    let mut refined = BTreeMap::new();
    for i in 0..=i_max {
        let ext = resolve::ext_from_resolution(&res, m, i, limits)?;
        let std = ext.all_std_monomials(limits)?;
        entries.insert(i, std.len());
        for (comp, mono) in std {
            let d = mono.degree(ring.weights()) + ext.target_twists()[comp];
            *refined.entry((i, -d)).or_insert(0) += 1;
        }
    }
    Ok(BassTable {
        prime_label: "m".to_string(),
        i_max,
        entries,
        refined,
        flags: Vec::new(),
    })
}

/// Exact Gaussian elimination over the domain R/𝔭 with normal-form zero
/// tests; cross-multiplication keeps everything in the ring.
fn rank_nf_gauss(rows: &[Vec<Polynomial>], pgb: &GroebnerBasis) -> usize {
    let ring = &pgb.ambient;
    let field = ring.field();
    let mut rows: Vec<Vec<Polynomial>> = rows
        .iter()
        .map(|r| r.iter().map(|e| groebner::normal_form(e, pgb)).collect())
        .collect();
    rows.retain(|r| r.iter().any(|e| !e.is_zero()));
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut used_cols = vec![false; ncols];
    let mut rank = 0;
    loop {
        // find a pivot
        let mut pivot: Option<(usize, usize)> = None;
        'scan: for (ri, row) in rows.iter().enumerate() {
            for (ci, e) in row.iter().enumerate() {
                if !used_cols[ci] && !e.is_zero() {
                    pivot = Some((ri, ci));
                    break 'scan;
                }
            }
        }
        let (ri, ci) = match pivot {
            Some(p) => p,
            None => break,
        };
        rank += 1;
        used_cols[ci] = true;
        let prow = rows[ri].clone();
        let pval = prow[ci].clone();
        let mut next_rows = Vec::new();
        for (rj, row) in rows.iter().enumerate() {
            if rj == ri {
                continue;
            }
            let e = &row[ci];
            if e.is_zero() {
                next_rows.push(row.clone());
                continue;
            }
            // pval·row − e·prow
            let new_row: Vec<Polynomial> = row
                .iter()
                .zip(&prow)
                .map(|(a, b)| {
                    let left = a.mul(&pval, field, ring.order(), ring.weights());
                    let right = b.mul(e, field, ring.order(), ring.weights());
                    groebner::normal_form(
                        &left.sub(&right, field, ring.order(), ring.weights()),
                        pgb,
                    )
                })
                .collect();
            if new_row.iter().any(|e| !e.is_zero()) {
                next_rows.push(new_row);
            }
        }
        rows = next_rows;
    }
    rank
}

/// Randomized rank: evaluate the matrix at random points of the vanishing
/// locus; each evaluation bounds the rank from below and generically
/// attains it.
fn rank_by_evaluation(
    rows: &[Vec<Polynomial>],
    p: &PrimeSpec,
    pgb: &GroebnerBasis,
    seed: u64,
    trials: usize,
    limits: &GbLimits,
) -> Option<(usize, bool)> {
    let ring = p.ring();
    let field = ring.field();
    // random evaluation needs the rationals or a large prime field for the
    // vanishing bound to mean anything
    if let crate::field::Field::Prime(ch) = field {
        if *ch < 101 {
            return None;
        }
    }
    let mut rng = SplitMix64::new(seed);
    let nf_rows: Vec<Vec<Polynomial>> = rows
        .iter()
        .map(|r| r.iter().map(|e| groebner::normal_form(e, pgb)).collect())
        .collect();
    let ncols = nf_rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ranks = Vec::new();
    for _ in 0..trials {
        let pt = p.sample_point(&mut rng, limits)?;
        let cols: Vec<Vec<Coeff>> = (0..ncols)
            .map(|c| nf_rows.iter().map(|r| r[c].eval(&pt, field)).collect())
            .collect();
        let mut span = crate::gmod::RowSpan::new(*field, nf_rows.len());
        for col in &cols {
            span.insert(col.clone());
        }
        ranks.push(span.rank());
    }
    let all_equal = ranks.windows(2).all(|w| w[0] == w[1]);
    ranks.into_iter().max().map(|r| (r, all_equal))
}

/// Bass numbers at a homogeneous prime: the rank over R/𝔭 of Ext^i(R/𝔭, M).
pub fn bass_at_graded_prime(
    m: &GradedModule,
    p: &PrimeSpec,
    i_max: usize,
    limits: &GbLimits,
    seed: u64,
    strict: bool,
) -> Result<BassTable> {
    let ring = m.ring();
    if p.ring() != ring {
        return Err(Error::RingMismatch("prime lives over a different ring".into()));
    }
    if !p.is_homogeneous {
        return Err(Error::InvalidModule(
            "graded Bass numbers need a homogeneous prime".into(),
        ));
    }
    if strict {
        p.primality_sanity(limits, seed)?;
    }
    let pgb = p.groebner(limits)?;
    if !p.is_proper(limits)? {
        return Err(Error::NotPrime("the unit ideal is not prime".into()));
    }
    let rp = GradedModule::cyclic(ring, &p.generators)?;
    let res = resolve::minimal_free_resolution(&rp, i_max + 1, limits)?;
    let mut entries = BTreeMap::new();
    let mut flags = Vec::new();
    for i in 0..=i_max {
        let ext = resolve::ext_from_resolution(&res, m, i, limits)?;
        let ext = resolve::pruned_presentation(&ext);
        let ngens = ext.ngens();
        if ngens == 0 {
            entries.insert(i, 0);
            continue;
        }
        // rows of the presentation matrix over R/p, with rank-preserving
        // cleanup: normal forms, zero columns dropped, duplicates removed
        let mut cleaned: Vec<Vec<Polynomial>> = Vec::new();
        for c in ext.columns() {
            let col: Vec<Polynomial> = c
                .comps
                .iter()
                .map(|e| groebner::normal_form(e, pgb))
                .collect();
            if col.iter().all(|e| e.is_zero()) {
                continue;
            }
            if !cleaned.contains(&col) {
                cleaned.push(col);
            }
        }
        let rows: Vec<Vec<Polynomial>> = (0..ngens)
            .map(|r| cleaned.iter().map(|c| c[r].clone()).collect::<Vec<_>>())
            .collect();
        let rank_det = rank_nf_gauss(&rows, pgb);
        if let Some((rank_eval, agreed)) =
            rank_by_evaluation(&rows, p, pgb, seed.wrapping_add(i as u64), 3, limits)
        {
            if !agreed {
                flags.push(format!("i={i}: evaluation ranks disagreed across trials"));
            }
            if rank_eval != rank_det {
                return Err(Error::RankCertification(format!(
                    "i={i}: evaluation rank {rank_eval} vs elimination rank {rank_det}"
                )));
            }
        } else {
            flags.push(format!("i={i}: no point sampler; deterministic rank only"));
        }
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        match crate::oracle::rank_over_domain_bruteforce(&rows, pgb) {
            Ok(rank_minor) => {
                if rank_minor != rank_det {
                    return Err(Error::RankCertification(format!(
                        "i={i}: minor rank {rank_minor} vs elimination rank {rank_det}"
                    )));
                }
            }
            Err(Error::SizeLimit(_)) => {
                flags.push(format!(
                    "i={i}: minor fallback skipped ({ngens}x{ncols} too large)"
                ));
            }
            Err(e) => return Err(e),
        }
        entries.insert(i, ngens - rank_det);
    }
    let label = p
        .generators
        .iter()
        .map(|g| ring.poly_string(g))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(BassTable {
        prime_label: format!("({label})"),
        i_max,
        entries,
        refined: BTreeMap::new(),
        flags,
    })
}

/// The degree of the distinguished invertible element of the graded residue
/// field at 𝔭, or the marker that the residue field is the base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitDegree {
    /// 𝔭 = 𝔪: the graded residue field is k itself.
    ResidueFieldIsBase,
    Deg(u64),
}

/// gcd of the weights of the algebra generators outside 𝔭.
pub fn unit_degree(p: &PrimeSpec, limits: &GbLimits) -> Result<UnitDegree> {
    if !p.is_homogeneous {
        return Err(Error::InvalidModule("unit degree needs a homogeneous prime".into()));
    }
    let ring = p.ring();
    let mut g: u64 = 0;
    for i in 0..ring.nvars() {
        if !p.contains(&ring.var_poly(i), limits)? {
            g = gcd_u64(g, ring.weights()[i] as u64);
        }
    }
    if g == 0 {
        Ok(UnitDegree::ResidueFieldIsBase)
    } else {
        Ok(UnitDegree::Deg(g))
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Whether the shifted injective hulls E(R/𝔭)(−n) and E(R/𝔭)(−k) coincide:
/// exactly when deg(t_𝔭) divides k − n.
pub fn shifts_isomorphic(p: &PrimeSpec, n: i64, k: i64, limits: &GbLimits) -> Result<bool> {
    match unit_degree(p, limits)? {
        UnitDegree::ResidueFieldIsBase => Ok(n == k),
        UnitDegree::Deg(d) => Ok((k - n).rem_euclid(d as i64) == 0),
    }
}

/// The homogeneous part of a (typically non-homogeneous) ideal, accumulated
/// degree by degree up to a bound, with stabilization and dimension
/// certificates.
#[derive(Debug, Clone)]
pub struct StarIdeal {
    pub prime: PrimeSpec,
    pub degree_bound: i64,
    pub stabilized: bool,
    pub dim_ok: bool,
}

impl StarIdeal {
    /// Certified equal to the full homogeneous subideal.
    pub fn exact(&self) -> bool {
        self.stabilized && self.dim_ok
    }

    pub fn flags(&self) -> Vec<String> {
        let mut f = vec!["truncated".to_string()];
        if !self.stabilized {
            f.push("unstabilized".to_string());
        }
        if !self.dim_ok {
            f.push("dimension check failed".to_string());
        }
        f
    }
}

/// Largest homogeneous ideal inside 𝔭, truncated at a degree bound. Each
/// graded piece 𝔭 ∩ R_d is the kernel of the k-linear normal-form map on a
/// monomial basis of R_d.
pub fn star_ideal(
    p: &PrimeSpec,
    degree_bound: i64,
    n_stab: usize,
    limits: &GbLimits,
) -> Result<StarIdeal> {
    let ring = p.ring();
    let field = ring.field();
    if p.is_homogeneous {
        // already homogeneous: the largest homogeneous subideal is p itself
        return Ok(StarIdeal {
            prime: p.clone(),
            degree_bound,
            stabilized: true,
            dim_ok: true,
        });
    }
    let pgb = p.groebner(limits)?;
    let mut found: Vec<Polynomial> = Vec::new();
    let mut prev_gb = groebner::groebner_basis(&found, ring, None, limits)?.generators;
    let mut stable_run = 0usize;
    for d in 1..=degree_bound {
        let basis = ring.std_monomials(d);
        if !basis.is_empty() {
            // coordinates of the normal forms over their joint support
            let mut support: Vec<(usize, Monomial)> = Vec::new();
            let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
            let nfs: Vec<Polynomial> = basis
                .iter()
                .map(|mono| {
                    groebner::normal_form(
                        &Polynomial::monomial(mono.clone(), field.one()),
                        pgb,
                    )
                })
                .collect();
            for nf in &nfs {
                for (mono, _) in &nf.terms {
                    if !index.contains_key(mono) {
                        index.insert(mono.clone(), support.len());
                        support.push((0, mono.clone()));
                    }
                }
            }
            let cols: Vec<Vec<Coeff>> = nfs
                .iter()
                .map(|nf| {
                    let mut v = vec![field.zero(); support.len()];
                    for (mono, c) in &nf.terms {
                        v[index[mono]] = c.clone();
                    }
                    v
                })
                .collect();
            for kv in kernel_basis(field, support.len(), &cols) {
                let mut poly = Polynomial::zero();
                for (bi, c) in kv.iter().enumerate() {
                    if !field.is_zero(c) {
                        let t = Polynomial::monomial(basis[bi].clone(), c.clone());
                        poly = poly.add(&t, field, ring.order(), ring.weights());
                    }
                }
                if !poly.is_zero() {
                    found.push(poly);
                }
            }
        }
        let cur_gb = groebner::groebner_basis(&found, ring, None, limits)?.generators;
        if cur_gb == prev_gb {
            stable_run += 1;
        } else {
            stable_run = 0;
        }
        prev_gb = cur_gb;
    }
    let stabilized = stable_run >= n_stab;
    let dim_found = krull_dim_from_gb(&prev_gb, ring);
    let dim_p = krull_dim_from_gb(&pgb.generators, ring);
    let dim_ok = dim_found == dim_p + 1;
    let prime = PrimeSpec::new(ring, found)?;
    Ok(StarIdeal {
        prime,
        degree_bound,
        stabilized,
        dim_ok,
    })
}

/// Krull dimension of P/(ideal) from the leading terms of a Gröbner basis:
/// the largest variable subset meeting no leading monomial's support.
fn krull_dim_from_gb(gb: &[Polynomial], ring: &GradedRing) -> usize {
    let nv = ring.nvars();
    let lts: Vec<&Monomial> = gb.iter().filter_map(|g| g.leading().map(|(m, _)| m)).collect();
    if lts.iter().any(|m| m.is_one()) {
        return 0; // unit ideal: dimension of the empty set, reported as 0
    }
    let mut best = 0;
    for mask in 0..(1u32 << nv) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = lts.iter().all(|m| {
            // some variable of the leading term lies outside the subset
            m.0.iter()
                .enumerate()
                .any(|(i, &e)| e > 0 && (mask >> i) & 1 == 0)
                || m.is_one()
        });
        if independent {
            best = size;
        }
    }
    best
}

/// Translation of a graded Bass table at 𝔭* to the Bass numbers at a
/// non-homogeneous prime: zero at i = 0, shifted by one above.
pub fn translate_bass(graded: &BassTable, prime_label: &str) -> BassTable {
    let mut entries = BTreeMap::new();
    entries.insert(0, 0);
    for i in 0..=graded.i_max {
        entries.insert(i + 1, graded.entry(i));
    }
    BassTable {
        prime_label: prime_label.to_string(),
        i_max: graded.i_max + 1,
        entries,
        refined: BTreeMap::new(),
        flags: graded.flags.clone(),
    }
}

/// χ: the least homological index with a nonzero Bass number at 𝔪, when it
/// occurs within the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionIndicator {
    Value(usize),
    NoneUpTo(usize),
}

pub fn torsion_indicator(
    m: &GradedModule,
    i_max: usize,
    limits: &GbLimits,
) -> Result<TorsionIndicator> {
    let table = bass_at_irrelevant(m, i_max, limits)?;
    for i in 0..=i_max {
        if table.entry(i) > 0 {
            return Ok(TorsionIndicator::Value(i));
        }
    }
    Ok(TorsionIndicator::NoneUpTo(i_max))
}

/// Contraction 𝔭 ∩ R^(n) as a prime of the presentation ring, carrying a
/// point sampler that pushes points of 𝔭 through the lift map.
pub fn contract_prime(
    p: &PrimeSpec,
    v: &veronese::VeroneseRing,
    limits: &GbLimits,
) -> Result<PrimeSpec> {
    let gens = veronese::contract_prime_gens(&p.generators, v, limits)?;
    Ok(PrimeSpec::new(&v.presentation, gens)?.with_sampler(PointSampler::Mapped {
        source: Box::new(p.clone()),
        images: v
            .lift_monomials
            .iter()
            .map(|mono| Polynomial::monomial(mono.clone(), p.ring().field().one()))
            .collect(),
    }))
}

/// Per-index comparison of Bass numbers across the Veronese: the table of M
/// at 𝔭 over R against the table of M^(n) at 𝔭 ∩ R^(n) over R^(n).
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub left: BassTable,
    pub right: BassTable,
    pub equal: bool,
    pub first_mismatch: Option<(usize, usize, usize)>,
}

pub fn verify_bass_transfer(
    m: &GradedModule,
    n: u32,
    p: &PrimeSpec,
    i_max: usize,
    limits: &GbLimits,
    seed: u64,
) -> Result<TransferReport> {
    let ring = m.ring();
    if !p.is_homogeneous {
        return Err(Error::InvalidModule(
            "the transfer statement is about graded primes".into(),
        ));
    }
    if p.is_irrelevant(limits)? {
        return Err(Error::InvalidModule(
            "the transfer statement excludes the irrelevant maximal ideal".into(),
        ));
    }
    let v = veronese::veronese_ring(ring, n, limits)?;
    let left = bass_at_graded_prime(m, p, i_max, limits, seed, false)?;
    let mv = veronese::veronese_module(m, &v, limits)?;
    let q = contract_prime(p, &v, limits)?;
    let right = bass_at_graded_prime(&mv.value, &q, i_max, limits, seed.wrapping_add(101), false)?;
    let mut first_mismatch = None;
    for i in 0..=i_max {
        if left.entry(i) != right.entry(i) {
            first_mismatch = Some((i, left.entry(i), right.entry(i)));
            break;
        }
    }
    Ok(TransferReport {
        equal: first_mismatch.is_none(),
        left,
        right,
        first_mismatch,
    })
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
    fn bass_of_residue_field_matches_betti() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        let t = bass_at_irrelevant(&k, 3, &lims()).unwrap();
        assert_eq!(t.entry_vec(), vec![1, 2, 1, 0]);
        // refined values sit at z = i for the Koszul self-duality:
        // Ext^1(k,k) lives in internal degree -1, counted as z = 1
        assert_eq!(t.refined_at(1, 1), 2);
        assert_eq!(t.refined_at(2, 2), 1);
    }

    #[test]
    fn bass_of_polynomial_ring_at_irrelevant() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let t = bass_at_irrelevant(&m, 2, &lims()).unwrap();
        assert_eq!(t.entry_vec(), vec![0, 0, 1]);
        assert_eq!(t.refined_at(2, 2), 1);
    }

    #[test]
    fn socle_dimension_shows_at_index_zero() {
        let r = qq_xy();
        let m = GradedModule::cyclic(
            &r,
            &[r.parse("x^2").unwrap(), r.parse("x*y").unwrap(), r.parse("y^2").unwrap()],
        )
        .unwrap();
        let t = bass_at_irrelevant(&m, 1, &lims()).unwrap();
        assert_eq!(t.entry(0), 2);
        assert_eq!(t.refined_at(0, -1), 2);
    }

    #[test]
    fn bass_at_height_one_prime_of_plane() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let t = bass_at_graded_prime(&m, &p, 2, &lims(), 7, true).unwrap();
        assert_eq!(t.entry_vec(), vec![0, 1, 0]);
        assert!(t.flags.is_empty(), "flags: {:?}", t.flags);
    }

    #[test]
    fn hom_of_cyclic_into_itself_is_rank_one() {
        let r = qq_xy();
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let m = GradedModule::cyclic(&r, &[r.parse("x").unwrap()]).unwrap();
        let t = bass_at_graded_prime(&m, &p, 0, &lims(), 3, false).unwrap();
        assert_eq!(t.entry(0), 1);
    }

    #[test]
    fn disjoint_support_gives_zero_table() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let t = bass_at_graded_prime(&k, &p, 2, &lims(), 5, false).unwrap();
        assert_eq!(t.entry_vec(), vec![0, 0, 0]);
    }

    #[test]
    fn unit_degree_examples() {
        let r = qq_xy();
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        assert_eq!(unit_degree(&p, &lims()).unwrap(), UnitDegree::Deg(1));
        let w = GradedRing::polynomial(Field::Rationals, &["x", "y"], &[2, 3]).unwrap();
        let py = PrimeSpec::parse(&w, &["y"]).unwrap();
        assert_eq!(unit_degree(&py, &lims()).unwrap(), UnitDegree::Deg(2));
        let pzero = PrimeSpec::parse(&w, &[]).unwrap();
        assert_eq!(unit_degree(&pzero, &lims()).unwrap(), UnitDegree::Deg(1));
        let pm = PrimeSpec::parse(&w, &["x", "y"]).unwrap();
        assert_eq!(
            unit_degree(&pm, &lims()).unwrap(),
            UnitDegree::ResidueFieldIsBase
        );
    }

    #[test]
    fn shift_isomorphism_classification() {
        let r = qq_xy();
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        assert!(shifts_isomorphic(&p, 0, 5, &lims()).unwrap());
        let w = GradedRing::polynomial(Field::Rationals, &["x", "y"], &[2, 3]).unwrap();
        let py = PrimeSpec::parse(&w, &["y"]).unwrap();
        assert!(!shifts_isomorphic(&py, 0, 3, &lims()).unwrap());
        assert!(shifts_isomorphic(&py, 0, 4, &lims()).unwrap());
        assert!(shifts_isomorphic(&py, 3, 3, &lims()).unwrap());
    }

    #[test]
    fn star_of_shifted_point_in_line() {
        let r = GradedRing::polynomial(Field::Rationals, &["x"], &[1]).unwrap();
        let p = PrimeSpec::parse(&r, &["x - 1"]).unwrap();
        let s = star_ideal(&p, 4, 3, &lims()).unwrap();
        assert!(s.prime.generators.is_empty());
        assert!(s.stabilized);
        assert!(s.dim_ok);
    }

    #[test]
    fn star_of_homogeneous_prime_is_itself() {
        let r = qq_xy();
        let p = PrimeSpec::parse(&r, &["x - y"]).unwrap();
        let s = star_ideal(&p, 4, 3, &lims()).unwrap();
        assert!(s.exact());
        let gb = s.prime.groebner(&lims()).unwrap();
        assert!(groebner::ideal_member(&r.parse("x - y").unwrap(), gb));
    }

    #[test]
    fn star_of_point_ideal() {
        let r = qq_xy();
        let p = PrimeSpec::parse(&r, &["x - 1", "y"]).unwrap();
        let s = star_ideal(&p, 4, 3, &lims()).unwrap();
        assert!(s.exact(), "stabilized={} dim_ok={}", s.stabilized, s.dim_ok);
        let gb = s.prime.groebner(&lims()).unwrap();
        assert!(groebner::ideal_member(&r.parse("y").unwrap(), gb));
        assert!(!groebner::ideal_member(&r.parse("x").unwrap(), gb));
    }

    #[test]
    fn translation_shifts_by_one() {
        let mut entries = BTreeMap::new();
        entries.insert(0usize, 1usize);
        let t = BassTable {
            prime_label: "(y)".into(),
            i_max: 2,
            entries,
            refined: BTreeMap::new(),
            flags: vec![],
        };
        let out = translate_bass(&t, "(x - 1, y)");
        assert_eq!(out.entry_vec(), vec![0, 1, 0, 0]);
        let zero = BassTable {
            prime_label: "(y)".into(),
            i_max: 2,
            entries: BTreeMap::new(),
            refined: BTreeMap::new(),
            flags: vec![],
        };
        assert_eq!(translate_bass(&zero, "q").entry_vec(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn torsion_indicator_examples() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        assert_eq!(
            torsion_indicator(&k, 3, &lims()).unwrap(),
            TorsionIndicator::Value(0)
        );
        let m = GradedModule::ring_module(&r);
        assert_eq!(
            torsion_indicator(&m, 3, &lims()).unwrap(),
            TorsionIndicator::Value(2)
        );
        let half = GradedModule::cyclic(&r, &[r.parse("x").unwrap()]).unwrap();
        assert_eq!(
            torsion_indicator(&half, 3, &lims()).unwrap(),
            TorsionIndicator::Value(1)
        );
        assert_eq!(
            torsion_indicator(&m, 1, &lims()).unwrap(),
            TorsionIndicator::NoneUpTo(1)
        );
    }

    #[test]
    fn primality_sanity_rejects_square() {
        let r = qq_xy();
        let p = PrimeSpec::parse(&r, &["x^2"]).unwrap();
        assert!(matches!(
            p.primality_sanity(&lims(), 11),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn torsion_does_not_change_bass_away_from_irrelevant() {
        // killing the m-torsion leaves the table at any other graded prime
        // untouched
        let r = qq_xy();
        let free = GradedModule::ring_module(&r);
        let fl = GradedModule::cyclic(&r, &[r.parse("x^2").unwrap(), r.parse("y").unwrap()])
            .unwrap();
        let m = free.direct_sum(&fl).unwrap();
        let q = m.torsion_free_quotient(&lims()).unwrap();
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let tm = bass_at_graded_prime(&m, &p, 2, &lims(), 9, false).unwrap();
        let tq = bass_at_graded_prime(&q, &p, 2, &lims(), 9, false).unwrap();
        assert_eq!(tm.entry_vec(), tq.entry_vec());
        assert_eq!(tm.entry_vec(), vec![0, 1, 0]);
    }

    #[test]
    fn irrelevant_table_of_k_matches_betti_totals() {
        for ring in [
            qq_xy(),
            GradedRing::quotient(Field::Rationals, &["x", "y"], &[1, 1], &["x^2"]).unwrap(),
            GradedRing::polynomial(Field::Rationals, &["x", "y"], &[2, 3]).unwrap(),
        ] {
            let k = GradedModule::residue_field(&ring);
            let bass = bass_at_irrelevant(&k, 3, &lims()).unwrap();
            let betti = crate::resolve::betti_table(&k, 3, &lims()).unwrap();
            assert_eq!(bass.entry_vec(), betti.totals(), "over {ring}");
        }
    }

    #[test]
    fn duality_identity_on_a_weighted_ring() {
        // betti of M equals the refined bass table of its dual, also under
        // non-standard weights
        let r = GradedRing::polynomial(Field::Rationals, &["x", "y"], &[2, 3]).unwrap();
        let m = GradedModule::cyclic(&r, &[r.parse("x^2").unwrap(), r.parse("y").unwrap()])
            .unwrap();
        assert!(m.is_finite_length(&lims()).unwrap());
        let bt = crate::resolve::betti_table(&m, 3, &lims()).unwrap();
        let dual = m.matlis_dual(&lims()).unwrap();
        let bass = bass_at_irrelevant(&dual, 3, &lims()).unwrap();
        let mut keys: Vec<(usize, i64)> = bt.entries.keys().cloned().collect();
        keys.extend(bass.refined.keys().cloned());
        keys.sort();
        keys.dedup();
        for (i, z) in keys {
            if i > 3 {
                continue;
            }
            assert_eq!(bt.get(i, z), bass.refined_at(i, z), "at ({i}, {z})");
        }
    }

    #[test]
    fn bass_tables_over_prime_fields() {
        // the whole pipeline over a large prime field: resolution, Ext,
        // all three rank routes
        let r = GradedRing::polynomial(Field::Prime(10007), &["x", "y"], &[1, 1]).unwrap();
        let m = GradedModule::ring_module(&r);
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let t = bass_at_graded_prime(&m, &p, 2, &lims(), 77, false).unwrap();
        assert_eq!(t.entry_vec(), vec![0, 1, 0]);
        assert!(t.flags.is_empty(), "flags: {:?}", t.flags);
        let k = GradedModule::residue_field(&r);
        let irr = bass_at_irrelevant(&k, 2, &lims()).unwrap();
        assert_eq!(irr.entry_vec(), vec![1, 2, 1]);
        // a small characteristic skips the evaluation route but still
        // certifies deterministically
        let r2 = GradedRing::polynomial(Field::Prime(7), &["x", "y"], &[1, 1]).unwrap();
        let m2 = GradedModule::ring_module(&r2);
        let p2 = PrimeSpec::parse(&r2, &["x"]).unwrap();
        let t2 = bass_at_graded_prime(&m2, &p2, 2, &lims(), 78, false).unwrap();
        assert_eq!(t2.entry_vec(), vec![0, 1, 0]);
        assert!(t2.flags.iter().any(|f| f.contains("no point sampler")));
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<GradedRing>();
        assert_send_sync::<GradedModule>();
        assert_send_sync::<PrimeSpec>();
        assert_send_sync::<BassTable>();
    }

    #[test]
    fn transfer_identity_for_n_equal_one() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let rep = verify_bass_transfer(&m, 1, &p, 2, &lims(), 17).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.left.entry_vec(), rep.right.entry_vec());
    }

    #[test]
    fn transfer_vanishes_for_finite_length_modules() {
        // a finite-length module is supported only at the irrelevant ideal,
        // so both sides of the transfer are zero at any other graded prime
        let r = qq_xy();
        let m = GradedModule::cyclic(
            &r,
            &[r.parse("x^3").unwrap(), r.parse("x*y").unwrap(), r.parse("y^2").unwrap()],
        )
        .unwrap();
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let rep = verify_bass_transfer(&m, 2, &p, 2, &lims(), 55).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.left.entry_vec(), vec![0, 0, 0]);
    }

    #[test]
    fn transfer_at_index_zero_for_shifted_cyclic() {
        // (R/(x))(-1) across the quadratic Veronese at p = (x): the socle
        // multiplicity at index zero transfers
        let r = qq_xy();
        let m = GradedModule::cyclic(&r, &[r.parse("x").unwrap()]).unwrap().shift(1);
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let rep = verify_bass_transfer(&m, 2, &p, 1, &lims(), 31).unwrap();
        assert!(rep.equal, "mismatch: {:?}", rep.first_mismatch);
        assert_eq!(rep.left.entry(0), 1);
    }

    #[test]
    fn transfer_across_quadratic_veronese() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let p = PrimeSpec::parse(&r, &["x"]).unwrap();
        let rep = verify_bass_transfer(&m, 2, &p, 2, &lims(), 23).unwrap();
        assert_eq!(rep.left.entry_vec(), vec![0, 1, 0]);
        assert!(rep.equal, "mismatch: {:?}", rep.first_mismatch);
    }
}
