//! The n-th Veronese functor made computational: presentations of the
//! subring R^(n) and submodules M^(n), and contraction of graded primes.
//!
//! The presentation pipeline works over standard graded source rings. One
//! auxiliary ring joins the source variables with one new variable per
//! degree-n monomial; block elimination of the source variables yields the
//! toric-plus-induced defining ideal, prime contractions, and complete
//! relation modules for Veronese submodules.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gmod::GradedModule;
use crate::groebner;
use crate::limits::GbLimits;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::order::{ModuleOrder, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::GradedRing;
use crate::vecpoly::VecPoly;

/// R^(n) with a finite presentation and the lift of each new variable.
#[derive(Debug, Clone)]
pub struct VeroneseRing {
    pub source: GradedRing,
    pub n: u32,
    /// k[a_1..a_m] / (elimination kernel), new variables of weight n.
    pub presentation: GradedRing,
    /// Monomial of the source ring each new variable lifts to.
    pub lift_monomials: Vec<Monomial>,
    /// Source and new variables joined, modulo J and (a_i − lift_i).
    aux: GradedRing,
}

/// M^(n) presented over the Veronese presentation ring.
#[derive(Debug, Clone)]
pub struct VeroneseModule {
    pub base: VeroneseRing,
    pub value: GradedModule,
    /// The source elements (component, monomial) the generators lift to.
    pub generator_lifts: Vec<(usize, Monomial)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Extend a source polynomial into the auxiliary ring (source vars first).
fn extend_poly(p: &Polynomial, extra: usize) -> Polynomial {
    Polynomial {
        terms: p
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.extend(std::iter::repeat(0).take(extra));
                (Monomial(e), c.clone())
            })
            .collect(),
    }
}

/// Restrict an auxiliary polynomial supported on the new-variable block to
/// the presentation ring's variables.
fn restrict_poly(p: &Polynomial, src_vars: usize) -> Polynomial {
    Polynomial {
        terms: p
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.0[..src_vars].iter().all(|&e| e == 0));
                (Monomial(m.0[src_vars..].to_vec()), c.clone())
            })
            .collect(),
    }
}

fn fresh_names(source: &GradedRing, count: usize) -> Vec<String> {
    let mut prefix = "a".to_string();
    loop {
        let names: Vec<String> = (1..=count).map(|i| format!("{prefix}{i}")).collect();
        if names.iter().all(|n| !source.var_names().contains(n)) {
            return names;
        }
        prefix.push('a');
    }
}

/// Presentation of the n-th Veronese subring. Every algebra generator
/// weight must be coprime to n; the presentation pipeline additionally
/// requires a standard graded source for n > 1.
pub fn veronese_ring(source: &GradedRing, n: u32, limits: &GbLimits) -> Result<VeroneseRing> {
    if n == 0 {
        return Err(Error::HypothesisViolation("n must be positive".into()));
    }
    for &w in source.weights() {
        if gcd(w as u64, n as u64) != 1 {
            return Err(Error::HypothesisViolation(format!(
                "generator weight {w} shares a factor with n = {n}"
            )));
        }
    }
    if n == 1 {
        return Ok(VeroneseRing {
            source: source.clone(),
            n: 1,
            presentation: source.clone(),
            lift_monomials: (0..source.nvars())
                .map(|i| Monomial::var(source.nvars(), i))
                .collect(),
            aux: source.clone(),
        });
    }
    if !source.is_standard_graded() {
        return Err(Error::HypothesisViolation(
            "presentation unavailable: the Veronese pipeline needs a standard graded source"
                .into(),
        ));
    }
    // new variables: one per degree-n monomial, named in descending
    // lexicographic order of their lifts
    let mut lifts = monomials_of_degree(source.weights(), n as i64);
    lifts.sort_by(|a, b| MonomialOrder::Lex.cmp(b, a, source.weights()));
    let m = lifts.len();
    let sv = source.nvars();
    let names = fresh_names(source, m);
    let aux = build_aux_ring(source, n, &lifts, &names)?;
    // defining ideal: (J + (a - lift)) ∩ k[a]
    let mut keep = vec![false; sv];
    keep.extend(vec![true; m]);
    let kernel = groebner::eliminate(&[], &aux, &keep, limits)?;
    let defining: Vec<Polynomial> = kernel.iter().map(|p| restrict_poly(p, sv)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let presentation = GradedRing::build(
        *source.field(),
        &name_refs,
        &vec![n; m],
        defining,
        source.order().clone(),
    )?;
    Ok(VeroneseRing {
        source: source.clone(),
        n,
        presentation,
        lift_monomials: lifts,
        aux,
    })
}

fn build_aux_ring(
    source: &GradedRing,
    n: u32,
    lifts: &[Monomial],
    names: &[String],
) -> Result<GradedRing> {
    let sv = source.nvars();
    let m = lifts.len();
    let mut vars: Vec<&str> = source.var_names().iter().map(|s| s.as_str()).collect();
    let mut name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    vars.append(&mut name_refs);
    let mut weights = source.weights().to_vec();
    weights.extend(vec![n; m]);
    let mut relations: Vec<Polynomial> = source
        .relations()
        .iter()
        .map(|p| extend_poly(p, m))
        .collect();
    let field = source.field();
    for (i, lift) in lifts.iter().enumerate() {
        let mut e = vec![0u32; sv + m];
        e[sv + i] = 1;
        let a_var = Polynomial::monomial(Monomial(e), field.one());
        let lift_ext = {
            let mut le = lift.0.clone();
            le.extend(std::iter::repeat(0).take(m));
            Polynomial::monomial(Monomial(le), field.neg(&field.one()))
        };
        relations.push(a_var.add(&lift_ext, field, source.order(), &weights));
    }
    // elimination order: source variables dominate
    let mut elim_mask = vec![true; sv];
    elim_mask.extend(vec![false; m]);
    GradedRing::build(
        *field,
        &vars,
        &weights,
        relations,
        MonomialOrder::Elim { eliminate: elim_mask },
    )
}

impl VeroneseRing {
    /// Substitute lifts for the new variables: k[a]-polynomial → source ring.
    pub fn push_down(&self, p: &Polynomial) -> Polynomial {
        let source = &self.source;
        let field = source.field();
        let images: Vec<Polynomial> = self
            .lift_monomials
            .iter()
            .map(|m| Polynomial::monomial(m.clone(), field.one()))
            .collect();
        let q = p.substitute(
            &images,
            field,
            source.order(),
            source.weights(),
            source.nvars(),
        );
        source.nf(&q)
    }
}

/// Contraction 𝔭 ∩ R^(n) of a homogeneous ideal, via elimination in the
/// auxiliary ring; certified by substituting the lifts back into the output.
pub fn contract_prime_gens(
    p_gens: &[Polynomial],
    v: &VeroneseRing,
    limits: &GbLimits,
) -> Result<Vec<Polynomial>> {
    let source = &v.source;
    for g in p_gens {
        if !g.is_homogeneous(source.weights()) {
            return Err(Error::InvalidModule(
                "contraction requires homogeneous generators".into(),
            ));
        }
    }
    if v.n == 1 {
        return Ok(p_gens.to_vec());
    }
    let sv = source.nvars();
    let m = v.lift_monomials.len();
    let lifted: Vec<Polynomial> = p_gens.iter().map(|g| extend_poly(g, m)).collect();
    let mut keep = vec![false; sv];
    keep.extend(vec![true; m]);
    let out = groebner::eliminate(&lifted, &v.aux, &keep, limits)?;
    let s = &v.presentation;
    let mut gens: Vec<Polynomial> = out
        .iter()
        .map(|p| s.nf(&restrict_poly(p, sv)))
        .filter(|p| !p.is_zero())
        .collect();
    gens.dedup();
    // certificate: every contraction generator substitutes into 𝔭
    let pgb = groebner::groebner_basis(p_gens, source, None, limits)?;
    for g in &gens {
        let down = v.push_down(g);
        if !groebner::ideal_member(&down, &pgb) {
            return Err(Error::InvalidModule(
                "contraction certificate failed: lift substitution left the ideal".into(),
            ));
        }
    }
    Ok(gens)
}

/// M^(n) as a module over the presentation ring: generators span the graded
/// pieces M_{nj} for nj ≤ maxGenDeg(M) + n − 1; the relation module is the
/// complete syzygy module over the subring, found by eliminating the source
/// variables from an auxiliary free module.
pub fn veronese_module(
    m: &GradedModule,
    v: &VeroneseRing,
    limits: &GbLimits,
) -> Result<VeroneseModule> {
    if m.ring() != &v.source {
        return Err(Error::RingMismatch(
            "module does not live over the Veronese source ring".into(),
        ));
    }
    if v.n == 1 {
        return Ok(VeroneseModule {
            base: v.clone(),
            value: m.clone(),
            generator_lifts: (0..m.ngens())
                .map(|i| (i, Monomial::one(v.source.nvars())))
                .collect(),
        });
    }
    let source = &v.source;
    let n = v.n as i64;
    let s = m.ngens();
    if s == 0 {
        return Ok(VeroneseModule {
            base: v.clone(),
            value: GradedModule::zero(&v.presentation),
            generator_lifts: Vec::new(),
        });
    }
    // generator degrees: multiples of n up to maxGenDeg + n - 1
    let min_t = *m.target_twists().iter().min().unwrap();
    let max_gen = m.max_gen_degree().unwrap() + n - 1;
    let mut gen_lifts: Vec<(usize, Monomial)> = Vec::new();
    let mut gen_degrees: Vec<i64> = Vec::new();
    let mut d = min_t.div_euclid(n) * n;
    while d <= max_gen {
        if d >= min_t {
            for (comp, mono) in m.std_monomials_at(d, limits)? {
                gen_lifts.push((comp, mono));
                gen_degrees.push(d);
            }
        }
        d += n;
    }
    if gen_lifts.is_empty() {
        return Ok(VeroneseModule {
            base: v.clone(),
            value: GradedModule::zero(&v.presentation),
            generator_lifts: Vec::new(),
        });
    }
    let sv = source.nvars();
    let mvars = v.lift_monomials.len();
    // stage 1: syzygies over the auxiliary ring of [generators, presentation columns]
    let aux = &v.aux;
    let twists = m.target_twists().to_vec();
    let mut elements: Vec<VecPoly> = Vec::new();
    for (comp, mono) in &gen_lifts {
        let mut e = mono.0.clone();
        e.extend(std::iter::repeat(0).take(mvars));
        elements.push(VecPoly::from_component(
            s,
            *comp,
            Polynomial::monomial(Monomial(e), source.field().one()),
        ));
    }
    for col in m.columns() {
        elements.push(VecPoly {
            comps: col.comps.iter().map(|p| extend_poly(p, mvars)).collect(),
        });
    }
    let syz = groebner::syzygies(&elements, &twists, aux, limits)?;
    let r = gen_lifts.len();
    let mut q_cols: Vec<VecPoly> = Vec::new();
    for col in &syz.columns {
        let first = VecPoly {
            comps: col.comps[..r].to_vec(),
        };
        if !first.is_zero() {
            q_cols.push(first);
        }
    }
    // stage 2: eliminate source variables from the coefficient module
    let mut elim_mask = vec![true; sv];
    elim_mask.extend(vec![false; mvars]);
    let morder = ModuleOrder {
        ring_order: MonomialOrder::Elim { eliminate: elim_mask },
        blocks: vec![0; r],
    };
    let mut stage2 = q_cols;
    for g in aux.quotient_gb() {
        for j in 0..r {
            stage2.push(VecPoly::from_component(r, j, g.clone()));
        }
    }
    let gb = crate::groebner::module_gb_for_gmod(aux, &morder, stage2, limits)?;
    let pres = &v.presentation;
    let mut rel_cols: Vec<VecPoly> = Vec::new();
    for col in gb {
        let pure = col.comps.iter().all(|p| {
            p.terms
                .iter()
                .all(|(mm, _)| mm.0[..sv].iter().all(|&e| e == 0))
        });
        if !pure {
            continue;
        }
        let restricted = VecPoly {
            comps: col
                .comps
                .iter()
                .map(|p| pres.nf(&restrict_poly(p, sv)))
                .collect(),
        };
        if !restricted.is_zero() {
            rel_cols.push(restricted);
        }
    }
    let value = GradedModule::new(pres, gen_degrees, rel_cols)?;
    Ok(VeroneseModule {
        base: v.clone(),
        value,
        generator_lifts: gen_lifts,
    })
}

/// Degreewise report: dim [M^(n)]_d must equal dim [M]_d when n | d and
/// vanish otherwise, across the window.
#[derive(Debug, Clone)]
pub struct HilbertCheckReport {
    pub pass: bool,
    pub mismatches: Vec<(i64, usize, usize)>,
}

pub fn veronese_hilbert_check(
    m: &GradedModule,
    v: &VeroneseRing,
    lo: i64,
    hi: i64,
    limits: &GbLimits,
) -> Result<HilbertCheckReport> {
    let mv = veronese_module(m, v, limits)?;
    let wm = m.hilbert_window(lo, hi, limits)?;
    let wv = mv.value.hilbert_window(lo, hi, limits)?;
    let mut mismatches = Vec::new();
    for d in lo..=hi {
        let expect = if d.rem_euclid(v.n as i64) == 0 {
            wm.dim(d)
        } else {
            0
        };
        if wv.dim(d) != expect {
            mismatches.push((d, expect, wv.dim(d)));
        }
    }
    Ok(HilbertCheckReport {
        pass: mismatches.is_empty(),
        mismatches,
    })
}

/// Length bookkeeping for finite-length modules: the Veronese keeps exactly
/// the pieces in degrees divisible by n.
pub fn veronese_length_check(
    m: &GradedModule,
    v: &VeroneseRing,
    limits: &GbLimits,
) -> Result<bool> {
    let mv = veronese_module(m, v, limits)?;
    let total = mv.value.length(limits)?;
    let data: BTreeMap<i64, usize> = m
        .all_std_monomials(limits)?
        .into_iter()
        .map(|(c, mono)| mono.degree(m.ring().weights()) + m.target_twists()[c])
        .fold(BTreeMap::new(), |mut acc, d| {
            *acc.entry(d).or_insert(0) += 1;
            acc
        });
    let expected: usize = data
        .iter()
        .filter(|(d, _)| d.rem_euclid(v.n as i64) == 0)
        .map(|(_, c)| c)
        .sum();
    Ok(total == expected)
}
