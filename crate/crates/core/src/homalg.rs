//! Graded maps between finitely presented modules: kernels, images,
//! subquotients. Everything reduces to syzygy computations over the free
//! covers.

use crate::error::{Error, Result};
use crate::gmod::GradedModule;
use crate::groebner;
use crate::limits::GbLimits;
use crate::ring::GradedRing;
use crate::vecpoly::VecPoly;

/// A graded map M → N, recorded by the images of M's generators in N's
/// free cover.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub source: GradedModule,
    pub target: GradedModule,
    /// One column per source generator, living in the target's F0.
    pub columns: Vec<VecPoly>,
}

impl GradedMap {
    pub fn new(source: GradedModule, target: GradedModule, columns: Vec<VecPoly>) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch("map between different rings".into()));
        }
        if columns.len() != source.ngens() {
            return Err(Error::InvalidModule(
                "map needs one column per source generator".into(),
            ));
        }
        for (j, c) in columns.iter().enumerate() {
            if c.ncomps() != target.ngens() {
                return Err(Error::InvalidModule(
                    "map column has wrong number of components".into(),
                ));
            }
            if !c.is_zero() {
                match c.homogeneous_degree(target.target_twists(), target.ring().weights()) {
                    Some(d) if d == source.target_twists()[j] => {}
                    _ => {
                        return Err(Error::InvalidModule(format!(
                            "map column {j} is not homogeneous of the generator degree"
                        )))
                    }
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            columns,
        })
    }

    fn ring(&self) -> &GradedRing {
        self.source.ring()
    }

    /// Generators (in the source free cover) of the kernel preimage
    /// {a in F0(source) : Φ(a) in presentation(target)}.
    pub fn kernel_generators(&self, limits: &GbLimits) -> Result<Vec<VecPoly>> {
        let src_n = self.source.ngens();
        if src_n == 0 {
            return Ok(Vec::new());
        }
        if self.target.ngens() == 0 {
            // everything maps to zero
            return Ok((0..src_n)
                .map(|j| VecPoly::from_component(src_n, j, self.ring().one()))
                .collect());
        }
        let mut combined: Vec<VecPoly> = self.columns.clone();
        combined.extend(self.target.columns().iter().cloned());
        let syz = groebner::syzygies(
            &combined,
            self.target.target_twists(),
            self.ring(),
            limits,
        )?;
        let mut out = Vec::new();
        for col in &syz.columns {
            let first = VecPoly {
                comps: col.comps[..src_n].to_vec(),
            };
            if !first.is_zero() {
                out.push(first);
            }
        }
        Ok(out)
    }

    /// The kernel as a module (a submodule of the source).
    pub fn kernel(&self, limits: &GbLimits) -> Result<GradedModule> {
        if self.target.ngens() == 0 {
            return Ok(self.source.clone());
        }
        let gens = self.kernel_generators(limits)?;
        self.source.submodule(&gens, limits)
    }

    /// The cokernel N / im(Φ).
    pub fn cokernel(&self) -> Result<GradedModule> {
        self.target.quotient_by(&self.columns)
    }
}

/// Homology ker(next)/im(prev) at the middle module of a composable pair
/// prev: A → B, next: B → C with next ∘ prev = 0.
pub fn homology(prev: &GradedMap, next: &GradedMap, limits: &GbLimits) -> Result<GradedModule> {
    let b = &prev.target;
    let ring = b.ring();
    let kgens: Vec<VecPoly> = if next.target.ngens() == 0 {
        (0..b.ngens())
            .map(|j| VecPoly::from_component(b.ngens(), j, ring.one()))
            .collect()
    } else {
        next.kernel_generators(limits)?
    };
    if kgens.is_empty() {
        return Ok(GradedModule::zero(ring));
    }
    let twists: Vec<i64> = kgens
        .iter()
        .map(|g| {
            g.homogeneous_degree(b.target_twists(), ring.weights())
                .ok_or_else(|| Error::InvalidModule("kernel generator not homogeneous".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    // relations: coefficients a with Σ a_t k_t ∈ im(prev) + presentation(B)
    let mut combined = kgens.clone();
    combined.extend(prev.columns.iter().cloned());
    combined.extend(b.columns().iter().cloned());
    let syz = groebner::syzygies(&combined, b.target_twists(), ring, limits)?;
    let mut rel_cols = Vec::new();
    for col in &syz.columns {
        let first = VecPoly {
            comps: col.comps[..kgens.len()].to_vec(),
        };
        if !first.is_zero() {
            rel_cols.push(first);
        }
    }
    GradedModule::new(ring, twists, rel_cols)
}

/// Hom(⊕ R(−a_l), M) = ⊕ M(a_l) as a module: block direct sum of shifts.
pub fn hom_from_free(m: &GradedModule, twists: &[i64]) -> Result<GradedModule> {
    let ring = m.ring();
    let mut acc = GradedModule::zero(ring);
    for &a in twists {
        acc = acc.direct_sum(&m.shift(-a))?;
    }
    Ok(acc)
}

/// The induced map Hom(F_j, M) → Hom(F_{j+1}, M), φ ↦ φ∘d, for a
/// differential given by columns in F_j (one per generator of F_{j+1}).
pub fn hom_induced(
    m: &GradedModule,
    d_columns: &[VecPoly],
    f_twists: &[i64],      // twists of F_j
    f_next_twists: &[i64], // twists of F_{j+1}
) -> Result<GradedMap> {
    let source = hom_from_free(m, f_twists)?;
    let target = hom_from_free(m, f_next_twists)?;
    let g = m.ngens();
    let s_next = f_next_twists.len();
    let mut columns = Vec::with_capacity(source.ngens());
    for l in 0..f_twists.len() {
        for gen in 0..g {
            // source generator (block l, module generator gen)
            let mut col = VecPoly::zero(target.ngens());
            for (h, dcol) in d_columns.iter().enumerate() {
                let entry = &dcol.comps[l];
                if entry.is_zero() {
                    continue;
                }
                let idx = h * g + gen;
                col.comps[idx] = entry.clone();
            }
            debug_assert!(s_next == 0 || col.ncomps() == s_next * g);
            columns.push(col);
        }
    }
    GradedMap::new(source, target, columns)
}

/// Basis-free composition check: next(prev(generator)) reduces to zero in C.
pub fn composes_to_zero(prev: &GradedMap, next: &GradedMap, limits: &GbLimits) -> Result<bool> {
    let ring = prev.ring();
    for col in &prev.columns {
        // push the column through `next`: Σ col_j · next._columns[j]
        let mut acc = VecPoly::zero(next.target.ngens());
        for (j, p) in col.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            acc = acc.add(
                &next.columns[j].mul_poly(p, ring.field(), ring.order(), ring.weights()),
                ring.field(),
                ring.order(),
                ring.weights(),
            );
        }
        if !acc.is_zero() && !next.target.in_presentation(&acc, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::gmod::GradedModule;

    fn qq_xy() -> GradedRing {
        GradedRing::polynomial(Field::Rationals, &["x", "y"], &[1, 1]).unwrap()
    }

    #[test]
    fn kernel_of_multiplication_by_x_on_k() {
        let r = qq_xy();
        let k = GradedModule::residue_field(&r);
        // x: k(-1) -> k is zero, so the kernel is all of k(-1)
        let src = k.shift(1);
        let map = GradedMap::new(
            src.clone(),
            k.clone(),
            vec![VecPoly::from_component(1, 0, r.parse("x").unwrap())],
        )
        .unwrap();
        let ker = map.kernel(&GbLimits::default()).unwrap();
        let w = ker.hilbert_window(0, 2, &GbLimits::default()).unwrap();
        assert_eq!(w.dim(1), 1);
        assert_eq!(w.dim(0), 0);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let r = qq_xy();
        let m = GradedModule::ring_module(&r);
        let map = GradedMap::new(
            m.clone(),
            m.clone(),
            vec![VecPoly::from_component(1, 0, r.one())],
        )
        .unwrap();
        let ker = map.kernel(&GbLimits::default()).unwrap();
        assert_eq!(ker.ngens(), 0);
    }
}
