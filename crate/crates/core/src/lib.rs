//! Exact computational graded commutative algebra.
//!
//! A library for desk-scale exact computations with positively graded
//! quotient rings over ℚ or 𝔽_p: Gröbner bases and syzygies, minimal graded
//! free resolutions and Betti tables, Bass numbers at graded and
//! non-homogeneous primes, Veronese subrings and submodules, graded Matlis
//! duals of finite-length modules, and degreewise Čech local cohomology over
//! affine semigroup rings. Every number the crate reports is exact.

pub mod bass;
pub mod error;
pub mod field;
pub mod limits;
pub mod localcoh;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod ring;
pub mod rng;
pub mod vecpoly;

pub mod gmod;
pub mod homalg;
pub mod groebner;
pub mod resolve;
pub mod oracle;
pub mod veronese;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::monomial::monomials_of_degree;
    use crate::poly::Polynomial;
    use crate::ring::GradedRing;
    use crate::rng::SplitMix64;

    /// Random homogeneous polynomial of weighted degree d with small
    /// integer coefficients.
    pub fn random_homog(r: &GradedRing, rng: &mut SplitMix64, d: i64) -> Polynomial {
        let mut p = Polynomial::zero();
        for m in monomials_of_degree(r.weights(), d) {
            let c = rng.int_in(-2, 2);
            if c != 0 {
                let t = Polynomial::monomial(m, r.field().from_i64(c));
                p = p.add(&t, r.field(), r.order(), r.weights());
            }
        }
        p
    }
}

pub use error::{Error, Result};
pub use field::{Coeff, Field};
pub use limits::GbLimits;
pub use monomial::Monomial;
pub use order::{ModuleOrder, MonomialOrder};
pub use poly::Polynomial;
pub use ring::GradedRing;
pub use vecpoly::VecPoly;
