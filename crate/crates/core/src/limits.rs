//! Configurable resource limits. Computations fail loudly with a
//! [`crate::error::Error::ResourceLimit`] naming the limit instead of hanging.

#[derive(Debug, Clone)]
pub struct GbLimits {
    /// Maximum number of basis elements a Gröbner computation may hold.
    pub max_basis: usize,
    /// Maximum weighted degree of any leading term produced.
    pub max_degree: i64,
    /// Maximum number of terms in any polynomial produced.
    pub max_terms: usize,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_basis: 10_000,
            max_degree: 60,
            max_terms: 100_000,
        }
    }
}
