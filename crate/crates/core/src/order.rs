//! Monomial orders: weighted degrevlex, lex, and block elimination orders,
//! plus the module-level orders used for syzygy and subring elimination.

use crate::monomial::Monomial;
use std::cmp::Ordering;

/// A total order on monomials of a fixed ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Weighted degree first, ties by reverse lexicographic comparison.
    DegRevLex,
    /// Pure lexicographic, first variable dominant.
    Lex,
    /// Block order eliminating the flagged variables: degrevlex on the
    /// eliminated block dominates degrevlex on the kept block.
    Elim { eliminate: Vec<bool> },
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    // a > b when the last nonzero entry of a - b is negative
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return if a[i] < b[i] {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial, weights: &[u32]) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => {
                let da = a.degree(weights);
                let db = b.degree(weights);
                da.cmp(&db).then_with(|| revlex(&a.0, &b.0))
            }
            MonomialOrder::Lex => {
                for i in 0..a.0.len() {
                    if a.0[i] != b.0[i] {
                        return a.0[i].cmp(&b.0[i]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Elim { eliminate } => {
                let part = |m: &Monomial, flag: bool| -> (i64, Vec<u32>) {
                    let mut deg = 0i64;
                    let mut exps = Vec::with_capacity(m.0.len());
                    for i in 0..m.0.len() {
                        if eliminate[i] == flag {
                            deg += m.0[i] as i64 * weights[i] as i64;
                            exps.push(m.0[i]);
                        }
                    }
                    (deg, exps)
                };
                let (da, ea) = part(a, true);
                let (db, eb) = part(b, true);
                da.cmp(&db)
                    .then_with(|| revlex(&ea, &eb))
                    .then_with(|| {
                        let (ka, xa) = part(a, false);
                        let (kb, xb) = part(b, false);
                        ka.cmp(&kb).then_with(|| revlex(&xa, &xb))
                    })
            }
        }
    }
}

/// Order on module monomials (monomial, component) of a free module.
///
/// Components are grouped into blocks; lower block index dominates. Within a
/// block the ring order decides, with lower component index breaking ties.
/// Block structure gives the elimination property needed for syzygy
/// extraction: any term in block 0 exceeds every term in block 1.
#[derive(Debug, Clone)]
pub struct ModuleOrder {
    pub ring_order: MonomialOrder,
    /// Block id per component; block 0 is the dominant block.
    pub blocks: Vec<u8>,
}

impl ModuleOrder {
    pub fn flat(ring_order: MonomialOrder, ncomps: usize) -> Self {
        ModuleOrder {
            ring_order,
            blocks: vec![0; ncomps],
        }
    }

    pub fn cmp(
        &self,
        a: &Monomial,
        ca: usize,
        b: &Monomial,
        cb: usize,
        weights: &[u32],
    ) -> Ordering {
        // smaller block id = greater term
        self.blocks[cb]
            .cmp(&self.blocks[ca])
            .then_with(|| self.ring_order.cmp(a, b, weights))
            .then_with(|| cb.cmp(&ca)) // lower component = greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn degrevlex_standard() {
        let w = [1, 1, 1];
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 in degrevlex with x > y > z
        assert_eq!(o.cmp(&m(&[2, 0, 0]), &m(&[1, 1, 0]), &w), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[0, 2, 0]), &w), Ordering::Greater);
        // degree dominates
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0]), &w), Ordering::Greater);
        // classic degrevlex tie-break: xz < y^2  (last nonzero of difference)
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0]), &w), Ordering::Less);
    }

    #[test]
    fn lex_order() {
        let w = [1, 1];
        let o = MonomialOrder::Lex;
        // x > y^5 in lex
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5]), &w), Ordering::Greater);
    }

    #[test]
    fn elimination_property() {
        let w = [1, 1, 1];
        let o = MonomialOrder::Elim {
            eliminate: vec![true, false, false],
        };
        // any monomial containing x beats any x-free monomial
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9]), &w), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 1, 0]), &m(&[1, 0, 0]), &w), Ordering::Less);
    }

    #[test]
    fn module_blocks_dominate() {
        let w = [1, 1];
        let o = ModuleOrder {
            ring_order: MonomialOrder::DegRevLex,
            blocks: vec![0, 1],
        };
        // low-degree term in block 0 beats high-degree term in block 1
        assert_eq!(
            o.cmp(&m(&[0, 0]), 0, &m(&[5, 5]), 1, &w),
            Ordering::Greater
        );
    }
}
