//! Smith form over `Z/p^e` by valuation layers.

use super::ring::{PivotRing, PrimePower};
use super::sparse::{eliminate, SparseRow};
use crate::matrix::SparseIntMatrix;

/// Diagonal of the Smith form of an integer matrix over `Z/p^e`:
/// `counts[v]` entries equal `p^v` (up to units) for `v < e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    pub p: u64,
    pub e: u32,
    pub counts: Vec<usize>,
}

impl LocalInvariants {
    /// Rank over `F_p`.
    pub fn rank_mod_p(&self) -> usize {
        self.counts[0]
    }

    /// Number of nonzero diagonal entries over `Z/p^e`.
    pub fn nonzero(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Eliminate unit pivots, divide what is left by `p`, and repeat.
pub fn local_invariants(a: &SparseIntMatrix, p: u64, e: u32) -> LocalInvariants {
    assert!(e >= 1);
    let mut counts = Vec::with_capacity(e as usize);
    let ring = PrimePower::new(p, e);
    let mut rows: Vec<SparseRow<u64>> = a
        .row_lists()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(c, v)| (c, ring.from_int(&v)))
                .filter(|(_, v)| *v != 0)
                .collect()
        })
        .collect();
    for layer in 0..e {
        let ring = PrimePower::new(p, e - layer);
        let elim = eliminate(&ring, rows, a.cols());
        counts.push(elim.pivots.len());
        rows = elim
            .residual
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|(c, v)| {
                        debug_assert_eq!(v % p, 0);
                        (c, v / p)
                    })
                    .filter(|(_, v)| *v != 0)
                    .collect()
            })
            .collect();
        if rows.iter().all(Vec::is_empty) {
            counts.resize(e as usize, 0);
            break;
        }
    }
    LocalInvariants { p, e, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;

    #[test]
    fn layers_match_valuations() {
        let a = SparseIntMatrix::from_dense(&DenseMatrix::from_rows(&[
            vec![1i64, 0, 0, 0],
            vec![0, 3, 0, 0],
            vec![0, 0, 9, 0],
            vec![0, 0, 0, 6],
        ]));
        let l = local_invariants(&a, 3, 2);
        assert_eq!(l.counts, vec![1, 2]);
        let l = local_invariants(&a, 3, 3);
        assert_eq!(l.counts, vec![1, 2, 1]);
        assert_eq!(local_invariants(&a, 2, 1).counts, vec![3]);
    }
}
