//! Brute-force reference implementations used to cross-check the fast paths.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::nests::{prenest_op, Pair};

/// Largest group order the subset scan accepts (`2^(n^2)` subsets).
pub const SUBSET_SCAN_CAP: usize = 4;

/// Every pre-nest of `G`, found by testing all nonempty subsets of `G × G`.
/// Each result is a sorted pair list.
pub fn prenests_by_subset_scan(g: &FiniteGroup) -> Result<Vec<Vec<Pair>>> {
    let n = g.order();
    if n > SUBSET_SCAN_CAP {
        return Err(Error::OrderCapExceeded { order: n, cap: SUBSET_SCAN_CAP });
    }
    let cells = n * n;
    let pair = |i: usize| (i / n, i % n);
    // op[i][j] = index of op(pair i, pair j)
    let op: Vec<Vec<usize>> = (0..cells)
        .map(|i| {
            (0..cells)
                .map(|j| {
                    let (a, b) = prenest_op(g, pair(i), pair(j));
                    a * n + b
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << cells) {
        let closed = (0..cells)
            .filter(|&i| mask >> i & 1 == 1)
            .all(|i| (0..cells).filter(|&j| mask >> j & 1 == 1).all(|j| mask >> op[i][j] & 1 == 1));
        if closed {
            out.push((0..cells).filter(|&i| mask >> i & 1 == 1).map(pair).collect());
        }
    }
    Ok(out)
}

/// `{y x y^-1 : y ∈ G}`, sorted.
pub fn conjugacy_class_by_conjugation(g: &FiniteGroup, x: Elem) -> Vec<Elem> {
    let set: BTreeSet<Elem> = g.elements().map(|y| g.conj(y, x)).collect();
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, trivial};

    #[test]
    fn small_counts() {
        assert_eq!(prenests_by_subset_scan(&trivial()).unwrap(), vec![vec![(0, 0)]]);
        // subgroups of C2 × C2^op = C2 × C2: five of them
        assert_eq!(prenests_by_subset_scan(&cyclic(2).unwrap()).unwrap().len(), 5);
        assert!(matches!(
            prenests_by_subset_scan(&cyclic(5).unwrap()),
            Err(Error::OrderCapExceeded { order: 5, cap: 4 })
        ));
    }
}
