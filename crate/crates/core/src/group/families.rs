use std::sync::Arc;

use crate::error::{Error, Result};

use super::hom::Homomorphism;
use super::perm::{group_from_permutations, Permutation};
use super::product::{direct_product, semidirect_from_generators};
use super::{FiniteGroup, GroupRef, Limits};

pub fn trivial() -> FiniteGroup {
    FiniteGroup::from_raw(1, vec![0], Some(Vec::new()), None).expect("trivial group")
}

/// `C_n` with `a^k` at index `k`.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgs("cyclic group order must be positive".into()));
    }
    let (g, _) = FiniteGroup::from_closure(0usize, &[1 % n], |a, b| (a + b) % n, usize::MAX)?;
    Ok(g)
}

/// `Sym(n)` generated by `(0 1)` and `(0 1 ... n-1)`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgs("degree must be positive".into()));
    }
    if n == 1 {
        return group_from_permutations(1, &[], &Limits::default());
    }
    let transposition = Permutation::from_cycles(n, &[vec![0, 1]])?;
    let long = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect())?;
    group_from_permutations(n, &[transposition, long], &Limits::default())
}

/// Dihedral group of order `2n`, as `C_n ⋊ C_2` with the inversion action.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    let rot = Arc::new(cyclic(n)?);
    let flip = Arc::new(cyclic(2)?);
    let inversion = Homomorphism::new(rot.clone(), rot.clone(), rot.elements().map(|x| rot.inv(x)).collect())?;
    semidirect_from_generators(&rot, &flip, &[inversion])
}

/// The quaternion group of order 8.
pub fn quaternion() -> FiniteGroup {
    // 2x2 matrices over the Gaussian integers, entries as (re, im).
    type M = [[(i64, i64); 2]; 2];
    fn mul(a: &M, b: &M) -> M {
        let cm = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
        let mut out = [[(0, 0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = add(cm(a[r][0], b[0][c]), cm(a[r][1], b[1][c]));
            }
        }
        out
    }
    let one: M = [[(1, 0), (0, 0)], [(0, 0), (1, 0)]];
    let i: M = [[(0, 1), (0, 0)], [(0, 0), (0, -1)]];
    let j: M = [[(0, 0), (1, 0)], [(-1, 0), (0, 0)]];
    FiniteGroup::from_closure(one, &[i, j], mul, 8).expect("Q8 closure").0
}

/// Every group of order at most `max_order` (up to isomorphism, for orders
/// up to 8), with short names.
pub fn small_groups(max_order: usize) -> Vec<(String, GroupRef)> {
    let c = |n: usize| Arc::new(cyclic(n).unwrap());
    let mut out: Vec<(String, GroupRef)> = Vec::new();
    let mut push = |name: &str, g: FiniteGroup| {
        if g.order() <= max_order {
            out.push((name.to_string(), Arc::new(g)));
        }
    };
    push("C1", trivial());
    push("C2", cyclic(2).unwrap());
    push("C3", cyclic(3).unwrap());
    push("C4", cyclic(4).unwrap());
    push("C2xC2", direct_product(&c(2), &c(2)));
    push("C5", cyclic(5).unwrap());
    push("C6", cyclic(6).unwrap());
    push("S3", symmetric(3).unwrap());
    push("C7", cyclic(7).unwrap());
    push("C8", cyclic(8).unwrap());
    push("C4xC2", direct_product(&c(4), &c(2)));
    push("C2xC2xC2", direct_product(&Arc::new(direct_product(&c(2), &c(2))), &c(2)));
    push("D4", dihedral(4).unwrap());
    push("Q8", quaternion());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(trivial().order(), 1);
        assert_eq!(cyclic(6).unwrap().order(), 6);
        assert_eq!(symmetric(1).unwrap().order(), 1);
        assert_eq!(symmetric(2).unwrap().order(), 2);
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(dihedral(5).unwrap().order(), 10);
        assert_eq!(dihedral(1).unwrap().order(), 2);
        assert_eq!(quaternion().order(), 8);
    }

    #[test]
    fn small_groups_are_distinct() {
        let groups = small_groups(8);
        assert_eq!(groups.len(), 14);
        let mut invariants: Vec<(usize, bool, Vec<usize>)> =
            groups.iter().map(|(_, g)| (g.order(), g.is_abelian(), g.order_census())).collect();
        invariants.sort();
        invariants.dedup();
        // D4 and Q8 differ in census; C4xC2 and D4 differ in abelianness.
        assert_eq!(invariants.len(), 14);
        for (_, g) in &groups {
            g.check_associative(3).unwrap();
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion();
        assert_eq!(q.order_census(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }
}
