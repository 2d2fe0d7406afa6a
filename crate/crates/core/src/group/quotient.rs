use std::sync::Arc;

use crate::error::Result;

use super::hom::Homomorphism;
use super::subgroup::Subgroup;
use super::{Elem, FiniteGroup, GroupRef};

/// The natural projection `G -> G/N`.
///
/// Cosets are numbered in order of their least element, so the kernel is
/// coset 0 and `representatives()[i]` is the least element of coset `i`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: GroupRef,
    kernel: Subgroup,
    target: GroupRef,
    projection: Vec<Elem>,
    reps: Vec<Elem>,
}

impl QuotientMap {
    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.projection[x]
    }

    pub fn projection(&self) -> &[Elem] {
        &self.projection
    }

    /// Least element of each coset.
    pub fn representatives(&self) -> &[Elem] {
        &self.reps
    }

    /// Full preimage of a target element, sorted.
    pub fn fiber(&self, y: Elem) -> Vec<Elem> {
        self.source.elements().filter(|&x| self.projection[x] == y).collect()
    }

    pub fn as_homomorphism(&self) -> Homomorphism {
        Homomorphism::trusted(self.source.clone(), self.target.clone(), self.projection.clone())
    }
}

/// Builds the coset table group `G/N`.
pub fn quotient(g: &GroupRef, n: &Subgroup) -> Result<QuotientMap> {
    n.require_normal()?;
    let order = g.order();
    let mut projection = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &k in n.members() {
            projection[g.mul(x, k)] = c;
        }
    }
    let q = reps.len();
    let mut table = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            table.push(projection[g.mul(a, b)] as u32);
        }
    }
    let mut gens: Vec<Elem> = Vec::new();
    for &s in g.gens() {
        let c = projection[s];
        if c != 0 && !gens.contains(&c) {
            gens.push(c);
        }
    }
    let labels = g.labels().map(|l| reps.iter().map(|&r| format!("{}N", l[r])).collect());
    let target = FiniteGroup::from_raw(q, table, Some(gens), labels)?;
    Ok(QuotientMap { source: g.clone(), kernel: n.clone(), target: Arc::new(target), projection, reps })
}

#[cfg(test)]
mod tests {
    use super::super::{all_normal_subgroups, cyclic, subgroup_generated, symmetric, Limits};
    use super::*;
    use crate::error::Error;

    #[test]
    fn s3_mod_a3() {
        let g = Arc::new(symmetric(3).unwrap());
        let c = g.elements().find(|&x| g.elem_order(x) == 3).unwrap();
        let a3 = subgroup_generated(&g, &[c]).unwrap();
        let q = quotient(&g, &a3).unwrap();
        assert_eq!(q.target().order(), 2);
        assert_eq!(q.fiber(0), a3.members());
        assert_eq!(q.as_homomorphism().kernel(), a3);
    }

    #[test]
    fn extreme_kernels() {
        let g = Arc::new(symmetric(3).unwrap());
        let whole = quotient(&g, &Subgroup::whole(g.clone())).unwrap();
        assert_eq!(whole.target().order(), 1);
        let triv = quotient(&g, &Subgroup::trivial(g.clone())).unwrap();
        assert_eq!(triv.target().table(), g.table());
    }

    #[test]
    fn rejects_non_normal() {
        let g = Arc::new(symmetric(3).unwrap());
        let t = g.elements().find(|&x| g.elem_order(x) == 2).unwrap();
        let h = subgroup_generated(&g, &[t]).unwrap();
        assert!(matches!(quotient(&g, &h), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn orders_multiply() {
        for g in [symmetric(4).unwrap(), cyclic(12).unwrap()] {
            let g = Arc::new(g);
            for n in all_normal_subgroups(&g, &Limits::default()).unwrap() {
                let q = quotient(&g, &n).unwrap();
                assert_eq!(q.target().order() * n.order(), g.order());
                q.target().check_associative(1).unwrap();
            }
        }
    }
}
