use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

use super::{Elem, FiniteGroup, GroupRef, Limits};

/// A subgroup of a parent table group, as a sorted member list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: GroupRef,
    members: Vec<Elem>,
    mask: Vec<bool>,
    normal: bool,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

impl Eq for Subgroup {}

/// Elements of the subgroup generated by `seeds`, in discovery order.
pub(crate) fn closure_members(g: &FiniteGroup, seeds: &[Elem]) -> Vec<Elem> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut out = vec![0];
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        head += 1;
        for &s in seeds {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
    }
    out
}

impl Subgroup {
    /// Wraps a member set after checking closure; computes the normality flag.
    pub fn from_members(parent: GroupRef, members: impl IntoIterator<Item = Elem>) -> Result<Subgroup> {
        let set: BTreeSet<Elem> = members.into_iter().collect();
        let mut mask = vec![false; parent.order()];
        for &x in &set {
            parent.check_elem(x)?;
            mask[x] = true;
        }
        if !mask[0] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &set {
            if !mask[parent.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &set {
                if !mask[parent.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        Ok(Self::trusted(parent, set.into_iter().collect(), mask))
    }

    fn trusted(parent: GroupRef, members: Vec<Elem>, mask: Vec<bool>) -> Subgroup {
        let normal = normality_witness(&parent, &members, &mask).is_none();
        Subgroup { parent, members, mask, normal }
    }

    pub fn trivial(parent: GroupRef) -> Subgroup {
        let mut mask = vec![false; parent.order()];
        mask[0] = true;
        Subgroup { parent, members: vec![0], mask, normal: true }
    }

    pub fn whole(parent: GroupRef) -> Subgroup {
        let n = parent.order();
        Subgroup { parent, members: (0..n).collect(), mask: vec![true; n], normal: true }
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Error with a witness unless the subgroup is normal.
    pub fn require_normal(&self) -> Result<()> {
        match normality_witness(&self.parent, &self.members, &self.mask) {
            None => Ok(()),
            Some((member, by)) => Err(Error::NotNormal { member, by }),
        }
    }

    /// Is this subgroup normal inside the (larger) subgroup `ambient`?
    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        self.is_subset_of(ambient)
            && ambient.members.iter().all(|&g| self.members.iter().all(|&x| self.contains(self.parent.conj(g, x))))
    }

    /// Whether every member commutes with every element of the parent.
    /// Returns a non-commuting pair on failure.
    pub fn central_witness(&self) -> Option<(Elem, Elem)> {
        let g = &self.parent;
        for &c in &self.members {
            for &s in g.gens() {
                if g.mul(c, s) != g.mul(s, c) {
                    return Some((c, s));
                }
            }
        }
        None
    }

    /// The subgroup as a table group of its own. Local index `i` is
    /// `members()[i]`, so the identity stays at index 0.
    pub fn to_group(&self) -> FiniteGroup {
        let n = self.members.len();
        let mut local = vec![usize::MAX; self.parent.order()];
        for (i, &x) in self.members.iter().enumerate() {
            local[x] = i;
        }
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.members {
            for &b in &self.members {
                table.push(local[self.parent.mul(a, b)] as u32);
            }
        }
        let gens = {
            let mut gens = Vec::new();
            let mut inside = vec![false; self.parent.order()];
            inside[0] = true;
            for &x in &self.members {
                if !inside[x] {
                    gens.push(x);
                    for m in closure_members(&self.parent, &gens) {
                        inside[m] = true;
                    }
                }
            }
            gens.into_iter().map(|x| local[x]).collect()
        };
        let labels = self.parent.labels().map(|l| self.members.iter().map(|&x| l[x].clone()).collect());
        FiniteGroup::from_raw(n, table, Some(gens), labels).expect("subgroup table is a group")
    }

    /// Local index of a parent element, if it is a member.
    pub fn local_index(&self, x: Elem) -> Option<usize> {
        if self.contains(x) {
            self.members.binary_search(&x).ok()
        } else {
            None
        }
    }
}

fn normality_witness(g: &FiniteGroup, members: &[Elem], mask: &[bool]) -> Option<(Elem, Elem)> {
    for &s in g.gens() {
        for &x in members {
            if !mask[g.conj(s, x)] {
                return Some((x, s));
            }
        }
    }
    None
}

/// Smallest subgroup containing `seeds`.
pub fn subgroup_generated(g: &GroupRef, seeds: &[Elem]) -> Result<Subgroup> {
    for &s in seeds {
        g.check_elem(s)?;
    }
    let members = closure_members(g, seeds);
    let mut mask = vec![false; g.order()];
    for &x in &members {
        mask[x] = true;
    }
    let mut members = members;
    members.sort_unstable();
    Ok(Subgroup::trusted(g.clone(), members, mask))
}

/// Smallest normal subgroup containing `seeds`.
pub fn normal_closure(g: &GroupRef, seeds: &[Elem]) -> Result<Subgroup> {
    for &s in seeds {
        g.check_elem(s)?;
    }
    let mut mask = vec![false; g.order()];
    let mut gens: Vec<Elem> = Vec::new();
    let mut queue: VecDeque<Elem> = seeds.iter().copied().collect();
    // A conjugation-invariant seed set generates a normal subgroup.
    let mut conj_closed = vec![false; g.order()];
    while let Some(x) = queue.pop_front() {
        if conj_closed[x] {
            continue;
        }
        conj_closed[x] = true;
        gens.push(x);
        for &s in g.gens() {
            let y = g.conj(s, x);
            if !conj_closed[y] {
                queue.push_back(y);
            }
        }
    }
    let members = closure_members(g, &gens);
    for &x in &members {
        mask[x] = true;
    }
    let mut members = members;
    members.sort_unstable();
    Ok(Subgroup::trusted(g.clone(), members, mask))
}

/// Conjugacy classes, ordered by least member; each class sorted.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut assigned = vec![false; g.order()];
    let mut classes = Vec::new();
    for x in g.elements() {
        if assigned[x] {
            continue;
        }
        let mut class: Vec<Elem> = g.elements().map(|h| g.conj(h, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class);
    }
    classes
}

fn check_cap(g: &FiniteGroup, limits: &Limits) -> Result<()> {
    if g.order() > limits.enumeration_cap {
        Err(Error::OrderCapExceeded { order: g.order(), cap: limits.enumeration_cap })
    } else {
        Ok(())
    }
}

fn sort_subgroups(mut subs: Vec<Subgroup>) -> Vec<Subgroup> {
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    subs
}

/// Every normal subgroup, sorted by order then members.
pub fn all_normal_subgroups(g: &GroupRef, limits: &Limits) -> Result<Vec<Subgroup>> {
    check_cap(g, limits)?;
    let reps: Vec<Elem> = conjugacy_classes(g).iter().map(|c| c[0]).collect();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut found = vec![Subgroup::trivial(g.clone())];
    seen.insert(vec![0]);
    let mut head = 0;
    while head < found.len() {
        let n = found[head].clone();
        head += 1;
        for &r in &reps {
            if n.contains(r) {
                continue;
            }
            let mut seeds = n.members.clone();
            seeds.push(r);
            let m = normal_closure(g, &seeds)?;
            if seen.insert(m.members.clone()) {
                found.push(m);
            }
        }
    }
    Ok(sort_subgroups(found))
}

/// Every subgroup, sorted by order then members.
pub fn all_subgroups(g: &GroupRef, limits: &Limits) -> Result<Vec<Subgroup>> {
    check_cap(g, limits)?;
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut found = vec![Subgroup::trivial(g.clone())];
    seen.insert(vec![0]);
    let mut head = 0;
    while head < found.len() {
        let s = found[head].clone();
        head += 1;
        for x in g.elements() {
            if s.contains(x) {
                continue;
            }
            let mut seeds = s.members.clone();
            seeds.push(x);
            let t = subgroup_generated(g, &seeds)?;
            if seen.insert(t.members.clone()) {
                found.push(t);
            }
        }
    }
    Ok(sort_subgroups(found))
}

/// The centre of the group.
pub fn centre(g: &GroupRef) -> Subgroup {
    let members: Vec<Elem> = g.elements().filter(|&c| g.gens().iter().all(|&s| g.mul(c, s) == g.mul(s, c))).collect();
    Subgroup::from_members(g.clone(), members).expect("centre is a subgroup")
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, symmetric};
    use super::*;

    fn s3() -> GroupRef {
        Arc::new(symmetric(3).unwrap())
    }

    fn three_cycle(g: &FiniteGroup) -> Elem {
        g.elements().find(|&x| g.elem_order(x) == 3).unwrap()
    }

    fn transposition(g: &FiniteGroup) -> Elem {
        g.elements().find(|&x| g.elem_order(x) == 2).unwrap()
    }

    #[test]
    fn generated_subgroups_of_s3() {
        let g = s3();
        assert!(subgroup_generated(&g, &[]).unwrap().is_trivial());
        let a3 = subgroup_generated(&g, &[three_cycle(&g)]).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(a3.is_normal());
        let t = subgroup_generated(&g, &[transposition(&g)]).unwrap();
        assert_eq!(t.order(), 2);
        assert!(!t.is_normal());
        assert!(matches!(t.require_normal(), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn normal_closures() {
        let g = s3();
        assert!(normal_closure(&g, &[]).unwrap().is_trivial());
        assert!(normal_closure(&g, &[transposition(&g)]).unwrap().is_whole());
        let c6 = Arc::new(cyclic(6).unwrap());
        for x in c6.elements() {
            assert_eq!(normal_closure(&c6, &[x]).unwrap(), subgroup_generated(&c6, &[x]).unwrap());
        }
    }

    #[test]
    fn normal_subgroup_counts() {
        let limits = Limits::default();
        let orders = |g: &GroupRef| -> Vec<usize> {
            all_normal_subgroups(g, &limits).unwrap().iter().map(|n| n.order()).collect()
        };
        assert_eq!(orders(&s3()), vec![1, 3, 6]);
        assert_eq!(orders(&Arc::new(cyclic(6).unwrap())), vec![1, 2, 3, 6]);
        assert_eq!(orders(&Arc::new(cyclic(1).unwrap())), vec![1]);
        for n in all_normal_subgroups(&s3(), &limits).unwrap() {
            assert!(n.is_normal());
        }
    }

    #[test]
    fn subgroup_counts() {
        let limits = Limits::default();
        assert_eq!(all_subgroups(&s3(), &limits).unwrap().len(), 6);
        let s4 = Arc::new(symmetric(4).unwrap());
        assert_eq!(all_subgroups(&s4, &limits).unwrap().len(), 30);
        assert_eq!(all_normal_subgroups(&s4, &limits).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_cap() {
        let s6 = Arc::new(symmetric(6).unwrap());
        let err = all_normal_subgroups(&s6, &Limits::default()).unwrap_err();
        assert_eq!(err, Error::OrderCapExceeded { order: 720, cap: 256 });
    }

    #[test]
    fn rejects_non_subgroup() {
        let g = s3();
        let t = transposition(&g);
        let c = three_cycle(&g);
        assert!(Subgroup::from_members(g.clone(), [0, t, c]).is_err());
        assert!(Subgroup::from_members(g, [t]).is_err());
    }

    #[test]
    fn to_group_keeps_identity_first() {
        let g = s3();
        let a3 = subgroup_generated(&g, &[three_cycle(&g)]).unwrap();
        let h = a3.to_group();
        assert_eq!(h.order(), 3);
        assert!(h.is_abelian());
        assert_eq!(h.elem_order(1), 3);
    }

    #[test]
    fn s3_centre_trivial() {
        assert!(centre(&s3()).is_trivial());
        let c6 = Arc::new(cyclic(6).unwrap());
        assert!(centre(&c6).is_whole());
    }
}
