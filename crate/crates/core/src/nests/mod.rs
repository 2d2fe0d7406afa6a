//! Pre-nests and nests.
//!
//! A pre-nest is a nonempty `P ⊆ G × G` with `(a c^-1, d^-1 b) ∈ P` whenever
//! `(a, b), (c, d) ∈ P`. Its nest is `{a b : (a, b) ∈ P}`.
//!
//! Equivalently, `P` is a subgroup of `G × G^op`: the closure operation is
//! `(a, b) · (c, d)^-1` computed there. The datum module exploits this.

mod datum;

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::group::{same_group, Elem, FiniteGroup, GroupRef, Homomorphism, QuotientMap, Subgroup};

pub use datum::{
    all_data, all_prenests, datum_from_prenest, hom_pair_from_nest, prenest_from_datum, CosetSpace, HomPairNest,
    NestDatum,
};

pub type Pair = (Elem, Elem);

/// The closure operation `((a, b), (c, d)) -> (a c^-1, d^-1 b)`.
#[inline]
pub fn prenest_op(g: &FiniteGroup, (a, b): Pair, (c, d): Pair) -> Pair {
    (g.div(a, c), g.mul(g.inv(d), b))
}

/// A validated pre-nest.
#[derive(Clone, Debug)]
pub struct PreNest {
    parent: GroupRef,
    pairs: Vec<Pair>,
}

impl PartialEq for PreNest {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs && same_group(&self.parent, &other.parent)
    }
}

impl Eq for PreNest {}

impl PreNest {
    /// Validates `pairs` as a pre-nest.
    pub fn new(parent: GroupRef, pairs: impl IntoIterator<Item = Pair>) -> Result<PreNest> {
        let set: BTreeSet<Pair> = pairs.into_iter().collect();
        let pairs: Vec<Pair> = set.into_iter().collect();
        if let Some(v) = is_prenest(&parent, &pairs)? {
            return Err(Error::NotAPreNest { violation: v });
        }
        Ok(PreNest { parent, pairs })
    }

    pub(crate) fn trusted(parent: GroupRef, pairs: BTreeSet<Pair>) -> PreNest {
        PreNest { parent, pairs: pairs.into_iter().collect() }
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    /// Pairs in sorted order.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.pairs.binary_search(&p).is_ok()
    }

    /// The nest `{a b}`, sorted.
    pub fn nest(&self) -> Vec<Elem> {
        nest_of(self)
    }
}

fn mask_of(n: usize, pairs: &[Pair]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n * n];
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::ElementOutOfRange { index: a.max(b), order: n });
        }
        mask[a * n + b] = true;
    }
    Ok(mask)
}

/// Checks the pre-nest closure property. Returns `None` when it holds and
/// otherwise `(p, q, op(p, q))` for the first violating `p, q`.
pub fn is_prenest(g: &FiniteGroup, pairs: &[Pair]) -> Result<Option<(Pair, Pair, Pair)>> {
    if pairs.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.order();
    let mask = mask_of(n, pairs)?;
    for &p in pairs {
        for &q in pairs {
            let r = prenest_op(g, p, q);
            if !mask[r.0 * n + r.1] {
                return Ok(Some((p, q, r)));
            }
        }
    }
    Ok(None)
}

/// Least pre-nest containing `seeds`.
pub fn prenest_closure(g: &GroupRef, seeds: &[Pair]) -> Result<PreNest> {
    if seeds.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.order();
    let mut mask = mask_of(n, seeds)?;
    let mut members: Vec<Pair> = Vec::new();
    let mut queue: VecDeque<Pair> = VecDeque::new();
    for &p in seeds {
        if !members.contains(&p) {
            members.push(p);
            queue.push_back(p);
        }
    }
    while let Some(p) = queue.pop_front() {
        let snapshot = members.len();
        for i in 0..snapshot {
            let q = members[i];
            for r in [prenest_op(g, p, q), prenest_op(g, q, p)] {
                if !mask[r.0 * n + r.1] {
                    mask[r.0 * n + r.1] = true;
                    members.push(r);
                    queue.push_back(r);
                }
            }
        }
    }
    Ok(PreNest::trusted(g.clone(), members.into_iter().collect()))
}

/// `{a b : (a, b) ∈ P}`, sorted.
pub fn nest_of(p: &PreNest) -> Vec<Elem> {
    let g = &p.parent;
    let set: BTreeSet<Elem> = p.pairs.iter().map(|&(a, b)| g.mul(a, b)).collect();
    set.into_iter().collect()
}

/// The pre-nest `{(ψ(h), φ(h)^-1)}` whose nest is the twisted class of the identity.
pub fn prenest_from_hom_pair(pair: &crate::twisted::TwistedPair) -> PreNest {
    let g = pair.g();
    let set: BTreeSet<Pair> = pair.h().elements().map(|h| (pair.psi().apply(h), g.inv(pair.phi().apply(h)))).collect();
    let p = PreNest::trusted(g.clone(), set);
    debug_assert!(is_prenest(g, p.pairs()).unwrap().is_none());
    p
}

/// Families of pre-nests with known nests.
#[derive(Clone, Debug)]
pub enum StandardKind {
    /// Nest `H`.
    Subgroup(Subgroup),
    /// Nest `H K`.
    DoubleCoset(Subgroup, Subgroup),
    /// Nest `{h g h^-1 g^-1 : h ∈ G}`.
    Commutators(Elem),
    /// Nest `{h φ(h)^-1 : h ∈ G}` for an automorphism `φ`.
    AutDisplacement(Homomorphism),
}

pub fn standard_prenest(g: &GroupRef, kind: &StandardKind) -> Result<PreNest> {
    let check = |s: &Subgroup| {
        if same_group(s.parent(), g) {
            Ok(())
        } else {
            Err(Error::InvalidArgs("subgroup of a different group".into()))
        }
    };
    let pairs: BTreeSet<Pair> = match kind {
        StandardKind::Subgroup(h) => {
            check(h)?;
            h.members().iter().map(|&x| (x, 0)).collect()
        }
        StandardKind::DoubleCoset(h, k) => {
            check(h)?;
            check(k)?;
            h.members().iter().flat_map(|&x| k.members().iter().map(move |&y| (x, y))).collect()
        }
        StandardKind::Commutators(c) => {
            g.check_elem(*c).map_err(|e| Error::InvalidArgs(e.to_string()))?;
            // ψ = id, φ = ι_c: pairs (h, c h^-1 c^-1)
            g.elements().map(|h| (h, g.conj(*c, g.inv(h)))).collect()
        }
        StandardKind::AutDisplacement(phi) => {
            if !same_group(phi.source(), g) || !phi.is_automorphism() {
                return Err(Error::InvalidArgs("expected an automorphism of the group".into()));
            }
            g.elements().map(|h| (h, g.inv(phi.apply(h)))).collect()
        }
    };
    let pairs: Vec<Pair> = pairs.into_iter().collect();
    PreNest::new(g.clone(), pairs)
}

/// Componentwise image of a pre-nest of the source of `q`.
pub fn pushforward_prenest(p: &PreNest, q: &QuotientMap) -> Result<PreNest> {
    if !same_group(p.parent(), q.source()) {
        return Err(Error::ParentMismatch("pre-nest does not live in the quotient's source".into()));
    }
    let pairs: BTreeSet<Pair> = p.pairs.iter().map(|&(a, b)| (q.apply(a), q.apply(b))).collect();
    PreNest::new(q.target().clone(), pairs)
}

/// All pairs whose componentwise image lies in a pre-nest of the target of `q`.
pub fn pullback_prenest(p: &PreNest, q: &QuotientMap) -> Result<PreNest> {
    if !same_group(p.parent(), q.target()) {
        return Err(Error::ParentMismatch("pre-nest does not live in the quotient's target".into()));
    }
    let fibers: Vec<Vec<Elem>> = q.target().elements().map(|y| q.fiber(y)).collect();
    let mut pairs = BTreeSet::new();
    for &(a, b) in &p.pairs {
        for &x in &fibers[a] {
            for &y in &fibers[b] {
                pairs.insert((x, y));
            }
        }
    }
    PreNest::new(q.source().clone(), pairs)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{cyclic, inner_automorphism, quotient, subgroup_generated, symmetric, Subgroup};
    use crate::twisted::{twisted_class, TwistedPair};

    fn s3() -> GroupRef {
        Arc::new(symmetric(3).unwrap())
    }

    fn of_order(g: &FiniteGroup, k: usize) -> Vec<Elem> {
        g.elements().filter(|&x| g.elem_order(x) == k).collect()
    }

    #[test]
    fn basic_prenests() {
        let g = s3();
        assert_eq!(is_prenest(&g, &[(0, 0)]).unwrap(), None);
        let h = subgroup_generated(&g, &[of_order(&g, 2)[0]]).unwrap();
        let pairs: Vec<Pair> = h.members().iter().map(|&x| (x, 0)).collect();
        assert_eq!(is_prenest(&g, &pairs).unwrap(), None);
        assert_eq!(is_prenest(&g, &[]).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn generator_alone_is_not_a_prenest() {
        let c4 = Arc::new(cyclic(4).unwrap());
        let v = is_prenest(&c4, &[(0, 0), (1, 0)]).unwrap().expect("violation");
        let r = prenest_op(&c4, v.0, v.1);
        assert_eq!(r, v.2);
        assert!(![(0, 0), (1, 0)].contains(&r));
    }

    #[test]
    fn closure_of_generator() {
        let c4 = Arc::new(cyclic(4).unwrap());
        let p = prenest_closure(&c4, &[(1, 0)]).unwrap();
        assert_eq!(p.pairs(), &[(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(is_prenest(&c4, p.pairs()).unwrap(), None);
        let again = prenest_closure(&c4, p.pairs()).unwrap();
        assert_eq!(again, p);
        let trivial = prenest_closure(&c4, &[(0, 0)]).unwrap();
        assert_eq!(trivial.pairs(), &[(0, 0)]);
    }

    #[test]
    fn nests_of_simple_prenests() {
        let g = s3();
        let p = PreNest::new(g.clone(), [(0, 0)]).unwrap();
        assert_eq!(nest_of(&p), vec![0]);
        let h = subgroup_generated(&g, &[of_order(&g, 3)[0]]).unwrap();
        let p = standard_prenest(&g, &StandardKind::Subgroup(h.clone())).unwrap();
        assert_eq!(nest_of(&p), h.members());
    }

    #[test]
    fn hom_pair_prenests() {
        let g = s3();
        let p = prenest_from_hom_pair(&TwistedPair::identity(&g));
        assert_eq!(p.len(), 6);
        assert_eq!(nest_of(&p), vec![0]);
        let c6 = Arc::new(cyclic(6).unwrap());
        let inv = Homomorphism::identity(&c6).pointwise_inverse().unwrap();
        let pair = TwistedPair::new(inv, Homomorphism::identity(&c6)).unwrap();
        let p = prenest_from_hom_pair(&pair);
        assert_eq!(nest_of(&p), vec![0, 2, 4]);
        assert_eq!(nest_of(&p), twisted_class(&pair, 0).unwrap().members);
        let t = Arc::new(crate::group::trivial());
        let pair = TwistedPair::new(Homomorphism::trivial(&t, &g), Homomorphism::trivial(&t, &g)).unwrap();
        assert_eq!(prenest_from_hom_pair(&pair).pairs(), &[(0, 0)]);
    }

    #[test]
    fn standard_kinds() {
        let g = s3();
        let trivial = Subgroup::trivial(g.clone());
        assert_eq!(nest_of(&standard_prenest(&g, &StandardKind::Subgroup(trivial)).unwrap()), vec![0]);
        let t = of_order(&g, 2);
        let h = subgroup_generated(&g, &[t[0]]).unwrap();
        let k = subgroup_generated(&g, &[t[1]]).unwrap();
        let dc = standard_prenest(&g, &StandardKind::DoubleCoset(h, k)).unwrap();
        assert_eq!(nest_of(&dc).len(), 4);
        let c = of_order(&g, 3)[0];
        let comm = nest_of(&standard_prenest(&g, &StandardKind::Commutators(c)).unwrap());
        assert_eq!(comm, {
            let mut v = vec![0, c];
            v.sort();
            v
        });
        let phi = inner_automorphism(&g, t[0]).unwrap();
        let disp = nest_of(&standard_prenest(&g, &StandardKind::AutDisplacement(phi.clone())).unwrap());
        let pair = TwistedPair::new(phi, Homomorphism::identity(&g)).unwrap();
        assert_eq!(disp, twisted_class(&pair, 0).unwrap().members);
        assert!(matches!(
            standard_prenest(&g, &StandardKind::AutDisplacement(Homomorphism::trivial(&g, &g))),
            Err(Error::InvalidArgs(_))
        ));
    }

    #[test]
    fn push_and_pull() {
        let g = s3();
        let a3 = subgroup_generated(&g, &[of_order(&g, 3)[0]]).unwrap();
        let q = quotient(&g, &a3).unwrap();
        let p = standard_prenest(&g, &StandardKind::Subgroup(a3.clone())).unwrap();
        let pushed = pushforward_prenest(&p, &q).unwrap();
        assert_eq!(nest_of(&pushed), vec![0]);
        let pulled = pullback_prenest(&pushed, &q).unwrap();
        assert_eq!(nest_of(&pulled), a3.members());

        let collapse = quotient(&g, &Subgroup::whole(g.clone())).unwrap();
        assert_eq!(pushforward_prenest(&p, &collapse).unwrap().pairs(), &[(0, 0)]);
        let same = quotient(&g, &Subgroup::trivial(g.clone())).unwrap();
        assert_eq!(pushforward_prenest(&p, &same).unwrap().pairs(), p.pairs());
        assert!(matches!(pullback_prenest(&p, &q), Err(Error::ParentMismatch(_))));
    }
}
