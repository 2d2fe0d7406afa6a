//! Twisted conjugacy for a pair of homomorphisms `φ, ψ: H -> G`.
//!
//! `g1 ~ g2` iff `g1 = ψ(h) g2 φ(h)^-1` for some `h ∈ H`. With `H = G` and
//! `φ = ψ = id` this is ordinary conjugacy.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{quotient, same_group, Elem, FiniteGroup, GroupRef, Homomorphism, Subgroup};

/// Two homomorphisms with a common source `H` and target `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPair {
    phi: Homomorphism,
    psi: Homomorphism,
}

impl TwistedPair {
    pub fn new(phi: Homomorphism, psi: Homomorphism) -> Result<TwistedPair> {
        if !same_group(phi.source(), psi.source()) || !same_group(phi.target(), psi.target()) {
            return Err(Error::PairMismatch);
        }
        Ok(TwistedPair { phi, psi })
    }

    /// `φ = ψ = id_G`.
    pub fn identity(g: &GroupRef) -> TwistedPair {
        let id = Homomorphism::identity(g);
        TwistedPair { phi: id.clone(), psi: id }
    }

    pub fn h(&self) -> &GroupRef {
        self.phi.source()
    }

    pub fn g(&self) -> &GroupRef {
        self.phi.target()
    }

    pub fn phi(&self) -> &Homomorphism {
        &self.phi
    }

    pub fn psi(&self) -> &Homomorphism {
        &self.psi
    }

    /// `ψ(h) · x · φ(h)^-1`
    #[inline]
    pub fn act(&self, h: Elem, x: Elem) -> Elem {
        let g = self.g();
        g.mul(g.mul(self.psi.apply(h), x), g.inv(self.phi.apply(h)))
    }
}

/// A twisted conjugacy class with its members sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedClass {
    pub base: Elem,
    pub members: Vec<Elem>,
}

impl TwistedClass {
    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `[g]_{φ,ψ}` by enumeration over `H`.
pub fn twisted_class(pair: &TwistedPair, g: Elem) -> Result<TwistedClass> {
    pair.g().check_elem(g)?;
    let mut members: Vec<Elem> = pair.h().elements().map(|h| pair.act(h, g)).collect();
    members.sort_unstable();
    members.dedup();
    Ok(TwistedClass { base: g, members })
}

/// First `h` (in `H`'s index order) with `g1 = ψ(h) g2 φ(h)^-1`.
pub fn are_twisted_conjugate(pair: &TwistedPair, g1: Elem, g2: Elem) -> Result<Option<Elem>> {
    pair.g().check_elem(g1)?;
    pair.g().check_elem(g2)?;
    let witness = pair.h().elements().find(|&h| pair.act(h, g2) == g1);
    if let Some(h) = witness {
        debug_assert_eq!(pair.act(h, g2), g1);
    }
    Ok(witness)
}

/// Partition of `G` into twisted classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    /// Classes ordered by least member.
    pub classes: Vec<Vec<Elem>>,
    /// `class_of[x]` indexes `classes`.
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

pub fn class_partition(pair: &TwistedPair) -> ClassPartition {
    let n = pair.g().order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let class = twisted_class(pair, x).expect("element in range").members;
        for &y in &class {
            class_of[y] = classes.len();
        }
        classes.push(class);
    }
    ClassPartition { classes, class_of }
}

/// Replaces `(φ, ψ, g)` by `(ι_k ∘ φ, ψ, g k^-1)`.
///
/// `[g]_{φ,ψ} = [k]_{φ,ψ}` holds exactly when the returned element lies in
/// the class of the identity for the returned pair.
pub fn shift_to_identity(pair: &TwistedPair, g: Elem, k: Elem) -> Result<(TwistedPair, Elem)> {
    let grp = pair.g();
    grp.check_elem(g)?;
    grp.check_elem(k)?;
    let shifted = TwistedPair { phi: pair.phi.conjugated_by(k), psi: pair.psi.clone() };
    Ok((shifted, grp.div(g, k)))
}

/// One term `[1]_{ψ_i} · g_i` of the decomposition over a transversal.
#[derive(Clone, Debug)]
pub struct DecompositionTerm {
    pub representative: Elem,
    /// `g_i = x_i g ψ(x_i)^-1`
    pub translate: Elem,
    /// `ψ_i`, the restriction of `ι_{g_i} ∘ ψ` to `N`, on `N`'s local indices.
    pub restricted: Homomorphism,
    /// `[1]_{ψ_i}` computed inside `N`, as sorted parent indices.
    pub identity_class: Vec<Elem>,
}

impl DecompositionTerm {
    /// `[1]_{ψ_i} · g_i` in the parent.
    pub fn translated_class(&self, g: &FiniteGroup) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.identity_class.iter().map(|&x| g.mul(x, self.translate)).collect();
        out.sort_unstable();
        out
    }
}

/// Splits the automorphism-twisted class `[g]_ψ = {x g ψ(x)^-1}` over a
/// transversal of a normal subgroup `N` with `ψ(N) = N`.
pub fn finite_extension_decomposition(
    n: &Subgroup,
    psi: &Homomorphism,
    g: Elem,
    reps: &[Elem],
) -> Result<Vec<DecompositionTerm>> {
    let grp = n.parent();
    if !same_group(psi.source(), grp) || !psi.is_automorphism() {
        return Err(Error::NotAnAutomorphism);
    }
    n.require_normal()?;
    grp.check_elem(g)?;
    if n.members().iter().any(|&x| !n.contains(psi.apply(x))) {
        return Err(Error::NotInvariant);
    }
    let q = quotient(grp, n)?;
    if reps.len() != q.target().order() {
        return Err(Error::NotATransversal(format!(
            "{} representatives for {} cosets",
            reps.len(),
            q.target().order()
        )));
    }
    let mut hit = vec![false; q.target().order()];
    for &x in reps {
        grp.check_elem(x)?;
        if std::mem::replace(&mut hit[q.apply(x)], true) {
            return Err(Error::NotATransversal(format!("two representatives in the coset of {x}")));
        }
    }
    let local = Arc::new(n.to_group());
    let mut terms = Vec::with_capacity(reps.len());
    for &x in reps {
        let translate = grp.mul(grp.mul(x, g), grp.inv(psi.apply(x)));
        let image = n
            .members()
            .iter()
            .map(|&m| n.local_index(grp.conj(translate, psi.apply(m))).expect("N is invariant"))
            .collect();
        let restricted = Homomorphism::new(local.clone(), local.clone(), image)?;
        // [1]_{ψ_i} = { m ψ_i(m)^-1 : m ∈ N }
        let mut identity_class: Vec<Elem> =
            local.elements().map(|m| n.members()[local.div(m, restricted.apply(m))]).collect();
        identity_class.sort_unstable();
        identity_class.dedup();
        terms.push(DecompositionTerm { representative: x, translate, restricted, identity_class });
    }
    Ok(terms)
}

/// `Coin(φ, ψ) = {h : φ(h) = ψ(h)}`.
pub fn coincidence_subgroup(pair: &TwistedPair) -> Subgroup {
    let members = pair.h().elements().filter(|&h| pair.phi.apply(h) == pair.psi.apply(h));
    Subgroup::from_members(pair.h().clone(), members).expect("coincidence set is a subgroup")
}

/// The derivation `d(h) = ψ(h)^-1 φ(h)` on `Coin(φ̄, ψ̄)`, where bars denote
/// composition with `G -> G/N`.
#[derive(Clone, Debug)]
pub struct CoincidenceDerivation {
    pub domain: Subgroup,
    /// `values[i] = d(domain.members()[i])`
    pub values: Vec<Elem>,
    /// Sorted image of `d`.
    pub image: Vec<Elem>,
}

impl CoincidenceDerivation {
    pub fn value(&self, h: Elem) -> Option<Elem> {
        self.domain.local_index(h).map(|i| self.values[i])
    }

    /// First domain pair violating `d(h1 h2) = ψ(h2)^-1 d(h1) ψ(h2) · d(h2)`.
    pub fn identity_violation(&self, pair: &TwistedPair) -> Option<(Elem, Elem)> {
        let (h, g) = (pair.h(), pair.g());
        for &h1 in self.domain.members() {
            for &h2 in self.domain.members() {
                let lhs = self.value(h.mul(h1, h2)).expect("domain is closed");
                let p2 = pair.psi.apply(h2);
                let acted = g.mul(g.mul(g.inv(p2), self.value(h1).unwrap()), p2);
                if lhs != g.mul(acted, self.value(h2).unwrap()) {
                    return Some((h1, h2));
                }
            }
        }
        None
    }
}

pub fn coincidence_derivation(n: &Subgroup, pair: &TwistedPair) -> Result<CoincidenceDerivation> {
    n.require_normal()?;
    let g = pair.g();
    if !same_group(n.parent(), g) {
        return Err(Error::ParentMismatch("N is not a subgroup of the target".into()));
    }
    let d = |h: Elem| g.mul(g.inv(pair.psi.apply(h)), pair.phi.apply(h));
    // φ(h)N = ψ(h)N  iff  ψ(h)^-1 φ(h) ∈ N
    let members: Vec<Elem> = pair.h().elements().filter(|&h| n.contains(d(h))).collect();
    let domain = Subgroup::from_members(pair.h().clone(), members)?;
    let values: Vec<Elem> = domain.members().iter().map(|&h| d(h)).collect();
    let mut image = values.clone();
    image.sort_unstable();
    image.dedup();
    Ok(CoincidenceDerivation { domain, values, image })
}

/// `D = C ∩ [1]_{φ,ψ}` for a central subgroup `C`, validated as a subgroup.
pub fn central_class_intersection(c: &Subgroup, pair: &TwistedPair) -> Result<Subgroup> {
    if let Some((member, with)) = c.central_witness() {
        return Err(Error::NotCentral { member, with });
    }
    let one = twisted_class(pair, 0)?;
    let members: Vec<Elem> = c.members().iter().copied().filter(|&x| one.contains(x)).collect();
    Subgroup::from_members(c.parent().clone(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, inner_automorphism, subgroup_generated, symmetric};

    fn s3() -> GroupRef {
        Arc::new(symmetric(3).unwrap())
    }

    fn c6() -> GroupRef {
        Arc::new(cyclic(6).unwrap())
    }

    fn c6_inversion_pair() -> TwistedPair {
        let g = c6();
        let inv = Homomorphism::identity(&g).pointwise_inverse().unwrap();
        TwistedPair::new(inv, Homomorphism::identity(&g)).unwrap()
    }

    fn elem_of_order(g: &FiniteGroup, k: usize) -> Elem {
        g.elements().find(|&x| g.elem_order(x) == k).unwrap()
    }

    #[test]
    fn ordinary_class_of_three_cycle() {
        let g = s3();
        let c = elem_of_order(&g, 3);
        let class = twisted_class(&TwistedPair::identity(&g), c).unwrap();
        assert_eq!(class.len(), 2);
        assert!(class.members.iter().all(|&x| g.elem_order(x) == 3));
    }

    #[test]
    fn trivial_source_gives_singletons() {
        let g = s3();
        let h = Arc::new(crate::group::trivial());
        let pair = TwistedPair::new(Homomorphism::trivial(&h, &g), Homomorphism::trivial(&h, &g)).unwrap();
        for x in g.elements() {
            assert_eq!(twisted_class(&pair, x).unwrap().members, vec![x]);
        }
    }

    #[test]
    fn inversion_twisted_classes_in_c6() {
        let pair = c6_inversion_pair();
        assert_eq!(twisted_class(&pair, 0).unwrap().members, vec![0, 2, 4]);
        let w = are_twisted_conjugate(&pair, 0, 2).unwrap().unwrap();
        assert_eq!(pair.act(w, 2), 0);
        assert_eq!(class_partition(&pair).count(), 2);
    }

    #[test]
    fn witness_for_equal_elements_is_identity() {
        let pair = TwistedPair::identity(&s3());
        for x in 0..6 {
            assert_eq!(are_twisted_conjugate(&pair, x, x).unwrap(), Some(0));
        }
    }

    #[test]
    fn transposition_and_three_cycle_not_conjugate() {
        let g = s3();
        let pair = TwistedPair::identity(&g);
        let t = elem_of_order(&g, 2);
        let c = elem_of_order(&g, 3);
        assert_eq!(are_twisted_conjugate(&pair, t, c).unwrap(), None);
    }

    #[test]
    fn partitions() {
        let pair = TwistedPair::identity(&c6());
        assert_eq!(class_partition(&pair).count(), 6);
        let part = class_partition(&TwistedPair::identity(&s3()));
        let mut sizes: Vec<usize> = part.classes.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn shift_with_identity_is_noop() {
        let pair = c6_inversion_pair();
        let (shifted, x) = shift_to_identity(&pair, 3, 0).unwrap();
        assert_eq!(shifted, pair);
        assert_eq!(x, 3);
    }

    #[test]
    fn shift_same_three_cycle() {
        let g = s3();
        let c = elem_of_order(&g, 3);
        let (shifted, x) = shift_to_identity(&TwistedPair::identity(&g), c, c).unwrap();
        assert_eq!(x, 0);
        assert!(twisted_class(&shifted, 0).unwrap().contains(x));
    }

    #[test]
    fn shift_biconditional_c6() {
        let pair = c6_inversion_pair();
        let mut cases = 0;
        for g in 0..6 {
            for k in 0..6 {
                let lhs = twisted_class(&pair, g).unwrap().members == twisted_class(&pair, k).unwrap().members;
                let (shifted, x) = shift_to_identity(&pair, g, k).unwrap();
                let rhs = twisted_class(&shifted, 0).unwrap().contains(x);
                assert_eq!(lhs, rhs, "g={g} k={k}");
                cases += 1;
            }
        }
        assert_eq!(cases, 36);
    }

    #[test]
    fn decomposition_whole_group() {
        let g = s3();
        let n = Subgroup::whole(g.clone());
        let psi = Homomorphism::identity(&g);
        for x in g.elements() {
            let terms = finite_extension_decomposition(&n, &psi, x, &[0]).unwrap();
            assert_eq!(terms.len(), 1);
            assert_eq!(terms[0].translate, x);
            let direct = twisted_class(&TwistedPair::new(psi.clone(), Homomorphism::identity(&g)).unwrap(), x).unwrap();
            assert_eq!(terms[0].translated_class(&g), direct.members);
        }
    }

    #[test]
    fn decomposition_s3_over_a3() {
        let g = s3();
        let c = elem_of_order(&g, 3);
        let t = elem_of_order(&g, 2);
        let a3 = subgroup_generated(&g, &[c]).unwrap();
        let psi = Homomorphism::identity(&g);
        let terms = finite_extension_decomposition(&a3, &psi, t, &[0, t]).unwrap();
        assert_eq!(terms.len(), 2);
        let mut union: Vec<Elem> = terms.iter().flat_map(|term| term.translated_class(&g)).collect();
        union.sort();
        union.dedup();
        let transpositions: Vec<Elem> = g.elements().filter(|&x| g.elem_order(x) == 2).collect();
        assert_eq!(union, transpositions);
    }

    #[test]
    fn decomposition_c6_inversion() {
        let g = c6();
        let psi = Homomorphism::identity(&g).pointwise_inverse().unwrap();
        let pair = TwistedPair::new(psi.clone(), Homomorphism::identity(&g)).unwrap();
        for seed in [0, 1, 2, 3] {
            let n = subgroup_generated(&g, &[seed]).unwrap();
            let q = quotient(&g, &n).unwrap();
            for x in g.elements() {
                let terms = finite_extension_decomposition(&n, &psi, x, q.representatives()).unwrap();
                let mut union: Vec<Elem> = terms.iter().flat_map(|t| t.translated_class(&g)).collect();
                union.sort();
                union.dedup();
                assert_eq!(union, twisted_class(&pair, x).unwrap().members);
            }
        }
    }

    #[test]
    fn decomposition_errors() {
        let g = s3();
        let c = elem_of_order(&g, 3);
        let t = elem_of_order(&g, 2);
        let a3 = subgroup_generated(&g, &[c]).unwrap();
        let psi = Homomorphism::identity(&g);
        assert!(matches!(finite_extension_decomposition(&a3, &psi, 0, &[0, c]), Err(Error::NotATransversal(_))));
        assert!(matches!(finite_extension_decomposition(&a3, &psi, 0, &[0]), Err(Error::NotATransversal(_))));
        let tsub = subgroup_generated(&g, &[t]).unwrap();
        assert!(matches!(
            finite_extension_decomposition(&tsub, &psi, 0, &[0, c, g.mul(c, c)]),
            Err(Error::NotNormal { .. })
        ));
        // C2 x C2 = {0, a, b, ab}: swapping the factors does not fix <a>.
        let c2 = Arc::new(cyclic(2).unwrap());
        let v = Arc::new(crate::group::direct_product(&c2, &c2));
        let swap = Homomorphism::from_generator_images(&v, &v, &[v.gens()[1], v.gens()[0]]).unwrap();
        let a = subgroup_generated(&v, &[v.gens()[0]]).unwrap();
        let reps = quotient(&v, &a).unwrap().representatives().to_vec();
        assert_eq!(finite_extension_decomposition(&a, &swap, 0, &reps).unwrap_err(), Error::NotInvariant);
    }

    #[test]
    fn coincidence_subgroups() {
        let g = s3();
        let id = Homomorphism::identity(&g);
        assert!(coincidence_subgroup(&TwistedPair::identity(&g)).is_whole());
        let t = elem_of_order(&g, 2);
        let pair = TwistedPair::new(id.clone(), inner_automorphism(&g, t).unwrap()).unwrap();
        let coin = coincidence_subgroup(&pair);
        assert_eq!(coin.members(), &[0, t]);
        let pair = TwistedPair::new(Homomorphism::trivial(&g, &g), id).unwrap();
        assert!(coincidence_subgroup(&pair).is_trivial());
    }

    #[test]
    fn derivation_equal_maps() {
        let g = s3();
        let n = subgroup_generated(&g, &[elem_of_order(&g, 3)]).unwrap();
        let der = coincidence_derivation(&n, &TwistedPair::identity(&g)).unwrap();
        assert!(der.domain.is_whole());
        assert!(der.values.iter().all(|&v| v == 0));
        assert_eq!(der.image, vec![0]);
    }

    #[test]
    fn derivation_s3_inner() {
        let g = s3();
        let t = elem_of_order(&g, 2);
        let n = subgroup_generated(&g, &[elem_of_order(&g, 3)]).unwrap();
        let pair = TwistedPair::new(Homomorphism::identity(&g), inner_automorphism(&g, t).unwrap()).unwrap();
        let der = coincidence_derivation(&n, &pair).unwrap();
        assert!(der.domain.is_whole());
        assert_eq!(der.identity_violation(&pair), None);
        let one = twisted_class(&pair, 0).unwrap();
        let expect: Vec<Elem> = one.members.iter().copied().filter(|&x| n.contains(x)).collect();
        assert_eq!(der.image, expect);
    }

    #[test]
    fn derivation_c6() {
        let g = c6();
        let n = subgroup_generated(&g, &[3]).unwrap();
        let pair = c6_inversion_pair();
        let der = coincidence_derivation(&n, &pair).unwrap();
        assert_eq!(der.identity_violation(&pair), None);
        let one = twisted_class(&pair, 0).unwrap();
        let expect: Vec<Elem> = one.members.iter().copied().filter(|&x| n.contains(x)).collect();
        assert_eq!(der.image, expect);
        let not_normal = subgroup_generated(&s3(), &[elem_of_order(&s3(), 2)]).unwrap();
        assert!(coincidence_derivation(&not_normal, &TwistedPair::identity(&s3())).is_err());
    }

    #[test]
    fn central_intersections() {
        let pair = c6_inversion_pair();
        let g = pair.g().clone();
        let d = central_class_intersection(&Subgroup::whole(g.clone()), &pair).unwrap();
        assert_eq!(d.members(), &[0, 2, 4]);
        let d = central_class_intersection(&Subgroup::trivial(g), &pair).unwrap();
        assert!(d.is_trivial());
        let s = s3();
        let d = central_class_intersection(&crate::group::centre(&s), &TwistedPair::identity(&s)).unwrap();
        assert!(d.is_trivial());
        let a3 = subgroup_generated(&s, &[elem_of_order(&s, 3)]).unwrap();
        assert!(matches!(central_class_intersection(&a3, &TwistedPair::identity(&s)), Err(Error::NotCentral { .. })));
    }
}
