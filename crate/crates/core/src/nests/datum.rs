//! Pre-nests as subgroups of `G × G^op`, described by Goursat data.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::enumerate::isomorphisms;
use crate::error::{Error, Result};
use crate::group::{
    all_normal_subgroups, all_subgroups, quotient, same_group, Elem, FiniteGroup, GroupRef, Homomorphism, Limits,
    QuotientMap, Subgroup,
};
use crate::twisted::TwistedPair;

use super::{is_prenest, Pair, PreNest};

/// A subgroup `S` with a normal subgroup `K`, and the quotient `S/K`.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    sub: Subgroup,
    kernel: Subgroup,
    quotient: QuotientMap,
}

impl CosetSpace {
    pub fn new(sub: Subgroup, kernel: Subgroup) -> Result<CosetSpace> {
        if !same_group(sub.parent(), kernel.parent()) {
            return Err(Error::DatumInvalid("subgroups of different groups".into()));
        }
        if !kernel.is_subset_of(&sub) || !kernel.is_normal_in(&sub) {
            return Err(Error::DatumInvalid("kernel is not a normal subgroup of its ambient".into()));
        }
        let local: GroupRef = Arc::new(sub.to_group());
        let k = Subgroup::from_members(local.clone(), kernel.members().iter().map(|&x| sub.local_index(x).unwrap()))?;
        let quotient = quotient(&local, &k)?;
        Ok(CosetSpace { sub, kernel, quotient })
    }

    pub fn sub(&self) -> &Subgroup {
        &self.sub
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// The quotient group `S/K`.
    pub fn target(&self) -> &GroupRef {
        self.quotient.target()
    }

    /// Coset of a parent element, if it lies in `S`.
    pub fn coset(&self, x: Elem) -> Option<Elem> {
        self.sub.local_index(x).map(|i| self.quotient.apply(i))
    }

    /// Least parent element of a coset.
    pub fn section(&self, c: Elem) -> Elem {
        self.sub.members()[self.quotient.representatives()[c]]
    }

    /// All parent elements of a coset.
    pub fn fiber(&self, c: Elem) -> Vec<Elem> {
        self.quotient.fiber(c).into_iter().map(|i| self.sub.members()[i]).collect()
    }
}

/// `(S1, K1, S2, K2, θ)` with `θ: S1/K1 -> S2/K2` an isomorphism.
#[derive(Clone, Debug)]
pub struct NestDatum {
    side1: CosetSpace,
    side2: CosetSpace,
    theta: Homomorphism,
}

impl NestDatum {
    pub fn new(side1: CosetSpace, side2: CosetSpace, theta: Homomorphism) -> Result<NestDatum> {
        if !same_group(side1.sub.parent(), side2.sub.parent()) {
            return Err(Error::DatumInvalid("sides live in different groups".into()));
        }
        if !same_group(theta.source(), side1.target()) || !same_group(theta.target(), side2.target()) {
            return Err(Error::DatumInvalid("θ is not a map S1/K1 -> S2/K2".into()));
        }
        if !theta.is_bijective() {
            return Err(Error::DatumInvalid("θ is not an isomorphism".into()));
        }
        Ok(NestDatum { side1, side2, theta })
    }

    /// Builds θ from parent-level pairs `(x, y)` meaning `θ(x K1) = y K2`.
    /// The cosets of the `x` must generate `S1/K1`.
    pub fn from_assignment(side1: CosetSpace, side2: CosetSpace, assignment: &[Pair]) -> Result<NestDatum> {
        let mut coset_pairs = Vec::with_capacity(assignment.len());
        for &(x, y) in assignment {
            let cx = side1.coset(x).ok_or_else(|| Error::DatumInvalid(format!("{x} is not in S1")))?;
            let cy = side2.coset(y).ok_or_else(|| Error::DatumInvalid(format!("{y} is not in S2")))?;
            coset_pairs.push((cx, cy));
        }
        let theta = Homomorphism::from_assignment(side1.target(), side2.target(), &coset_pairs)
            .map_err(|e| Error::DatumInvalid(format!("θ: {e}")))?;
        NestDatum::new(side1, side2, theta)
    }

    pub fn parent(&self) -> &GroupRef {
        self.side1.sub.parent()
    }

    pub fn side1(&self) -> &CosetSpace {
        &self.side1
    }

    pub fn side2(&self) -> &CosetSpace {
        &self.side2
    }

    pub fn theta(&self) -> &Homomorphism {
        &self.theta
    }

    /// Parent-level image: a representative of `θ(x K1)`.
    pub fn theta_rep(&self, x: Elem) -> Option<Elem> {
        self.side1.coset(x).map(|c| self.side2.section(self.theta.apply(c)))
    }
}

/// `{(x, y) ∈ S1 × S2 : θ(x K1) = (y K2)^-1}`.
pub fn prenest_from_datum(d: &NestDatum) -> Result<PreNest> {
    let g = d.parent();
    let q1 = d.side1.target();
    let mut pairs = BTreeSet::new();
    for c in q1.elements() {
        let ys = d.side2.fiber(d.side2.target().inv(d.theta.apply(c)));
        for x in d.side1.fiber(c) {
            for &y in &ys {
                pairs.insert((x, y));
            }
        }
    }
    let pairs: Vec<Pair> = pairs.into_iter().collect();
    if let Some(v) = is_prenest(g, &pairs)? {
        return Err(Error::DatumInvalid(format!("construction is not closed at {v:?}")));
    }
    Ok(PreNest::trusted(g.clone(), pairs.into_iter().collect()))
}

/// Recovers the datum of a pre-nest: projections `S1`, `S2`, kernels
/// `K1 = {a : (a, 1) ∈ P}`, `K2 = {b : (1, b) ∈ P}` and `θ(x K1) = y^-1 K2`.
pub fn datum_from_prenest(p: &PreNest) -> Result<NestDatum> {
    let g = p.parent();
    if let Some(v) = is_prenest(g, p.pairs())? {
        return Err(Error::NotAPreNest { violation: v });
    }
    let s1 = Subgroup::from_members(g.clone(), p.pairs().iter().map(|&(a, _)| a))?;
    let s2 = Subgroup::from_members(g.clone(), p.pairs().iter().map(|&(_, b)| b))?;
    let k1 = Subgroup::from_members(g.clone(), p.pairs().iter().filter(|&&(_, b)| b == 0).map(|&(a, _)| a))?;
    let k2 = Subgroup::from_members(g.clone(), p.pairs().iter().filter(|&&(a, _)| a == 0).map(|&(_, b)| b))?;
    let side1 = CosetSpace::new(s1, k1)?;
    let side2 = CosetSpace::new(s2, k2)?;
    let mut image: Vec<Option<Elem>> = vec![None; side1.target().order()];
    for &(x, y) in p.pairs() {
        let cx = side1.coset(x).unwrap();
        let cy = side2.coset(g.inv(y)).unwrap();
        match image[cx] {
            None => image[cx] = Some(cy),
            Some(prev) if prev != cy => return Err(Error::DatumInvalid("θ is not well defined".into())),
            Some(_) => {}
        }
    }
    let image: Vec<Elem> = image
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::DatumInvalid("θ is not total".into())))
        .collect::<Result<_>>()?;
    let theta = Homomorphism::new(side1.target().clone(), side2.target().clone(), image)
        .map_err(|e| Error::DatumInvalid(format!("θ: {e}")))?;
    NestDatum::new(side1, side2, theta)
}

/// A homomorphism pair realising a pre-nest.
#[derive(Clone, Debug)]
pub struct HomPairNest {
    /// `ψ` and `φ` from `H` into the parent.
    pub pair: TwistedPair,
    /// Element `i` of `H` is the pair `elements[i]`.
    pub elements: Vec<Pair>,
}

/// Realises a pre-nest as `{(ψ(h), φ(h)^-1) : h ∈ H}`, with
/// `H = {(x, y) ∈ S1 × S2 : θ(x K1) = y K2}`, `ψ` and `φ` the projections.
pub fn hom_pair_from_nest(p: &PreNest) -> Result<HomPairNest> {
    let d = datum_from_prenest(p)?;
    let g = p.parent().clone();
    let mut elements = Vec::new();
    for &x in d.side1.sub.members() {
        let target = d.theta.apply(d.side1.coset(x).unwrap());
        for &y in d.side2.sub.members() {
            if d.side2.coset(y).unwrap() == target {
                elements.push((x, y));
            }
        }
    }
    let h: GroupRef = Arc::new(FiniteGroup::from_elements(&elements, |&(a, b), &(c, d)| (g.mul(a, c), g.mul(b, d)))?);
    let psi = Homomorphism::new(h.clone(), g.clone(), elements.iter().map(|&(x, _)| x).collect())?;
    let phi = Homomorphism::new(h.clone(), g.clone(), elements.iter().map(|&(_, y)| y).collect())?;
    Ok(HomPairNest { pair: TwistedPair::new(phi, psi)?, elements })
}

/// Every datum of `G`, in a fixed order.
pub fn all_data(g: &GroupRef, limits: &Limits) -> Result<Vec<NestDatum>> {
    let mut spaces = Vec::new();
    for s in all_subgroups(g, limits)? {
        let local: GroupRef = Arc::new(s.to_group());
        for k in all_normal_subgroups(&local, limits)? {
            let k = Subgroup::from_members(g.clone(), k.members().iter().map(|&i| s.members()[i]))?;
            spaces.push(CosetSpace::new(s.clone(), k)?);
        }
    }
    let mut out = Vec::new();
    for a in &spaces {
        for b in &spaces {
            if a.target().order() != b.target().order() {
                continue;
            }
            for theta in isomorphisms(a.target(), b.target()) {
                out.push(NestDatum::new(a.clone(), b.clone(), theta)?);
            }
        }
    }
    Ok(out)
}

/// Every pre-nest of `G`, one per datum.
pub fn all_prenests(g: &GroupRef, limits: &Limits) -> Result<Vec<PreNest>> {
    all_data(g, limits)?.iter().map(prenest_from_datum).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, subgroup_generated, symmetric};
    use crate::nests::nest_of;
    use crate::twisted::twisted_class;

    #[test]
    fn s3_modulo_a3() {
        let g: GroupRef = Arc::new(symmetric(3).unwrap());
        let rot = g.elements().find(|&x| g.elem_order(x) == 3).unwrap();
        let a3 = subgroup_generated(&g, &[rot]).unwrap();
        let side = || CosetSpace::new(Subgroup::whole(g.clone()), a3.clone()).unwrap();
        let s1 = side();
        let theta = Homomorphism::identity(s1.target());
        let d = NestDatum::new(s1, side(), theta).unwrap();
        let p = prenest_from_datum(&d).unwrap();
        assert_eq!(p.len(), 18);
        assert_eq!(nest_of(&p), a3.members());
    }

    #[test]
    fn mismatched_theta_rejected() {
        let g: GroupRef = Arc::new(cyclic(4).unwrap());
        let whole = CosetSpace::new(Subgroup::whole(g.clone()), Subgroup::trivial(g.clone())).unwrap();
        let half = CosetSpace::new(subgroup_generated(&g, &[2]).unwrap(), Subgroup::trivial(g.clone())).unwrap();
        let theta = Homomorphism::trivial(whole.target(), half.target());
        assert!(matches!(NestDatum::new(whole, half, theta), Err(Error::DatumInvalid(_))));
        let not_normal = CosetSpace::new(Subgroup::trivial(g.clone()), Subgroup::whole(g.clone()));
        assert!(matches!(not_normal, Err(Error::DatumInvalid(_))));
    }

    #[test]
    fn roundtrip_and_realisation() {
        let g: GroupRef = Arc::new(symmetric(3).unwrap());
        let all = all_prenests(&g, &Limits::default()).unwrap();
        for p in &all {
            let back = prenest_from_datum(&datum_from_prenest(p).unwrap()).unwrap();
            assert_eq!(&back, p);
            let hp = hom_pair_from_nest(p).unwrap();
            let from_pair = crate::nests::prenest_from_hom_pair(&hp.pair);
            assert_eq!(&from_pair, p);
            assert_eq!(nest_of(p), twisted_class(&hp.pair, 0).unwrap().members);
        }
        let distinct: BTreeSet<Vec<Pair>> = all.iter().map(|p| p.pairs().to_vec()).collect();
        assert_eq!(distinct.len(), all.len());
    }
}
