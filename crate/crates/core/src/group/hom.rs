use std::sync::Arc;

use crate::error::{Error, Result};

use super::subgroup::Subgroup;
use super::{Elem, FiniteGroup, GroupRef};

/// A validated homomorphism between two table groups.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: GroupRef,
    target: GroupRef,
    image: Vec<Elem>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image && same_group(&self.source, &other.source) && same_group(&self.target, &other.target)
    }
}

impl Eq for Homomorphism {}

pub(crate) fn same_group(a: &GroupRef, b: &GroupRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// First pair `(a, b)` in index order with `f(ab) != f(a)f(b)`.
fn multiplicativity_witness(source: &FiniteGroup, target: &FiniteGroup, image: &[Elem]) -> Option<(Elem, Elem)> {
    for a in source.elements() {
        for b in source.elements() {
            if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

impl Homomorphism {
    /// Wraps a total element map after the full multiplicativity scan.
    pub fn new(source: GroupRef, target: GroupRef, image: Vec<Elem>) -> Result<Homomorphism> {
        if image.len() != source.order() {
            return Err(Error::InvalidArgs(format!(
                "map has {} entries for a source of order {}",
                image.len(),
                source.order()
            )));
        }
        for &y in &image {
            target.check_elem(y)?;
        }
        if let Some((a, b)) = multiplicativity_witness(&source, &target, &image) {
            return Err(Error::NotAHomomorphism { a, b });
        }
        Ok(Homomorphism { source, target, image })
    }

    /// Used by enumerators that have already established multiplicativity.
    pub(crate) fn trusted(source: GroupRef, target: GroupRef, image: Vec<Elem>) -> Homomorphism {
        debug_assert!(multiplicativity_witness(&source, &target, &image).is_none());
        Homomorphism { source, target, image }
    }

    /// Extends images of the source's recorded generators along words.
    pub fn from_generator_images(source: &GroupRef, target: &GroupRef, images: &[Elem]) -> Result<Homomorphism> {
        if images.len() < source.gens().len() {
            return Err(Error::MissingGeneratorImage(images.len()));
        }
        let assignment: Vec<(Elem, Elem)> = source.gens().iter().copied().zip(images.iter().copied()).collect();
        Self::from_assignment(source, target, &assignment)
    }

    /// Extends an assignment `seed -> image` for any generating set of the source.
    pub fn from_assignment(source: &GroupRef, target: &GroupRef, assignment: &[(Elem, Elem)]) -> Result<Homomorphism> {
        for &(s, t) in assignment {
            source.check_elem(s)?;
            target.check_elem(t)?;
        }
        let n = source.order();
        let mut image: Vec<Option<Elem>> = vec![None; n];
        image[0] = Some(0);
        let mut order = vec![0];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            let fx = image[x].unwrap();
            for &(s, t) in assignment {
                let y = source.mul(x, s);
                if image[y].is_none() {
                    image[y] = Some(target.mul(fx, t));
                    order.push(y);
                }
            }
        }
        if order.len() != n {
            return Err(Error::SeedsDoNotGenerate { reached: order.len(), order: n });
        }
        let image = image.into_iter().map(Option::unwrap).collect();
        Self::new(source.clone(), target.clone(), image)
    }

    pub fn identity(g: &GroupRef) -> Homomorphism {
        Homomorphism { source: g.clone(), target: g.clone(), image: g.elements().collect() }
    }

    pub fn trivial(source: &GroupRef, target: &GroupRef) -> Homomorphism {
        Homomorphism { source: source.clone(), target: target.clone(), image: vec![0; source.order()] }
    }

    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    pub fn images(&self) -> &[Elem] {
        &self.image
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if !same_group(&self.target, &other.source) {
            return Err(Error::ParentMismatch("composition target/source differ".into()));
        }
        let image = self.image.iter().map(|&x| other.image[x]).collect();
        Ok(Homomorphism { source: self.source.clone(), target: other.target.clone(), image })
    }

    pub fn kernel(&self) -> Subgroup {
        let members = self.source.elements().filter(|&x| self.image[x] == 0);
        Subgroup::from_members(self.source.clone(), members).expect("kernel is a subgroup")
    }

    pub fn image_subgroup(&self) -> Subgroup {
        Subgroup::from_members(self.target.clone(), self.image.iter().copied()).expect("image is a subgroup")
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    pub fn is_automorphism(&self) -> bool {
        same_group(&self.source, &self.target) && self.is_injective()
    }

    pub fn inverse(&self) -> Result<Homomorphism> {
        if !self.is_bijective() {
            return Err(Error::NotAnAutomorphism);
        }
        let mut inv = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Ok(Homomorphism { source: self.target.clone(), target: self.source.clone(), image: inv })
    }

    /// Post-composes with the inner automorphism `x -> k x k^-1` of the target.
    pub fn conjugated_by(&self, k: Elem) -> Homomorphism {
        let t = &self.target;
        let image = self.image.iter().map(|&y| t.conj(k, y)).collect();
        Homomorphism { source: self.source.clone(), target: self.target.clone(), image }
    }

    /// Pointwise inverse `x -> f(x)^-1`; a homomorphism only when the image is abelian.
    pub fn pointwise_inverse(&self) -> Result<Homomorphism> {
        let image = self.image.iter().map(|&y| self.target.inv(y)).collect();
        Self::new(self.source.clone(), self.target.clone(), image)
    }
}

/// The inner automorphism `x -> g x g^-1`.
pub fn inner_automorphism(g: &GroupRef, by: Elem) -> Result<Homomorphism> {
    g.check_elem(by)?;
    let image = g.elements().map(|x| g.conj(by, x)).collect();
    Ok(Homomorphism::trusted(g.clone(), g.clone(), image))
}
