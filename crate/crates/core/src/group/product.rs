use crate::error::{Error, Result};

use super::hom::{same_group, Homomorphism};
use super::{Elem, FiniteGroup, GroupRef};

/// `N ⋊ H` with `(n1,h1)(n2,h2) = (n1 · action[h1](n2), h1 h2)`.
///
/// `action` is indexed by the elements of `H`. Element `(n, h)` has index
/// `h * |N| + n`, so the identity is 0 and a trivial action gives the direct
/// product with the same numbering.
pub fn semidirect_product(n: &GroupRef, h: &GroupRef, action: &[Homomorphism]) -> Result<FiniteGroup> {
    if action.len() != h.order() {
        return Err(Error::InvalidArgs(format!(
            "action lists {} automorphisms for a group of order {}",
            action.len(),
            h.order()
        )));
    }
    for (x, a) in action.iter().enumerate() {
        if !same_group(a.source(), n) || !a.is_automorphism() {
            return Err(Error::ActionNotAutomorphism(x));
        }
    }
    for h1 in h.elements() {
        for h2 in h.elements() {
            let lhs = &action[h.mul(h1, h2)];
            let ok = n.elements().all(|x| lhs.apply(x) == action[h1].apply(action[h2].apply(x)));
            if !ok {
                return Err(Error::ActionNotHomomorphic { h1, h2 });
            }
        }
    }
    let nn = n.order();
    let nh = h.order();
    let order = nn * nh;
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        let (n1, h1) = (a % nn, a / nn);
        for b in 0..order {
            let (n2, h2) = (b % nn, b / nn);
            let nprod = n.mul(n1, action[h1].apply(n2));
            table.push((h.mul(h1, h2) * nn + nprod) as u32);
        }
    }
    let mut gens: Vec<Elem> = n.gens().to_vec();
    gens.extend(h.gens().iter().map(|&s| s * nn));
    let group = FiniteGroup::from_raw(order, table, Some(gens), None)?;
    Ok(group)
}

/// Semidirect product with the action given on the generators of `H` only.
pub fn semidirect_from_generators(n: &GroupRef, h: &GroupRef, gen_action: &[Homomorphism]) -> Result<FiniteGroup> {
    if gen_action.len() != h.gens().len() {
        return Err(Error::MissingGeneratorImage(gen_action.len()));
    }
    let mut action: Vec<Option<Homomorphism>> = vec![None; h.order()];
    action[0] = Some(Homomorphism::identity(n));
    let mut order = vec![0];
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for (s, a) in h.gens().iter().zip(gen_action) {
            let y = h.mul(x, *s);
            if action[y].is_none() {
                // action[x s] = action[x] ∘ action[s]
                let ax = action[x].as_ref().unwrap();
                let composed = a.then(ax).map_err(|_| Error::ActionNotAutomorphism(*s))?;
                action[y] = Some(composed);
                order.push(y);
            }
        }
    }
    let action: Vec<Homomorphism> = action.into_iter().map(Option::unwrap).collect();
    semidirect_product(n, h, &action)
}

/// `A × B`, numbered as `b * |A| + a`.
pub fn direct_product(a: &GroupRef, b: &GroupRef) -> FiniteGroup {
    let action = vec![Homomorphism::identity(a); b.order()];
    semidirect_product(a, b, &action).expect("trivial action is valid")
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::{cyclic, symmetric};
    use super::*;

    #[test]
    fn trivial_action_is_direct_product() {
        let a = Arc::new(cyclic(3).unwrap());
        let b = Arc::new(cyclic(2).unwrap());
        let g = direct_product(&a, &b);
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        for x in g.elements() {
            for y in g.elements() {
                let expect = ((x / 3 + y / 3) % 2) * 3 + (x % 3 + y % 3) % 3;
                assert_eq!(g.mul(x, y), expect);
            }
        }
    }

    #[test]
    fn inversion_action_gives_s3_invariants() {
        let c3 = Arc::new(cyclic(3).unwrap());
        let c2 = Arc::new(cyclic(2).unwrap());
        let inv = Homomorphism::identity(&c3).pointwise_inverse().unwrap();
        let g = semidirect_from_generators(&c3, &c2, &[inv]).unwrap();
        let s3 = symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.order_census(), s3.order_census());
        g.check_associative(0).unwrap();
    }

    #[test]
    fn non_homomorphic_action_rejected() {
        // C2 acting on C3 by inversion is fine, C3 acting by inversion is not.
        let c3 = Arc::new(cyclic(3).unwrap());
        let inv = Homomorphism::identity(&c3).pointwise_inverse().unwrap();
        let action = vec![Homomorphism::identity(&c3), inv.clone(), inv];
        let err = semidirect_product(&c3, &c3, &action).unwrap_err();
        assert!(matches!(err, Error::ActionNotHomomorphic { .. }));
    }
}
