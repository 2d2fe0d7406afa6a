//! Exhaustive enumeration of homomorphisms by generator-image backtracking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{Elem, FiniteGroup, GroupRef, Homomorphism};

/// Homomorphism sets larger than this are sampled instead of listed.
pub const HOM_ENUMERATION_LIMIT: usize = 10_000;

/// Number of homomorphisms drawn when a set is too large to list.
pub const HOM_SAMPLE_SIZE: usize = 100;

/// Extends generator images to a map on `<gens[..k]>`, or `None` on a conflict.
fn extend(h: &FiniteGroup, g: &FiniteGroup, assigned: &[(Elem, Elem)]) -> Option<Vec<Option<Elem>>> {
    let mut image: Vec<Option<Elem>> = vec![None; h.order()];
    image[0] = Some(0);
    let mut order = vec![0];
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        let fx = image[x].unwrap();
        for &(s, t) in assigned {
            let y = h.mul(x, s);
            let fy = g.mul(fx, t);
            match image[y] {
                None => {
                    image[y] = Some(fy);
                    order.push(y);
                }
                Some(prev) if prev != fy => return None,
                Some(_) => {}
            }
        }
    }
    Some(image)
}

struct Search<'a> {
    h: &'a GroupRef,
    g: &'a GroupRef,
    candidates: Vec<Vec<Elem>>,
    limit: usize,
    bijective: bool,
    found: Vec<Homomorphism>,
    overflow: bool,
}

impl Search<'_> {
    fn run(&mut self, assigned: &mut Vec<(Elem, Elem)>) {
        if self.overflow {
            return;
        }
        let depth = assigned.len();
        if depth == self.h.gens().len() {
            let Some(image) = extend(self.h, self.g, assigned) else { return };
            let image: Vec<Elem> = image.into_iter().map(|x| x.expect("generators span")).collect();
            let hom = Homomorphism::trusted(self.h.clone(), self.g.clone(), image);
            if self.bijective && !hom.is_bijective() {
                return;
            }
            if self.found.len() == self.limit {
                self.overflow = true;
                return;
            }
            self.found.push(hom);
            return;
        }
        let s = self.h.gens()[depth];
        for i in 0..self.candidates[depth].len() {
            let t = self.candidates[depth][i];
            assigned.push((s, t));
            if extend(self.h, self.g, assigned).is_some() {
                self.run(assigned);
            }
            assigned.pop();
            if self.overflow {
                return;
            }
        }
    }
}

fn candidates(h: &FiniteGroup, g: &FiniteGroup) -> Vec<Vec<Elem>> {
    h.gens()
        .iter()
        .map(|&s| {
            let n = h.elem_order(s);
            g.elements().filter(|&t| n.is_multiple_of(g.elem_order(t))).collect()
        })
        .collect()
}

/// All homomorphisms `H -> G`, or `None` when there are more than `limit`.
pub fn homomorphisms(h: &GroupRef, g: &GroupRef, limit: usize) -> Option<Vec<Homomorphism>> {
    let mut search =
        Search { h, g, candidates: candidates(h, g), limit, bijective: false, found: Vec::new(), overflow: false };
    search.run(&mut Vec::new());
    (!search.overflow).then_some(search.found)
}

/// All isomorphisms `H -> G`.
pub fn isomorphisms(h: &GroupRef, g: &GroupRef) -> Vec<Homomorphism> {
    if h.order() != g.order() {
        return Vec::new();
    }
    let mut search = Search {
        h,
        g,
        candidates: candidates(h, g),
        limit: usize::MAX,
        bijective: true,
        found: Vec::new(),
        overflow: false,
    };
    search.run(&mut Vec::new());
    search.found
}

pub fn automorphisms(g: &GroupRef) -> Vec<Homomorphism> {
    isomorphisms(g, g)
}

/// Homomorphisms `H -> G` under the sampling policy: every one when there
/// are at most [`HOM_ENUMERATION_LIMIT`], otherwise [`HOM_SAMPLE_SIZE`]
/// seeded draws by randomized backtracking.
pub fn hom_sample(h: &GroupRef, g: &GroupRef, seed: u64) -> Vec<Homomorphism> {
    if let Some(all) = homomorphisms(h, g, HOM_ENUMERATION_LIMIT) {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = candidates(h, g);
    let mut out = Vec::with_capacity(HOM_SAMPLE_SIZE);
    while out.len() < HOM_SAMPLE_SIZE {
        let mut shuffled = base.clone();
        for c in &mut shuffled {
            c.shuffle(&mut rng);
        }
        let mut search =
            Search { h, g, candidates: shuffled, limit: 1, bijective: false, found: Vec::new(), overflow: false };
        search.run(&mut Vec::new());
        out.extend(search.found);
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{cyclic, direct_product, quaternion, symmetric};

    fn arc(g: FiniteGroup) -> GroupRef {
        Arc::new(g)
    }

    // gcd-based count |Hom(C_m, C_n)| = gcd(m, n)
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn cyclic_hom_counts() {
        for m in 1..=8 {
            for n in 1..=8 {
                let homs = homomorphisms(&arc(cyclic(m).unwrap()), &arc(cyclic(n).unwrap()), 1000).unwrap();
                assert_eq!(homs.len(), gcd(m, n), "Hom(C{m}, C{n})");
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&arc(symmetric(3).unwrap())).len(), 6);
        assert_eq!(automorphisms(&arc(cyclic(8).unwrap())).len(), 4);
        let c2 = arc(cyclic(2).unwrap());
        assert_eq!(automorphisms(&arc(direct_product(&c2, &c2))).len(), 6);
        assert_eq!(automorphisms(&arc(quaternion())).len(), 24);
        assert_eq!(homomorphisms(&arc(symmetric(3).unwrap()), &arc(symmetric(3).unwrap()), 1000).unwrap().len(), 10);
    }

    #[test]
    fn overflow_and_sampling() {
        let c2 = arc(cyclic(2).unwrap());
        let v = arc(direct_product(&arc(direct_product(&c2, &c2)), &c2));
        assert!(homomorphisms(&v, &v, 100).is_none());
        assert_eq!(homomorphisms(&v, &v, 1000).unwrap().len(), 512);
        let s = hom_sample(&v, &v, 7);
        assert_eq!(s.len(), 512);
    }
}
