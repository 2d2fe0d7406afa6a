//! Finite groups stored as dense multiplication tables.
//!
//! Elements are indices `0..order` and the identity is always index 0. Every
//! other structure in the crate (homomorphisms, subgroups, quotients, pre-nests)
//! refers to elements by these indices.

mod families;
mod hom;
mod perm;
mod product;
mod quotient;
mod subgroup;
mod words;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use families::{cyclic, dihedral, quaternion, small_groups, symmetric, trivial};
pub(crate) use hom::same_group;
pub use hom::{inner_automorphism, Homomorphism};
pub use perm::{group_from_permutations, parse_cycles, Permutation};
pub use product::{direct_product, semidirect_from_generators, semidirect_product};
pub use quotient::{quotient, QuotientMap};
pub use subgroup::{
    all_normal_subgroups, all_subgroups, centre, conjugacy_classes, normal_closure, subgroup_generated, Subgroup,
};
pub use words::{default_generator_names, format_word, is_identity_word, parse_word};

/// Element index inside a [`FiniteGroup`].
pub type Elem = usize;

/// Shared handle to an immutable group.
pub type GroupRef = Arc<FiniteGroup>;

/// Size caps for the exhaustive algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum order produced by closure constructions.
    pub closure_cap: usize,
    /// Maximum order for subgroup and normal subgroup enumeration.
    pub enumeration_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { closure_cap: 20_000, enumeration_cap: 256 }
    }
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    gens: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).field("gens", &self.gens).finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Builds a group from a square table, validating the group axioms.
    ///
    /// Row and column 0 must be the identity. Generators are chosen greedily
    /// in index order.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range in row {i}")));
                }
                mul.push(x as u32);
            }
        }
        let group = Self::from_raw(n, mul, None, None)?;
        group.check_associative(0x5eed)?;
        Ok(group)
    }

    /// Assembles a group from a flat table. Checks the Latin square property
    /// and identity at index 0; associativity is the caller's concern.
    pub(crate) fn from_raw(
        n: usize,
        mul: Vec<u32>,
        gens: Option<Vec<Elem>>,
        labels: Option<Vec<String>>,
    ) -> Result<FiniteGroup> {
        if mul.len() != n * n {
            return Err(Error::InvalidTable("table size mismatch".into()));
        }
        for i in 0..n {
            if mul[i] as usize != i || mul[i * n] as usize != i {
                return Err(Error::InvalidTable("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            let mut seen_row = vec![false; n];
            for b in 0..n {
                let c = mul[a * n + b] as usize;
                if seen_row[c] {
                    return Err(Error::InvalidTable(format!("row {a} repeats {c}")));
                }
                seen_row[c] = true;
                if c == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        for b in 0..n {
            let mut seen_col = vec![false; n];
            for a in 0..n {
                let c = mul[a * n + b] as usize;
                if seen_col[c] {
                    return Err(Error::InvalidTable(format!("column {b} repeats {c}")));
                }
                seen_col[c] = true;
            }
        }
        let mut group = FiniteGroup { order: n, mul, inv, gens: Vec::new(), labels };
        group.gens = match gens {
            Some(g) => g,
            None => group.greedy_generators(),
        };
        if subgroup::closure_members(&group, &group.gens).len() != n {
            return Err(Error::InvalidTable("recorded generators do not generate".into()));
        }
        Ok(group)
    }

    /// Breadth-first closure of `gens` under `mul`, starting at `identity`.
    ///
    /// Returns the table group together with the concrete elements in index
    /// order. Index order is the breadth-first discovery order.
    pub fn from_closure<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<(FiniteGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for s in gens {
                let y = mul(&x, s);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureBudgetExceeded { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&mul(a, b)] as u32);
            }
        }
        let mut gen_idx: Vec<Elem> = Vec::new();
        for s in gens {
            let i = index[s];
            if i != 0 && !gen_idx.contains(&i) {
                gen_idx.push(i);
            }
        }
        let group = Self::from_raw(n, table, Some(gen_idx), None)?;
        Ok((group, elements))
    }

    /// Builds a table group from an explicit element list with `elements[0]`
    /// the identity. The list must be closed under `mul`.
    pub fn from_elements<T, F>(elements: &[T], mul: F) -> Result<FiniteGroup>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        if index.len() != elements.len() {
            return Err(Error::InvalidTable("duplicate elements".into()));
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in elements {
            for b in elements {
                let c = mul(a, b);
                let i = index.get(&c).ok_or_else(|| Error::InvalidTable("element list not closed".into()))?;
                table.push(*i as u32);
            }
        }
        Self::from_raw(n, table, None, None)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    /// `a * b^-1`
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// `g * x * g^-1`
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: Elem) -> Option<&str> {
        self.labels.as_ref().map(|l| l[x].as_str())
    }

    pub(crate) fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn check_elem(&self, x: Elem) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: x, order: self.order })
        }
    }

    pub fn elem_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted list of element orders; an isomorphism invariant.
    pub fn order_census(&self) -> Vec<usize> {
        let mut census: Vec<usize> = self.elements().map(|a| self.elem_order(a)).collect();
        census.sort_unstable();
        census
    }

    /// Full associativity scan up to order 64, otherwise 10^5 seeded random triples.
    pub fn check_associative(&self, seed: u64) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        Ok(())
    }

    /// Table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    fn greedy_generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        for x in 1..self.order {
            if !inside[x] {
                gens.push(x);
                for m in subgroup::closure_members(self, &gens) {
                    inside[m] = true;
                }
            }
        }
        gens
    }

    /// Shortest words in the recorded generators, computed breadth-first.
    /// Entry `x` is a sequence of generator positions.
    pub fn shortest_words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.order];
        words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in self.gens.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words.into_iter().map(|w| w.unwrap_or_default()).collect()
    }
}
