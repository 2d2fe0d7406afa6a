use std::fmt::Debug;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{default_generator_names, parse_word, Elem, GroupRef};

use super::stage::Stage;

/// A residually finite group given by normal forms and an indexed family of
/// finite quotients.
pub trait ScheduledGroup {
    type Elem: Clone + PartialEq + Debug;

    /// Stable name used in certificates and cache keys.
    fn family(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn generators(&self) -> Vec<Self::Elem>;

    fn generator_names(&self) -> Vec<String> {
        default_generator_names(self.generators().len())
    }

    fn stage(&self, index: usize) -> Result<Stage>;

    /// Image of `x` in a stage produced by [`ScheduledGroup::stage`].
    fn project(&self, stage: &Stage, x: &Self::Elem) -> Result<usize>;

    /// True when every stage is the whole group.
    fn faithful(&self) -> bool {
        false
    }

    fn format_elem(&self, x: &Self::Elem) -> String;

    /// Family-specific literal syntax, if `text` uses it.
    fn parse_literal(&self, _text: &str) -> Option<Result<Self::Elem>> {
        None
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem> {
        if let Some(r) = self.parse_literal(text.trim()) {
            return r;
        }
        let gens = self.generators();
        let mut x = self.identity();
        for (g, e) in parse_word(text, &self.generator_names())? {
            x = self.mul(&x, &pow(self, &gens[g], e)?)?;
        }
        Ok(x)
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}

pub fn pow<S: ScheduledGroup + ?Sized>(sg: &S, x: &S::Elem, e: i64) -> Result<S::Elem> {
    let mut base = if e < 0 { sg.inv(x)? } else { x.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = sg.identity();
    while e > 0 {
        if e & 1 == 1 {
            acc = sg.mul(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = sg.mul(&base, &base)?;
        }
    }
    Ok(acc)
}

/// Spot-checks that projection onto stage `index` is multiplicative.
/// Returns the first failing pair.
pub fn check_stage_homomorphy<S: ScheduledGroup>(
    sg: &S,
    index: usize,
    samples: usize,
    seed: u64,
) -> Result<Option<(S::Elem, S::Elem)>> {
    let stage = sg.stage(index)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = sg.random_elem(&mut rng);
        let y = sg.random_elem(&mut rng);
        let xy = sg.mul(&x, &y)?;
        let lhs = sg.project(&stage, &xy)?;
        let rhs = stage.mul(sg.project(&stage, &x)?, sg.project(&stage, &y)?);
        if lhs != rhs {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

fn wrong_stage(family: &str) -> Error {
    Error::InvalidArgs(format!("stage does not belong to schedule {family}"))
}

/// `Z` with stages `Z/m`, `m = index + 2`.
#[derive(Clone, Debug, Default)]
pub struct Integers;

impl ScheduledGroup for Integers {
    type Elem = i64;

    fn family(&self) -> String {
        "integers".into()
    }

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_add(*b).ok_or_else(|| Error::Overflow("integer sum".into()))
    }

    fn inv(&self, a: &i64) -> Result<i64> {
        a.checked_neg().ok_or_else(|| Error::Overflow("integer negation".into()))
    }

    fn generators(&self) -> Vec<i64> {
        vec![1]
    }

    fn stage(&self, index: usize) -> Result<Stage> {
        Ok(Stage::Cyclic { m: index + 2 })
    }

    fn project(&self, stage: &Stage, x: &i64) -> Result<usize> {
        match stage {
            Stage::Cyclic { m } => Ok(x.rem_euclid(*m as i64) as usize),
            _ => Err(wrong_stage("integers")),
        }
    }

    fn format_elem(&self, x: &i64) -> String {
        x.to_string()
    }

    fn parse_literal(&self, text: &str) -> Option<Result<i64>> {
        text.parse::<i64>().ok().map(Ok)
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(-1000..=1000)
    }
}

/// A finite group as a schedule whose every stage is the group itself.
#[derive(Clone, Debug)]
pub struct FiniteSchedule {
    name: String,
    group: GroupRef,
}

impl FiniteSchedule {
    pub fn new(name: impl Into<String>, group: GroupRef) -> FiniteSchedule {
        FiniteSchedule { name: name.into(), group }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }
}

impl ScheduledGroup for FiniteSchedule {
    type Elem = Elem;

    fn family(&self) -> String {
        self.name.clone()
    }

    fn identity(&self) -> Elem {
        0
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.group.check_elem(*a)?;
        self.group.check_elem(*b)?;
        Ok(self.group.mul(*a, *b))
    }

    fn inv(&self, a: &Elem) -> Result<Elem> {
        self.group.check_elem(*a)?;
        Ok(self.group.inv(*a))
    }

    fn generators(&self) -> Vec<Elem> {
        self.group.gens().to_vec()
    }

    fn stage(&self, _index: usize) -> Result<Stage> {
        Ok(Stage::Table(self.group.clone()))
    }

    fn project(&self, stage: &Stage, x: &Elem) -> Result<usize> {
        match stage {
            Stage::Table(g) if g.order() == self.group.order() => Ok(*x),
            _ => Err(wrong_stage(&self.name)),
        }
    }

    fn faithful(&self) -> bool {
        true
    }

    fn format_elem(&self, x: &Elem) -> String {
        self.group.format_elem(*x)
    }

    fn parse_elem(&self, text: &str) -> Result<Elem> {
        self.group.parse_elem(text)
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Elem {
        rng.gen_range(0..self.group.order())
    }
}

/// `A × B` with stage `i` the product of the two stages `i`.
#[derive(Clone, Debug)]
pub struct ProductSchedule<'a, A, B> {
    pub left: &'a A,
    pub right: &'a B,
}

impl<A: ScheduledGroup, B: ScheduledGroup> ScheduledGroup for ProductSchedule<'_, A, B> {
    type Elem = (A::Elem, B::Elem);

    fn family(&self) -> String {
        format!("product({},{})", self.left.family(), self.right.family())
    }

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.left.mul(&a.0, &b.0)?, self.right.mul(&a.1, &b.1)?))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.left.inv(&a.0)?, self.right.inv(&a.1)?))
    }

    fn generators(&self) -> Vec<Self::Elem> {
        let mut gens: Vec<Self::Elem> =
            self.left.generators().into_iter().map(|x| (x, self.right.identity())).collect();
        gens.extend(self.right.generators().into_iter().map(|y| (self.left.identity(), y)));
        gens
    }

    fn stage(&self, index: usize) -> Result<Stage> {
        Ok(Stage::Product(Box::new(self.left.stage(index)?), Box::new(self.right.stage(index)?)))
    }

    fn project(&self, stage: &Stage, x: &Self::Elem) -> Result<usize> {
        match stage {
            Stage::Product(a, b) => Ok(self.right.project(b, &x.1)? * a.order() + self.left.project(a, &x.0)?),
            _ => Err(wrong_stage(&self.family())),
        }
    }

    fn faithful(&self) -> bool {
        self.left.faithful() && self.right.faithful()
    }

    fn format_elem(&self, x: &Self::Elem) -> String {
        format!("{} | {}", self.left.format_elem(&x.0), self.right.format_elem(&x.1))
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem> {
        let (a, b) =
            text.split_once('|').ok_or_else(|| Error::Parse(format!("expected 'left | right', got {text:?}")))?;
        Ok((self.left.parse_elem(a)?, self.right.parse_elem(b)?))
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        (self.left.random_elem(rng), self.right.random_elem(rng))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::symmetric;

    #[test]
    fn integer_stages() {
        let z = Integers;
        let s = z.stage(3).unwrap();
        assert_eq!(s.order(), 5);
        assert_eq!(z.project(&s, &-1).unwrap(), 4);
        assert_eq!(pow(&z, &3, -4).unwrap(), -12);
        assert_eq!(z.parse_elem("a^3*a").unwrap(), 4);
        assert_eq!(z.parse_elem("-7").unwrap(), -7);
        assert_eq!(check_stage_homomorphy(&z, 5, 1000, 1).unwrap(), None);
    }

    #[test]
    fn product_of_finite_and_integers() {
        let f = FiniteSchedule::new("S3", Arc::new(symmetric(3).unwrap()));
        let p = ProductSchedule { left: &f, right: &Integers };
        assert!(!p.faithful());
        for i in 0..4 {
            assert_eq!(check_stage_homomorphy(&p, i, 1000, i as u64).unwrap(), None);
        }
        let x = p.parse_elem("(0 1) | 5").unwrap();
        assert_eq!(p.format_elem(&x), "(0 1) | 5");
    }
}
