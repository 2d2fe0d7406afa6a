//! Example groups: finite truncations and scheduled infinite families.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{cyclic, direct_product, semidirect_from_generators, trivial, FiniteGroup, GroupRef, Homomorphism};
use crate::separability::{lattice_semidirect_schedule, Matrix, ScheduledGroup, Stage};

/// The hyperbolic matrix used for the default lattice group.
pub fn sol_matrix() -> Matrix {
    vec![vec![2, 1], vec![1, 1]]
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// `(⊕_{p ≤ P} C_{p^2}) ⋊ C_M` with the generator of `C_M` sending each
/// `y_p` to `y_p^(1+p)`. Needs every prime `p ≤ P` to divide `M`.
pub fn menth_truncation(prime_bound: u64, m: u64) -> Result<FiniteGroup> {
    if m == 0 {
        return Err(Error::InvalidArgs("M must be positive".into()));
    }
    let primes = primes_up_to(prime_bound);
    if let Some(&p) = primes.iter().find(|&&p| !m.is_multiple_of(p)) {
        return Err(Error::ActionOrderMismatch { p, m });
    }
    let mut n: GroupRef = Arc::new(trivial());
    for &p in &primes {
        n = Arc::new(direct_product(&n, &Arc::new(cyclic((p * p) as usize)?)));
    }
    // generators of n are the y_p in order
    let images: Vec<usize> = n.gens().iter().zip(&primes).map(|(&y, &p)| n.pow(y, 1 + p as i64)).collect();
    let action = Homomorphism::from_generator_images(&n, &n, &images)?;
    let h = Arc::new(cyclic(m as usize)?);
    semidirect_from_generators(&n, &h, &[action])
}

/// The stage of `Z^n ⋊_A Z` with modulus `m`, as a table group.
pub fn lattice_group(a: Matrix, m: usize) -> Result<FiniteGroup> {
    let sg = lattice_semidirect_schedule(a)?;
    Stage::Lattice(sg.stage_for_modulus(m)?).to_group()
}

/// `(Z/m)^2 ⋊ C_e` for the default hyperbolic matrix.
pub fn sol_lattice_group(m: usize) -> Result<FiniteGroup> {
    lattice_group(sol_matrix(), m)
}

/// `num * 2^k`, checked.
fn lift(num: i128, k: u32) -> Result<i128> {
    if k >= 120 {
        return Err(Error::Overflow("dyadic scaling".into()));
    }
    num.checked_mul(1i128 << k).ok_or_else(|| Error::Overflow("dyadic scaling".into()))
}

/// A dyadic rational `num / 2^exp`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub num: i128,
    pub exp: u32,
}

impl Dyadic {
    pub fn new(num: i128, exp: u32) -> Dyadic {
        let mut d = Dyadic { num, exp };
        while d.exp > 0 && d.num % 2 == 0 {
            d.num /= 2;
            d.exp -= 1;
        }
        if d.num == 0 {
            d.exp = 0;
        }
        d
    }

    /// Multiplies by `2^k`.
    pub fn scale(self, k: i64) -> Result<Dyadic> {
        let k32 = u32::try_from(k.unsigned_abs()).map_err(|_| Error::Overflow("dyadic scaling".into()))?;
        if k >= 0 {
            if k32 <= self.exp {
                Ok(Dyadic::new(self.num, self.exp - k32))
            } else {
                Ok(Dyadic::new(lift(self.num, k32 - self.exp)?, 0))
            }
        } else {
            let exp = self
                .exp
                .checked_add(k32)
                .filter(|&e| e < 120)
                .ok_or_else(|| Error::Overflow("dyadic scaling".into()))?;
            Ok(Dyadic::new(self.num, exp))
        }
    }

    pub fn checked_add(self, other: Dyadic) -> Result<Dyadic> {
        let exp = self.exp.max(other.exp);
        let a = lift(self.num, exp - self.exp)?;
        let b = lift(other.num, exp - other.exp)?;
        let num = a.checked_add(b).ok_or_else(|| Error::Overflow("dyadic sum".into()))?;
        Ok(Dyadic::new(num, exp))
    }

    fn residue(self, m: u64) -> usize {
        let m = m as i128;
        let half = (m + 1) / 2;
        let mut r = self.num.rem_euclid(m);
        for _ in 0..self.exp {
            r = r * half % m;
        }
        r as usize
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

fn parse_dyadic(s: &str) -> Option<Dyadic> {
    match s.split_once('/') {
        None => Some(Dyadic::new(s.parse().ok()?, 0)),
        Some((n, d)) => {
            let d: u128 = d.parse().ok()?;
            if d == 0 || !d.is_power_of_two() {
                return None;
            }
            Some(Dyadic::new(n.parse().ok()?, d.trailing_zeros()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bs12Elem {
    pub a: Dyadic,
    pub k: i64,
}

/// `BS(1,2) = Z[1/2] ⋊ Z` with `(a1, k1)(a2, k2) = (a1 + 2^k1 a2, k1 + k2)`.
/// Stage `index` has odd modulus `m = 2 index + 3` and is `C_m ⋊ C_e`,
/// `e` the order of 2 mod `m`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bs12;

pub fn bs12_schedule() -> Bs12 {
    Bs12
}

impl Bs12 {
    pub fn stage_for_modulus(&self, m: usize) -> Result<Stage> {
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::InvalidArgs("modulus must be odd and at least 3".into()));
        }
        let mut pow2 = vec![1usize];
        let mut x = 2 % m;
        while x != 1 {
            pow2.push(x);
            x = x * 2 % m;
        }
        Ok(Stage::Bs12 { m, e: pow2.len(), pow2 })
    }
}

impl ScheduledGroup for Bs12 {
    type Elem = Bs12Elem;

    fn family(&self) -> String {
        "bs12".into()
    }

    fn identity(&self) -> Bs12Elem {
        Bs12Elem { a: Dyadic::new(0, 0), k: 0 }
    }

    fn mul(&self, x: &Bs12Elem, y: &Bs12Elem) -> Result<Bs12Elem> {
        let a = x.a.checked_add(y.a.scale(x.k)?)?;
        let k = x.k.checked_add(y.k).ok_or_else(|| Error::Overflow("exponent".into()))?;
        Ok(Bs12Elem { a, k })
    }

    fn inv(&self, x: &Bs12Elem) -> Result<Bs12Elem> {
        let k = x.k.checked_neg().ok_or_else(|| Error::Overflow("exponent".into()))?;
        let a = x.a.scale(k)?;
        Ok(Bs12Elem { a: Dyadic::new(-a.num, a.exp), k })
    }

    fn generators(&self) -> Vec<Bs12Elem> {
        vec![Bs12Elem { a: Dyadic::new(1, 0), k: 0 }, Bs12Elem { a: Dyadic::new(0, 0), k: 1 }]
    }

    fn generator_names(&self) -> Vec<String> {
        vec!["a".into(), "t".into()]
    }

    fn stage(&self, index: usize) -> Result<Stage> {
        self.stage_for_modulus(2 * index + 3)
    }

    fn project(&self, stage: &Stage, x: &Bs12Elem) -> Result<usize> {
        match stage {
            Stage::Bs12 { m, e, .. } => Ok(x.k.rem_euclid(*e as i64) as usize * m + x.a.residue(*m as u64)),
            _ => Err(Error::InvalidArgs("stage does not belong to bs12".into())),
        }
    }

    fn format_elem(&self, x: &Bs12Elem) -> String {
        format!("({},{})", x.a, x.k)
    }

    /// `(a,k)` with `a` an integer or `n/2^j`.
    fn parse_literal(&self, text: &str) -> Option<Result<Bs12Elem>> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact.strip_prefix('(')?.strip_suffix(')')?;
        let (a, k) = inner.split_once(',')?;
        Some(match (parse_dyadic(a), k.parse::<i64>()) {
            (Some(a), Ok(k)) => Ok(Bs12Elem { a, k }),
            _ => Err(Error::Parse(format!("bad bs12 literal {text:?}"))),
        })
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Bs12Elem {
        Bs12Elem { a: Dyadic::new(rng.gen_range(-20..=20), rng.gen_range(0..4)), k: rng.gen_range(-3..=3) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZooKind {
    Finite,
    Scheduled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZooEntry {
    pub name: String,
    pub kind: ZooKind,
    /// Default parameters, in the group-spec JSON shape.
    pub parameters: Value,
    pub provenance: String,
}

pub fn zoo_entries() -> Vec<ZooEntry> {
    let entry = |name: &str, kind, parameters, provenance: &str| ZooEntry {
        name: name.into(),
        kind,
        parameters,
        provenance: provenance.into(),
    };
    vec![
        entry("integers", ZooKind::Scheduled, json!({}), "the infinite cyclic group with stages Z/m, m = 2, 3, ..."),
        entry(
            "lattice",
            ZooKind::Scheduled,
            json!({ "matrix": sol_matrix() }),
            "Z^n ⋊_A Z for a unimodular A; with A = [[2,1],[1,1]] it is polycyclic but not nilpotent-by-finite",
        ),
        entry(
            "sol_lattice",
            ZooKind::Finite,
            json!({ "m": 5 }),
            "finite image (Z/m)^2 ⋊ C_e of the lattice group for A = [[2,1],[1,1]]",
        ),
        entry("bs12", ZooKind::Scheduled, json!({}), "Baumslag-Solitar BS(1,2) = Z[1/2] ⋊ Z with odd-modulus stages"),
        entry(
            "menth",
            ZooKind::Finite,
            json!({ "p": 3, "m": 6 }),
            "finite truncation of (⊕_p C_{p^2}) ⋊ Z: primes up to p, y_p -> y_p^(1+p), acting group C_m",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separability::check_stage_homomorphy;

    #[test]
    fn menth_examples() {
        let g = menth_truncation(2, 2).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        g.check_associative(0).unwrap();
        let g = menth_truncation(3, 6).unwrap();
        assert_eq!(g.order(), 216);
        assert!(!g.is_abelian());
        g.check_associative(0).unwrap();
        assert_eq!(menth_truncation(2, 3).unwrap_err(), Error::ActionOrderMismatch { p: 2, m: 3 });
        assert_eq!(menth_truncation(1, 5).unwrap().order(), 5);
    }

    #[test]
    fn sol_lattice_matches_schedule() {
        let g = sol_lattice_group(2).unwrap();
        assert_eq!(g.order(), 12);
        g.check_associative(0).unwrap();
        let sg = lattice_semidirect_schedule(sol_matrix()).unwrap();
        for m in [2, 3, 5] {
            let table = sol_lattice_group(m).unwrap();
            let stage = Stage::Lattice(sg.stage_for_modulus(m).unwrap());
            assert_eq!(table.order(), stage.order());
            for x in table.elements() {
                for y in table.elements() {
                    assert_eq!(table.mul(x, y), stage.mul(x, y));
                }
            }
        }
        let five = sol_lattice_group(5).unwrap();
        assert_eq!(five.order(), 25 * sg.stage_for_modulus(5).unwrap().e);
        let direct = lattice_group(vec![vec![1, 0], vec![0, 1]], 2).unwrap();
        assert_eq!(direct.order(), 4);
        assert!(direct.is_abelian());
    }

    #[test]
    fn bs12_stages() {
        let b = bs12_schedule();
        assert_eq!(b.stage(0).unwrap().order(), 6);
        assert_eq!(b.stage_for_modulus(7).unwrap().order(), 21);
        let s = b.stage(0).unwrap();
        let one = b.parse_elem("(1,0)").unwrap();
        let two = b.mul(&one, &one).unwrap();
        assert_eq!(b.format_elem(&two), "(2,0)");
        assert_eq!(b.project(&s, &two).unwrap(), 2);
        for i in 0..10 {
            assert_eq!(check_stage_homomorphy(&b, i, 1000, i as u64).unwrap(), None);
        }
        // t a t^-1 = a^2
        let tat = b.parse_elem("t*a*t^-1").unwrap();
        assert_eq!(tat, b.parse_elem("a^2").unwrap());
        let half = b.parse_elem("t^-1*a*t").unwrap();
        assert_eq!(b.format_elem(&half), "(1/2,0)");
        assert_eq!(b.parse_elem("(1/2,0)").unwrap(), half);
        for x in [tat, half] {
            assert_eq!(b.mul(&x, &b.inv(&x).unwrap()).unwrap(), b.identity());
        }
    }

    #[test]
    fn zoo_entries_build() {
        for e in zoo_entries() {
            assert!(!e.name.is_empty());
        }
        sol_lattice_group(5).unwrap().check_associative(9).unwrap();
        menth_truncation(3, 6).unwrap();
    }
}
