//! `Z^n ⋊_A Z` for a unimodular integer matrix `A`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::default_generator_names;

use super::schedule::ScheduledGroup;
use super::stage::{LatticeStage, Stage};

/// Largest stage order the schedule will construct.
pub const STAGE_ORDER_CAP: usize = 5_000_000;

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeElem {
    pub v: Vec<i64>,
    pub k: i64,
}

fn det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i128>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * a[0][c] * det(&minor)
        })
        .sum()
}

#[allow(clippy::needless_range_loop)]
fn inverse_unimodular(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let wide: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let d = det(&wide);
    if d != 1 && d != -1 {
        return Err(Error::NotUnimodular { det: d.clamp(i64::MIN as i128, i64::MAX as i128) as i64 });
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = wide
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let cof = sign * det(&minor) * d;
            inv[i][j] = i64::try_from(cof).map_err(|_| Error::Overflow("matrix inverse".into()))?;
        }
    }
    Ok(inv)
}

fn mat_vec(a: &Matrix, v: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .map(|row| row.iter().zip(v).try_fold(0i64, |acc, (&x, &y)| x.checked_mul(y).and_then(|p| acc.checked_add(p))))
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| Error::Overflow("lattice action".into()))
}

fn mat_mul_mod(a: &[Vec<usize>], b: &[Vec<usize>], m: usize) -> Vec<Vec<usize>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<usize>() % m).collect()).collect()
}

/// Multiplicative order of `A mod m`, with the list of its powers.
pub fn matrix_order_mod(a: &Matrix, m: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let n = a.len();
    let reduced: Vec<Vec<usize>> =
        a.iter().map(|r| r.iter().map(|&x| x.rem_euclid(m as i64) as usize).collect()).collect();
    let id: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| usize::from(i == j) % m).collect()).collect();
    let mut powers = vec![id.clone()];
    let mut cur = reduced.clone();
    while cur != id {
        if powers.len() > STAGE_ORDER_CAP {
            return Err(Error::OrderCapExceeded { order: powers.len(), cap: STAGE_ORDER_CAP });
        }
        powers.push(cur.clone());
        cur = mat_mul_mod(&cur, &reduced, m);
    }
    Ok(powers)
}

/// `Z^n ⋊_A Z` with `(v1, k1)(v2, k2) = (v1 + A^k1 v2, k1 + k2)` and stage
/// `m = index + 2` equal to `(Z/m)^n ⋊ C_e`, `e` the order of `A mod m`.
#[derive(Clone, Debug)]
pub struct LatticeSemidirect {
    a: Matrix,
    a_inv: Matrix,
}

pub fn lattice_semidirect_schedule(a: Matrix) -> Result<LatticeSemidirect> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgs("matrix must be square and nonempty".into()));
    }
    let a_inv = inverse_unimodular(&a)?;
    Ok(LatticeSemidirect { a, a_inv })
}

impl LatticeSemidirect {
    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    /// Stage with modulus `m >= 2`.
    pub fn stage_for_modulus(&self, m: usize) -> Result<LatticeStage> {
        if m < 2 {
            return Err(Error::InvalidArgs("modulus must be at least 2".into()));
        }
        let powers = matrix_order_mod(&self.a, m)?;
        let e = powers.len();
        let order = m
            .checked_pow(self.rank() as u32)
            .and_then(|s| s.checked_mul(e))
            .filter(|&o| o <= STAGE_ORDER_CAP)
            .ok_or(Error::OrderCapExceeded { order: usize::MAX, cap: STAGE_ORDER_CAP })?;
        debug_assert!(order > 0);
        Ok(LatticeStage { n: self.rank(), m, e, powers })
    }

    fn act(&self, k: i64, v: &[i64]) -> Result<Vec<i64>> {
        let m = if k >= 0 { &self.a } else { &self.a_inv };
        let mut out = v.to_vec();
        for _ in 0..k.unsigned_abs() {
            out = mat_vec(m, &out)?;
        }
        Ok(out)
    }
}

fn parse_int_list(s: &str) -> Option<Vec<i64>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

impl ScheduledGroup for LatticeSemidirect {
    type Elem = LatticeElem;

    fn family(&self) -> String {
        format!("lattice{:?}", self.a).replace(' ', "")
    }

    fn identity(&self) -> LatticeElem {
        LatticeElem { v: vec![0; self.rank()], k: 0 }
    }

    fn mul(&self, x: &LatticeElem, y: &LatticeElem) -> Result<LatticeElem> {
        let w = self.act(x.k, &y.v)?;
        let v =
            x.v.iter()
                .zip(&w)
                .map(|(a, b)| a.checked_add(*b))
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| Error::Overflow("lattice sum".into()))?;
        let k = x.k.checked_add(y.k).ok_or_else(|| Error::Overflow("lattice exponent".into()))?;
        Ok(LatticeElem { v, k })
    }

    fn inv(&self, x: &LatticeElem) -> Result<LatticeElem> {
        let k = x.k.checked_neg().ok_or_else(|| Error::Overflow("lattice exponent".into()))?;
        let w = self.act(k, &x.v)?;
        let v = w
            .iter()
            .map(|c| c.checked_neg())
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| Error::Overflow("lattice negation".into()))?;
        Ok(LatticeElem { v, k })
    }

    /// Basis vectors, then the stable letter.
    fn generators(&self) -> Vec<LatticeElem> {
        let n = self.rank();
        let mut gens: Vec<LatticeElem> =
            (0..n).map(|i| LatticeElem { v: (0..n).map(|j| i64::from(i == j)).collect(), k: 0 }).collect();
        gens.push(LatticeElem { v: vec![0; n], k: 1 });
        gens
    }

    fn generator_names(&self) -> Vec<String> {
        let mut names = default_generator_names(self.rank());
        names.push("t".into());
        names
    }

    fn stage(&self, index: usize) -> Result<Stage> {
        Ok(Stage::Lattice(self.stage_for_modulus(index + 2)?))
    }

    fn project(&self, stage: &Stage, x: &LatticeElem) -> Result<usize> {
        match stage {
            Stage::Lattice(l) if l.n == self.rank() => {
                let v: Vec<usize> = x.v.iter().map(|c| c.rem_euclid(l.m as i64) as usize).collect();
                Ok(l.encode(&v, x.k.rem_euclid(l.e as i64) as usize))
            }
            _ => Err(Error::InvalidArgs("stage does not belong to this lattice schedule".into())),
        }
    }

    fn format_elem(&self, x: &LatticeElem) -> String {
        let v: Vec<String> = x.v.iter().map(|c| c.to_string()).collect();
        format!("(({}),{})", v.join(","), x.k)
    }

    /// `((v_1,...,v_n),k)`.
    fn parse_literal(&self, text: &str) -> Option<Result<LatticeElem>> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact.strip_prefix("((")?.strip_suffix(')')?;
        let (vs, k) = inner.rsplit_once("),")?;
        let parsed = (|| {
            let v = parse_int_list(vs)?;
            let k: i64 = k.parse().ok()?;
            Some(LatticeElem { v, k })
        })();
        Some(match parsed {
            Some(x) if x.v.len() == self.rank() => Ok(x),
            _ => Err(Error::Parse(format!("bad lattice literal {text:?}"))),
        })
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> LatticeElem {
        LatticeElem { v: (0..self.rank()).map(|_| rng.gen_range(-3..=3)).collect(), k: rng.gen_range(-2..=2) }
    }
}
