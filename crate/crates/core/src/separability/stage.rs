//! Finite stages of a quotient schedule, multiplied without materialising a table.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupRef};

/// Largest stage turned into a full multiplication table by [`Stage::to_group`].
pub const TABLE_CAP: usize = 4096;

/// `(Z/m)^n ⋊ C_e`, with `t` acting through the matrix `A mod m` of order `e`.
///
/// Element `(v, k)` has index `k * m^n + sum v_j m^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeStage {
    pub n: usize,
    pub m: usize,
    pub e: usize,
    /// `A^k mod m` for `k < e`, row-major.
    pub powers: Vec<Vec<Vec<usize>>>,
}

impl LatticeStage {
    fn lattice_size(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    pub fn decode(&self, x: usize) -> (Vec<usize>, usize) {
        let size = self.lattice_size();
        let (mut rest, k) = (x % size, x / size);
        let mut v = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            v.push(rest % self.m);
            rest /= self.m;
        }
        (v, k)
    }

    pub fn encode(&self, v: &[usize], k: usize) -> usize {
        let mut x = 0;
        for &c in v.iter().rev() {
            x = x * self.m + c;
        }
        k * self.lattice_size() + x
    }

    fn apply_power(&self, k: usize, v: &[usize]) -> Vec<usize> {
        self.powers[k].iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<usize>() % self.m).collect()
    }
}

/// One finite quotient in a schedule. The identity is always index 0.
#[derive(Clone, Debug)]
pub enum Stage {
    Cyclic {
        m: usize,
    },
    Lattice(LatticeStage),
    /// `C_m ⋊ C_e` with `t` acting as multiplication by 2; index `k * m + a`.
    Bs12 {
        m: usize,
        e: usize,
        pow2: Vec<usize>,
    },
    Table(GroupRef),
    /// Index `b * |left| + a`.
    Product(Box<Stage>, Box<Stage>),
}

impl Stage {
    pub fn order(&self) -> usize {
        match self {
            Stage::Cyclic { m } => *m,
            Stage::Lattice(l) => l.lattice_size() * l.e,
            Stage::Bs12 { m, e, .. } => m * e,
            Stage::Table(g) => g.order(),
            Stage::Product(a, b) => a.order() * b.order(),
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match self {
            Stage::Cyclic { m } => (x + y) % m,
            Stage::Lattice(l) => {
                let (v1, k1) = l.decode(x);
                let (v2, k2) = l.decode(y);
                let w = l.apply_power(k1, &v2);
                let v: Vec<usize> = v1.iter().zip(&w).map(|(a, b)| (a + b) % l.m).collect();
                l.encode(&v, (k1 + k2) % l.e)
            }
            Stage::Bs12 { m, e, pow2 } => {
                let (a1, k1) = (x % m, x / m);
                let (a2, k2) = (y % m, y / m);
                ((k1 + k2) % e) * m + (a1 + pow2[k1] * a2) % m
            }
            Stage::Table(g) => g.mul(x, y),
            Stage::Product(a, b) => {
                let n = a.order();
                b.mul(x / n, y / n) * n + a.mul(x % n, y % n)
            }
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        match self {
            Stage::Cyclic { m } => (m - x) % m,
            Stage::Lattice(l) => {
                let (v, k) = l.decode(x);
                let kk = (l.e - k) % l.e;
                let w = l.apply_power(kk, &v);
                let neg: Vec<usize> = w.iter().map(|c| (l.m - c) % l.m).collect();
                l.encode(&neg, kk)
            }
            Stage::Bs12 { m, e, pow2 } => {
                let (a, k) = (x % m, x / m);
                let kk = (e - k) % e;
                kk * m + (m - pow2[kk] * a % m) % m
            }
            Stage::Table(g) => g.inv(x),
            Stage::Product(a, b) => {
                let n = a.order();
                b.inv(x / n) * n + a.inv(x % n)
            }
        }
    }

    /// Parameters describing the stage, recorded in certificates.
    pub fn params(&self) -> Value {
        match self {
            Stage::Cyclic { m } => json!({ "m": m }),
            Stage::Lattice(l) => json!({ "m": l.m, "e": l.e }),
            Stage::Bs12 { m, e, .. } => json!({ "m": m, "e": e }),
            Stage::Table(g) => json!({ "order": g.order() }),
            Stage::Product(a, b) => json!({ "left": a.params(), "right": b.params() }),
        }
    }

    /// The stage as a table group with the same element indices.
    pub fn to_group(&self) -> Result<FiniteGroup> {
        if let Stage::Table(g) = self {
            return Ok((**g).clone());
        }
        let n = self.order();
        if n > TABLE_CAP {
            return Err(Error::OrderCapExceeded { order: n, cap: TABLE_CAP });
        }
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(self.mul(x, y) as u32);
            }
        }
        FiniteGroup::from_raw(n, table, None, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_bs12_tables_are_groups() {
        let c = Stage::Cyclic { m: 5 }.to_group().unwrap();
        assert!(c.is_abelian());
        let b = Stage::Bs12 { m: 7, e: 3, pow2: vec![1, 2, 4] }.to_group().unwrap();
        assert_eq!(b.order(), 21);
        assert!(!b.is_abelian());
        b.check_associative(1).unwrap();
        for x in b.elements() {
            assert_eq!(b.mul(x, b.inv(x)), 0);
        }
    }

    #[test]
    fn product_indexing() {
        let p = Stage::Product(Box::new(Stage::Cyclic { m: 2 }), Box::new(Stage::Cyclic { m: 3 }));
        assert_eq!(p.order(), 6);
        // (1, 2) * (1, 2) = (0, 1)
        assert_eq!(p.mul(2 * 2 + 1, 2 * 2 + 1), 2);
        assert_eq!(p.inv(2 * 2 + 1), 2 + 1);
    }
}
