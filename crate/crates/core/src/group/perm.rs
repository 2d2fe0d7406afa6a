use std::fmt;

use crate::error::{Error, Result};

use super::{FiniteGroup, Limits};

/// A permutation of `0..degree`, stored as its image list.
///
/// Products act on the right: `(a * b)[x] = b[a[x]]`, so `a` is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::InvalidPermutation(format!("point {x} exceeds degree {degree}")));
                }
                if touched[x] {
                    return Err(Error::InvalidPermutation(format!("point {x} repeated")));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Parses cycle notation such as `"(0 1 2)(3 4)"` or `"(0,1)"`; `"()"` is the identity.
pub fn parse_cycles(degree: usize, text: &str) -> Result<Permutation> {
    let text = text.trim();
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let open =
            rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in cycle notation {text:?}")))?;
        let close = open.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = &open[..close];
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = open[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}

/// Closure of permutation generators as a table group.
///
/// Elements are enumerated breadth-first from the identity; labels are the
/// cycle notation of each element.
pub fn group_from_permutations(degree: usize, generators: &[Permutation], limits: &Limits) -> Result<FiniteGroup> {
    if degree == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    for g in generators {
        if g.degree() != degree {
            return Err(Error::InvalidPermutation(format!("{g} has degree {} not {degree}", g.degree())));
        }
    }
    let (group, elements) =
        FiniteGroup::from_closure(Permutation::identity(degree), generators, |a, b| a.compose(b), limits.closure_cap)?;
    let labels = elements.iter().map(|p| p.to_string()).collect();
    Ok(group.with_labels(labels))
}
