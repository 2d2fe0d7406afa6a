//! Element words such as `"a*b^-1"` and element text for table groups.

use crate::error::{Error, Result};

use super::perm::parse_cycles;
use super::{Elem, FiniteGroup};

/// `a, b, c, ...` for the first 26 generators, then `g26, g27, ...`.
pub fn default_generator_names(count: usize) -> Vec<String> {
    (0..count).map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("g{i}") }).collect()
}

/// Spellings of the identity accepted everywhere.
pub fn is_identity_word(text: &str) -> bool {
    matches!(text.trim(), "1" | "e" | "identity")
}

/// Parses `"a*b^-1*a^2"` into `(generator position, exponent)` letters.
pub fn parse_word(text: &str, names: &[String]) -> Result<Vec<(usize, i64)>> {
    let text = text.trim();
    if is_identity_word(text) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for token in text.split('*') {
        let token = token.trim();
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => {
                let e = e.trim().trim_start_matches('(').trim_end_matches(')');
                let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
                (n.trim(), e)
            }
            None => (token, 1),
        };
        if is_identity_word(name) {
            continue;
        }
        let pos = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?} in {text:?}")))?;
        out.push((pos, exp));
    }
    Ok(out)
}

/// Formats letters, merging adjacent repeats; the empty word is `"1"`.
pub fn format_word(letters: &[(usize, i64)], names: &[String]) -> String {
    let mut merged: Vec<(usize, i64)> = Vec::new();
    for &(g, e) in letters {
        match merged.last_mut() {
            Some((lg, le)) if *lg == g => *le += e,
            _ => merged.push((g, e)),
        }
        if merged.last().is_some_and(|&(_, e)| e == 0) {
            merged.pop();
        }
    }
    if merged.is_empty() {
        return "1".into();
    }
    merged
        .iter()
        .map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{e}", names[g]) })
        .collect::<Vec<_>>()
        .join("*")
}

impl FiniteGroup {
    pub fn generator_names(&self) -> Vec<String> {
        default_generator_names(self.gens().len())
    }

    /// Parses an element: an identity spelling, `#k` for a raw index, a
    /// label (cycle notation for permutation groups) or a generator word.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let t = text.trim();
        if is_identity_word(t) {
            return Ok(0);
        }
        if let Some(k) = t.strip_prefix('#') {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad index {t:?}")))?;
            self.check_elem(k)?;
            return Ok(k);
        }
        if let Some(labels) = self.labels() {
            if let Some(i) = labels.iter().position(|l| l == t) {
                return Ok(i);
            }
            if t.starts_with('(') {
                let max =
                    t.split(|c: char| !c.is_ascii_digit()).filter_map(|s| s.parse::<usize>().ok()).max().unwrap_or(0);
                let canonical = parse_cycles(max + 1, t)?.to_string();
                return labels
                    .iter()
                    .position(|l| *l == canonical)
                    .ok_or_else(|| Error::Parse(format!("{t:?} is not an element of the group")));
            }
        }
        let letters = parse_word(t, &self.generator_names())?;
        let mut x = 0;
        for (g, e) in letters {
            x = self.mul(x, self.pow(self.gens()[g], e));
        }
        Ok(x)
    }

    /// Text for every element: labels when present, otherwise shortest words.
    pub fn element_names(&self) -> Vec<String> {
        if let Some(labels) = self.labels() {
            return labels.to_vec();
        }
        let names = self.generator_names();
        self.shortest_words()
            .iter()
            .map(|w| format_word(&w.iter().map(|&g| (g, 1)).collect::<Vec<_>>(), &names))
            .collect()
    }

    pub fn format_elem(&self, x: Elem) -> String {
        match self.label(x) {
            Some(l) => l.to_string(),
            None => self.element_names()[x].clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, symmetric};
    use super::*;

    #[test]
    fn words_roundtrip() {
        let names = default_generator_names(2);
        assert_eq!(parse_word("a*b^-1*a^2", &names).unwrap(), vec![(0, 1), (1, -1), (0, 2)]);
        assert_eq!(parse_word("identity", &names).unwrap(), vec![]);
        assert!(parse_word("c", &names).is_err());
        assert_eq!(format_word(&[(0, 1), (0, 1), (1, -1)], &names), "a^2*b^-1");
        assert_eq!(format_word(&[(0, 1), (0, -1)], &names), "1");
    }

    #[test]
    fn finite_elements() {
        let c6 = cyclic(6).unwrap();
        assert_eq!(c6.parse_elem("a^4").unwrap(), 4);
        assert_eq!(c6.parse_elem("a^-1").unwrap(), 5);
        assert_eq!(c6.parse_elem("#3").unwrap(), 3);
        assert!(c6.parse_elem("#6").is_err());
        for x in c6.elements() {
            assert_eq!(c6.parse_elem(&c6.format_elem(x)).unwrap(), x);
        }
        let s3 = symmetric(3).unwrap();
        let t = s3.parse_elem("(0 1)").unwrap();
        assert_eq!(s3.parse_elem("(1,0)").unwrap(), t);
        assert_eq!(s3.parse_elem("()").unwrap(), 0);
        assert_eq!(s3.elem_order(s3.parse_elem("(0 1 2)").unwrap()), 3);
        assert!(s3.parse_elem("(0 3)").is_err());
        for x in s3.elements() {
            assert_eq!(s3.parse_elem(&s3.format_elem(x)).unwrap(), x);
        }
    }
}
