//! Formal words over named atoms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed word {input:?}: {reason}")]
pub struct WordParseError {
    pub input: String,
    pub reason: String,
}

/// A freely reduced product of atom powers, e.g. `a^-1 d^-1 c d a`.
/// The empty word is the identity and prints as `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<(String, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn atom(name: &str) -> Self {
        Word::atom_pow(name, 1)
    }

    pub fn atom_pow(name: &str, e: i64) -> Self {
        Word::from_syllables([(name.to_string(), e)])
    }

    pub fn from_syllables(parts: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut w = Word::default();
        for (a, e) in parts {
            w.push(a, e);
        }
        w
    }

    fn push(&mut self, atom: String, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((b, f)) if *b == atom => {
                *f += e;
                if *f == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((atom, e)),
        }
    }

    pub fn syllables(&self) -> &[(String, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total number of letters, `Σ |exponent|`.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (a, e) in &other.syllables {
            w.push(a.clone(), *e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word { syllables: self.syllables.iter().rev().map(|(a, e)| (a.clone(), -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `by⁻¹ · self · by`.
    pub fn conj(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        self.syllables.iter().map(|(a, _)| a.as_str()).collect()
    }

    /// Unit letters `(atom, ±1)` in order.
    pub fn letters(&self) -> Vec<(&str, i64)> {
        self.syllables
            .iter()
            .flat_map(|(a, e)| std::iter::repeat_n((a.as_str(), e.signum()), e.unsigned_abs() as usize))
            .collect()
    }

    /// Replaces the letters `pattern` starting at letter offset `at` by
    /// `replacement`. `None` if `pattern` does not occur there.
    pub fn replace_at(&self, at: usize, pattern: &Word, replacement: &Word) -> Option<Word> {
        let letters = self.letters();
        let pat = pattern.letters();
        if at + pat.len() > letters.len() || letters[at..at + pat.len()] != pat[..] {
            return None;
        }
        let to_word = |ls: &[(&str, i64)]| Word::from_syllables(ls.iter().map(|(a, e)| (a.to_string(), *e)));
        Some(to_word(&letters[..at]).mul(replacement).mul(&to_word(&letters[at + pat.len()..])))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, (a, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn valid_atom(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| WordParseError { input: s.to_string(), reason: reason.to_string() };
        let mut w = Word::identity();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, e) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (tok, 1),
            };
            if !valid_atom(name) {
                return Err(err("bad atom name"));
            }
            w.push(name.to_string(), e);
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w("a b b^-1 a"), w("a^2"));
        assert_eq!(w("a a^-1"), Word::identity());
        assert_eq!(w("1").to_string(), "1");
        assert_eq!(w("c").conj(&w("d a^2")).to_string(), "a^-2 d^-1 c d a^2");
        assert_eq!(w("a b").pow(-2), w("b^-1 a^-1 b^-1 a^-1"));
        assert_eq!(w("a b").len(), 2);
        assert_eq!(w("a^-3").len(), 3);
    }

    #[test]
    fn parse_errors() {
        assert!("a^x".parse::<Word>().is_err());
        assert!("3a".parse::<Word>().is_err());
        assert!("gamma_eta^-2 delta".parse::<Word>().is_ok());
    }

    #[test]
    fn replacement() {
        let x = w("b^2 c d^-1");
        assert_eq!(x.replace_at(1, &w("b c"), &w("e")), Some(w("b e d^-1")));
        assert_eq!(x.replace_at(0, &w("b c"), &w("e")), None);
        assert_eq!(x.replace_at(0, &x, &w("b^-36")), Some(w("b^-36")));
        assert_eq!(x.replace_at(3, &w("d^-1 d^-1"), &w("1")), None);
    }
}
