//! Words over a finite generating set and their matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::linalg::QMatrix;

/// Signed 1-based letters: `k` is generator `k-1`, `-k` its inverse.
///
/// Rendered as `a`, `b`, ... with `A`, `B`, ... for inverses when there are at
/// most 26 generators, and as dotted tokens `g12.g3^-1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, letter: i32) -> Word {
        let mut w = self.0.clone();
        w.push(letter);
        Word(w)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Product of the letter matrices, left to right.
    pub fn matrix(&self, gens: &Alphabet) -> QMatrix {
        self.0.iter().fold(QMatrix::identity(gens.dim), |acc, &l| acc.mul(gens.letter(l)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        if self.0.iter().all(|l| l.unsigned_abs() <= 26) {
            for &l in &self.0 {
                let base = if l > 0 { b'a' } else { b'A' };
                write!(f, "{}", (base + (l.unsigned_abs() - 1) as u8) as char)?;
            }
            Ok(())
        } else {
            let toks: Vec<String> =
                self.0.iter().map(|&l| if l > 0 { format!("g{l}") } else { format!("g{}^-1", -l) }).collect();
            write!(f, "{}", toks.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Json(format!("invalid word `{s}`"));
        if s == "e" || s.is_empty() {
            return Ok(Word::default());
        }
        if s.starts_with('g') {
            return s
                .split('.')
                .map(|t| {
                    let t = t.strip_prefix('g').ok_or_else(bad)?;
                    match t.strip_suffix("^-1") {
                        Some(n) => n.parse::<i32>().map(|k| -k).map_err(|_| bad()),
                        None => t.parse::<i32>().map_err(|_| bad()),
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Word);
        }
        s.chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generators with precomputed inverses.
#[derive(Clone, Debug)]
pub struct Alphabet {
    pub dim: usize,
    gens: Vec<QMatrix>,
    invs: Vec<QMatrix>,
}

impl Alphabet {
    /// Panics on singular input; callers validate invertibility first.
    pub fn new(gens: &[QMatrix], dim: usize) -> Self {
        let invs = gens.iter().map(|g| g.inverse().expect("generators are invertible")).collect();
        Alphabet { dim, gens: gens.to_vec(), invs }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn letter(&self, l: i32) -> &QMatrix {
        let k = (l.unsigned_abs() - 1) as usize;
        if l > 0 {
            &self.gens[k]
        } else {
            &self.invs[k]
        }
    }

    /// Letters in enumeration order: `1..=k`, then `-1..=-k`.
    pub fn letters(&self) -> Vec<i32> {
        let k = self.gens.len() as i32;
        (1..=k).chain((1..=k).map(|l| -l)).collect()
    }

    /// Reduced words of length `1..=max_len` in shortlex order with their
    /// matrices, at most `cap` of them.
    pub fn enumerate(&self, max_len: usize, cap: usize) -> Vec<(Word, QMatrix)> {
        let mut out = Vec::new();
        self.find_word(max_len, cap, |w, m| {
            out.push((w.clone(), m.clone()));
            None::<()>
        });
        out
    }

    /// First word in shortlex order for which `f` returns a value, visiting
    /// at most `cap` words.
    pub fn find_word<T>(
        &self,
        max_len: usize,
        cap: usize,
        mut f: impl FnMut(&Word, &QMatrix) -> Option<T>,
    ) -> Option<(Word, T)> {
        let letters = self.letters();
        let mut visited = 0;
        let mut frontier = vec![(Word::default(), QMatrix::identity(self.dim))];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, m) in &frontier {
                for &l in &letters {
                    if w.0.last() == Some(&-l) {
                        continue;
                    }
                    if visited >= cap {
                        return None;
                    }
                    visited += 1;
                    let (w2, m2) = (w.push(l), m.mul(self.letter(l)));
                    if let Some(t) = f(&w2, &m2) {
                        return Some((w2, t));
                    }
                    next.push((w2, m2));
                }
            }
            frontier = next;
        }
        None
    }

    /// The generators themselves, without inverses.
    pub fn generators(&self) -> &[QMatrix] {
        &self.gens
    }
}
