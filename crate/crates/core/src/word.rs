//! Words in a finite generating set.
//!
//! Generator `i` prints as the letter `'a' + i` and its inverse as the
//! uppercase letter. The empty word prints as `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_GENERATORS: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u8,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        assert!(gen < MAX_GENERATORS, "generator index {gen} out of range");
        Letter { gen: gen as u8, inv }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.gen) as char;
        if self.inv {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Letter::new((c as u8 - b'a') as usize, false))
        } else if c.is_ascii_uppercase() {
            Some(Letter::new((c as u8 - b'A') as usize, true))
        } else {
            None
        }
    }

    /// Position in the search order `a < A < b < B < ...`.
    pub fn rank(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        Word(vec![Letter::new(i, false)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word(out)
    }

    /// Free reduction; letters of involution generators also cancel in pairs.
    pub fn reduced(&self, involution: impl Fn(usize) -> bool) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            let l = if involution(l.gen as usize) {
                Letter { gen: l.gen, inv: false }
            } else {
                l
            };
            match out.last() {
                Some(&p) if p == l.inverse() || (p == l && involution(l.gen as usize)) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn free_reduced(&self) -> Self {
        self.reduced(|_| false)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen as usize).max()
    }

    /// Commutator `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().concat(&y.inverse()).concat(x).concat(y)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::identity());
        }
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                Letter::from_char(c)
                    .ok_or_else(|| Error::parse(1, i + 1, format!("`{c}` is not a generator letter")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduced words in breadth-first order: by length, then lexicographically in
/// the letter order `a < A < b < B < ...`. Involution generators contribute a
/// single letter and never repeat.
pub struct WordSearch {
    gens: usize,
    involution: Vec<bool>,
    max_len: usize,
    layer: Vec<Word>,
    pos: usize,
    len: usize,
}

impl WordSearch {
    pub fn new(involution: Vec<bool>, max_len: usize) -> Self {
        WordSearch {
            gens: involution.len(),
            involution,
            max_len,
            layer: vec![Word::identity()],
            pos: 0,
            len: 0,
        }
    }

    fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for g in 0..self.gens {
            out.push(Letter::new(g, false));
            if !self.involution[g] {
                out.push(Letter::new(g, true));
            }
        }
        out
    }

    fn next_layer(&mut self) {
        let letters = self.letters();
        let mut next = Vec::new();
        for w in &self.layer {
            for &l in &letters {
                if let Some(&last) = w.0.last() {
                    if last == l.inverse() || (last == l && self.involution[l.gen as usize]) {
                        continue;
                    }
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        self.layer = next;
        self.pos = 0;
        self.len += 1;
    }
}

impl Iterator for WordSearch {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if self.pos < self.layer.len() {
                self.pos += 1;
                return Some(self.layer[self.pos - 1].clone());
            }
            if self.len >= self.max_len || self.gens == 0 {
                return None;
            }
            self.next_layer();
            if self.layer.is_empty() {
                return None;
            }
        }
    }
}
