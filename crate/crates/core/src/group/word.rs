//! Words in free groups.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// 1-based signed index: `g` or `-g`.
    pub fn signed(self) -> i64 {
        let g = self.generator as i64 + 1;
        if self.inverse {
            -g
        } else {
            g
        }
    }

    pub fn from_signed(x: i64) -> Option<Self> {
        match x {
            0 => None,
            x if x > 0 => Some(Letter::pos(x as usize - 1)),
            x => Some(Letter::neg((-x) as usize - 1)),
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
    cyclic: bool,
}

impl Word {
    pub fn linear(letters: Vec<Letter>) -> Self {
        Word { letters, cyclic: false }
    }

    pub fn cyclic(letters: Vec<Letter>) -> Self {
        Word { letters, cyclic: true }
    }

    pub fn from_signed(xs: &[i64], cyclic: bool) -> Option<Self> {
        let letters = xs.iter().map(|&x| Letter::from_signed(x)).collect::<Option<_>>()?;
        Some(Word { letters, cyclic })
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect(), cyclic: self.cyclic }
    }

    /// Concatenation; the result is linear.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::linear(letters)
    }

    /// Rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Word {
        let n = self.letters.len();
        let letters = (0..n).map(|i| self.letters[(k + i) % n]).collect();
        Word { letters, cyclic: self.cyclic }
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.letters.iter().filter(|l| l.generator == generator).count()
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters.iter().filter(|l| l.generator == generator).map(|l| l.exponent()).sum()
    }

    /// No adjacent inverse pair; for cyclic words also none across the wrap point.
    pub fn is_reduced(&self) -> bool {
        let adjacent = self.letters.windows(2).all(|w| w[0] != w[1].inv());
        let wrap = !self.cyclic || self.letters.len() < 2 || *self.letters.last().unwrap() != self.letters[0].inv();
        adjacent && wrap
    }

    /// Replaces every occurrence of `g` by `w` and `g⁻¹` by `w⁻¹`.
    pub fn substitute(&self, g: usize, w: &[Letter]) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if l.generator != g {
                letters.push(l);
            } else if l.inverse {
                letters.extend(w.iter().rev().map(|x| x.inv()));
            } else {
                letters.extend_from_slice(w);
            }
        }
        Word { letters, cyclic: self.cyclic }
    }

    pub fn map_generators(&self, f: impl Fn(usize) -> usize) -> Word {
        let letters = self.letters.iter().map(|l| Letter { generator: f(l.generator), inverse: l.inverse }).collect();
        Word { letters, cyclic: self.cyclic }
    }

    pub fn with_cyclic(mut self, cyclic: bool) -> Word {
        self.cyclic = cyclic;
        self
    }
}

/// Cancels adjacent inverse pairs. The cyclic flag is kept, but no
/// cancellation across the wrap point happens here.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out, cyclic: w.cyclic }
}

/// Free reduction followed by cancellation across the wrap point. The result
/// is marked cyclic.
pub fn cyclically_reduce(w: &Word) -> Word {
    let r = free_reduce(w).letters;
    let (mut i, mut j) = (0, r.len());
    while j - i >= 2 && r[i] == r[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    Word::cyclic(r[i..j].to_vec())
}

/// Writes a word with the given generator names, `A^-1` for inverses.
pub struct Display<'a>(pub &'a Word, pub &'a [String]);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.letters().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let name = self.1.get(l.generator).map(String::as_str).unwrap_or("?");
            if l.inverse {
                write!(f, "{name}^-1")?;
            } else {
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}

/// Signed-index serialization used in JSON reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedWord(pub Vec<i64>);

impl From<&Word> for SignedWord {
    fn from(w: &Word) -> Self {
        SignedWord(w.to_signed())
    }
}
