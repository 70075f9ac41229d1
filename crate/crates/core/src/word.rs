//! Letters and words of the two-letter alphabet `{x, y}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{CmzvError, Result};
use crate::index::Index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A monomial of the free algebra. The empty word is the unit `1`.
///
/// Words are ordered degree-lexicographically with `x < y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn x() -> Self {
        Word::letter(Letter::X)
    }

    pub fn y() -> Self {
        Word::letter(Letter::Y)
    }

    /// `z_k = y x^(k-1)`.
    pub fn z(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(CmzvError::InvalidArgument("z_k requires k >= 1".into()));
        }
        let mut v = Vec::with_capacity(k as usize);
        v.push(Letter::Y);
        v.extend(std::iter::repeat(Letter::X).take(k as usize - 1));
        Ok(Word(v))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn in_h0(&self) -> bool {
        self.is_empty() || self.in_hc0()
    }

    pub fn in_h1(&self) -> bool {
        self.is_empty() || self.first() == Some(Letter::Y)
    }

    pub fn in_hc(&self) -> bool {
        !self.is_empty()
    }

    pub fn in_hc0(&self) -> bool {
        self.first() == Some(Letter::Y) && self.last() == Some(Letter::X)
    }

    pub fn in_hc1(&self) -> bool {
        self.first() == Some(Letter::Y)
    }

    /// Reads `z_{k_1} ... z_{k_r}` back as `(k_1, ..., k_r)`; the unit gives
    /// the empty index.
    pub fn to_index(&self) -> Result<Index> {
        if !self.in_h1() {
            return Err(CmzvError::NotZWord(self.to_string()));
        }
        let mut parts = Vec::new();
        for l in &self.0 {
            match l {
                Letter::Y => parts.push(1u32),
                Letter::X => *parts.last_mut().expect("starts with y") += 1,
            }
        }
        Ok(Index::new_unchecked(parts))
    }

    pub fn from_index(index: &Index) -> Word {
        let mut v = Vec::with_capacity(index.weight() as usize);
        for &k in index.parts() {
            v.push(Letter::Y);
            v.extend(std::iter::repeat(Letter::X).take(k as usize - 1));
        }
        Word(v)
    }

    /// All words of exactly the given length, in canonical order.
    pub fn all_of_length(n: usize) -> Vec<Word> {
        (0..1u64 << n)
            .map(|bits| {
                Word(
                    (0..n)
                        .map(|i| {
                            if bits >> (n - 1 - i) & 1 == 1 {
                                Letter::Y
                            } else {
                                Letter::X
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = CmzvError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(CmzvError::Parse(format!("bad letter `{c}` in word `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}
