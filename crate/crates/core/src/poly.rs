//! Exact-rational noncommutative polynomials over `{x, y}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{CmzvError, Result};
use crate::index::Index;
use crate::rational::{parse_rational, Rational};
use crate::word::Word;

/// A finite ℚ-linear combination of words. Zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Rational>,
}

/// The named subspaces of the free algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// `ℚ ⊕ y h x`
    H0,
    /// `ℚ ⊕ y h`
    H1,
    /// `h x ⊕ h y`
    HC,
    HC0,
    HC1,
}

impl Subspace {
    pub fn name(self) -> &'static str {
        match self {
            Subspace::H0 => "h^0",
            Subspace::H1 => "h^1",
            Subspace::HC => "h_C",
            Subspace::HC0 => "h_C^0",
            Subspace::HC1 => "h_C^1",
        }
    }

    pub fn contains_word(self, w: &Word) -> bool {
        match self {
            Subspace::H0 => w.in_h0(),
            Subspace::H1 => w.in_h1(),
            Subspace::HC => w.in_hc(),
            Subspace::HC0 => w.in_hc0(),
            Subspace::HC1 => w.in_hc1(),
        }
    }
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(Rational::one(), w)
    }

    pub fn term(c: Rational, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn x() -> Self {
        Self::from_word(Word::x())
    }

    pub fn y() -> Self {
        Self::from_word(Word::y())
    }

    /// `z_k` as a polynomial.
    pub fn z(k: u32) -> Result<Self> {
        Word::z(k).map(Self::from_word)
    }

    /// The z-word `z_{k_1} ... z_{k_r}`.
    pub fn from_index(index: &Index) -> Self {
        Self::from_word(Word::from_index(index))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical (degree-lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &NcPoly) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c * d);
        }
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect(),
        }
    }

    /// Concatenation product, the bilinear extension of word concatenation.
    pub fn concat(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> NcPoly {
        (0..n).fold(NcPoly::one(), |acc, _| acc.concat(self))
    }

    /// Largest word length; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::weight).max()
    }

    /// Whether every word has the same length.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Word::weight);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn in_subspace(&self, space: Subspace) -> bool {
        self.terms.keys().all(|w| space.contains_word(w))
    }

    pub fn require(&self, space: Subspace) -> Result<()> {
        match self.terms.keys().find(|w| !space.contains_word(w)) {
            None => Ok(()),
            Some(w) => Err(CmzvError::NotInSubspace {
                space: space.name(),
                word: w.to_string(),
            }),
        }
    }

    pub fn in_h0(&self) -> bool {
        self.in_subspace(Subspace::H0)
    }

    pub fn in_h1(&self) -> bool {
        self.in_subspace(Subspace::H1)
    }

    pub fn in_hc(&self) -> bool {
        self.in_subspace(Subspace::HC)
    }

    pub fn in_hc0(&self) -> bool {
        self.in_subspace(Subspace::HC0)
    }

    pub fn in_hc1(&self) -> bool {
        self.in_subspace(Subspace::HC1)
    }

    /// Applies a word-level linear map and sums the results.
    pub fn map_linear<F>(&self, mut f: F) -> Result<NcPoly>
    where
        F: FnMut(&Word) -> Result<NcPoly>,
    {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_scaled(c, &f(w)?);
        }
        Ok(out)
    }
}

impl From<Word> for NcPoly {
    fn from(w: Word) -> Self {
        NcPoly::from_word(w)
    }
}

impl FromIterator<(Word, Rational)> for NcPoly {
    fn from_iter<I: IntoIterator<Item = (Word, Rational)>>(iter: I) -> Self {
        let mut p = NcPoly::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }
}

impl AddAssign<&NcPoly> for NcPoly {
    fn add_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for NcPoly {
    type Output = NcPoly;
    fn add(mut self, rhs: NcPoly) -> NcPoly {
        self += &rhs;
        self
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        -&self
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Sub for NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: NcPoly) -> NcPoly {
        &self - &rhs
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.concat(rhs)
    }
}

impl Mul for NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: NcPoly) -> NcPoly {
        self.concat(&rhs)
    }
}

/// `1 yx + -1/2 yxx`; the zero polynomial prints as `0`.
impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} {w}")?;
        }
        Ok(())
    }
}

impl FromStr for NcPoly {
    type Err = CmzvError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(NcPoly::zero());
        }
        let mut p = NcPoly::zero();
        for term in s.split(" + ") {
            let (c, w) = term
                .trim()
                .split_once(' ')
                .ok_or_else(|| CmzvError::Parse(format!("bad term `{term}`")))?;
            p.add_term(w.trim().parse()?, parse_rational(c)?);
        }
        Ok(p)
    }
}
