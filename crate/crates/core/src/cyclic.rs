//! Cyclic indices, tensors of words spanning `h^cyc`, and the symbol map
//! from z-word tensors to cyclic indices.
//!
//! Rotated cyclic indices are distinct symbols; rotation invariance is a
//! property of the values and is checked in the evaluator tests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{CmzvError, Result};
use crate::index::Index;
use crate::poly::NcPoly;
use crate::rational::Rational;
use crate::word::Word;

/// A nonempty sequence of nonempty blocks `[𝕜_1, ..., 𝕜_s]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicIndex {
    blocks: Vec<Index>,
}

impl CyclicIndex {
    pub fn new(blocks: Vec<Index>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(Index::is_empty) {
            return Err(CmzvError::InvalidArgument(
                "a cyclic index needs at least one block and no empty block".into(),
            ));
        }
        Ok(CyclicIndex { blocks })
    }

    pub fn from_parts(blocks: &[&[u32]]) -> Result<Self> {
        Self::new(
            blocks
                .iter()
                .map(|b| Index::new(b.to_vec()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn blocks(&self) -> &[Index] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(Index::weight).sum()
    }

    /// Total number of summation variables.
    pub fn depth(&self) -> usize {
        self.blocks.iter().map(Index::depth).sum()
    }

    /// Every block admissible or `(1)`, and not every block `(1)`.
    pub fn is_admissible(&self) -> bool {
        self.blocks.iter().all(|b| b.is_admissible() || b.is_one())
            && self.blocks.iter().any(|b| !b.is_one())
    }

    /// Cyclic shift to the right: block `j` of the result is block
    /// `j - by (mod s)` of `self`.
    pub fn rotate(&self, by: i64) -> CyclicIndex {
        let s = self.blocks.len() as i64;
        let shift = by.rem_euclid(s) as usize;
        let mut blocks = self.blocks.clone();
        blocks.rotate_right(shift);
        CyclicIndex { blocks }
    }

    /// `[𝕜_s 𝕜_1, 𝕜_2, ..., 𝕜_{s-1}]`, the index of the complementary part
    /// of the ribbon region. Requires `s >= 2`.
    pub fn wrap_concat(&self) -> Option<CyclicIndex> {
        let s = self.blocks.len();
        if s < 2 {
            return None;
        }
        let mut blocks = Vec::with_capacity(s - 1);
        blocks.push(self.blocks[s - 1].concat(&self.blocks[0]));
        blocks.extend_from_slice(&self.blocks[1..s - 1]);
        Some(CyclicIndex { blocks })
    }

    /// Every admissible cyclic index of the given weight with at most
    /// `max_blocks` blocks.
    pub fn enumerate_admissible(weight: u32, max_blocks: usize) -> Vec<CyclicIndex> {
        let mut block_choices: Vec<Vec<Index>> = vec![Vec::new(); weight as usize + 1];
        for w in 1..=weight {
            block_choices[w as usize] = Index::compositions(w)
                .into_iter()
                .filter(|b| b.is_admissible() || b.is_one())
                .collect();
        }
        let mut out = Vec::new();
        fn rec(
            rest: u32,
            slots: usize,
            choices: &[Vec<Index>],
            cur: &mut Vec<Index>,
            out: &mut Vec<CyclicIndex>,
        ) {
            if rest == 0 {
                let k = CyclicIndex { blocks: cur.clone() };
                if k.is_admissible() {
                    out.push(k);
                }
                return;
            }
            if slots == 0 {
                return;
            }
            for w in 1..=rest {
                for b in &choices[w as usize] {
                    cur.push(b.clone());
                    rec(rest - w, slots - 1, choices, cur, out);
                    cur.pop();
                }
            }
        }
        for s in 1..=max_blocks {
            let mut of_s = Vec::new();
            rec(weight, s, &block_choices, &mut Vec::new(), &mut of_s);
            of_s.retain(|k| k.block_count() == s);
            out.extend(of_s);
        }
        out
    }
}

impl fmt::Display for CyclicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

/// Parses `[(2,3),(1)]`; whitespace is ignored.
impl FromStr for CyclicIndex {
    type Err = CmzvError;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| CmzvError::Parse(format!("cyclic index must be bracketed: `{s}`")))?;
        let mut blocks = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| CmzvError::Parse(format!("expected `(` in `{s}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| CmzvError::Parse(format!("unclosed block in `{s}`")))?;
            let block: Index = body[..close].parse()?;
            if block.is_empty() {
                return Err(CmzvError::Parse(format!("empty block in `{s}`")));
            }
            blocks.push(block);
            rest = &body[close + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                if r.is_empty() {
                    return Err(CmzvError::Parse(format!("trailing comma in `{s}`")));
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(CmzvError::Parse(format!("expected `,` in `{s}`")));
            }
        }
        CyclicIndex::new(blocks).map_err(|e| CmzvError::Parse(e.to_string()))
    }
}

/// A pure tensor `u_1 ⊗ ... ⊗ u_s` of words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tensor(pub Vec<Word>);

impl Tensor {
    pub fn components(&self) -> &[Word] {
        &self.0
    }

    /// Components in `h_C^0 ∪ {y}`, not all equal to `y`.
    pub fn is_cyc_spanning(&self) -> bool {
        let y = Word::y();
        !self.0.is_empty()
            && self.0.iter().all(|u| u.in_hc0() || *u == y)
            && self.0.iter().any(|u| *u != y)
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(Word::weight).sum()
    }

    /// All spanning z-word tensors of total weight `weight` with at most
    /// `max_blocks` components.
    pub fn enumerate_spanning(weight: u32, max_blocks: usize) -> Vec<Tensor> {
        CyclicIndex::enumerate_admissible(weight, max_blocks)
            .into_iter()
            .map(|k| Tensor(k.blocks().iter().map(Word::from_index).collect()))
            .collect()
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{u}")?;
        }
        Ok(())
    }
}

/// `Z_cyc` at the symbol level: block `i` is the index of `u_i`.
pub fn tensor_to_cyclic_index(t: &Tensor) -> Result<CyclicIndex> {
    let y = Word::y();
    let mut blocks = Vec::with_capacity(t.0.len());
    for u in &t.0 {
        if !(u.in_hc0() || *u == y) {
            return Err(CmzvError::NotZWord(u.to_string()));
        }
        blocks.push(u.to_index()?);
    }
    let k = CyclicIndex::new(blocks)?;
    if !k.is_admissible() {
        return Err(CmzvError::InvalidArgument(format!(
            "tensor {t} is not in h^cyc (every component is y)"
        )));
    }
    Ok(k)
}

/// A ℚ-linear combination of spanning tensors, an element of `h^cyc`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElem {
    terms: BTreeMap<Tensor, Rational>,
}

impl TensorElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_tensor(t: Tensor) -> Result<Self> {
        let mut e = Self::zero();
        e.add_term(t, num_traits::One::one())?;
        Ok(e)
    }

    pub fn add_term(&mut self, t: Tensor, c: Rational) -> Result<()> {
        if !t.is_cyc_spanning() {
            return Err(CmzvError::InvalidArgument(format!(
                "tensor {t} is not in h^cyc"
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let e = self.terms.entry(t.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tensor, &Rational)> {
        self.terms.iter()
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &TensorElem) {
        for (t, d) in &other.terms {
            // terms of `other` already satisfy the spanning condition
            let _ = self.add_term(t.clone(), c * d);
        }
    }

    /// Inserts `u` after position `after` (0 = in front), linearly in `u`.
    pub fn insert_block(&self, after: usize, u: &NcPoly) -> Result<TensorElem> {
        let mut out = TensorElem::zero();
        for (t, c) in &self.terms {
            if after > t.0.len() {
                return Err(CmzvError::InvalidArgument(format!(
                    "insert position {after} beyond {} blocks",
                    t.0.len()
                )));
            }
            for (w, d) in u.iter() {
                let mut comps = t.0.clone();
                comps.insert(after, w.clone());
                out.add_term(Tensor(comps), c * d)?;
            }
        }
        Ok(out)
    }

    /// Replaces component `i` (1-based) by `u`, linearly in `u`.
    pub fn replace_block(&self, i: usize, u: &NcPoly) -> Result<TensorElem> {
        let mut out = TensorElem::zero();
        for (t, c) in &self.terms {
            if i == 0 || i > t.0.len() {
                return Err(CmzvError::InvalidArgument(format!(
                    "block position {i} outside 1..={}",
                    t.0.len()
                )));
            }
            for (w, d) in u.iter() {
                let mut comps = t.0.clone();
                comps[i - 1] = w.clone();
                out.add_term(Tensor(comps), c * d)?;
            }
        }
        Ok(out)
    }

    /// Maps every tensor to its cyclic index, combining equal symbols.
    pub fn to_cyclic_combination(&self) -> Result<BTreeMap<CyclicIndex, Rational>> {
        let mut out: BTreeMap<CyclicIndex, Rational> = BTreeMap::new();
        for (t, c) in &self.terms {
            let k = tensor_to_cyclic_index(t)?;
            *out.entry(k).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}
