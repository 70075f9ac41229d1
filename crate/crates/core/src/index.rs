//! Compositions `(k_1, ..., k_r)` of positive integers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CmzvError, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Index(Vec<u32>);

impl Index {
    /// Builds an index; every part must be positive. The empty index is
    /// allowed and corresponds to the unit word.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&k| k == 0) {
            return Err(CmzvError::InvalidArgument(format!(
                "index parts must be positive: {parts:?}"
            )));
        }
        Ok(Index(parts))
    }

    pub(crate) fn new_unchecked(parts: Vec<u32>) -> Self {
        Index(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.last().is_some_and(|&k| k >= 2)
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    /// The concatenation `self` followed by `other`.
    pub fn concat(&self, other: &Index) -> Index {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Index(v)
    }

    /// All compositions of `weight` into positive parts, ordered by depth and
    /// then lexicographically.
    pub fn compositions(weight: u32) -> Vec<Index> {
        let mut out = Vec::new();
        for depth in 1..=weight as usize {
            out.extend(Self::compositions_of_depth(weight, depth));
        }
        out
    }

    pub fn compositions_of_depth(weight: u32, depth: usize) -> Vec<Index> {
        fn rec(rest: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
            if slots == 0 {
                if rest == 0 {
                    out.push(Index(cur.clone()));
                }
                return;
            }
            if rest < slots as u32 {
                return;
            }
            for k in 1..=rest - (slots as u32 - 1) {
                cur.push(k);
                rec(rest - k, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if depth > 0 {
            rec(weight, depth, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

/// Accepts `(1,2)`, `1,2` or `1 2`.
impl FromStr for Index {
    type Err = CmzvError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let parts = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| CmzvError::Parse(format!("bad index part `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts).map_err(|e| CmzvError::Parse(e.to_string()))
    }
}
