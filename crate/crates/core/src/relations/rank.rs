use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Zero;

use super::{Relation, Symbol};
use crate::error::{CmzvError, Result};
use crate::rational::Rational;

/// Relations as rows of an exact matrix over their symbols. Columns are
/// sorted by serialized symbol, rows by serialized relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationMatrix {
    columns: Vec<Symbol>,
    rows: Vec<Vec<Rational>>,
}

impl RelationMatrix {
    pub fn new(rels: &[Relation], weight: u32) -> Result<Self> {
        for r in rels {
            if r.weight() != weight {
                return Err(CmzvError::MixedWeight {
                    expected: weight,
                    found: r.weight(),
                });
            }
        }
        let columns: Vec<Symbol> = rels
            .iter()
            .flat_map(|r| r.terms().keys().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut sorted: Vec<&Relation> = rels.iter().collect();
        sorted.sort_by_cached_key(|r| r.to_json_line());
        let rows = sorted
            .into_iter()
            .map(|r| columns.iter().map(|s| r.coeff(s)).collect())
            .collect();
        Ok(RelationMatrix { columns, rows })
    }

    pub fn columns(&self) -> &[Symbol] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Rank by exact Gaussian elimination, pivoting on the first column
    /// with a nonzero entry among the remaining rows.
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let ncols = self.columns.len();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            let prow: Vec<Rational> = m[rank].iter().map(|v| v / &pivot).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i == rank || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (a, b) in row.iter_mut().zip(&prow).skip(col) {
                    *a -= &f * b;
                }
            }
            m[rank] = prow;
            rank += 1;
        }
        rank
    }

    /// Header row of serialized symbols, then one row of coefficients per
    /// relation.
    pub fn to_csv(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|s| quote(&s.key())).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Rank over ℚ of a set of relations of one weight.
pub fn rank_over_q(rels: &[Relation], weight: u32) -> Result<usize> {
    Ok(RelationMatrix::new(rels, weight)?.rank())
}
