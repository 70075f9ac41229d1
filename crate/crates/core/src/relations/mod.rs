//! Linear relations among cyclic, ordinary and star multiple zeta values:
//! generators for every family, numeric verification through the
//! evaluator, and exact rank computation.

mod generate;
mod rank;
mod verify;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

use crate::cyclic::CyclicIndex;
use crate::error::{CmzvError, Result};
use crate::index::Index;
use crate::rational::{parse_rational, Rational};

pub use generate::{
    cyclic_sum_via_cyc1, derivation_via_g, enumerate_family, gen_cyc1, gen_cyc2, gen_cyclic_sum,
    gen_derivation, gen_fwm, gen_sum_formula, reduce_cyc_symbol, sum_formula_words,
    EnumerationBounds,
};
pub use rank::{rank_over_q, RelationMatrix};
pub use verify::{verify_numeric, Guarantee, SymbolEvaluator, VerifyReport};

/// A value symbol: `ζ_cyc(𝕜)`, `ζ(k)` or `ζ★(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Cyc(CyclicIndex),
    Mzv(Index),
    Mzsv(Index),
}

impl Symbol {
    pub fn kind(&self) -> &'static str {
        match self {
            Symbol::Cyc(_) => "cyc",
            Symbol::Mzv(_) => "mzv",
            Symbol::Mzsv(_) => "mzsv",
        }
    }

    pub fn weight(&self) -> u32 {
        match self {
            Symbol::Cyc(k) => k.weight(),
            Symbol::Mzv(k) | Symbol::Mzsv(k) => k.weight(),
        }
    }

    pub fn is_admissible(&self) -> bool {
        match self {
            Symbol::Cyc(k) => k.is_admissible(),
            Symbol::Mzv(k) | Symbol::Mzsv(k) => k.is_admissible(),
        }
    }

    /// Serialized form used for every ordering: `cyc [(2),(1)]`, `mzv (1,2)`.
    pub fn key(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> Json {
        match self {
            Symbol::Cyc(k) => json!({"kind": "cyc", "index": k.blocks()}),
            Symbol::Mzv(k) => json!({"kind": "mzv", "index": k}),
            Symbol::Mzsv(k) => json!({"kind": "mzsv", "index": k}),
        }
    }

    fn from_json(v: &Json) -> Result<Self> {
        let bad = |what: &str| CmzvError::Parse(format!("bad symbol JSON ({what}): {v}"));
        let kind = v.get("kind").and_then(Json::as_str).ok_or_else(|| bad("kind"))?;
        let index = v.get("index").ok_or_else(|| bad("index"))?;
        Ok(match kind {
            "cyc" => {
                let blocks: Vec<Vec<u32>> =
                    serde_json::from_value(index.clone()).map_err(|_| bad("blocks"))?;
                Symbol::Cyc(CyclicIndex::new(
                    blocks.into_iter().map(Index::new).collect::<Result<_>>()?,
                )?)
            }
            "mzv" | "mzsv" => {
                let parts: Vec<u32> =
                    serde_json::from_value(index.clone()).map_err(|_| bad("parts"))?;
                let k = Index::new(parts)?;
                if kind == "mzv" {
                    Symbol::Mzv(k)
                } else {
                    Symbol::Mzsv(k)
                }
            }
            _ => return Err(bad("unknown kind")),
        })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Cyc(k) => write!(f, "cyc {k}"),
            Symbol::Mzv(k) => write!(f, "mzv {k}"),
            Symbol::Mzsv(k) => write!(f, "mzsv {k}"),
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "cyc1")]
    Cyc1,
    #[serde(rename = "cyc2")]
    Cyc2,
    #[serde(rename = "cyclic-sum")]
    CyclicSum,
    #[serde(rename = "derivation")]
    Derivation,
    #[serde(rename = "sum-formula")]
    SumFormula,
    #[serde(rename = "fwm")]
    Fwm,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Cyc1,
        Family::Cyc2,
        Family::CyclicSum,
        Family::Derivation,
        Family::SumFormula,
        Family::Fwm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cyc1 => "cyc1",
            Family::Cyc2 => "cyc2",
            Family::CyclicSum => "cyclic-sum",
            Family::Derivation => "derivation",
            Family::SumFormula => "sum-formula",
            Family::Fwm => "fwm",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CmzvError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CmzvError::Parse(format!("unknown relation family `{s}`")))
    }
}

/// A ℚ-linear combination of symbols asserted to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    family: Family,
    provenance: Map<String, Json>,
    terms: BTreeMap<Symbol, Rational>,
}

impl Relation {
    /// Drops zero coefficients; rejects empty and weight-inhomogeneous
    /// combinations.
    pub fn new(
        family: Family,
        provenance: Map<String, Json>,
        terms: impl IntoIterator<Item = (Symbol, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Symbol, Rational> = BTreeMap::new();
        for (s, c) in terms {
            *map.entry(s).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut weights = map.keys().map(Symbol::weight);
        let w = weights.next().ok_or(CmzvError::TrivialRelation)?;
        if let Some(found) = weights.find(|&x| x != w) {
            return Err(CmzvError::MixedWeight { expected: w, found });
        }
        Ok(Relation {
            family,
            provenance,
            terms: map,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn provenance(&self) -> &Map<String, Json> {
        &self.provenance
    }

    pub fn terms(&self) -> &BTreeMap<Symbol, Rational> {
        &self.terms
    }

    pub fn weight(&self) -> u32 {
        self.terms.keys().next().map(Symbol::weight).unwrap_or(0)
    }

    pub fn coeff(&self, s: &Symbol) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Same family and provenance with different terms.
    pub fn with_terms(&self, terms: impl IntoIterator<Item = (Symbol, Rational)>) -> Result<Self> {
        Relation::new(self.family, self.provenance.clone(), terms)
    }

    pub fn to_json(&self) -> Json {
        let terms: Vec<Json> = self
            .terms
            .iter()
            .map(|(s, c)| json!({"coeff": c.to_string(), "symbol": s.to_json()}))
            .collect();
        json!({
            "family": self.family.name(),
            "provenance": Json::Object(self.provenance.clone()),
            "terms": terms,
        })
    }

    pub fn to_json_line(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let bad = |what: &str| CmzvError::Parse(format!("bad relation JSON ({what})"));
        let family: Family = v
            .get("family")
            .and_then(Json::as_str)
            .ok_or_else(|| bad("family"))?
            .parse()?;
        let provenance = v
            .get("provenance")
            .and_then(Json::as_object)
            .cloned()
            .unwrap_or_default();
        let terms = v
            .get("terms")
            .and_then(Json::as_array)
            .ok_or_else(|| bad("terms"))?
            .iter()
            .map(|t| {
                let c = parse_rational(t.get("coeff").and_then(Json::as_str).ok_or_else(|| bad("coeff"))?)?;
                let s = Symbol::from_json(t.get("symbol").ok_or_else(|| bad("symbol"))?)?;
                Ok((s, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Relation::new(family, provenance, terms)
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let v: Json = serde_json::from_str(line).map_err(|e| CmzvError::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// `1 mzv (1,2) + -1 mzv (3) = 0`
impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} {s}")?;
        }
        f.write_str(" = 0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mzv(v: &[u32]) -> Symbol {
        Symbol::Mzv(Index::new(v.to_vec()).unwrap())
    }

    #[test]
    fn construction_rules() {
        let r = Relation::new(
            Family::SumFormula,
            Map::new(),
            [(mzv(&[1, 2]), int(1)), (mzv(&[3]), int(-1)), (mzv(&[3]), int(0))],
        )
        .unwrap();
        assert_eq!(r.to_string(), "1 mzv (1,2) + -1 mzv (3) = 0");
        assert_eq!(r.weight(), 3);
        assert!(matches!(
            Relation::new(Family::SumFormula, Map::new(), [(mzv(&[3]), int(1)), (mzv(&[3]), int(-1))]),
            Err(CmzvError::TrivialRelation)
        ));
        assert!(matches!(
            Relation::new(Family::SumFormula, Map::new(), [(mzv(&[3]), int(1)), (mzv(&[4]), int(1))]),
            Err(CmzvError::MixedWeight { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let mut prov = Map::new();
        prov.insert("k".into(), json!(3));
        let cyc = Symbol::Cyc("[(2,3),(1)]".parse().unwrap());
        let star = Symbol::Mzsv(Index::new(vec![1, 5]).unwrap());
        let r = Relation::new(Family::Cyc1, prov, [(cyc, int(2)), (star, crate::rational::ratio(-1, 3))]).unwrap();
        let line = r.to_json_line();
        assert_eq!(
            line,
            r#"{"family":"cyc1","provenance":{"k":3},"terms":[{"coeff":"2","symbol":{"index":[[2,3],[1]],"kind":"cyc"}},{"coeff":"-1/3","symbol":{"index":[1,5],"kind":"mzsv"}}]}"#
        );
        assert_eq!(Relation::from_json_line(&line).unwrap(), r);
        assert!(Relation::from_json_line(r#"{"family":"nope","terms":[]}"#).is_err());
    }

    #[test]
    fn family_names() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }
}
