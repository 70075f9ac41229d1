use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use super::{Family, Relation, Symbol};
use crate::error::{CmzvError, Result};
use crate::evaluator::{eval_cyc, eval_mzsv, eval_mzv, Arithmetic, TruncationSpec, Value};
use crate::rational::{to_f64, Rational};

/// What a passing check establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// The family comes from a decomposition of summation regions, so the
    /// truncated combination vanishes identically at every cutoff.
    ExactAtCutoff,
    /// The identity holds only in the limit; the residual is evidence.
    Asymptotic,
}

impl Guarantee {
    pub fn of(family: Family) -> Self {
        match family {
            Family::Cyc2 => Guarantee::ExactAtCutoff,
            _ => Guarantee::Asymptotic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Guarantee::ExactAtCutoff => "exact-at-cutoff",
            Guarantee::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub family: Family,
    pub cutoff: u64,
    pub arithmetic: Arithmetic,
    /// Float residual; NaN when some symbol could not be evaluated.
    pub residual: f64,
    /// Exact residual when evaluated in rational arithmetic.
    pub exact_residual: Option<Rational>,
    pub tol: f64,
    pub guarantee: Guarantee,
    pub passed: bool,
    pub symbol_errors: Vec<(Symbol, CmzvError)>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Json {
        json!({
            "family": self.family.name(),
            "cutoff": self.cutoff,
            "mode": self.arithmetic,
            "residual": if self.residual.is_finite() { json!(format!("{:e}", self.residual)) } else { Json::Null },
            "exact_residual": self.exact_residual.as_ref().map(|r| r.to_string()),
            "tol": format!("{:e}", self.tol),
            "guarantee": self.guarantee.name(),
            "passed": self.passed,
            "symbol_errors": self.symbol_errors.iter().map(|(s, e)| json!({"symbol": s.key(), "error": e.to_string()})).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} residual={:.3e} tol={:.1e} N={} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.family,
            self.residual,
            self.tol,
            self.cutoff,
            self.guarantee.name()
        )?;
        for (s, e) in &self.symbol_errors {
            write!(f, "; {s}: {e}")?;
        }
        Ok(())
    }
}

/// Evaluates symbols at a fixed truncation, caching every value.
pub struct SymbolEvaluator {
    spec: TruncationSpec,
    cache: Mutex<HashMap<Symbol, std::result::Result<Value, CmzvError>>>,
}

impl SymbolEvaluator {
    pub fn new(spec: TruncationSpec) -> Self {
        SymbolEvaluator {
            spec,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> TruncationSpec {
        self.spec
    }

    fn compute(&self, s: &Symbol) -> Result<Value> {
        match s {
            Symbol::Cyc(k) => eval_cyc(k, self.spec),
            Symbol::Mzv(k) => eval_mzv(k, self.spec),
            Symbol::Mzsv(k) => eval_mzsv(k, self.spec),
        }
    }

    /// Evaluates all symbols not yet cached, in parallel.
    pub fn prefetch<'a>(&self, symbols: impl IntoIterator<Item = &'a Symbol>) {
        let missing: Vec<Symbol> = {
            let cache = self.cache.lock().unwrap();
            let mut v: Vec<Symbol> = symbols
                .into_iter()
                .filter(|s| !cache.contains_key(*s))
                .cloned()
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let values: Vec<_> = missing.par_iter().map(|s| self.compute(s)).collect();
        let mut cache = self.cache.lock().unwrap();
        for (s, v) in missing.into_iter().zip(values) {
            cache.insert(s, v);
        }
    }

    pub fn eval(&self, s: &Symbol) -> Result<Value> {
        if let Some(v) = self.cache.lock().unwrap().get(s) {
            return v.clone();
        }
        let v = self.compute(s);
        self.cache.lock().unwrap().insert(s.clone(), v.clone());
        v
    }

    pub fn verify(&self, rel: &Relation, tol: f64) -> VerifyReport {
        self.prefetch(rel.terms().keys());
        let guarantee = Guarantee::of(rel.family());
        let mut symbol_errors = Vec::new();
        let mut exact = Rational::zero();
        let mut float = 0.0f64;
        for (s, c) in rel.terms() {
            match self.eval(s) {
                Ok(Value::Exact(v)) => exact += c * v,
                Ok(Value::Float(v)) => float += to_f64(c) * v,
                Err(e) => symbol_errors.push((s.clone(), e)),
            }
        }
        let ok = symbol_errors.is_empty();
        let (residual, exact_residual, passed) = match self.spec.arithmetic {
            Arithmetic::Exact => {
                let r = to_f64(&exact);
                let passed = ok
                    && match guarantee {
                        Guarantee::ExactAtCutoff => exact.is_zero(),
                        Guarantee::Asymptotic => r.abs() < tol,
                    };
                (if ok { r } else { f64::NAN }, ok.then_some(exact), passed)
            }
            Arithmetic::Float => {
                let r = if ok { float } else { f64::NAN };
                (r, None, ok && r.abs() < tol)
            }
        };
        VerifyReport {
            family: rel.family(),
            cutoff: self.spec.cutoff,
            arithmetic: self.spec.arithmetic,
            residual,
            exact_residual,
            tol,
            guarantee,
            passed,
            symbol_errors,
        }
    }
}

/// Evaluates the combination at the given truncation and compares the
/// residual against `tol`.
pub fn verify_numeric(rel: &Relation, t: TruncationSpec, tol: f64) -> VerifyReport {
    SymbolEvaluator::new(t).verify(rel, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Index;
    use crate::rational::int;
    use crate::relations::{gen_cyclic_sum, gen_sum_formula};
    use serde_json::Map;

    #[test]
    fn sum_formula_passes() {
        let r = gen_sum_formula(3, 2).unwrap();
        let rep = verify_numeric(&r, TruncationSpec::float(1000), 1e-2);
        assert!(rep.passed, "{rep}");
        assert_eq!(rep.guarantee, Guarantee::Asymptotic);
    }

    #[test]
    fn corrupted_relation_fails() {
        let r = gen_sum_formula(3, 2).unwrap();
        let bad = r
            .with_terms(r.terms().iter().map(|(s, c)| {
                let c = if *c == int(1) { int(2) } else { c.clone() };
                (s.clone(), c)
            }))
            .unwrap();
        assert!(!verify_numeric(&bad, TruncationSpec::float(1000), 1e-2).passed);
    }

    #[test]
    fn cyclic_sum_residual() {
        let r = gen_cyclic_sum(&[2]).unwrap();
        let rep = verify_numeric(&r, TruncationSpec::float(1000), 1e-2);
        assert!(rep.passed, "{rep}");
    }

    #[test]
    fn divergent_symbol_reported() {
        let one = Symbol::Mzv(Index::new(vec![1]).unwrap());
        let r = Relation::new(Family::SumFormula, Map::new(), [(one.clone(), int(1))]).unwrap();
        let rep = verify_numeric(&r, TruncationSpec::float(10), 1e-2);
        assert!(!rep.passed);
        assert_eq!(rep.symbol_errors[0].0, one);
        assert!(rep.residual.is_nan());
    }
}
