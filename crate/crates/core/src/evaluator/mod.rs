//! Truncated series, region indicators and low-dimensional quadrature.
//!
//! Every series is truncated to the box where all summation variables are
//! at most the cutoff `N`. Set decompositions of the summation regions
//! restrict to this box exactly, so identities that come from splitting a
//! region hold at every finite `N` in exact arithmetic.

mod quadrature;
mod regions;
mod series;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{to_f64, Rational};

pub use quadrature::{
    full_interval_integral, ordered_integral, quad_iterated, Extrapolated, QuadResult,
    MAX_QUAD_WEIGHT,
};
pub use regions::{
    check_e_identity_cont, check_e_identity_discrete, e_cont, e_discrete, enumerate_s_points,
    indicator_d, indicator_dprime, indicator_s, indicator_sprime, SimplexShape,
};
pub use series::{eval_cyc, eval_mzsv, eval_mzv, eval_ribbon, last_shell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

/// How a series is cut off: all variables at most `cutoff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncationSpec {
    pub cutoff: u64,
    pub arithmetic: Arithmetic,
}

impl TruncationSpec {
    pub fn exact(cutoff: u64) -> Self {
        TruncationSpec {
            cutoff,
            arithmetic: Arithmetic::Exact,
        }
    }

    pub fn float(cutoff: u64) -> Self {
        TruncationSpec {
            cutoff,
            arithmetic: Arithmetic::Float,
        }
    }
}

/// A truncated value. Exact values are never rounded; float values carry
/// the usual per-term rounding under compensated summation.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(v) => write!(f, "{v}"),
        }
    }
}
