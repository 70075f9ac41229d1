//! Exact rational coefficients.
//!
//! `num_rational::BigRational` already keeps values in lowest terms with a
//! positive denominator; this module only adds parsing and float conversion.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CmzvError, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `1 / n^k`.
pub fn recip_pow(n: u64, k: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(n), k as usize))
}

/// Parses `p` or `p/q` (optional leading sign on `p`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || CmzvError::Parse(format!("bad rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() || den.starts_with(['-', '+']) {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Nearest `f64`; falls back to a digit-wise division for huge operands.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(900) as usize;
    let nf = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let df = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = nf / df;
    if r.is_negative() {
        -v
    } else {
        v
    }
}
