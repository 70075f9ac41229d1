//! Ordered-simplex integrals of the forms `dt/t` (letter `x`) and
//! `dt/(1-t)` (letter `y`) by nested Gauss–Legendre quadrature.
//!
//! The variable `t_i` ranges over `(t_{i-1}, hi)`, so the ordered simplex is
//! a product of intervals after nesting. Panels are graded geometrically
//! toward both ends of every interval; this keeps the `1/t` and `1/(1-t)`
//! endpoint growth under control on shrunken unit intervals.

use gauss_quad::GaussLegendre;

use crate::error::{CmzvError, Result};
use crate::word::{Letter, Word};

/// Deepest word accepted by the quadrature routines.
pub const MAX_QUAD_WEIGHT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Difference between two rules of different order.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error_estimate: f64,
    /// Smallest shrink parameter used.
    pub epsilon: f64,
}

fn form(l: Letter, t: f64) -> f64 {
    match l {
        Letter::X => 1.0 / t,
        Letter::Y => 1.0 / (1.0 - t),
    }
}

struct Rule {
    gl: GaussLegendre,
    /// Number of geometric panels toward each end.
    grading: usize,
}

impl Rule {
    fn new(points: usize, grading: usize) -> Self {
        Rule {
            gl: GaussLegendre::new(points).expect("at least two points"),
            grading,
        }
    }

    fn integrate(&self, a: f64, b: f64, f: &mut dyn FnMut(f64) -> f64) -> f64 {
        if self.grading == 0 {
            return self.gl.integrate(a, b, f);
        }
        // breakpoints a + h·ρ^j toward a, mirrored toward b
        const RATIO: f64 = 0.15;
        let mid = 0.5 * (a + b);
        let half = mid - a;
        let mut cuts = vec![a];
        for j in (1..=self.grading).rev() {
            cuts.push(a + half * RATIO.powi(j as i32));
        }
        cuts.push(mid);
        for j in 1..=self.grading {
            cuts.push(b - half * RATIO.powi(j as i32));
        }
        cuts.push(b);
        cuts.windows(2)
            .map(|w| self.gl.integrate(w[0], w[1], &mut *f))
            .sum()
    }
}

/// `∫_{lo < t_1 < ... < t_k < hi} Π a_i(t_i) dt_i`.
fn nested(letters: &[Letter], lo: f64, hi: f64, rule: &Rule) -> f64 {
    match letters.split_first() {
        None => 1.0,
        Some((&l, rest)) => rule.integrate(lo, hi, &mut |t| form(l, t) * nested(rest, t, hi, rule)),
    }
}

fn check_bounds(word: &Word, p: f64, q: f64) -> Result<()> {
    if word.weight() > MAX_QUAD_WEIGHT {
        return Err(CmzvError::InvalidArgument(format!(
            "quadrature depth is capped at weight {MAX_QUAD_WEIGHT}, got {}",
            word.weight()
        )));
    }
    if !(0.0 < p && p < q && q < 1.0) {
        return Err(CmzvError::InvalidArgument(format!(
            "need 0 < p < q < 1, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

fn two_rules(letters: &[Letter], lo: f64, hi: f64, grading: usize) -> QuadResult {
    let coarse = nested(letters, lo, hi, &Rule::new(16, grading));
    let fine = nested(letters, lo, hi, &Rule::new(24, grading));
    QuadResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
    }
}

/// The free ordered integral `∫_{p < t_1 < ... < t_k < q} Π a_i(t_i) dt_i`
/// attached to `word`.
pub fn ordered_integral(word: &Word, p: f64, q: f64) -> Result<QuadResult> {
    check_bounds(word, p, q)?;
    Ok(two_rules(word.letters(), p, q, 0))
}

/// The endpoint-pinned functional `f_{p,q}(u_1 ⋯ u_k)`: `t_1 = p` and
/// `t_k = q` are fixed, `t_2, ..., t_{k-1}` are integrated over
/// `p < t_2 < ... < t_{k-1} < q`. Single letters map to zero.
pub fn quad_iterated(word: &Word, p: f64, q: f64) -> Result<QuadResult> {
    check_bounds(word, p, q)?;
    let letters = word.letters();
    let k = letters.len();
    if k < 2 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let ends = form(letters[0], p) * form(letters[k - 1], q);
    let inner = two_rules(&letters[1..k - 1], p, q, 0);
    Ok(QuadResult {
        value: ends * inner.value,
        error_estimate: ends.abs() * inner.error_estimate,
    })
}

/// Ordered integral of `word` over `(0, 1)`, approached through the shrunken
/// intervals `(ε, 1 - ε)` for `ε = ε_0, ε_0/2, ε_0/4, ε_0/8` and
/// extrapolated to `ε → 0` under the model `I_0 + a·ε log ε + b·ε`.
pub fn full_interval_integral(word: &Word, eps0: f64) -> Result<Extrapolated> {
    if word.weight() > 2 {
        return Err(CmzvError::InvalidArgument(
            "full-interval integrals are limited to weight 2".into(),
        ));
    }
    if !(0.0 < eps0 && eps0 < 0.25) {
        return Err(CmzvError::InvalidArgument(format!("bad epsilon {eps0}")));
    }
    let rule = Rule::new(20, 30);
    let eps: Vec<f64> = (0..4).map(|j| eps0 / f64::powi(2.0, j)).collect();
    let vals: Vec<f64> = eps
        .iter()
        .map(|&e| nested(word.letters(), e, 1.0 - e, &rule))
        .collect();
    let fit = |range: std::ops::Range<usize>| -> f64 {
        let rows: Vec<[f64; 4]> = range
            .map(|j| [1.0, eps[j] * eps[j].ln(), eps[j], vals[j]])
            .collect();
        solve3(&rows)
    };
    let a = fit(0..3);
    let b = fit(1..4);
    Ok(Extrapolated {
        value: b,
        error_estimate: (a - b).abs(),
        epsilon: eps[3],
    })
}

/// First unknown of a 3×3 system given as augmented rows.
fn solve3(rows: &[[f64; 4]]) -> f64 {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = [
        [rows[0][0], rows[0][1], rows[0][2]],
        [rows[1][0], rows[1][1], rows[1][2]],
        [rows[2][0], rows[2][1], rows[2][2]],
    ];
    let mut a0 = a;
    for i in 0..3 {
        a0[i][0] = rows[i][3];
    }
    det(a0) / det(a)
}
