//! The derivations `δ_m`, `∂_m`, `s` on the free algebra, operator
//! expressions built from them, and the combinations `F(w, m)` and `G_m(w)`.
//!
//! Operators are plain data interpreted by [`DerivationOp::apply`], so that
//! commutators and formal sums compare and print structurally.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_traits::One;

use crate::error::{CmzvError, Result};
use crate::poly::{NcPoly, Subspace};
use crate::products::{inner_harmonic, inner_shuffle};
use crate::rational::{int, Rational};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DerivationOp {
    Delta(u32),
    Partial(u32),
    S,
    Commutator(Box<DerivationOp>, Box<DerivationOp>),
    Scaled(Rational, Box<DerivationOp>),
    Sum(Vec<DerivationOp>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Primitive {
    Delta(u32),
    Partial(u32),
    S,
}

/// Images of `x` and `y` under a primitive derivation.
#[derive(Debug, Clone)]
struct GeneratorImages {
    x: NcPoly,
    y: NcPoly,
}

fn images(prim: Primitive) -> GeneratorImages {
    static CACHE: OnceLock<RwLock<HashMap<Primitive, GeneratorImages>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(img) = cache.read().expect("cache poisoned").get(&prim) {
        return img.clone();
    }
    let img = compute_images(prim);
    cache
        .write()
        .expect("cache poisoned")
        .insert(prim, img.clone());
    img
}

fn compute_images(prim: Primitive) -> GeneratorImages {
    let x = NcPoly::x();
    let y = NcPoly::y();
    let z = &x + &y;
    match prim {
        Primitive::Delta(m) => GeneratorImages {
            x: NcPoly::zero(),
            y: y.concat(&x.pow(m as usize - 1)).concat(&z),
        },
        Primitive::Partial(m) => {
            let img = y.concat(&z.pow(m as usize - 1)).concat(&x);
            GeneratorImages { x: img.clone(), y: -img }
        }
        // s(x) = x², s(x + y) = (x + y)²
        Primitive::S => GeneratorImages {
            x: x.concat(&x),
            y: &z.concat(&z) - &x.concat(&x),
        },
    }
}

fn apply_primitive(prim: Primitive, a: &NcPoly) -> NcPoly {
    let img = images(prim);
    let mut out = NcPoly::zero();
    for (w, c) in a.iter() {
        let letters = w.letters();
        for (i, l) in letters.iter().enumerate() {
            let image = match l {
                Letter::X => &img.x,
                Letter::Y => &img.y,
            };
            if image.is_zero() {
                continue;
            }
            let pre = NcPoly::from_word(w.slice(0..i));
            let post = NcPoly::from_word(w.slice(i + 1..letters.len()));
            out.add_scaled(c, &pre.concat(image).concat(&post));
        }
    }
    out
}

impl DerivationOp {
    pub fn delta(m: u32) -> Result<Self> {
        check_m(m)?;
        Ok(DerivationOp::Delta(m))
    }

    pub fn partial(m: u32) -> Result<Self> {
        check_m(m)?;
        Ok(DerivationOp::Partial(m))
    }

    pub fn commutator(a: DerivationOp, b: DerivationOp) -> Self {
        DerivationOp::Commutator(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: Rational, a: DerivationOp) -> Self {
        DerivationOp::Scaled(c, Box::new(a))
    }

    pub fn apply(&self, a: &NcPoly) -> Result<NcPoly> {
        Ok(match self {
            DerivationOp::Delta(m) => {
                check_m(*m)?;
                apply_primitive(Primitive::Delta(*m), a)
            }
            DerivationOp::Partial(m) => {
                check_m(*m)?;
                apply_primitive(Primitive::Partial(*m), a)
            }
            DerivationOp::S => apply_primitive(Primitive::S, a),
            DerivationOp::Commutator(p, q) => {
                let pq = p.apply(&q.apply(a)?)?;
                let qp = q.apply(&p.apply(a)?)?;
                &pq - &qp
            }
            DerivationOp::Scaled(c, d) => d.apply(a)?.scale(c),
            DerivationOp::Sum(ds) => {
                let mut out = NcPoly::zero();
                for d in ds {
                    out += &d.apply(a)?;
                }
                out
            }
        })
    }
}

fn check_m(m: u32) -> Result<()> {
    if m < 1 {
        return Err(CmzvError::InvalidArgument(format!(
            "derivation index must be >= 1, got {m}"
        )));
    }
    Ok(())
}

impl fmt::Display for DerivationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationOp::Delta(m) => write!(f, "delta({m})"),
            DerivationOp::Partial(m) => write!(f, "partial({m})"),
            DerivationOp::S => f.write_str("s"),
            DerivationOp::Commutator(a, b) => write!(f, "[{a}, {b}]"),
            DerivationOp::Scaled(c, a) => match **a {
                DerivationOp::Sum(_) => write!(f, "{c}*({a})"),
                _ => write!(f, "{c}*{a}"),
            },
            DerivationOp::Sum(ds) => {
                if ds.is_empty() {
                    return f.write_str("0");
                }
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn delta(m: u32, a: &NcPoly) -> Result<NcPoly> {
    DerivationOp::delta(m)?.apply(a)
}

pub fn partial(m: u32, a: &NcPoly) -> Result<NcPoly> {
    DerivationOp::partial(m)?.apply(a)
}

pub fn s_op(a: &NcPoly) -> NcPoly {
    apply_primitive(Primitive::S, a)
}

pub fn commutator(d1: &DerivationOp, d2: &DerivationOp, a: &NcPoly) -> Result<NcPoly> {
    DerivationOp::commutator(d1.clone(), d2.clone()).apply(a)
}

/// `{1}^m = y^m`.
pub fn ones_word(m: usize) -> Word {
    Word::from_letters(vec![Letter::Y; m])
}

/// `{1}_★^m`: `1` for `m = 0`, otherwise `y (x + y)^(m-1)`.
pub fn ones_star(m: usize) -> NcPoly {
    if m == 0 {
        return NcPoly::one();
    }
    let z = &NcPoly::x() + &NcPoly::y();
    NcPoly::y().concat(&z.pow(m - 1))
}

/// `F(w, m) = {1}_★^m ∗̲ (y ⧢̲ w) − (m+1) {1}_★^{m+1} ∗̲ w` for `w ∈ h_C^0`.
/// Its image under `Z` vanishes.
pub fn f_combination(w: &NcPoly, m: usize) -> Result<NcPoly> {
    w.require(Subspace::HC0)?;
    let first = inner_harmonic(&ones_star(m), &inner_shuffle(&NcPoly::y(), w)?)?;
    let second = inner_harmonic(&ones_star(m + 1), w)?;
    let mut out = first;
    out.add_scaled(&-int(m as i64 + 1), &second);
    Ok(out)
}

/// `G_m(w) = Σ_{i=1}^m (−1)^{i−1} F({1}^{i−1} ∗̲ w, m − i)`.
///
/// Each argument `{1}^{i−1} ∗̲ w` is checked to lie in `h_C^0`.
pub fn g_combination(m: u32, w: &NcPoly) -> Result<NcPoly> {
    check_m(m)?;
    w.require(Subspace::HC0)?;
    let mut out = NcPoly::zero();
    let mut sign = Rational::one();
    for i in 1..=m as usize {
        let arg = inner_harmonic(&NcPoly::from_word(ones_word(i - 1)), w)?;
        arg.require(Subspace::HC0).map_err(|e| {
            CmzvError::Consistency(format!("argument {{1}}^{} * w left h_C^0: {e}", i - 1))
        })?;
        out.add_scaled(&sign, &f_combination(&arg, m as usize - i)?);
        sign = -sign;
    }
    Ok(out)
}

/// `Σ_{j=1}^{m-1} [δ_j, ∂_{m-j}]` as an operator expression.
pub fn two_derivation_sum(m: u32) -> DerivationOp {
    DerivationOp::Sum(
        (1..m)
            .map(|j| DerivationOp::commutator(DerivationOp::Delta(j), DerivationOp::Partial(m - j)))
            .collect(),
    )
}

/// `(m - 1)(∂_m + δ_m)`.
pub fn two_derivation_rhs(m: u32) -> DerivationOp {
    DerivationOp::scaled(
        int(m as i64 - 1),
        DerivationOp::Sum(vec![DerivationOp::Partial(m), DerivationOp::Delta(m)]),
    )
}
