use num_traits::Zero;
use rayon::prelude::*;

use super::{Arithmetic, TruncationSpec, Value};
use crate::cyclic::CyclicIndex;
use crate::error::{CmzvError, Result};
use crate::index::Index;
use crate::rational::{recip_pow, Rational};

/// Order relation between consecutive summation variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rel {
    Lt,
    Le,
    Ge,
}

impl Rel {
    pub(crate) fn holds<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Ge => a >= b,
        }
    }
}

/// A chain `n_1 R_1 n_2 R_2 ... n_d` with weights `n_i^{-e_i}` and an
/// optional closing relation `n_d R n_1`.
#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub exps: Vec<u32>,
    pub rels: Vec<Rel>,
    pub wrap: Option<Rel>,
}

impl Chain {
    fn plain(index: &Index, rel: Rel) -> Chain {
        Chain {
            exps: index.parts().to_vec(),
            rels: vec![rel; index.depth().saturating_sub(1)],
            wrap: None,
        }
    }

    /// `<` inside blocks, `≥` between consecutive blocks.
    fn blocks(k: &CyclicIndex) -> Chain {
        let mut exps = Vec::new();
        let mut rels = Vec::new();
        for (b, block) in k.blocks().iter().enumerate() {
            if b > 0 {
                rels.push(Rel::Ge);
            }
            for (j, &e) in block.parts().iter().enumerate() {
                if j > 0 {
                    rels.push(Rel::Lt);
                }
                exps.push(e);
            }
        }
        Chain {
            exps,
            rels,
            wrap: None,
        }
    }
}

trait Scalar: Clone + Send + Sync {
    fn zero() -> Self;
    fn weight(n: u64, e: u32) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Compensated (for floats) sum in the given order.
    fn sum(items: &[Self]) -> Self;
    /// `out[i] = Σ_{j ≤ i} v[j]`.
    fn prefix(v: &[Self]) -> Vec<Self>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn weight(n: u64, e: u32) -> Self {
        recip_pow(n, e)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sum(items: &[Self]) -> Self {
        items.iter().fold(<Rational as Zero>::zero(), |acc, x| acc + x)
    }
    fn prefix(v: &[Self]) -> Vec<Self> {
        let mut acc = <Rational as Zero>::zero();
        v.iter()
            .map(|x| {
                acc += x;
                acc.clone()
            })
            .collect()
    }
}

/// Neumaier running sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn weight(n: u64, e: u32) -> Self {
        (n as f64).powi(-(e as i32))
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sum(items: &[Self]) -> Self {
        let mut acc = Compensated::default();
        for &x in items {
            acc.add(x);
        }
        acc.value()
    }
    fn prefix(v: &[Self]) -> Vec<Self> {
        let mut acc = Compensated::default();
        v.iter()
            .map(|&x| {
                acc.add(x);
                acc.value()
            })
            .collect()
    }
}

struct Weights<T> {
    // table[e] = [1^{-e}, 2^{-e}, ..., N^{-e}]
    table: Vec<Vec<T>>,
}

impl<T: Scalar> Weights<T> {
    fn new(exps: &[u32], cutoff: u64) -> Self {
        let max_e = exps.iter().copied().max().unwrap_or(0) as usize;
        let mut table = vec![Vec::new(); max_e + 1];
        for &e in exps {
            if table[e as usize].is_empty() {
                table[e as usize] = (1..=cutoff).map(|n| T::weight(n, e)).collect();
            }
        }
        Weights { table }
    }

    fn get(&self, e: u32) -> &[T] {
        &self.table[e as usize]
    }
}

fn suffix<T: Scalar>(v: &[T]) -> Vec<T> {
    let rev: Vec<T> = v.iter().rev().cloned().collect();
    let mut out = T::prefix(&rev);
    out.reverse();
    out
}

/// Propagates `v` (indexed by value - 1) across one relation, then applies
/// the weights of the next variable.
fn step<T: Scalar>(v: &[T], rel: Rel, w: &[T]) -> Vec<T> {
    match rel {
        Rel::Lt => {
            let pre = T::prefix(v);
            std::iter::once(T::zero())
                .chain(pre.into_iter().take(v.len().saturating_sub(1)))
                .zip(w)
                .map(|(s, x)| s.mul(x))
                .collect()
        }
        Rel::Le => T::prefix(v).iter().zip(w).map(|(s, x)| s.mul(x)).collect(),
        Rel::Ge => suffix(v).iter().zip(w).map(|(s, x)| s.mul(x)).collect(),
    }
}

fn run_chain<T: Scalar>(chain: &Chain, cutoff: u64, first: Option<usize>) -> Vec<T> {
    let weights = Weights::<T>::new(&chain.exps, cutoff);
    let w0 = weights.get(chain.exps[0]);
    let mut v: Vec<T> = match first {
        None => w0.to_vec(),
        Some(a) => (0..cutoff as usize)
            .map(|i| if i == a { w0[i].clone() } else { T::zero() })
            .collect(),
    };
    for (rel, &e) in chain.rels.iter().zip(&chain.exps[1..]) {
        v = step(&v, *rel, weights.get(e));
    }
    v
}

fn chain_sum<T: Scalar>(chain: &Chain, cutoff: u64) -> T {
    if cutoff == 0 {
        return T::zero();
    }
    match chain.wrap {
        None => T::sum(&run_chain::<T>(chain, cutoff, None)),
        Some(rel) => {
            let per_first: Vec<T> = (0..cutoff as usize)
                .into_par_iter()
                .map(|a| {
                    let last = run_chain::<T>(chain, cutoff, Some(a));
                    let admitted: Vec<T> = last
                        .into_iter()
                        .enumerate()
                        .filter(|(j, _)| rel.holds(*j, a))
                        .map(|(_, x)| x)
                        .collect();
                    T::sum(&admitted)
                })
                .collect();
            T::sum(&per_first)
        }
    }
}

pub(crate) fn eval_chain(chain: &Chain, t: TruncationSpec) -> Value {
    match t.arithmetic {
        Arithmetic::Exact => Value::Exact(chain_sum::<Rational>(chain, t.cutoff)),
        Arithmetic::Float => Value::Float(chain_sum::<f64>(chain, t.cutoff)),
    }
}

fn require_admissible(k: &Index) -> Result<()> {
    if k.is_admissible() {
        Ok(())
    } else {
        Err(CmzvError::Divergent(k.to_string()))
    }
}

/// `ζ_N(k_1, ..., k_r) = Σ_{0 < n_1 < ... < n_r ≤ N} Π n_i^{-k_i}`.
pub fn eval_mzv(k: &Index, t: TruncationSpec) -> Result<Value> {
    require_admissible(k)?;
    Ok(eval_chain(&Chain::plain(k, Rel::Lt), t))
}

/// `ζ★_N(k_1, ..., k_r) = Σ_{0 < n_1 ≤ ... ≤ n_r ≤ N} Π n_i^{-k_i}`.
pub fn eval_mzsv(k: &Index, t: TruncationSpec) -> Result<Value> {
    require_admissible(k)?;
    Ok(eval_chain(&Chain::plain(k, Rel::Le), t))
}

/// Truncated cyclic multiple zeta value.
pub fn eval_cyc(k: &CyclicIndex, t: TruncationSpec) -> Result<Value> {
    if !k.is_admissible() {
        return Err(CmzvError::Divergent(k.to_string()));
    }
    let mut chain = Chain::blocks(k);
    // With one block the closing condition n_{1,r} ≥ n_{1,1} always holds.
    if k.block_count() > 1 {
        chain.wrap = Some(Rel::Ge);
    }
    Ok(eval_chain(&chain, t))
}

/// Truncated ribbon Schur value: the block chain without the closing
/// condition. The first block must not be `(1)`.
pub fn eval_ribbon(k: &CyclicIndex, t: TruncationSpec) -> Result<Value> {
    if k.blocks()[0].is_one() {
        return Err(CmzvError::InvalidArgument(format!(
            "ribbon value needs a first block other than (1): {k}"
        )));
    }
    if !k.is_admissible() {
        return Err(CmzvError::Divergent(k.to_string()));
    }
    Ok(eval_chain(&Chain::blocks(k), t))
}

/// Contribution of the outermost shell `max n = N`, i.e. the truncated value
/// at `N` minus the value at `N - 1`. A heuristic size of the tail, not a
/// bound.
pub fn last_shell(eval: impl Fn(TruncationSpec) -> Result<Value>, t: TruncationSpec) -> Result<f64> {
    if t.cutoff <= 1 {
        return Ok(eval(t)?.to_f64());
    }
    let at = eval(t)?;
    let before = eval(TruncationSpec {
        cutoff: t.cutoff - 1,
        ..t
    })?;
    Ok(match (at, before) {
        (Value::Exact(a), Value::Exact(b)) => crate::rational::to_f64(&(a - b)),
        (a, b) => a.to_f64() - b.to_f64(),
    })
}
