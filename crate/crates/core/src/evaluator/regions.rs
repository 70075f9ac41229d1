//! Membership in the lattice regions `S`, `S'` and the simplex regions `D`,
//! `D'`, and the indicator identities behind the two cyclic relation
//! families.

use crate::cyclic::CyclicIndex;
use crate::error::{CmzvError, Result};

/// Block sizes of an ordered-simplex region; for the integral attached to a
/// cyclic index block `i` has `weight(𝕜_i)` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexShape {
    block_sizes: Vec<usize>,
}

impl SimplexShape {
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(CmzvError::InvalidArgument(
                "simplex shape needs nonempty blocks".into(),
            ));
        }
        Ok(SimplexShape { block_sizes })
    }

    pub fn of_cyclic_index(k: &CyclicIndex) -> Self {
        SimplexShape {
            block_sizes: k.blocks().iter().map(|b| b.weight() as usize).collect(),
        }
    }

    /// Lattice-side shape: block `i` has `depth(𝕜_i)` variables.
    pub fn lattice_of(k: &CyclicIndex) -> Self {
        SimplexShape {
            block_sizes: k.blocks().iter().map(|b| b.depth()).collect(),
        }
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn arity(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// `(first, last)` coordinate positions of every block.
    pub fn block_ends(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.block_sizes.len());
        let mut start = 0;
        for &len in &self.block_sizes {
            out.push((start, start + len - 1));
            start += len;
        }
        out
    }

    /// Shape of `[𝕜_s 𝕜_1, 𝕜_2, ..., 𝕜_{s-1}]`; the matching coordinate
    /// permutation is [`SimplexShape::wrap_permute`].
    pub fn wrap_concat(&self) -> Option<SimplexShape> {
        let s = self.block_sizes.len();
        if s < 2 {
            return None;
        }
        let mut sizes = vec![self.block_sizes[s - 1] + self.block_sizes[0]];
        sizes.extend_from_slice(&self.block_sizes[1..s - 1]);
        Some(SimplexShape { block_sizes: sizes })
    }

    /// Moves the coordinates of the last block in front of the first.
    pub fn wrap_permute<T: Copy>(&self, pt: &[T]) -> Vec<T> {
        let last = *self.block_sizes.last().expect("nonempty shape");
        let cut = pt.len() - last;
        pt[cut..].iter().chain(&pt[..cut]).copied().collect()
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity() {
            return Err(CmzvError::ArityMismatch {
                expected: self.arity(),
                got,
            });
        }
        Ok(())
    }
}

/// Checks the chain: strict increase inside blocks, `between` across block
/// boundaries, and `between` again from the last coordinate back to the
/// first when `closed`.
fn chain_holds<T: PartialOrd + Copy>(
    shape: &SimplexShape,
    pt: &[T],
    between: impl Fn(T, T) -> bool,
    closed: bool,
) -> bool {
    let ends = shape.block_ends();
    for &(a, b) in &ends {
        if (a..b).any(|i| pt[i] >= pt[i + 1]) {
            return false;
        }
    }
    for w in ends.windows(2) {
        if !between(pt[w[0].1], pt[w[1].0]) {
            return false;
        }
    }
    !closed || between(pt[pt.len() - 1], pt[0])
}

/// `n_{1,1} < ... < n_{1,r_1} ≥ n_{2,1} < ... < n_{s,r_s} ≥ n_{1,1}`.
pub fn indicator_s(k: &CyclicIndex, pt: &[u64]) -> Result<bool> {
    let shape = SimplexShape::lattice_of(k);
    shape.check_arity(pt.len())?;
    Ok(pt.iter().all(|&n| n >= 1) && chain_holds(&shape, pt, |a, b| a >= b, true))
}

/// As [`indicator_s`] without the closing condition.
pub fn indicator_sprime(k: &CyclicIndex, pt: &[u64]) -> Result<bool> {
    let shape = SimplexShape::lattice_of(k);
    shape.check_arity(pt.len())?;
    Ok(pt.iter().all(|&n| n >= 1) && chain_holds(&shape, pt, |a, b| a >= b, false))
}

fn in_unit_cube(pt: &[f64]) -> bool {
    pt.iter().all(|&t| t > 0.0 && t < 1.0)
}

/// `t_{1,1} < ... < t_{1,k_1} > t_{2,1} < ... < t_{s,k_s} > t_{1,1}` inside
/// the open unit cube.
pub fn indicator_d(shape: &SimplexShape, pt: &[f64]) -> Result<bool> {
    shape.check_arity(pt.len())?;
    Ok(in_unit_cube(pt) && chain_holds(shape, pt, |a, b| a > b, true))
}

/// As [`indicator_d`] without the closing condition.
pub fn indicator_dprime(shape: &SimplexShape, pt: &[f64]) -> Result<bool> {
    shape.check_arity(pt.len())?;
    Ok(in_unit_cube(pt) && chain_holds(shape, pt, |a, b| a > b, false))
}

/// `1` if `p ≤ n ≤ q`. Callers orient the arguments; `p > q` is a bug.
pub fn e_discrete(p: u64, q: u64, n: u64) -> u8 {
    assert!(p <= q, "E(p, q, n) called with p = {p} > q = {q}");
    u8::from(p <= n && n <= q)
}

/// `1` if `s ≤ t ≤ s'`. Callers orient the arguments.
pub fn e_cont(s: f64, s2: f64, t: f64) -> u8 {
    assert!(s <= s2, "E(s, s', t) called with s = {s} > s' = {s2}");
    u8::from(s <= t && t <= s2)
}

/// Compares `Σ_i E(n_{i,1}, n_{i,r_i}, n)` with
/// `Σ_i E(n_{i+1,1}, n_{i,r_i}, n)` (indices mod `s`) for every probe
/// `1 ≤ n ≤ max_probe`.
pub fn check_e_identity_discrete(k: &CyclicIndex, pt: &[u64], max_probe: u64) -> Result<bool> {
    if !indicator_s(k, pt)? {
        return Err(CmzvError::OutsideRegion);
    }
    let ends = SimplexShape::lattice_of(k).block_ends();
    let s = ends.len();
    Ok((1..=max_probe).all(|n| {
        let lhs: u32 = ends
            .iter()
            .map(|&(a, b)| u32::from(e_discrete(pt[a], pt[b], n)))
            .sum();
        let rhs: u32 = (0..s)
            .map(|i| u32::from(e_discrete(pt[ends[(i + 1) % s].0], pt[ends[i].1], n)))
            .sum();
        lhs == rhs
    }))
}

/// The simplex analogue of [`check_e_identity_discrete`], probed at every
/// `t` in `probes`.
pub fn check_e_identity_cont(shape: &SimplexShape, pt: &[f64], probes: &[f64]) -> Result<bool> {
    if !indicator_d(shape, pt)? {
        return Err(CmzvError::OutsideRegion);
    }
    let ends = shape.block_ends();
    let s = ends.len();
    Ok(probes.iter().all(|&t| {
        let lhs: u32 = ends
            .iter()
            .map(|&(a, b)| u32::from(e_cont(pt[a], pt[b], t)))
            .sum();
        let rhs: u32 = (0..s)
            .map(|i| u32::from(e_cont(pt[ends[(i + 1) % s].0], pt[ends[i].1], t)))
            .sum();
        lhs == rhs
    }))
}

/// Every point of `S` with all coordinates at most `max`.
pub fn enumerate_s_points(k: &CyclicIndex, max: u64) -> Vec<Vec<u64>> {
    let shape = SimplexShape::lattice_of(k);
    let d = shape.arity();
    let mut out = Vec::new();
    let mut pt = vec![1u64; d];
    loop {
        if chain_holds(&shape, &pt, |a, b| a >= b, true) {
            out.push(pt.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            pt[i] += 1;
            if pt[i] <= max {
                break;
            }
            pt[i] = 1;
        }
    }
}
