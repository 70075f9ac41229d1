//! Exact identity suites over word bases and truncated series, with a
//! deterministic text/JSON report.
//!
//! Every suite is a plain function taking its envelope, so tests can run
//! them at other bounds than the two report levels.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::cyclic::{CyclicIndex, Tensor};
use crate::derivations::{
    g_combination, ones_star, ones_word, partial, two_derivation_rhs, two_derivation_sum,
    DerivationOp,
};
use crate::error::CmzvError;
use crate::evaluator::{
    check_e_identity_cont, check_e_identity_discrete, enumerate_s_points, eval_cyc, eval_mzsv,
    eval_ribbon, indicator_d, indicator_dprime, SimplexShape, TruncationSpec, Value,
};
use crate::index::Index;
use crate::poly::{NcPoly, Subspace};
use crate::products::{f_pq_harmonic, harmonic, inner_harmonic};
use crate::rational::{int, ratio, recip_pow, Rational};
use crate::relations::{
    derivation_via_g, gen_cyc2, gen_cyclic_sum, gen_derivation, sum_formula_words, verify_numeric,
};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }
}

impl std::str::FromStr for Level {
    type Err = CmzvError;

    fn from_str(s: &str) -> Result<Self, CmzvError> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(CmzvError::Parse(format!("unknown selftest level `{s}`"))),
        }
    }
}

/// Outcome of one identity suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub envelope: String,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &str, envelope: String) -> Self {
        CheckResult {
            name: name.to_string(),
            envelope,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn record_eq<T: PartialEq + fmt::Display>(&mut self, lhs: &T, rhs: &T, what: impl fmt::Display) {
        self.record(lhs == rhs, || format!("{what}: {lhs} != {rhs}"));
    }

    fn record_result<T>(&mut self, r: crate::error::Result<T>, what: impl fmt::Display) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record(false, || format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4}  {:<28} {:<26} checks={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.envelope,
            self.checks
        )?;
        if let Some(d) = &self.first_failure {
            write!(f, " failures={} first: {d}", self.failures)?;
        }
        Ok(())
    }
}

fn words_upto(max_weight: usize) -> impl Iterator<Item = Word> {
    (0..=max_weight).flat_map(Word::all_of_length)
}

fn basis(space: Subspace, lo: usize, max_weight: usize) -> Vec<Word> {
    (lo..=max_weight)
        .flat_map(Word::all_of_length)
        .filter(|w| space.contains_word(w))
        .collect()
}

fn poly(w: &Word) -> NcPoly {
    NcPoly::from_word(w.clone())
}

fn zp(k: u32) -> NcPoly {
    NcPoly::z(k).expect("k >= 1")
}

fn yp(i: usize) -> NcPoly {
    NcPoly::from_word(ones_word(i))
}

fn op_identity(
    name: &str,
    envelope: String,
    cases: impl IntoIterator<Item = (DerivationOp, DerivationOp)>,
    max_weight: usize,
) -> CheckResult {
    let mut r = CheckResult::new(name, envelope);
    let words: Vec<Word> = words_upto(max_weight).collect();
    for (lhs, rhs) in cases {
        for w in &words {
            let p = poly(w);
            let (Some(a), Some(b)) = (
                r.record_result(lhs.apply(&p), format_args!("{lhs} on {w}")),
                r.record_result(rhs.apply(&p), format_args!("{rhs} on {w}")),
            ) else {
                continue;
            };
            r.record_eq(&a, &b, format_args!("{lhs} vs {rhs} on {w}"));
        }
    }
    r
}

/// `Σ_{j<m} [δ_j, ∂_{m−j}] = (m − 1)(∂_m + δ_m)` on every word.
pub fn check_two_derivation(max_m: u32, max_weight: usize) -> CheckResult {
    op_identity(
        "two_derivation",
        format!("m<={max_m} weight<={max_weight}"),
        (1..=max_m).map(|m| (two_derivation_sum(m), two_derivation_rhs(m))),
        max_weight,
    )
}

/// `[s, δ_m] = m δ_{m+1}` and `[s, ∂_m] = m ∂_{m+1}` on every word.
pub fn check_s_commutators(max_m: u32, max_weight: usize) -> CheckResult {
    let cases = (1..=max_m).flat_map(|m| {
        [
            (
                DerivationOp::commutator(DerivationOp::S, DerivationOp::Delta(m)),
                DerivationOp::scaled(int(m as i64), DerivationOp::Delta(m + 1)),
            ),
            (
                DerivationOp::commutator(DerivationOp::S, DerivationOp::Partial(m)),
                DerivationOp::scaled(int(m as i64), DerivationOp::Partial(m + 1)),
            ),
        ]
    });
    op_identity(
        "s_commutators",
        format!("m<={max_m} weight<={max_weight}"),
        cases,
        max_weight,
    )
}

/// `δ_m(w) = z_m ∗ w − w z_m = z_m ∗̲ w + z_m w` on the `h_C^1` basis.
pub fn check_delta_m(max_m: u32, max_weight: usize) -> CheckResult {
    let mut r = CheckResult::new("delta_m", format!("m<={max_m} weight<={max_weight}"));
    for m in 1..=max_m {
        let z = zp(m);
        for w in basis(Subspace::HC1, 1, max_weight) {
            let p = poly(&w);
            let Some(d) = r.record_result(crate::derivations::delta(m, &p), &w) else {
                continue;
            };
            if let Some(h) = r.record_result(harmonic(&z, &p), &w) {
                r.record_eq(&d, &(&h - &p.concat(&z)), format_args!("harmonic side, m={m}, w={w}"));
            }
            if let Some(h) = r.record_result(inner_harmonic(&z, &p), &w) {
                r.record_eq(&d, &(&h + &z.concat(&p)), format_args!("inner side, m={m}, w={w}"));
            }
        }
    }
    r
}

fn harm(a: &NcPoly, b: &NcPoly) -> NcPoly {
    harmonic(a, b).expect("arguments in h^1")
}

/// `m {1}_★^m = Σ_{i=1}^m z_i ∗ {1}_★^{m−i}`.
pub fn check_eq1(max_m: usize) -> CheckResult {
    let mut r = CheckResult::new("eq1", format!("m<={max_m}"));
    for m in 1..=max_m {
        let mut rhs = NcPoly::zero();
        for i in 1..=m {
            rhs += &harm(&zp(i as u32), &ones_star(m - i));
        }
        r.record_eq(&ones_star(m).scale(&int(m as i64)), &rhs, format_args!("m={m}"));
    }
    r
}

/// `m {1}^m = Σ_{i=1}^m (−1)^{i−1} z_i ∗ {1}^{m−i}`.
pub fn check_eq2(max_m: usize) -> CheckResult {
    let mut r = CheckResult::new("eq2", format!("m<={max_m}"));
    for m in 1..=max_m {
        let mut rhs = NcPoly::zero();
        for i in 1..=m {
            let sign = if i % 2 == 1 { int(1) } else { int(-1) };
            rhs.add_scaled(&sign, &harm(&zp(i as u32), &yp(m - i)));
        }
        r.record_eq(&yp(m).scale(&int(m as i64)), &rhs, format_args!("m={m}"));
    }
    r
}

/// `Σ_{i=0}^m (−1)^i {1}_★^{m−i} ∗ {1}^i = [m = 0]`.
pub fn check_eq3(max_m: usize) -> CheckResult {
    let mut r = CheckResult::new("eq3", format!("m<={max_m}"));
    for m in 0..=max_m {
        let mut lhs = NcPoly::zero();
        for i in 0..=m {
            let sign = if i % 2 == 0 { int(1) } else { int(-1) };
            lhs.add_scaled(&sign, &harm(&ones_star(m - i), &yp(i)));
        }
        let rhs = if m == 0 { NcPoly::one() } else { NcPoly::zero() };
        r.record_eq(&lhs, &rhs, format_args!("m={m}"));
    }
    r
}

/// `Σ_{i=0}^{m−1} (−1)^i (m − i) {1}_★^{m−i} ∗ {1}^i = z_m`.
pub fn check_weighted_sum(max_m: usize) -> CheckResult {
    let mut r = CheckResult::new("weighted_sum", format!("m<={max_m}"));
    for m in 1..=max_m {
        let mut lhs = NcPoly::zero();
        for i in 0..m {
            let c = int(if i % 2 == 0 { 1 } else { -1 } * (m - i) as i64);
            lhs.add_scaled(&c, &harm(&ones_star(m - i), &yp(i)));
        }
        r.record_eq(&lhs, &zp(m as u32), format_args!("m={m}"));
    }
    r
}

/// `Σ_{j=1}^{m−1} ∂_{m−j}(z_j) = −(m − 1) z_m`.
pub fn check_der_z_sum(max_m: u32) -> CheckResult {
    let mut r = CheckResult::new("der_z_sum", format!("m<={max_m}"));
    for m in 1..=max_m {
        let mut lhs = NcPoly::zero();
        for j in 1..m {
            lhs += &partial(m - j, &zp(j)).expect("m - j >= 1");
        }
        r.record_eq(&lhs, &zp(m).scale(&int(1 - m as i64)), format_args!("m={m}"));
    }
    r
}

/// `G(m, w) = ∂_m(w)` on the `h_C^0` basis.
pub fn check_der_z_1(max_m: u32, max_weight: usize) -> CheckResult {
    let mut r = CheckResult::new("der_z_1", format!("m<={max_m} weight<={max_weight}"));
    for m in 1..=max_m {
        for w in basis(Subspace::HC0, 2, max_weight) {
            let p = poly(&w);
            let g = r.record_result(g_combination(m, &p), format_args!("G({m}, {w})"));
            let d = r.record_result(partial(m, &p), format_args!("partial({m}, {w})"));
            if let (Some(g), Some(d)) = (g, d) {
                r.record_eq(&g, &d, format_args!("m={m}, w={w}"));
            }
        }
    }
    r
}

/// `∂_m` maps `h^0` into `h^0`.
pub fn check_partial_preserves_h0(max_m: u32, max_weight: usize) -> CheckResult {
    let mut r = CheckResult::new("partial_preserves_h0", format!("m<={max_m} weight<={max_weight}"));
    for m in 1..=max_m {
        for w in basis(Subspace::H0, 0, max_weight) {
            let d = partial(m, &poly(&w)).expect("m >= 1");
            r.record(d.in_h0(), || format!("partial({m}, {w}) = {d}"));
        }
    }
    r
}

fn random_poly(rng: &mut ChaCha8Rng, max_len: usize, terms: usize) -> NcPoly {
    let mut p = NcPoly::zero();
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_len);
        let words = Word::all_of_length(len);
        let w = words[rng.gen_range(0..words.len())].clone();
        p.add_term(w, ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
    }
    p
}

/// `D(ab) = D(a) b + a D(b)` for `δ_m`, `∂_m` and `s` on seeded random
/// polynomials.
pub fn check_leibniz(seed: u64, samples: usize, max_weight: usize) -> CheckResult {
    let mut r = CheckResult::new("leibniz", format!("samples={samples} weight<={max_weight}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops = [
        DerivationOp::S,
        DerivationOp::Delta(1),
        DerivationOp::Delta(2),
        DerivationOp::Partial(1),
        DerivationOp::Partial(2),
    ];
    for i in 0..samples {
        let la = rng.gen_range(0..=max_weight);
        let a = random_poly(&mut rng, la, 3);
        let b = random_poly(&mut rng, max_weight - la, 3);
        let op = &ops[i % ops.len()];
        let lhs = op.apply(&a.concat(&b)).expect("valid op");
        let rhs = &op.apply(&a).expect("valid op").concat(&b) + &a.concat(&op.apply(&b).expect("valid op"));
        r.record_eq(&lhs, &rhs, format_args!("{op} on ({a})({b})"));
    }
    r
}

/// `y^{r−1} ⧢̲ z_{k−r+1}` is the sum over admissible depth-`r` compositions.
pub fn check_sum_formula_words(max_k: u32) -> CheckResult {
    let mut r = CheckResult::new("sum_formula_words", format!("k<={max_k}"));
    for k in 2..=max_k {
        for depth in 1..k {
            let res = sum_formula_words(k, depth);
            r.record(res.is_ok(), || format!("k={k} r={depth}: {}", res.unwrap_err()));
        }
    }
    r
}

/// All strictly increasing `p ≤ n_1 < ⋯ < n_r ≤ q`, summed directly.
fn lattice_sum(k: &[u32], p: u64, q: u64) -> Rational {
    fn go(k: &[u32], lo: u64, q: u64) -> Rational {
        match k.split_first() {
            None => Rational::one(),
            Some((&first, rest)) => {
                let mut acc = Rational::zero();
                for n in lo..=q {
                    acc += recip_pow(n, first) * go(rest, n + 1, q);
                }
                acc
            }
        }
    }
    go(k, p, q)
}

/// `f_{p,q}(a ∗̲ w) = f_{p,q}(w) Σ_{p ≤ n_1 < ⋯ < n_r ≤ q} Π n_i^{−k_i}` for
/// z-words `a` and words `w ∈ h_C^1`.
pub fn check_f_pq_lemma(max_q: u64, max_left: u32, max_right: usize) -> CheckResult {
    let mut r = CheckResult::new(
        "f_pq_inner_harmonic",
        format!("q<={max_q} left<={max_left} right<={max_right}"),
    );
    let lefts: Vec<Index> = (1..=max_left).flat_map(Index::compositions).collect();
    let rights = basis(Subspace::HC1, 1, max_right);
    for a in &lefts {
        let ap = NcPoly::from_index(a);
        for w in &rights {
            let wp = poly(w);
            let Some(prod) = r.record_result(inner_harmonic(&ap, &wp), format_args!("{a} * {w}")) else {
                continue;
            };
            for q in 1..=max_q {
                for p in 1..=q {
                    let lhs = f_pq_harmonic(&prod, p, q).expect("valid f_pq");
                    let rhs = f_pq_harmonic(&wp, p, q).expect("valid f_pq") * lattice_sum(a.parts(), p, q);
                    r.record_eq(&lhs, &rhs, format_args!("a={a} w={w} p={p} q={q}"));
                }
            }
        }
    }
    r
}

fn exact(v: crate::error::Result<Value>) -> Rational {
    v.expect("admissible")
        .as_exact()
        .cloned()
        .expect("exact arithmetic")
}

fn admissible_upto(max_weight: u32, max_blocks: usize) -> Vec<CyclicIndex> {
    (1..=max_weight)
        .flat_map(|w| CyclicIndex::enumerate_admissible(w, max_blocks))
        .collect()
}

/// Ribbon value splits into the cyclic value and the cyclic value of the
/// wrapped concatenation, exactly at the cutoff.
pub fn check_ribbon_decomposition(max_weight: u32, max_blocks: usize, cutoff: u64) -> CheckResult {
    let mut r = CheckResult::new(
        "ribbon_decomposition",
        format!("weight<={max_weight} s<={max_blocks} N={cutoff}"),
    );
    let t = TruncationSpec::exact(cutoff);
    for k in admissible_upto(max_weight, max_blocks) {
        let Some(wrapped) = k.wrap_concat() else {
            continue;
        };
        if k.blocks()[0].is_one() {
            continue;
        }
        let lhs = exact(eval_ribbon(&k, t));
        let rhs = exact(eval_cyc(&k, t)) + exact(eval_cyc(&wrapped, t));
        r.record_eq(&lhs, &rhs, &k);
    }
    r
}

/// Truncated cyclic values are invariant under every rotation.
pub fn check_rotation_invariance(max_weight: u32, max_blocks: usize, cutoff: u64) -> CheckResult {
    let mut r = CheckResult::new(
        "rotation_invariance",
        format!("weight<={max_weight} s<={max_blocks} N={cutoff}"),
    );
    let t = TruncationSpec::exact(cutoff);
    for k in admissible_upto(max_weight, max_blocks) {
        let base = exact(eval_cyc(&k, t));
        for j in 1..k.block_count() as i64 {
            let rot = k.rotate(j);
            r.record_eq(&base, &exact(eval_cyc(&rot, t)), format_args!("{k} vs {rot}"));
        }
    }
    r
}

/// `ζ_cyc([(k_1), …, (k_s)]) = ζ(k_1 + ⋯ + k_s)` and
/// `ζ_cyc([(l, k_s), (k_{s−1}), …, (k_1)]) = ζ★(l, k_1, …, k_s) − ζ(l + Σk)`,
/// both exactly at the cutoff.
pub fn check_cyclic_lemma(max_weight: u32, cutoff: u64) -> CheckResult {
    let mut r = CheckResult::new("cyclic_lemma", format!("weight<={max_weight} N={cutoff}"));
    let t = TruncationSpec::exact(cutoff);
    for w in 2..=max_weight {
        let power: Rational = (1..=cutoff).map(|n| recip_pow(n, w)).sum();
        for c in Index::compositions(w) {
            let parts = c.parts();
            if *parts.last().unwrap() < 2 {
                continue;
            }
            let single = CyclicIndex::new(parts.iter().map(|&p| Index::new(vec![p]).unwrap()).collect()).unwrap();
            r.record_eq(&exact(eval_cyc(&single, t)), &power, &single);
            if parts.len() < 2 {
                continue;
            }
            // c = (l, k_1, ..., k_s)
            let (l, ks) = (parts[0], &parts[1..]);
            let s = ks.len();
            let mut blocks = vec![Index::new(vec![l, ks[s - 1]]).unwrap()];
            blocks.extend(ks[..s - 1].iter().rev().map(|&p| Index::new(vec![p]).unwrap()));
            let k = CyclicIndex::new(blocks).unwrap();
            let rhs = exact(eval_mzsv(&c, t)) - &power;
            r.record_eq(&exact(eval_cyc(&k, t)), &rhs, &k);
        }
    }
    r
}

/// Second-family relations vanish identically in exact arithmetic at the
/// cutoff.
pub fn check_cyc2_exact(max_weight: u32, max_blocks: usize, cutoff: u64) -> CheckResult {
    let mut r = CheckResult::new("cyc2_exact_at_cutoff", format!("weight<={max_weight} s<={max_blocks} N={cutoff}"));
    let t = TruncationSpec::exact(cutoff);
    for w in 3..=max_weight {
        for k in 1..w - 1 {
            for tensor in Tensor::enumerate_spanning(w - k, max_blocks) {
                let Some(rel) = r.record_result(gen_cyc2(&tensor, k), format_args!("{tensor}, k={k}")) else {
                    continue;
                };
                let rep = verify_numeric(&rel, t, 0.0);
                r.record(rep.passed, || format!("{tensor}, k={k}: {rep}"));
            }
        }
    }
    r
}

/// The direct cyclic sum formula equals its construction from the first
/// cyclic relation.
pub fn check_cyclic_sum_construction(max_weight: u32) -> CheckResult {
    let mut r = CheckResult::new("cyclic_sum_construction", format!("sum<={max_weight}"));
    for w in 2..=max_weight {
        for c in Index::compositions(w) {
            if c.parts().iter().all(|&p| p == 1) {
                continue;
            }
            let res = gen_cyclic_sum(c.parts());
            r.record(res.is_ok(), || format!("{c}: {}", res.unwrap_err()));
        }
    }
    r
}

/// Derivation relations from `∂_m` and from the alternating `F` sum
/// serialize to the same bytes.
pub fn check_derivation_paths(max_m: u32, max_weight: usize) -> CheckResult {
    let mut r = CheckResult::new("derivation_paths", format!("m<={max_m} weight<={max_weight}"));
    for m in 1..=max_m {
        for w in basis(Subspace::HC0, 2, max_weight) {
            let p = poly(&w);
            match (gen_derivation(&p, m), derivation_via_g(&p, m)) {
                (Ok(a), Ok(b)) => r.record_eq(&a.to_json_line(), &b.to_json_line(), format_args!("m={m} w={w}")),
                (Err(CmzvError::TrivialRelation), Err(CmzvError::TrivialRelation)) => r.record(true, String::new),
                (a, b) => r.record(false, || format!("m={m} w={w}: {a:?} vs {b:?}")),
            }
        }
    }
    r
}

/// The lattice indicator identity at every point of `S` with coordinates at
/// most `max_coord`, probing `n ≤ max_coord + 1`.
pub fn check_e_discrete(max_weight: u32, max_coord: u64) -> CheckResult {
    let mut r = CheckResult::new("e_identity_discrete", format!("weight<={max_weight} coords<={max_coord}"));
    for k in admissible_upto(max_weight, max_weight as usize) {
        for pt in enumerate_s_points(&k, max_coord) {
            let ok = check_e_identity_discrete(&k, &pt, max_coord + 1);
            r.record(matches!(ok, Ok(true)), || format!("{k} at {pt:?}: {ok:?}"));
        }
    }
    r
}

/// A random point of the open cube with every block sorted increasingly.
fn sorted_blocks(rng: &mut ChaCha8Rng, shape: &SimplexShape) -> Vec<f64> {
    let mut pt = Vec::with_capacity(shape.arity());
    for &len in shape.block_sizes() {
        let mut block: Vec<f64> = (0..len).map(|_| rng.gen_range(f64::EPSILON..1.0)).collect();
        block.sort_by(f64::total_cmp);
        pt.extend(block);
    }
    pt
}

fn has_ties(pt: &[f64]) -> bool {
    let mut v = pt.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).any(|w| w[0] == w[1])
}

/// The simplex indicator identity at seeded random points of `D`, probing
/// random levels and the block endpoints themselves.
pub fn check_e_cont(seed: u64, points: usize, max_weight: u32) -> CheckResult {
    let mut r = CheckResult::new("e_identity_continuous", format!("points={points} weight<={max_weight}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: Vec<SimplexShape> = admissible_upto(max_weight, max_weight as usize)
        .iter()
        .map(SimplexShape::of_cyclic_index)
        .collect();
    for i in 0..points {
        let shape = &shapes[i % shapes.len()];
        let pt = loop {
            let pt = sorted_blocks(&mut rng, shape);
            if !has_ties(&pt) && indicator_d(shape, &pt).unwrap() {
                break pt;
            }
        };
        let mut probes: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
        probes.extend_from_slice(&pt);
        let ok = check_e_identity_cont(shape, &pt, &probes);
        r.record(matches!(ok, Ok(true)), || format!("{:?} at {pt:?}: {ok:?}", shape.block_sizes()));
    }
    r
}

/// `D' = D ⊔ {t_{s,k_s} < t_{1,1}}`, the second piece being the region of
/// the wrapped concatenation, at seeded random points.
pub fn check_dprime_decomposition(seed: u64, points: usize, max_weight: u32) -> CheckResult {
    let mut r = CheckResult::new("dprime_decomposition", format!("points={points} weight<={max_weight}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let shapes: Vec<SimplexShape> = admissible_upto(max_weight, max_weight as usize)
        .iter()
        .map(SimplexShape::of_cyclic_index)
        .filter(|s| s.block_sizes().len() >= 2)
        .collect();
    for i in 0..points {
        let shape = &shapes[i % shapes.len()];
        let pt = loop {
            let pt = sorted_blocks(&mut rng, shape);
            if !has_ties(&pt) {
                break pt;
            }
        };
        let wrapped = shape.wrap_concat().unwrap();
        let prime = indicator_dprime(shape, &pt).unwrap();
        let closed = indicator_d(shape, &pt).unwrap();
        let other = indicator_d(&wrapped, &shape.wrap_permute(&pt)).unwrap();
        r.record(prime == (closed || other) && !(closed && other), || {
            format!("{:?} at {pt:?}: D'={prime} D={closed} wrap={other}", shape.block_sizes())
        });
    }
    r
}

/// Bounds of one report level.
#[derive(Debug, Clone, Copy)]
struct Envelope {
    weight: usize,
    two_derivation_m: u32,
    small_m: u32,
    series_m: usize,
    sum_k: u32,
    f_pq_q: u64,
    f_pq_left: u32,
    cutoff: u64,
    e_coord: u64,
    random_points: usize,
}

fn envelope(level: Level) -> Envelope {
    match level {
        Level::Quick => Envelope {
            weight: 4,
            two_derivation_m: 6,
            small_m: 4,
            series_m: 8,
            sum_k: 6,
            f_pq_q: 6,
            f_pq_left: 3,
            cutoff: 8,
            e_coord: 6,
            random_points: 2000,
        },
        Level::Full => Envelope {
            weight: 6,
            two_derivation_m: 6,
            small_m: 4,
            series_m: 8,
            sum_k: 9,
            f_pq_q: 8,
            f_pq_left: 4,
            cutoff: 15,
            e_coord: 10,
            random_points: 10_000,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub level: Level,
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("selftest level={} seed={}\n", self.level.name(), self.seed);
        for r in &self.results {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        out.push_str(&format!("summary: {passed}/{} suites passed\n", self.results.len()));
        out
    }

    pub fn to_json(&self) -> Json {
        json!({
            "level": self.level.name(),
            "seed": self.seed,
            "passed": self.all_passed(),
            "results": self.results.iter().map(|r| json!({
                "name": r.name,
                "envelope": r.envelope,
                "checks": r.checks,
                "failures": r.failures,
                "passed": r.passed(),
                "first_failure": r.first_failure,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs every suite at the envelope of `level`.
pub fn run_selftest(level: Level, seed: u64) -> SelftestReport {
    let e = envelope(level);
    let w = e.weight;
    let w32 = w as u32;
    let results = vec![
        check_two_derivation(e.two_derivation_m, w.min(5)),
        check_s_commutators(e.small_m, w.min(5)),
        check_delta_m(e.small_m, w.min(5)),
        check_eq1(e.series_m),
        check_eq2(e.series_m),
        check_eq3(e.series_m),
        check_weighted_sum(e.series_m),
        check_der_z_sum(e.series_m as u32),
        check_der_z_1(e.small_m, w.min(5)),
        check_partial_preserves_h0(e.small_m, w),
        check_leibniz(seed, 200, w),
        check_sum_formula_words(e.sum_k),
        check_f_pq_lemma(e.f_pq_q, e.f_pq_left, w.min(5)),
        check_ribbon_decomposition(w32, 3, e.cutoff),
        check_rotation_invariance(w32, 3, e.cutoff),
        check_cyclic_lemma(w32 + 1, e.cutoff),
        check_cyc2_exact(w32.min(5), 3, e.cutoff.min(10)),
        check_cyclic_sum_construction(w32 + 1),
        check_derivation_paths(e.small_m, w.min(5)),
        check_e_discrete(w32.min(5), e.e_coord),
        check_e_cont(seed, e.random_points, w32.min(5)),
        check_dprime_decomposition(seed, e.random_points, w32.min(5)),
    ];
    SelftestReport { level, seed, results }
}
