use num_traits::One;
use serde_json::{json, Map, Value as Json};

use super::{Family, Relation, Symbol};
use crate::cyclic::{CyclicIndex, Tensor, TensorElem};
use crate::derivations::{f_combination, g_combination, partial};
use crate::error::{CmzvError, Result};
use crate::index::Index;
use crate::poly::{NcPoly, Subspace};
use crate::products::{inner_harmonic, inner_shuffle};
use crate::rational::{int, Rational};
use crate::word::Word;

/// Parameter ranges used when enumerating a family at a fixed weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBounds {
    /// Maximum number of tensor components for the cyclic families.
    pub max_blocks: usize,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds { max_blocks: 3 }
    }
}

fn tensor_json(t: &Tensor) -> Json {
    Json::Array(t.components().iter().map(|u| json!(u.to_string())).collect())
}

fn cyc_terms(e: &TensorElem) -> Result<Vec<(Symbol, Rational)>> {
    Ok(e.to_cyclic_combination()?
        .into_iter()
        .map(|(k, c)| (Symbol::Cyc(k), c))
        .collect())
}

/// `Σ_i Z_cyc(.. ⊗ (a ⊙ u_i) ⊗ ..) − Σ_i Z_cyc(.. ⊗ u_i ⊗ a ⊗ ..)` for an
/// inner product `⊙` with fixed left factor `a`.
fn cyclic_relation(
    t: &Tensor,
    a: &NcPoly,
    inner: impl Fn(&NcPoly) -> Result<NcPoly>,
) -> Result<TensorElem> {
    let base = TensorElem::from_tensor(t.clone())?;
    let mut out = TensorElem::zero();
    for (i, u) in t.components().iter().enumerate() {
        let image = inner(&NcPoly::from_word(u.clone()))?;
        out.add_scaled(&Rational::one(), &base.replace_block(i + 1, &image)?);
        out.add_scaled(&-Rational::one(), &base.insert_block(i + 1, a)?);
    }
    Ok(out)
}

/// The first cyclic relation: inner shuffle with `y` on each component
/// against insertion of `y` after each component.
pub fn gen_cyc1(t: &Tensor) -> Result<Relation> {
    let y = NcPoly::y();
    let e = cyclic_relation(t, &y, |u| inner_shuffle(&y, u))?;
    let mut prov = Map::new();
    prov.insert("tensor".into(), tensor_json(t));
    Relation::new(Family::Cyc1, prov, cyc_terms(&e)?)
}

/// The second cyclic relation: inner harmonic product with `z_k` against
/// insertion of `z_k`.
pub fn gen_cyc2(t: &Tensor, k: u32) -> Result<Relation> {
    if k == 0 {
        return Err(CmzvError::InvalidArgument("k must be positive".into()));
    }
    let zk = NcPoly::z(k)?;
    let e = cyclic_relation(t, &zk, |u| inner_harmonic(&zk, u))?;
    let mut prov = Map::new();
    prov.insert("tensor".into(), tensor_json(t));
    prov.insert("k".into(), json!(k));
    Relation::new(Family::Cyc2, prov, cyc_terms(&e)?)
}

fn cyclic_sum_provenance(ks: &[u32]) -> Map<String, Json> {
    let mut prov = Map::new();
    prov.insert("ks".into(), json!(ks));
    prov
}

fn check_cyclic_sum_args(ks: &[u32]) -> Result<()> {
    if ks.is_empty() || ks.contains(&0) {
        return Err(CmzvError::InvalidArgument(
            "cyclic sum needs a nonempty sequence of positive integers".into(),
        ));
    }
    if ks.iter().all(|&k| k == 1) {
        return Err(CmzvError::InvalidArgument(
            "cyclic sum needs some k_i >= 2".into(),
        ));
    }
    Ok(())
}

fn cyclic_sum_direct(ks: &[u32]) -> Result<Vec<(Symbol, Rational)>> {
    let s = ks.len();
    let k: u32 = ks.iter().sum();
    let mut terms = Vec::new();
    for i in 0..s {
        for j in 1..ks[i] {
            let mut parts = vec![ks[i] - j];
            parts.extend((1..s).map(|d| ks[(i + d) % s]));
            parts.push(j + 1);
            terms.push((Symbol::Mzsv(Index::new(parts)?), Rational::one()));
        }
    }
    terms.push((Symbol::Mzv(Index::new(vec![k + 1])?), -int(k as i64)));
    Ok(terms)
}

/// The cyclic sum formula for star values,
/// `Σ_i Σ_{j<k_i} ζ★(k_i − j, k_{i+1}, …, k_{i−1}, j + 1) = k ζ(k + 1)`.
///
/// The direct form is cross-checked against the construction from the
/// first cyclic relation on `z_{k_s} ⊗ ⋯ ⊗ z_{k_1}`.
pub fn gen_cyclic_sum(ks: &[u32]) -> Result<Relation> {
    check_cyclic_sum_args(ks)?;
    let direct = Relation::new(
        Family::CyclicSum,
        cyclic_sum_provenance(ks),
        cyclic_sum_direct(ks)?,
    )?;
    let derived = cyclic_sum_via_cyc1(ks)?;
    if derived != direct {
        return Err(CmzvError::Consistency(format!(
            "cyclic sum for {ks:?}: direct form {direct} differs from derived form {derived}"
        )));
    }
    Ok(direct)
}

/// Rewrites a cyclic symbol whose blocks all have depth one, or exactly one
/// of which has depth two, as ordinary and star values. Other shapes are
/// left alone (`None`).
pub fn reduce_cyc_symbol(k: &CyclicIndex) -> Option<Vec<(Symbol, Rational)>> {
    if !k.is_admissible() {
        return None;
    }
    let blocks = k.blocks();
    let deep: Vec<usize> = (0..blocks.len())
        .filter(|&i| blocks[i].depth() != 1)
        .collect();
    let total = k.weight();
    match deep.as_slice() {
        [] => Some(vec![(
            Symbol::Mzv(Index::new(vec![total]).ok()?),
            Rational::one(),
        )]),
        [i] if blocks[*i].depth() == 2 && blocks[*i].parts()[1] >= 2 => {
            // bring the deep block to the front: [(l, m), (a_{s-1}), ..., (a_1)]
            let by = blocks.len() as i64 - *i as i64;
            let r = k.rotate(by);
            let rb = r.blocks();
            debug_assert_eq!(rb[0], blocks[*i]);
            let l = rb[0].parts()[0];
            let mut star = vec![l];
            star.extend(rb[1..].iter().rev().map(|b| b.parts()[0]));
            star.push(rb[0].parts()[1]);
            Some(vec![
                (Symbol::Mzsv(Index::new(star).ok()?), Rational::one()),
                (Symbol::Mzv(Index::new(vec![total]).ok()?), -Rational::one()),
            ])
        }
        _ => None,
    }
}

/// The cyclic sum formula built from the first cyclic relation and the
/// depth-one / depth-two rewrites of cyclic symbols.
pub fn cyclic_sum_via_cyc1(ks: &[u32]) -> Result<Relation> {
    check_cyclic_sum_args(ks)?;
    let t = Tensor(
        ks.iter()
            .rev()
            .map(|&k| Word::z(k))
            .collect::<Result<Vec<_>>>()?,
    );
    let cyc = gen_cyc1(&t)?;
    let mut terms = Vec::new();
    for (sym, c) in cyc.terms() {
        let Symbol::Cyc(k) = sym else {
            unreachable!("cyc1 emits cyclic symbols only")
        };
        let rewrite = reduce_cyc_symbol(k).ok_or_else(|| {
            CmzvError::Consistency(format!("no rewrite for cyclic symbol {k}"))
        })?;
        terms.extend(rewrite.into_iter().map(|(s, d)| (s, c * d)));
    }
    Relation::new(Family::CyclicSum, cyclic_sum_provenance(ks), terms)
}

/// `Z` on `h^0`: each word is a z-word and becomes an ordinary value.
fn mzv_terms(p: &NcPoly) -> Result<Vec<(Symbol, Rational)>> {
    p.require(Subspace::H0)?;
    p.iter()
        .map(|(w, c)| Ok((Symbol::Mzv(w.to_index()?), c.clone())))
        .collect()
}

fn derivation_provenance(w: &NcPoly, m: u32) -> Map<String, Json> {
    let mut prov = Map::new();
    prov.insert("w".into(), json!(w.to_string()));
    prov.insert("m".into(), json!(m));
    prov
}

/// The derivation relation `Z(∂_m(w)) = 0` for `w ∈ h_C^0`.
pub fn gen_derivation(w: &NcPoly, m: u32) -> Result<Relation> {
    w.require(Subspace::HC0)?;
    let image = partial(m, w)?;
    Relation::new(
        Family::Derivation,
        derivation_provenance(w, m),
        mzv_terms(&image)?,
    )
}

/// The derivation relation assembled as the alternating sum
/// `Σ_i (−1)^{i−1} F({1}^{i−1} ∗̲ w, m − i)`.
pub fn derivation_via_g(w: &NcPoly, m: u32) -> Result<Relation> {
    let image = g_combination(m, w)?;
    Relation::new(
        Family::Derivation,
        derivation_provenance(w, m),
        mzv_terms(&image)?,
    )
}

/// `Z(F(w, m)) = 0` for `w ∈ h_C^0`, `m ≥ 0`.
pub fn gen_fwm(w: &NcPoly, m: u32) -> Result<Relation> {
    let image = f_combination(w, m as usize)?;
    let mut prov = Map::new();
    prov.insert("w".into(), json!(w.to_string()));
    prov.insert("m".into(), json!(m));
    Relation::new(Family::Fwm, prov, mzv_terms(&image)?)
}

/// `y^{r−1} ⧢̲ z_{k−r+1}`, checked against the sum of `z_{k_1}⋯z_{k_r}` over
/// admissible compositions of `k` of depth `r`.
pub fn sum_formula_words(k: u32, r: u32) -> Result<NcPoly> {
    if r == 0 || k <= r {
        return Err(CmzvError::InvalidArgument(format!(
            "sum formula needs k > r > 0, got k = {k}, r = {r}"
        )));
    }
    let lhs = NcPoly::from_word(Word::from_letters(vec![crate::word::Letter::Y; r as usize - 1]));
    let expansion = inner_shuffle(&lhs, &NcPoly::z(k - r + 1)?)?;
    let expected: NcPoly = Index::compositions_of_depth(k, r as usize)
        .into_iter()
        .filter(Index::is_admissible)
        .map(|c| (Word::from_index(&c), Rational::one()))
        .collect();
    if expansion != expected {
        return Err(CmzvError::Consistency(format!(
            "y^{} inner-shuffle z_{} = {expansion}, expected {expected}",
            r - 1,
            k - r + 1
        )));
    }
    Ok(expansion)
}

/// The sum formula `Σ_{admissible, depth r} ζ(k_1, …, k_r) = ζ(k)`.
pub fn gen_sum_formula(k: u32, r: u32) -> Result<Relation> {
    let words = sum_formula_words(k, r)?;
    let mut terms = mzv_terms(&words)?;
    terms.push((Symbol::Mzv(Index::new(vec![k])?), -Rational::one()));
    let mut prov = Map::new();
    prov.insert("k".into(), json!(k));
    prov.insert("r".into(), json!(r));
    Relation::new(Family::SumFormula, prov, terms)
}

/// The z-word basis of `h_C^0` in weight `n`.
fn hc0_basis(n: u32) -> Vec<NcPoly> {
    Index::compositions(n)
        .into_iter()
        .filter(Index::is_admissible)
        .map(|c| NcPoly::from_index(&c))
        .collect()
}

fn keep(r: Result<Relation>, out: &mut Vec<Relation>) -> Result<()> {
    match r {
        Ok(rel) => out.push(rel),
        Err(CmzvError::TrivialRelation) => {}
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Every relation of `family` of the given weight within `bounds`, in a
/// deterministic order. Parameter choices giving an empty relation are
/// skipped.
pub fn enumerate_family(
    family: Family,
    weight: u32,
    bounds: EnumerationBounds,
) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    match family {
        Family::Cyc1 => {
            if weight >= 3 {
                for t in Tensor::enumerate_spanning(weight - 1, bounds.max_blocks) {
                    keep(gen_cyc1(&t), &mut out)?;
                }
            }
        }
        Family::Cyc2 => {
            for k in 1..weight.saturating_sub(1) {
                for t in Tensor::enumerate_spanning(weight - k, bounds.max_blocks) {
                    keep(gen_cyc2(&t, k), &mut out)?;
                }
            }
        }
        Family::CyclicSum => {
            if weight >= 3 {
                for c in Index::compositions(weight - 1) {
                    if c.parts().iter().any(|&p| p >= 2) {
                        keep(gen_cyclic_sum(c.parts()), &mut out)?;
                    }
                }
            }
        }
        Family::Derivation => {
            for m in 1..weight.saturating_sub(1) {
                for w in hc0_basis(weight - m) {
                    keep(gen_derivation(&w, m), &mut out)?;
                }
            }
        }
        Family::Fwm => {
            for m in 0..weight.saturating_sub(2) {
                for w in hc0_basis(weight - m - 1) {
                    keep(gen_fwm(&w, m), &mut out)?;
                }
            }
        }
        Family::SumFormula => {
            for r in 2..weight {
                keep(gen_sum_formula(weight, r), &mut out)?;
            }
        }
    }
    if out.iter().any(|r| r.weight() != weight) {
        return Err(CmzvError::Consistency(format!(
            "{family} enumeration produced a relation off weight {weight}"
        )));
    }
    Ok(out)
}
