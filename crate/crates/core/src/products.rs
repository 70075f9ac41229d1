//! Shuffle, harmonic, inner shuffle and inner harmonic products, and the
//! finite lattice functional `f_{p,q}` that the inner harmonic product
//! factorises through.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CmzvError, Result};
use crate::index::Index;
use crate::poly::{NcPoly, Subspace};
use crate::rational::{recip_pow, Rational};
use crate::word::{Letter, Word};

/// Shuffle product of two words, as multiplicities.
///
/// Follows `uw ⧢ u'w' = u(w ⧢ u'w') + u'(uw ⧢ w')` bottom-up over suffix
/// pairs, so each suffix shuffle is computed once.
pub fn shuffle_words(u: &Word, v: &Word) -> HashMap<Word, u64> {
    let (a, b) = (u.letters(), v.letters());
    // row[j] holds the shuffle of a[i..] and b[j..] for the current i.
    let mut next_row: Vec<HashMap<Vec<Letter>, u64>> = (0..=b.len())
        .map(|j| HashMap::from([(b[j..].to_vec(), 1u64)]))
        .collect();
    for i in (0..a.len()).rev() {
        let mut row: Vec<HashMap<Vec<Letter>, u64>> = vec![HashMap::new(); b.len() + 1];
        row[b.len()] = HashMap::from([(a[i..].to_vec(), 1u64)]);
        for j in (0..b.len()).rev() {
            let mut cell: HashMap<Vec<Letter>, u64> = HashMap::new();
            for (tail, n) in &next_row[j] {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(a[i]);
                w.extend_from_slice(tail);
                *cell.entry(w).or_default() += n;
            }
            for (tail, n) in &row[j + 1] {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(b[j]);
                w.extend_from_slice(tail);
                *cell.entry(w).or_default() += n;
            }
            row[j] = cell;
        }
        next_row = row;
    }
    next_row
        .swap_remove(0)
        .into_iter()
        .map(|(w, n)| (Word::from_letters(w), n))
        .collect()
}

pub fn shuffle(a: &NcPoly, b: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            let c = cu * cv;
            for (w, n) in shuffle_words(u, v) {
                out.add_term(w, &c * Rational::from_integer(BigInt::from(n)));
            }
        }
    }
    out
}

/// A pair of strictly increasing maps `f: {1..r} → {1..d}`,
/// `g: {1..s} → {1..d}` whose images cover `{1..d}`. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicMergePair {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub d: usize,
}

impl HarmonicMergePair {
    /// `g(1) ≤ f(i) ≤ g(s)` for every `i`.
    pub fn is_confined(&self) -> bool {
        match (self.g.first(), self.g.last()) {
            (Some(&lo), Some(&hi)) => self.f.iter().all(|&fi| lo <= fi && fi <= hi),
            _ => self.f.is_empty(),
        }
    }

    /// The merged index `m_1, ..., m_d`.
    pub fn merge(&self, k: &[u32], l: &[u32]) -> Vec<u32> {
        let mut m = vec![0u32; self.d];
        for (i, &fi) in self.f.iter().enumerate() {
            m[fi - 1] += k[i];
        }
        for (j, &gj) in self.g.iter().enumerate() {
            m[gj - 1] += l[j];
        }
        m
    }
}

/// Every merge pair for lengths `r` and `s`, ordered by `d` then by the
/// sequence of step kinds.
pub fn merge_pairs(r: usize, s: usize) -> Vec<HarmonicMergePair> {
    fn rec(
        r: usize,
        s: usize,
        f: &mut Vec<usize>,
        g: &mut Vec<usize>,
        pos: usize,
        out: &mut Vec<HarmonicMergePair>,
    ) {
        let (i, j) = (f.len(), g.len());
        if i == r && j == s {
            out.push(HarmonicMergePair {
                f: f.clone(),
                g: g.clone(),
                d: pos,
            });
            return;
        }
        let next = pos + 1;
        if i < r && j < s {
            f.push(next);
            g.push(next);
            rec(r, s, f, g, next, out);
            f.pop();
            g.pop();
        }
        if i < r {
            f.push(next);
            rec(r, s, f, g, next, out);
            f.pop();
        }
        if j < s {
            g.push(next);
            rec(r, s, f, g, next, out);
            g.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, s, &mut Vec::new(), &mut Vec::new(), 0, &mut out);
    out.sort_by_key(|p| p.d);
    out
}

fn merge_product(a: &NcPoly, b: &NcPoly, confined: bool) -> Result<NcPoly> {
    let mut pair_cache: HashMap<(usize, usize), Vec<HarmonicMergePair>> = HashMap::new();
    let b_idx: Vec<(Index, &Rational)> = b
        .iter()
        .map(|(w, c)| w.to_index().map(|i| (i, c)))
        .collect::<Result<_>>()?;
    let mut out = NcPoly::zero();
    for (u, cu) in a.iter() {
        let k = u.to_index()?;
        for (l, cv) in &b_idx {
            let c = cu * *cv;
            let pairs = pair_cache
                .entry((k.depth(), l.depth()))
                .or_insert_with(|| merge_pairs(k.depth(), l.depth()));
            for pair in pairs.iter() {
                if confined && !pair.is_confined() {
                    continue;
                }
                let m = Index::new_unchecked(pair.merge(k.parts(), l.parts()));
                out.add_term(Word::from_index(&m), c.clone());
            }
        }
    }
    Ok(out)
}

/// Harmonic (stuffle) product on `h^1`, by merge-map enumeration.
pub fn harmonic(a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
    a.require(Subspace::H1)?;
    b.require(Subspace::H1)?;
    merge_product(a, b, false)
}

/// Inner harmonic product `h^1 × h_C^1 → h_C^1`: merge maps whose left
/// image stays between the first and last position of the right word.
pub fn inner_harmonic(a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
    a.require(Subspace::H1)?;
    b.require(Subspace::HC1)?;
    merge_product(a, b, true)
}

/// Inner shuffle `h × h_C → h_C`: `w ⧢̲ u w' u' = u (w ⧢ w') u'`, and zero on
/// single letters.
pub fn inner_shuffle(a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
    b.require(Subspace::HC)?;
    let mut out = NcPoly::zero();
    for (v, cv) in b.iter() {
        let n = v.weight();
        if n < 2 {
            continue;
        }
        let head = NcPoly::from_word(v.slice(0..1));
        let tail = NcPoly::from_word(v.slice(n - 1..n));
        let interior = NcPoly::from_word(v.slice(1..n - 1));
        let inner = head.concat(&shuffle(a, &interior)).concat(&tail);
        out.add_scaled(cv, &inner);
    }
    Ok(out)
}

/// `f_{p,q}(z_{k_1}⋯z_{k_r}) = Σ_{p = n_1 < ⋯ < n_r = q} Π n_i^{-k_i}`,
/// extended linearly over `h_C^1`.
pub fn f_pq_harmonic(w: &NcPoly, p: u64, q: u64) -> Result<Rational> {
    if p == 0 {
        return Err(CmzvError::InvalidArgument("f_{p,q} requires p >= 1".into()));
    }
    if p > q {
        return Err(CmzvError::InvalidArgument(format!(
            "f_{{p,q}} requires p <= q, got p = {p}, q = {q}"
        )));
    }
    w.require(Subspace::HC1)?;
    let mut total = Rational::zero();
    for (word, c) in w.iter() {
        let k = word.to_index()?;
        total += c * pinned_chain_sum(k.parts(), p, q);
    }
    Ok(total)
}

fn pinned_chain_sum(k: &[u32], p: u64, q: u64) -> Rational {
    let r = k.len();
    if r == 1 {
        return if p == q { recip_pow(p, k[0]) } else { Rational::zero() };
    }
    if (q - p) < (r as u64 - 1) {
        return Rational::zero();
    }
    // free sum over p < n_2 < ... < n_{r-1} < q
    fn free(k: &[u32], lo: u64, hi: u64) -> Rational {
        match k.split_first() {
            None => Rational::one(),
            Some((&k0, rest)) => {
                let mut acc = Rational::zero();
                let mut n = lo + 1;
                while n + (rest.len() as u64) < hi {
                    acc += recip_pow(n, k0) * free(rest, n, hi);
                    n += 1;
                }
                acc
            }
        }
    }
    recip_pow(p, k[0]) * recip_pow(q, k[r - 1]) * free(&k[1..r - 1], p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(s: &str) -> NcPoly {
        s.parse().unwrap()
    }

    fn z(k: u32) -> NcPoly {
        NcPoly::z(k).unwrap()
    }

    fn zs(ks: &[u32]) -> NcPoly {
        NcPoly::from_index(&Index::new(ks.to_vec()).unwrap())
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&NcPoly::y(), &NcPoly::x()), p("1 xy + 1 yx"));
        assert_eq!(shuffle(&NcPoly::one(), &p("1 yx")), p("1 yx"));
        assert_eq!(shuffle(&p("1 yx"), &p("1 yx")), p("2 yxyx + 4 yyxx"));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(
            harmonic(&z(1), &z(1)).unwrap(),
            &zs(&[1, 1]).scale(&int(2)) + &z(2)
        );
        assert_eq!(harmonic(&NcPoly::one(), &z(3)).unwrap(), z(3));
        assert_eq!(
            harmonic(&z(2), &z(3)).unwrap(),
            &(&zs(&[2, 3]) + &zs(&[3, 2])) + &z(5)
        );
        assert!(harmonic(&NcPoly::x(), &z(1)).is_err());
    }

    #[test]
    fn merge_pair_counts_are_delannoy() {
        // D(r, s) = Σ_k C(r,k) C(s,k) 2^k
        assert_eq!(merge_pairs(1, 1).len(), 3);
        assert_eq!(merge_pairs(2, 2).len(), 13);
        assert_eq!(merge_pairs(3, 3).len(), 63);
        assert_eq!(merge_pairs(0, 4).len(), 1);
        for pair in merge_pairs(3, 2) {
            assert!(pair.d >= 3 && pair.d <= 5);
            let mut seen = vec![false; pair.d];
            for &i in pair.f.iter().chain(&pair.g) {
                seen[i - 1] = true;
            }
            assert!(seen.into_iter().all(|b| b));
        }
    }

    #[test]
    fn inner_shuffle_examples() {
        // y ⧢̲ z_3 = z_2 z_2 + z_1 z_3
        assert_eq!(
            inner_shuffle(&NcPoly::y(), &z(3)).unwrap(),
            &zs(&[2, 2]) + &zs(&[1, 3])
        );
        for l in 1..=7u32 {
            let mut expect = NcPoly::zero();
            for j in 1..l {
                expect += &zs(&[l - j, j + 1]);
            }
            assert_eq!(inner_shuffle(&NcPoly::y(), &z(l)).unwrap(), expect);
        }
        assert!(inner_shuffle(&p("1 yx"), &NcPoly::x()).unwrap().is_zero());
        assert!(inner_shuffle(&p("1 yx"), &NcPoly::y()).unwrap().is_zero());
        assert_eq!(inner_shuffle(&p("1 xx"), &p("1 yx")).unwrap(), p("1 yxxx"));
        assert!(inner_shuffle(&NcPoly::y(), &NcPoly::one()).is_err());
    }

    #[test]
    fn inner_harmonic_examples() {
        for (k, l1, l2) in [(1, 1, 2), (2, 3, 1), (3, 2, 2)] {
            let expect = &(&zs(&[l1 + k, l2]) + &zs(&[l1, k, l2])) + &zs(&[l1, l2 + k]);
            assert_eq!(inner_harmonic(&z(k), &zs(&[l1, l2])).unwrap(), expect);
        }
        assert_eq!(inner_harmonic(&NcPoly::one(), &zs(&[2, 1])).unwrap(), zs(&[2, 1]));
        assert_eq!(inner_harmonic(&z(1), &z(1)).unwrap(), z(2));
        assert!(inner_harmonic(&z(1), &NcPoly::x()).is_err());
        assert!(inner_harmonic(&NcPoly::x(), &z(1)).is_err());
    }

    #[test]
    fn f_pq_examples() {
        assert_eq!(f_pq_harmonic(&zs(&[2, 3]), 2, 5).unwrap(), ratio(1, 500));
        assert_eq!(f_pq_harmonic(&zs(&[1, 1, 1]), 1, 2).unwrap(), int(0));
        assert_eq!(f_pq_harmonic(&zs(&[1, 1, 1]), 1, 3).unwrap(), ratio(1, 6));
        assert_eq!(f_pq_harmonic(&z(2), 3, 3).unwrap(), ratio(1, 9));
        assert_eq!(f_pq_harmonic(&z(2), 3, 4).unwrap(), int(0));
        assert!(f_pq_harmonic(&z(2), 4, 3).is_err());
        // p = 1 < n_2 < n_3 = 4 with exponents (1,1,1): n_2 ∈ {2,3}
        assert_eq!(
            f_pq_harmonic(&zs(&[1, 1, 1]), 1, 4).unwrap(),
            ratio(1, 4) * (ratio(1, 2) + ratio(1, 3))
        );
    }
}
