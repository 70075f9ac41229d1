use std::collections::HashMap;

use cmzv::cyclic::{tensor_to_cyclic_index, CyclicIndex, Tensor};
use cmzv::derivations::{partial, DerivationOp};
use cmzv::evaluator::{eval_cyc, eval_mzsv, eval_mzv, TruncationSpec};
use cmzv::products::{harmonic, inner_harmonic, inner_shuffle, shuffle, shuffle_words};
use cmzv::rational::ratio;
use cmzv::{Index, Letter, NcPoly, Rational, Subspace, Word};
use proptest::prelude::*;

fn word_from(bits: Vec<bool>) -> Word {
    Word::from_letters(bits.into_iter().map(|b| if b { Letter::Y } else { Letter::X }).collect())
}

fn arb_word(min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), min..=max).prop_map(word_from)
}

/// Words starting with `y`.
fn arb_y_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 0..max).prop_map(|mut v| {
        v.insert(0, true);
        word_from(v)
    })
}

fn arb_coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn arb_terms(words: impl Strategy<Value = Word>, max_terms: usize) -> impl Strategy<Value = Vec<(Word, Rational)>> {
    prop::collection::vec((words, arb_coeff()), 0..=max_terms)
}

fn arb_poly(max_len: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    arb_terms(arb_word(0, max_len), max_terms).prop_map(|t| t.into_iter().collect())
}

/// Elements of `h^1`, including the constant term.
fn arb_h1(max_len: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    arb_terms(prop_oneof![Just(Word::empty()), arb_y_word(max_len)], max_terms)
        .prop_map(|t| t.into_iter().collect())
}

/// Elements of `h_C^1`.
fn arb_hc1(max_len: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    arb_terms(arb_y_word(max_len), max_terms).prop_map(|t| t.into_iter().collect())
}

/// Elements of `h_C^0`.
fn arb_hc0(max_len: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    arb_terms(
        prop::collection::vec(any::<bool>(), 0..=max_len.saturating_sub(2)).prop_map(|mut v| {
            v.insert(0, true);
            v.push(false);
            word_from(v)
        }),
        max_terms,
    )
    .prop_map(|t| t.into_iter().collect())
}

/// Interleavings counted by brute force over position subsets.
fn shuffle_oracle(u: &Word, v: &Word) -> HashMap<Word, u64> {
    let (n, m) = (u.weight(), v.weight());
    let mut out = HashMap::new();
    for mask in 0u32..(1 << (n + m)) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut letters = Vec::with_capacity(n + m);
        for pos in 0..n + m {
            if mask >> pos & 1 == 1 {
                letters.push(u.letters()[i]);
                i += 1;
            } else {
                letters.push(v.letters()[j]);
                j += 1;
            }
        }
        *out.entry(Word::from_letters(letters)).or_insert(0) += 1;
    }
    out
}

/// Quasi-shuffle recursion on z-word indices:
/// `a k ∗ b l = (a ∗ b l) k + (a k ∗ b) l + (a ∗ b)(k + l)` read from the
/// right.
fn stuffle_oracle(a: &[u32], b: &[u32]) -> HashMap<Vec<u32>, i64> {
    let mut out = HashMap::new();
    match (a.split_last(), b.split_last()) {
        (None, _) => {
            out.insert(b.to_vec(), 1);
        }
        (_, None) => {
            out.insert(a.to_vec(), 1);
        }
        (Some((&k, ra)), Some((&l, rb))) => {
            for (rest, c) in stuffle_oracle(ra, b) {
                let mut w = rest;
                w.push(k);
                *out.entry(w).or_insert(0) += c;
            }
            for (rest, c) in stuffle_oracle(a, rb) {
                let mut w = rest;
                w.push(l);
                *out.entry(w).or_insert(0) += c;
            }
            for (rest, c) in stuffle_oracle(ra, rb) {
                let mut w = rest;
                w.push(k + l);
                *out.entry(w).or_insert(0) += c;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_term_order(terms in arb_terms(arb_word(0, 6), 8)) {
        let a: NcPoly = terms.iter().cloned().collect();
        let b: NcPoly = terms.iter().rev().cloned().collect();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.to_string(), b.to_string());
        prop_assert!(a.iter().all(|(_, c)| *c != Rational::from_integer(0.into())));
        let round: NcPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(round, a);
    }

    #[test]
    fn ring_axioms(a in arb_poly(2, 4), b in arb_poly(2, 4), c in arb_poly(2, 4)) {
        prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&NcPoly::one() * &a, a.clone());
        prop_assert_eq!(&a * &NcPoly::one(), a.clone());
        prop_assert_eq!(&a + &NcPoly::zero(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn subspace_consistency(a in arb_poly(6, 5)) {
        prop_assert_eq!(a.in_hc0(), a.in_h0() && a.in_hc());
        prop_assert_eq!(a.in_hc1(), a.in_h1() && a.in_hc());
        prop_assert_eq!(a.in_subspace(Subspace::HC0), a.require(Subspace::HC0).is_ok());
    }

    #[test]
    fn shuffle_matches_interleaving_oracle(u in arb_word(0, 5), v in arb_word(0, 5)) {
        let got = shuffle_words(&u, &v);
        prop_assert_eq!(got, shuffle_oracle(&u, &v));
    }

    #[test]
    fn shuffle_commutative_associative(a in arb_poly(3, 3), b in arb_poly(3, 3), c in arb_poly(2, 2)) {
        prop_assert_eq!(shuffle(&a, &b), shuffle(&b, &a));
        prop_assert_eq!(shuffle(&shuffle(&a, &b), &c), shuffle(&a, &shuffle(&b, &c)));
    }

    #[test]
    fn harmonic_matches_stuffle_oracle(a in prop::collection::vec(1u32..4, 0..4), b in prop::collection::vec(1u32..4, 0..4)) {
        let pa = NcPoly::from_index(&Index::new(a.clone()).unwrap());
        let pb = NcPoly::from_index(&Index::new(b.clone()).unwrap());
        let want: NcPoly = stuffle_oracle(&a, &b)
            .into_iter()
            .map(|(k, c)| (Word::from_index(&Index::new(k).unwrap()), Rational::from_integer(c.into())))
            .collect();
        prop_assert_eq!(harmonic(&pa, &pb).unwrap(), want);
    }

    #[test]
    fn harmonic_commutative_associative(a in arb_h1(4, 3), b in arb_h1(4, 3), c in arb_h1(3, 2)) {
        let ab = harmonic(&a, &b).unwrap();
        prop_assert_eq!(&ab, &harmonic(&b, &a).unwrap());
        prop_assert_eq!(harmonic(&ab, &c).unwrap(), harmonic(&a, &harmonic(&b, &c).unwrap()).unwrap());
    }

    #[test]
    fn inner_shuffle_bridge(w in arb_word(1, 6)) {
        let y = NcPoly::y();
        let wp = NcPoly::from_word(w);
        let want = &(&shuffle(&y, &wp) - &y.concat(&wp)) - &wp.concat(&y);
        prop_assert_eq!(inner_shuffle(&y, &wp).unwrap(), want);
    }

    #[test]
    fn inner_harmonic_bridge(w in arb_hc1(6, 3), k in 1u32..=4) {
        let z = NcPoly::z(k).unwrap();
        let want = &(&harmonic(&z, &w).unwrap() - &z.concat(&w)) - &w.concat(&z);
        prop_assert_eq!(inner_harmonic(&z, &w).unwrap(), want);
    }

    #[test]
    fn mixed_associativity(u1 in arb_h1(3, 2), u2 in arb_hc1(3, 2), u3 in arb_hc1(4, 2)) {
        let lhs = inner_harmonic(&u1, &inner_harmonic(&u2, &u3).unwrap()).unwrap();
        let rhs = inner_harmonic(&harmonic(&u1, &u2).unwrap(), &u3).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inner_products_land_in_their_spaces(a in arb_poly(3, 3), b in arb_hc1(5, 3), w in arb_word(1, 5), h in arb_h1(3, 2)) {
        let s = inner_shuffle(&a, &NcPoly::from_word(w)).unwrap();
        prop_assert!(s.in_hc());
        prop_assert!(inner_harmonic(&h, &b).unwrap().in_hc1());
    }

    #[test]
    fn leibniz_rule(v in arb_poly(3, 3), w in arb_poly(3, 3), m in 1u32..=3) {
        for op in [DerivationOp::S, DerivationOp::Delta(m), DerivationOp::Partial(m)] {
            let lhs = op.apply(&v.concat(&w)).unwrap();
            let rhs = &op.apply(&v).unwrap().concat(&w) + &v.concat(&op.apply(&w).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn partial_preserves_h0(w in arb_hc0(6, 3), m in 1u32..=4) {
        prop_assert!(partial(m, &w).unwrap().in_h0());
    }

    #[test]
    fn rotation_is_a_group_action(parts in prop::collection::vec(prop::collection::vec(1u32..4, 1..3), 1..5), a in -6i64..6, b in -6i64..6) {
        let k = CyclicIndex::new(parts.into_iter().map(|p| Index::new(p).unwrap()).collect()).unwrap();
        prop_assert_eq!(k.rotate(a).rotate(b), k.rotate(a + b));
        prop_assert_eq!(k.rotate(k.block_count() as i64), k.clone());
        prop_assert_eq!(k.rotate(0), k);
    }

    #[test]
    fn tensor_weights_carry_over(ks in prop::collection::vec(prop::collection::vec(1u32..4, 1..3), 1..4)) {
        let t = Tensor(ks.iter().map(|k| Word::from_index(&Index::new(k.clone()).unwrap())).collect());
        if let Ok(k) = tensor_to_cyclic_index(&t) {
            prop_assert_eq!(k.weight() as usize, t.weight());
        } else {
            prop_assert!(!t.is_cyc_spanning() || ks.iter().all(|b| b == &vec![1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn truncated_values_nondecreasing(parts in prop::collection::vec(1u32..4, 1..4), n in 2u64..40) {
        let mut parts = parts;
        *parts.last_mut().unwrap() += 1;
        let k = Index::new(parts).unwrap();
        for f in [eval_mzv, eval_mzsv] {
            let a = f(&k, TruncationSpec::exact(n - 1)).unwrap();
            let b = f(&k, TruncationSpec::exact(n)).unwrap();
            prop_assert!(a.as_exact().unwrap() <= b.as_exact().unwrap());
        }
    }

    #[test]
    fn cyclic_rotation_invariant_at_cutoff(ks in prop::collection::vec(1u32..4, 2..4), n in 1u64..12, j in 0i64..4) {
        let blocks: Vec<Index> = ks.iter().map(|&k| Index::new(vec![k]).unwrap()).collect();
        let mut k = CyclicIndex::new(blocks).unwrap();
        if !k.is_admissible() {
            k = CyclicIndex::new(vec![Index::new(vec![1, 2]).unwrap(), Index::new(vec![ks[0]]).unwrap()]).unwrap();
        }
        let t = TruncationSpec::exact(n);
        prop_assert_eq!(eval_cyc(&k, t).unwrap(), eval_cyc(&k.rotate(j), t).unwrap());
    }
}

#[test]
fn word_index_round_trip_to_weight_10() {
    for n in 1..=10 {
        for k in Index::compositions(n) {
            let w = Word::from_index(&k);
            assert_eq!(w.weight() as u32, n);
            assert_eq!(w.to_index().unwrap(), k);
        }
    }
}
