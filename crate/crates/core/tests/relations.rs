use cmzv::cyclic::Tensor;
use cmzv::evaluator::TruncationSpec;
use cmzv::rational::int;
use cmzv::relations::{
    enumerate_family, gen_cyc1, gen_cyc2, gen_cyclic_sum, gen_derivation, gen_sum_formula,
    rank_over_q, verify_numeric, EnumerationBounds, Family, Guarantee, Relation, RelationMatrix,
};
use cmzv::{NcPoly, Rational};
use num_traits::Zero;

fn tensor(parts: &[&str]) -> Tensor {
    Tensor(parts.iter().map(|s| s.parse().unwrap()).collect())
}

/// Rank by eliminating columns from the last one backwards, rows taken in
/// reverse, pivoting on the bottom-most nonzero entry.
fn rank_reverse_order(m: &RelationMatrix) -> usize {
    let mut rows: Vec<Vec<Rational>> = m.rows().iter().rev().cloned().collect();
    let ncols = m.columns().len();
    let mut rank = 0;
    for col in (0..ncols).rev() {
        let Some(p) = (rank..rows.len()).rev().find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &rows[rank][col];
            let pivot = rows[rank].clone();
            for (a, b) in rows[i].iter_mut().zip(&pivot) {
                *a -= &f * b;
            }
        }
        rank += 1;
    }
    rank
}

fn corrupt(r: &Relation) -> Relation {
    let mut done = false;
    r.with_terms(r.terms().iter().map(|(s, c)| {
        if !done {
            done = true;
            (s.clone(), c + int(1))
        } else {
            (s.clone(), c.clone())
        }
    }))
    .unwrap()
}

#[test]
fn derivation_rank_two_elimination_orders() {
    let b = EnumerationBounds::default();
    for w in 3..=6 {
        let rels = enumerate_family(Family::Derivation, w, b).unwrap();
        let m = RelationMatrix::new(&rels, w).unwrap();
        assert_eq!(m.rank(), rank_reverse_order(&m), "weight {w}");
        assert_eq!(rank_over_q(&rels, w).unwrap(), m.rank());
    }
}

#[test]
fn rank_is_independent_of_input_order() {
    let b = EnumerationBounds::default();
    let mut rels = enumerate_family(Family::Cyc1, 5, b).unwrap();
    let r1 = rank_over_q(&rels, 5).unwrap();
    rels.reverse();
    assert_eq!(rank_over_q(&rels, 5).unwrap(), r1);
    let m = RelationMatrix::new(&rels, 5).unwrap();
    assert_eq!(rank_reverse_order(&m), r1);
}

#[test]
fn cyc1_single_block_numeric() {
    // both sides approach ζ(3)
    let r = gen_cyc1(&tensor(&["yx"])).unwrap();
    let rep = verify_numeric(&r, TruncationSpec::float(1000), 1e-2);
    assert!(rep.passed, "{rep}");
}

#[test]
fn cyc2_weight_five_numeric_and_exact() {
    let r = gen_cyc2(&tensor(&["yx", "y"]), 2).unwrap();
    assert_eq!(r.weight(), 5);
    let rep = verify_numeric(&r, TruncationSpec::float(1000), 1e-2);
    assert!(rep.passed, "{rep}");
    let rep = verify_numeric(&r, TruncationSpec::exact(12), 0.0);
    assert_eq!(rep.guarantee, Guarantee::ExactAtCutoff);
    assert!(rep.exact_residual.unwrap().is_zero());
}

#[test]
fn cyclic_sum_numeric() {
    for ks in [&[2][..], &[2, 1][..]] {
        // leading-one terms converge slowly under box truncation
        let r = gen_cyclic_sum(ks).unwrap();
        let coarse = verify_numeric(&r, TruncationSpec::float(1000), 1e-1);
        let fine = verify_numeric(&r, TruncationSpec::float(20000), 1e-2);
        assert!(coarse.passed && fine.passed, "{ks:?}: {coarse} / {fine}");
        assert!(fine.residual.abs() <= coarse.residual.abs());
    }
}

#[test]
fn derivation_weight_four_numeric() {
    let r = gen_derivation(&NcPoly::z(2).unwrap(), 2).unwrap();
    let coarse = verify_numeric(&r, TruncationSpec::float(1000), 1e-1);
    let fine = verify_numeric(&r, TruncationSpec::float(20000), 1e-2);
    assert!(coarse.passed && fine.passed, "{coarse} / {fine}");
    assert!(fine.residual.abs() <= coarse.residual.abs());
}

#[test]
fn sum_formula_numeric() {
    for (k, r) in [(3, 2), (4, 2)] {
        let rel = gen_sum_formula(k, r).unwrap();
        let rep = verify_numeric(&rel, TruncationSpec::float(1000), 1e-2);
        assert!(rep.passed, "{rep}");
    }
}

#[test]
fn corrupted_relations_fail() {
    let cases = [
        (gen_cyc1(&tensor(&["yx"])).unwrap(), TruncationSpec::float(1000), 1e-2),
        (gen_cyc2(&tensor(&["yx"]), 1).unwrap(), TruncationSpec::exact(10), 0.0),
        (gen_cyclic_sum(&[2]).unwrap(), TruncationSpec::float(1000), 1e-2),
        (gen_derivation(&NcPoly::z(2).unwrap(), 1).unwrap(), TruncationSpec::float(1000), 1e-2),
        (gen_sum_formula(3, 2).unwrap(), TruncationSpec::float(1000), 1e-2),
    ];
    for (r, t, tol) in cases {
        assert!(verify_numeric(&r, t, tol).passed, "{r}");
        let bad = corrupt(&r);
        assert!(!verify_numeric(&bad, t, tol).passed, "{bad}");
    }
}

#[test]
fn json_lines_round_trip_for_every_family() {
    let b = EnumerationBounds::default();
    for f in Family::ALL {
        for r in enumerate_family(f, 5, b).unwrap() {
            let line = r.to_json_line();
            let back = Relation::from_json_line(&line).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.to_json_line(), line);
        }
    }
}
