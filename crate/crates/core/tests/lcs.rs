mod common;

use common::{automorphism, parse, series};
use ncdisk::comm::CommPoly;
use ncdisk::lcs::{
    ci_thickening_dims, ideal_closure, lcs_component, lcs_ideal_component, lcs_ideal_table,
    lcs_quotient_table, lcs_quotient_table_with, Lcs, TruncatedIdeal,
};
use ncdisk::oracle::{oracle_commutative_quotient_dims, oracle_ideal_dims, oracle_lcs_dims};
use ncdisk::series::NCSeries;
use ncdisk::{Error, Execution};
use proptest::prelude::*;

#[test]
fn lower_central_components() {
    assert_eq!(lcs_component(1, 2, 2).unwrap().dim(), 4);
    let l2 = lcs_component(2, 2, 2).unwrap();
    assert_eq!(l2.dim(), 1);
    assert!(l2.contains_series(&parse("x1*x2 - x2*x1", 2, 2)));
    assert_eq!(lcs_component(3, 2, 2).unwrap().dim(), 0);
}

#[test]
fn ideal_components() {
    assert_eq!(lcs_ideal_component(2, 3, 2).unwrap().dim(), 4);
    for d in 1..=4 {
        assert_eq!(lcs_ideal_component(1, d, 3).unwrap().dim(), 3usize.pow(d as u32));
    }
    assert_eq!(lcs_ideal_component(2, 1, 2).unwrap().dim(), 0);
}

#[test]
fn quotient_table_entries() {
    let t = lcs_quotient_table(4, 5, 2).unwrap();
    assert_eq!(t.row(1).unwrap()[0], 2);
    assert_eq!(t.row(1).unwrap()[1], 3);
    assert_eq!(t, oracle_lcs_dims(2, 4, 5).unwrap());
    let seq = lcs_quotient_table_with(4, 5, 2, Execution::Sequential).unwrap();
    assert_eq!(t, seq);
}

#[test]
fn ideal_table_matches_oracle() {
    let t = lcs_ideal_table(3, 4, 3).unwrap();
    let m = oracle_ideal_dims(3, 3, 4).unwrap();
    for k in 1..=3 {
        assert_eq!(t.row(k).unwrap(), m[k - 1].as_slice());
    }
}

#[test]
fn table_json_shape() {
    let t = lcs_quotient_table(2, 3, 2).unwrap();
    let json = serde_json::to_string(&t).unwrap();
    assert!(json.starts_with("{\"n\":2,\"rows\":[{\"k\":1,\"dims\":["));
    assert_eq!(serde_json::from_str::<ncdisk::lcs::DimensionTable>(&json).unwrap(), t);
}

#[test]
fn closure_examples() {
    let x1 = NCSeries::generator(2, 3, 0);
    let c = ideal_closure(&[x1], 2, 2).unwrap();
    assert_eq!(c.dim(), 3);
    for w in ["x1*x1", "x1*x2", "x2*x1"] {
        assert!(c.contains_series(&parse(w, 2, 3)));
    }
    assert!(!c.contains_series(&parse("x2*x2", 2, 3)));
    assert_eq!(ideal_closure(&[], 2, 3).unwrap().dim(), 0);
    let comm = parse("x1*x2 - x2*x1", 2, 3);
    let c = ideal_closure(&[comm], 2, 3).unwrap();
    assert_eq!(c.dim(), 4);
    assert!(c.is_subspace_of(&lcs_ideal_component(2, 3, 2).unwrap()));
}

#[test]
fn thickening_examples() {
    let free = ci_thickening_dims(&[], 2, 4).unwrap();
    assert_eq!(free.dims, vec![1, 2, 4, 8, 16]);
    assert_eq!(free.abelian, vec![1, 2, 3, 4, 5]);
    let x1 = NCSeries::generator(2, 5, 0);
    let line = ci_thickening_dims(&[x1], 2, 5).unwrap();
    assert_eq!(line.dims, vec![1; 6]);
    assert_eq!(line.abelian, vec![1; 6]);
    let twisted = parse("x1 + x1*x2 - x2*x1", 2, 5);
    let dims = ci_thickening_dims(&[twisted], 2, 5).unwrap();
    assert_eq!(dims.abelian, oracle_commutative_quotient_dims(2, &[CommPoly::var(2, 0)], 5));
}

#[test]
fn thickening_errors() {
    assert!(matches!(
        ci_thickening_dims(&[parse("1 + x1", 2, 3)], 2, 3),
        Err(Error::NonRecentred { index: 1 })
    ));
    let f = parse("x1 + x2^2", 2, 3);
    let g = parse("2*x1", 2, 3);
    assert!(matches!(ci_thickening_dims(&[f, g], 2, 3), Err(Error::NotSmooth)));
}

#[test]
fn cap_is_enforced() {
    assert!(matches!(
        Lcs::compute_with_cap(3, 2, 12, Execution::Sequential, 1000),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn truncated_ideal_membership() {
    let x1 = NCSeries::generator(2, 4, 0);
    let ideal = TruncatedIdeal::generate(2, 4, &[x1]).unwrap();
    assert!(ideal.contains(&parse("x2*x1*x2 + x1^3", 2, 4)));
    assert!(!ideal.contains(&parse("x2^3", 2, 4)));
    assert_eq!(ideal.leading_count(3), 7);
}

#[test]
fn one_generator_is_commutative() {
    let t = lcs_quotient_table(2, 5, 1).unwrap();
    assert_eq!(t.row(2).unwrap(), &[0; 5]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ideals_are_nested(n in 1usize..=3, d in 1usize..=3) {
        let lcs = Lcs::compute(n, 4, d, Execution::Parallel).unwrap();
        for k in 1..4 {
            prop_assert!(lcs.ideal(k + 1, d).is_subspace_of(lcs.ideal(k, d)));
            prop_assert!(lcs.lower(k + 1, d).is_subspace_of(lcs.lower(k, d)));
            prop_assert!(lcs.lower(k, d).is_subspace_of(lcs.ideal(k, d)));
        }
    }

    #[test]
    fn automorphisms_preserve_the_filtration(
        g in automorphism(2, 4),
        coeffs in prop::collection::vec(-3i64..=3, 8),
        k in 2usize..=3,
        d in 2usize..=4,
    ) {
        let lcs = Lcs::compute(2, 3, 4, Execution::Parallel).unwrap();
        let mut v = NCSeries::zero(2, 4);
        for (b, c) in lcs.ideal(k, d).basis_series(4).iter().zip(coeffs.iter().cycle()) {
            v = v.add(&b.scale(&common::q(*c, 1))).unwrap();
        }
        prop_assert!(lcs.ideal_contains(k, &g.apply(&v).unwrap()));
    }

    #[test]
    fn products_with_the_ideal_stay_inside(
        a in series(2, 4, 0, 4),
        k in 2usize..=3,
    ) {
        let lcs = Lcs::compute(2, 3, 4, Execution::Parallel).unwrap();
        let v = lcs.ideal(k, 2 + k - 2).basis_series(4).into_iter().next();
        if let Some(v) = v {
            prop_assert!(lcs.ideal_contains(k, &a.mul(&v).unwrap()));
            prop_assert!(lcs.ideal_contains(k, &v.mul(&a).unwrap()));
        }
    }
}
