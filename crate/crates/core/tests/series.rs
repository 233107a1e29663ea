mod common;

use common::{parse, q, series};
use ncdisk::comm::CommSeries;
use ncdisk::oracle::{dense_series, oracle_product};
use ncdisk::series::NCSeries;
use ncdisk::word::Word;
use ncdisk::{Error, Execution};
use proptest::prelude::*;

#[test]
fn addition_examples() {
    let x1 = parse("x1", 2, 3);
    assert!(x1.add(&x1.neg()).unwrap().is_zero());
    assert_eq!(parse("x1", 2, 3).add(&parse("x2", 2, 3)).unwrap().len(), 2);
    let h = parse("1/2*x1*x2", 2, 3);
    assert_eq!(h.add(&h).unwrap(), parse("x1*x2", 2, 3));
}

#[test]
fn product_examples() {
    let p = parse("x1", 2, 3).mul(&parse("x2", 2, 3)).unwrap();
    assert_eq!(p.to_string(), "x1*x2");
    let inv = parse("1 - x1 + x1^2 - x1^3 + x1^4 - x1^5", 1, 5);
    assert_eq!(parse("1 + x1", 1, 5).mul(&inv).unwrap(), NCSeries::one(1, 5));
    assert!(parse("x1*x2", 2, 2).mul(&parse("x1", 2, 2)).unwrap().is_zero());
}

#[test]
fn commutator_examples() {
    let x1 = NCSeries::generator(2, 3, 0);
    let x2 = NCSeries::generator(2, 3, 1);
    assert!(x1.commutator(&x1).unwrap().is_zero());
    assert_eq!(x1.commutator(&x2).unwrap(), parse("x1*x2 - x2*x1", 2, 3));
    let nested = x1.commutator(&x1.commutator(&x2).unwrap()).unwrap();
    assert_eq!(nested, parse("x1^2*x2 - 2*x1*x2*x1 + x2*x1^2", 2, 3));
    let inner = x1.commutator(&x2).unwrap();
    let by_words: Vec<_> = oracle_product(&x1, &inner)
        .iter()
        .zip(oracle_product(&inner, &x1))
        .map(|(a, b)| a - b)
        .collect();
    assert_eq!(dense_series(&nested), by_words);
}

#[test]
fn substitution_examples() {
    let swap = [NCSeries::generator(2, 3, 1), NCSeries::generator(2, 3, 0)];
    assert_eq!(parse("x1*x2", 2, 3).substitute(&swap).unwrap(), parse("x2*x1", 2, 3));
    let g = [parse("x1 + x1^2", 1, 3)];
    assert_eq!(parse("x1", 1, 3).substitute(&g).unwrap(), parse("x1 + x1^2", 1, 3));
    let sq = parse("x1^2", 1, 3).substitute(&g).unwrap();
    assert_eq!(sq, parse("x1^2 + 2*x1^3", 1, 3));
    assert_eq!(sq.to_string(), "x1^2 + 2*x1^3");
}

#[test]
fn substitution_rejects_constant_images() {
    let bad = [parse("1 + x1", 1, 3)];
    assert!(matches!(
        parse("x1", 1, 3).substitute(&bad),
        Err(Error::DivergentSubstitution { .. })
    ));
}

#[test]
fn abelianization_examples() {
    assert!(parse("x1*x2 - x2*x1", 2, 3).abelianize().is_zero());
    let ab = parse("x1*x2*x1", 2, 3).abelianize();
    assert_eq!(ab, CommSeries::parse("x1^2*x2", 2, 3).unwrap());
    assert_eq!(ab.to_string(), "x1^2*x2");
    let ab = parse("2*x1*x2 + 3*x2*x1", 2, 3).abelianize();
    assert_eq!(ab, CommSeries::parse("5*x1*x2", 2, 3).unwrap());
}

#[test]
fn parse_and_format_examples() {
    let s = parse("3/2*x1*x2 - x2^2", 2, 3);
    assert_eq!(s.len(), 2);
    assert_eq!(s.coeff(&Word::from_letters([0, 1])), q(3, 2));
    assert_eq!(s.coeff(&Word::from_letters([1, 1])), q(-1, 1));
    assert!(matches!(NCSeries::parse("", 2, 3), Err(Error::Syntax { .. })));
    let t = NCSeries::from_terms(
        2,
        3,
        [(Word::from_letters([1, 0]), q(1, 1)), (Word::from_letters([0]), q(1, 1))],
    )
    .unwrap();
    assert_eq!(t.to_string(), "x1 + x2*x1");
}

#[test]
fn parse_errors() {
    assert!(matches!(NCSeries::parse("x3", 2, 3), Err(Error::IndexOutOfRange { .. })));
    assert!(matches!(NCSeries::parse("x1 +", 2, 3), Err(Error::Syntax { .. })));
    assert!(matches!(NCSeries::parse("x1 * * x2", 2, 3), Err(Error::Syntax { .. })));
}

#[test]
fn shape_mismatch_is_an_error() {
    let a = NCSeries::generator(2, 3, 0);
    assert!(matches!(a.add(&NCSeries::generator(2, 4, 0)), Err(Error::DimensionMismatch(_))));
    assert!(matches!(a.mul(&NCSeries::generator(3, 3, 0)), Err(Error::DimensionMismatch(_))));
}

proptest! {
    #[test]
    fn ring_axioms(a in series(2, 4, 0, 6), b in series(2, 4, 0, 6), c in series(2, 4, 0, 6)) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let one = NCSeries::one(2, 4);
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn product_matches_word_expansion(a in series(3, 4, 0, 8), b in series(3, 4, 0, 8)) {
        prop_assert_eq!(dense_series(&a.mul(&b).unwrap()), oracle_product(&a, &b));
    }

    #[test]
    fn parallel_product_is_identical(a in series(2, 6, 0, 40), b in series(2, 6, 0, 40)) {
        let seq = a.mul_with(&b, Execution::Sequential).unwrap();
        let par = a.mul_with(&b, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn substitution_is_functorial(
        a in series(2, 4, 0, 5),
        g in prop::collection::vec(series(2, 4, 1, 3), 2),
        h in prop::collection::vec(series(2, 4, 1, 3), 2),
    ) {
        let lhs = a.substitute(&g).unwrap().substitute(&h).unwrap();
        let gh: Vec<_> = g.iter().map(|gi| gi.substitute(&h).unwrap()).collect();
        prop_assert_eq!(lhs, a.substitute(&gh).unwrap());
    }

    #[test]
    fn substitution_is_an_algebra_map(
        a in series(2, 4, 0, 5),
        b in series(2, 4, 0, 5),
        g in prop::collection::vec(series(2, 4, 1, 3), 2),
    ) {
        let lhs = a.mul(&b).unwrap().substitute(&g).unwrap();
        let rhs = a.substitute(&g).unwrap().mul(&b.substitute(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn abelianization_is_a_homomorphism(a in series(3, 4, 0, 6), b in series(3, 4, 0, 6)) {
        let prod = a.mul(&b).unwrap().abelianize();
        prop_assert_eq!(prod, a.abelianize().mul(&b.abelianize()).unwrap());
        let sum = a.add(&b).unwrap().abelianize();
        prop_assert_eq!(sum, a.abelianize().add(&b.abelianize()).unwrap());
        prop_assert!(a.commutator(&b).unwrap().abelianize().is_zero());
    }

    #[test]
    fn text_round_trip(a in series(3, 4, 0, 8)) {
        prop_assert_eq!(NCSeries::parse(&a.to_string(), 3, 4).unwrap(), a.clone());
        let ab = a.abelianize();
        prop_assert_eq!(CommSeries::parse(&ab.to_string(), 3, 4).unwrap(), ab);
    }

    #[test]
    fn truncation_commutes_with_product(a in series(2, 5, 0, 6), b in series(2, 5, 0, 6)) {
        let low = a.truncate(3).mul(&b.truncate(3)).unwrap();
        prop_assert_eq!(low, a.mul(&b).unwrap().truncate(3));
    }
}
