#![allow(dead_code)]

use ncdisk::aut::NCAutomorphism;
use ncdisk::der::NCDerivation;
use ncdisk::random::Sampler;
use ncdisk::series::NCSeries;
use ncdisk::text::Q;
use ncdisk::word::Word;
use proptest::prelude::*;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

pub fn coefficient() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=3).prop_map(|(a, b)| q(a, b))
}

/// Sparse series with at most `terms` terms in degrees `min..=trunc`.
pub fn series(n: usize, trunc: usize, min: usize, terms: usize) -> impl Strategy<Value = NCSeries> {
    prop::collection::vec(
        (prop::collection::vec(0..n, min..=trunc), coefficient()),
        0..=terms,
    )
    .prop_map(move |ts| {
        NCSeries::from_terms(n, trunc, ts.into_iter().map(|(l, c)| (Word::from_letters(l), c)))
            .expect("letters in range")
    })
}

pub fn automorphism(n: usize, trunc: usize) -> impl Strategy<Value = NCAutomorphism> {
    any::<u64>().prop_map(move |s| Sampler::new(s).automorphism(n, trunc, 3))
}

pub fn derivation(n: usize, trunc: usize, min: usize) -> impl Strategy<Value = NCDerivation> {
    prop::collection::vec(series(n, trunc, min, 4), n)
        .prop_map(|images| NCDerivation::new(images).expect("same shape"))
}

pub fn parse(src: &str, n: usize, trunc: usize) -> NCSeries {
    NCSeries::parse(src, n, trunc).unwrap()
}
