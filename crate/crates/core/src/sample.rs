//! Seeded random inputs for property checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::algebra::AlgebraElement;
use crate::grig::{Generator, GroupElement};

/// A reduced word of length at most `max_len`.
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> GroupElement {
    let len = rng.random_range(0..=max_len);
    GroupElement::normalize((0..len).map(|_| Generator::ALL[rng.random_range(0..4)]))
}

/// Up to `max_terms` terms with small non-zero rational coefficients.
pub fn random_element<R: Rng>(rng: &mut R, max_terms: usize, max_len: usize) -> AlgebraElement {
    let terms = rng.random_range(1..=max_terms);
    AlgebraElement::from_terms((0..terms).map(|_| {
        let mut numer = rng.random_range(-4i64..=4);
        if numer == 0 {
            numer = 1;
        }
        let denom = rng.random_range(1i64..=3);
        let q = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        (random_word(rng, max_len), q)
    }))
}

/// An integer vector of length 1..=max_level with entries in `lo..=hi`.
pub fn random_vector<R: Rng>(rng: &mut R, max_level: usize, lo: i64, hi: i64) -> Vec<i64> {
    let level = rng.random_range(1..=max_level);
    (0..level).map(|_| rng.random_range(lo..=hi)).collect()
}
