#![allow(dead_code)]

use dirichlet::arith::{ExactSeries, FloatSeries, QComplex, Series};
use dirichlet::group::FiniteSupportPermutation;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn exact_coeff() -> impl Strategy<Value = QComplex> {
    (-6i64..=6, 1i64..=4, -3i64..=3)
        .prop_map(|(n, d, m)| QComplex::new(rational(n, d), rational(m, 2)))
}

/// Sparse exact series: window in `[1, max_window]`, up to `max_terms` terms.
pub fn exact_series(max_window: u64, max_terms: usize) -> impl Strategy<Value = ExactSeries> {
    (1..=max_window).prop_flat_map(move |w| {
        prop::collection::vec((1..=w, exact_coeff()), 0..=max_terms)
            .prop_map(move |pairs| Series::from_coeffs(w, pairs).unwrap())
    })
}

/// Pairs of exact series sharing a window.
pub fn exact_pair(
    max_window: u64,
    max_terms: usize,
) -> impl Strategy<Value = (ExactSeries, ExactSeries)> {
    (1..=max_window).prop_flat_map(move |w| {
        let terms = || prop::collection::vec((1..=w, exact_coeff()), 0..=max_terms);
        (terms(), terms()).prop_map(move |(a, b)| {
            (
                Series::from_coeffs(w, a).unwrap(),
                Series::from_coeffs(w, b).unwrap(),
            )
        })
    })
}

/// Exact series with a nonzero constant term.
pub fn exact_unit(max_window: u64, max_terms: usize) -> impl Strategy<Value = ExactSeries> {
    (
        exact_series(max_window, max_terms),
        1i64..=5,
        1i64..=3,
        any::<bool>(),
    )
        .prop_map(|(f, n, d, neg)| {
            let c = QComplex::new(rational(if neg { -n } else { n }, d), rational(0, 1));
            let w = f.window();
            let rest: Vec<(u64, QComplex)> = f
                .iter()
                .filter(|&(n, _)| n > 1)
                .map(|(n, c)| (n, c.clone()))
                .collect();
            Series::from_coeffs(w, std::iter::once((1, c)).chain(rest)).unwrap()
        })
}

pub fn float_series(max_window: u64, max_terms: usize) -> impl Strategy<Value = FloatSeries> {
    (2..=max_window).prop_flat_map(move |w| {
        prop::collection::vec((1..=w, -1.0f64..=1.0, -1.0f64..=1.0), 1..=max_terms).prop_map(
            move |t| {
                Series::from_coeffs(w, t.into_iter().map(|(n, a, b)| (n, Complex64::new(a, b))))
                    .unwrap()
            },
        )
    })
}

/// A permutation of `[1, max_index]` given as a shuffled image list.
pub fn permutation(max_index: usize) -> impl Strategy<Value = FiniteSupportPermutation> {
    Just((1..=max_index).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |image| {
            FiniteSupportPermutation::from_map((1..=max_index).zip(image)).unwrap()
        })
}
