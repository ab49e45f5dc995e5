mod common;

use common::{exact_pair, exact_series, exact_unit, float_series, rational};
use dirichlet::arith::{
    series_from_json, series_to_json, Coeff, DynSeries, ExactSeries, QComplex, Series,
};
use dirichlet::primes::PrimeTable;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn table() -> PrimeTable {
    PrimeTable::sieve(4096).unwrap()
}

/// Inverse by forward substitution on the dense lower-triangular matrix
/// `M[n][m] = a_{n/m}` for `m | n`.
fn dense_inverse(f: &ExactSeries) -> Vec<QComplex> {
    let w = f.window() as usize;
    let a = |k: usize| f.get(k as u64).cloned().unwrap_or_else(QComplex::zero);
    let mut m = vec![vec![QComplex::zero(); w + 1]; w + 1];
    for n in 1..=w {
        for k in 1..=n {
            if n % k == 0 {
                m[n][k] = a(n / k);
            }
        }
    }
    let mut b = vec![QComplex::zero(); w + 1];
    for n in 1..=w {
        let mut rhs = if n == 1 {
            QComplex::one()
        } else {
            QComplex::zero()
        };
        for k in 1..n {
            rhs -= m[n][k].clone() * b[k].clone();
        }
        b[n] = rhs / m[n][n].clone();
    }
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_commutative_and_associative((f, g) in exact_pair(96, 12), h in exact_series(96, 12)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
    }

    #[test]
    fn distributive_and_unital((f, g) in exact_pair(96, 12), h in exact_series(96, 12)) {
        prop_assert_eq!(h.mul(&f.add(&g)), h.mul(&f).add(&h.mul(&g)));
        let one = ExactSeries::one(f.window()).unwrap();
        prop_assert_eq!(f.mul(&one), f.clone());
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn inverse_matches_dense_triangular_solve(f in exact_unit(64, 8)) {
        let inv = f.invert().unwrap();
        let dense = dense_inverse(&f);
        for n in 1..=f.window() {
            prop_assert_eq!(inv.coeff(n).unwrap(), dense[n as usize].clone(), "n = {}", n);
        }
        prop_assert_eq!(f.mul(&inv), ExactSeries::one(f.window()).unwrap());
    }

    #[test]
    fn non_units_are_rejected(f in exact_series(64, 8)) {
        let g = f.add(&ExactSeries::monomial(1, f.coeff(1).unwrap(), f.window()).unwrap().neg());
        prop_assert!(g.invert().is_err());
    }

    #[test]
    fn dilation_is_a_ring_endomorphism((f, g) in exact_pair(128, 10), n in -4i64..=4, d in 1i64..=3) {
        let t = table();
        let r = QComplex::new(rational(n, d), rational(1, 2));
        prop_assert_eq!(f.mul(&g).dilate(&r, &t).unwrap(), f.dilate(&r, &t).unwrap().mul(&g.dilate(&r, &t).unwrap()));
        prop_assert_eq!(f.add(&g).dilate(&r, &t).unwrap(), f.dilate(&r, &t).unwrap().add(&g.dilate(&r, &t).unwrap()));
        let s = QComplex::new(rational(d, 5), rational(0, 1));
        prop_assert_eq!(f.dilate(&r, &t).unwrap().dilate(&s, &t).unwrap(), f.dilate(&(r * s), &t).unwrap());
    }

    #[test]
    fn truncation_is_a_homomorphism((f, g) in exact_pair(128, 10), cut in 1u64..=128) {
        let cut = cut.min(f.window());
        prop_assert_eq!(f.mul(&g).truncate(cut).unwrap(), f.truncate(cut).unwrap().mul(&g.truncate(cut).unwrap()));
    }

    #[test]
    fn l1_is_submultiplicative(f in float_series(128, 10), g in float_series(128, 10)) {
        prop_assert!(f.mul(&g).l1_norm() <= f.l1_norm() * g.l1_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn float_image_is_a_homomorphism((f, g) in exact_pair(96, 10)) {
        let lhs = f.mul(&g).to_float();
        let rhs = f.to_float().mul(&g.to_float());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + f.l1_norm() * g.l1_norm()));
    }

    #[test]
    fn json_round_trip(f in exact_series(200, 12), g in float_series(200, 12)) {
        for s in [DynSeries::Exact(f.clone()), DynSeries::Float(g.clone())] {
            let doc = series_to_json(&s, None);
            prop_assert_eq!(series_from_json(&doc).unwrap(), s);
        }
    }
}

#[test]
fn zeta_squared_counts_divisors() {
    let z = ExactSeries::zeta(200).unwrap();
    let d = z.mul(&z);
    for n in 1..=200u64 {
        let tau = (1..=n).filter(|k| n % k == 0).count() as i64;
        assert_eq!(d.coeff(n).unwrap(), QComplex::from_i64(tau));
    }
}

#[test]
fn mixed_windows_use_the_smaller() {
    let f = ExactSeries::zeta(10).unwrap();
    let g = ExactSeries::zeta(30).unwrap();
    assert_eq!(f.mul(&g).window(), 10);
    assert_eq!(
        f.add(&g),
        Series::zeta(10).unwrap().scale(&QComplex::from_i64(2))
    );
}
