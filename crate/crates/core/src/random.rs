//! Seeded generators for series, permutations and invariant data.
//!
//! All generators take an explicit RNG; [`rng`] builds the ChaCha8 stream
//! used throughout so that a seed reproduces the same objects everywhere.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{ExactSeries, FloatSeries, QComplex, Series};
use crate::error::Result;
use crate::group::FiniteSupportPermutation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random exact coefficients: `p/q` with `0 < |p| <= max_num` and
/// `1 <= q <= max_den`; imaginary parts only when `complex` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCoeffs {
    pub max_num: i64,
    pub max_den: i64,
    pub complex: bool,
}

impl Default for ExactCoeffs {
    fn default() -> Self {
        ExactCoeffs {
            max_num: 5,
            max_den: 3,
            complex: false,
        }
    }
}

fn random_rational(rng: &mut impl Rng, shape: &ExactCoeffs) -> BigRational {
    let mut p = rng.gen_range(1..=shape.max_num);
    if rng.gen_bool(0.5) {
        p = -p;
    }
    let q = rng.gen_range(1..=shape.max_den);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn random_exact_coeff(rng: &mut impl Rng, shape: &ExactCoeffs) -> QComplex {
    let re = random_rational(rng, shape);
    let im = if shape.complex && rng.gen_bool(0.5) {
        random_rational(rng, shape)
    } else {
        BigRational::zero()
    };
    QComplex::new(re, im)
}

/// Each index in `[1, window]` is in the support with probability `density`.
pub fn random_exact_series(
    rng: &mut impl Rng,
    window: u64,
    density: f64,
    shape: &ExactCoeffs,
) -> Result<ExactSeries> {
    let mut pairs: Vec<(u64, QComplex)> = Vec::new();
    for n in 1..=window {
        if rng.gen_bool(density) {
            pairs.push((n, random_exact_coeff(rng, shape)));
        }
    }
    Series::from_coeffs(window, pairs)
}

/// Like [`random_exact_series`] but with `a_1 != 0`, hence invertible.
pub fn random_exact_unit(
    rng: &mut impl Rng,
    window: u64,
    density: f64,
    shape: &ExactCoeffs,
) -> Result<ExactSeries> {
    let mut pairs: Vec<(u64, QComplex)> = vec![(1, random_exact_coeff(rng, shape))];
    for n in 2..=window {
        if rng.gen_bool(density) {
            pairs.push((n, random_exact_coeff(rng, shape)));
        }
    }
    Series::from_coeffs(window, pairs)
}

/// Exact series with the given support.
pub fn random_exact_on(
    rng: &mut impl Rng,
    support: &[u64],
    window: u64,
    shape: &ExactCoeffs,
) -> Result<ExactSeries> {
    Series::from_coeffs(
        window,
        support.iter().map(|&n| (n, random_exact_coeff(rng, shape))),
    )
}

/// Float series with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_float_series(rng: &mut impl Rng, window: u64, density: f64) -> Result<FloatSeries> {
    let mut pairs: Vec<(u64, Complex64)> = Vec::new();
    for n in 1..=window {
        if rng.gen_bool(density) {
            pairs.push((
                n,
                Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
            ));
        }
    }
    Series::from_coeffs(window, pairs)
}

/// Float series with at least one term.
pub fn random_float_series_nonzero(
    rng: &mut impl Rng,
    window: u64,
    density: f64,
) -> Result<FloatSeries> {
    loop {
        let f = random_float_series(rng, window, density)?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

/// A uniformly random permutation of `moved` distinct indices drawn from
/// `[1, max_index]` (possibly with fixed points among them).
pub fn random_permutation(
    rng: &mut impl Rng,
    max_index: usize,
    moved: usize,
) -> FiniteSupportPermutation {
    let mut pool: Vec<usize> = (1..=max_index).collect();
    pool.shuffle(rng);
    let chosen = &pool[..moved.min(max_index)];
    let mut image = chosen.to_vec();
    image.shuffle(rng);
    FiniteSupportPermutation::from_map(chosen.iter().copied().zip(image))
        .expect("shuffle is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let shape = ExactCoeffs::default();
        let a = random_exact_series(&mut rng(7), 64, 0.2, &shape).unwrap();
        let b = random_exact_series(&mut rng(7), 64, 0.2, &shape).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = random_exact_series(&mut rng(8), 64, 0.2, &shape).unwrap();
        assert_ne!(format!("{a:?}"), format!("{c:?}"));
    }

    #[test]
    fn units_are_invertible() {
        let u = random_exact_unit(&mut rng(1), 32, 0.3, &ExactCoeffs::default()).unwrap();
        assert!(u.get(1).is_some());
        assert!(u.invert().is_ok());
    }

    #[test]
    fn permutations_are_bijections() {
        let mut r = rng(3);
        for _ in 0..50 {
            let p = random_permutation(&mut r, 8, 5);
            assert!(p.max_moved() <= 8);
            assert!(p.compose(&p.inverse()).is_identity());
        }
    }
}
