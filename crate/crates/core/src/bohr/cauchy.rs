//! Coefficient recovery by averaging over a uniform torus grid.
//!
//! For a polynomial of degree `< Q` in each averaged variable,
//! `mean_{ζ in μ_Q^k} p(r ζ) ζ^{-α} = a_α r^{|α|}` by orthogonality of
//! characters, so the recovery is exact up to rounding.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{bohr_lift, Monomial, PolydiscPoint, SparseMultiPoly};
use crate::arith::{Coeff, Series};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Grid points per averaged variable.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSize {
    Uniform(usize),
    /// Missing variables fall back to the largest listed size.
    PerVariable(BTreeMap<usize, usize>),
}

impl GridSize {
    fn get(&self, var: usize) -> usize {
        match self {
            GridSize::Uniform(q) => *q,
            GridSize::PerVariable(m) => m
                .get(&var)
                .copied()
                .unwrap_or_else(|| m.values().copied().max().unwrap_or(1)),
        }
    }
}

/// Radius per averaged variable, each in `(0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Radii {
    Uniform(f64),
    /// Missing variables fall back to the smallest listed radius.
    PerVariable(BTreeMap<usize, f64>),
}

impl Radii {
    fn get(&self, var: usize) -> f64 {
        match self {
            Radii::Uniform(r) => *r,
            Radii::PerVariable(m) => m
                .get(&var)
                .copied()
                .unwrap_or_else(|| m.values().copied().fold(1.0, f64::min)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchyParams {
    pub grid: GridSize,
    pub radii: Radii,
    /// Maximum number of grid evaluations.
    pub budget: u128,
    pub parallel: bool,
}

impl CauchyParams {
    pub fn uniform(q: usize, r: f64) -> Self {
        CauchyParams {
            grid: GridSize::Uniform(q),
            radii: Radii::Uniform(r),
            ..Self::default()
        }
    }
}

impl Default for CauchyParams {
    fn default() -> Self {
        CauchyParams {
            grid: GridSize::Uniform(8),
            radii: Radii::Uniform(0.5),
            budget: 1 << 24,
            parallel: true,
        }
    }
}

/// Recovers the coefficient of `x^{α(n)}` from values of `p` on a torus grid.
///
/// Only the used variables whose prime is at most `n` are averaged; the
/// others are set to zero, which removes exactly the monomials that cannot
/// equal `x^{α(n)}`. Fails if a grid size does not exceed the polynomial's
/// degree in that variable.
pub fn cauchy_coefficient<C: Coeff>(
    p: &SparseMultiPoly<C>,
    n: u64,
    params: &CauchyParams,
    table: &PrimeTable,
) -> Result<Complex64> {
    let alpha: Monomial = table.factor_smooth(n)?.into();
    let degrees = p.max_degrees();
    let mut vars: Vec<usize> = alpha.vars().collect();
    for &v in degrees.keys() {
        if table.prime(v)? <= n {
            vars.push(v);
        }
    }
    vars.sort_unstable();
    vars.dedup();
    for &v in &vars {
        let d = degrees.get(&v).copied().unwrap_or(0) as usize;
        let q = params.grid.get(v);
        if q <= d {
            return Err(Error::invalid(format!(
                "grid size {q} for x{v} does not exceed its degree {d}"
            )));
        }
    }
    let keep: Vec<usize> = vars.clone();
    let restricted = p
        .restrict_vars(|v| keep.binary_search(&v).is_ok())
        .to_float();
    average(|z| restricted.eval_unchecked(z), &vars, &alpha, params)
}

/// [`cauchy_coefficient`] for a series, through its Bohr lift.
pub fn cauchy_series_coefficient<C: Coeff>(
    f: &Series<C>,
    n: u64,
    params: &CauchyParams,
    table: &PrimeTable,
) -> Result<Complex64> {
    cauchy_coefficient(&bohr_lift(f, table)?, n, params, table)
}

/// Recovery from a black-box evaluator, averaging all variables
/// `x_1 .. x_{π(n)}`. The caller guarantees that the grid sizes exceed the
/// degrees of the underlying polynomial.
pub fn cauchy_coefficient_with(
    eval: impl Fn(&PolydiscPoint) -> Complex64 + Sync,
    n: u64,
    params: &CauchyParams,
    table: &PrimeTable,
) -> Result<Complex64> {
    let alpha: Monomial = table.factor(n)?.into();
    let vars: Vec<usize> = (1..=table.pi(n)?).collect();
    average(eval, &vars, &alpha, params)
}

fn average(
    eval: impl Fn(&PolydiscPoint) -> Complex64 + Sync,
    vars: &[usize],
    alpha: &Monomial,
    params: &CauchyParams,
) -> Result<Complex64> {
    let qs: Vec<usize> = vars.iter().map(|&v| params.grid.get(v).max(1)).collect();
    let radii: Vec<f64> = vars.iter().map(|&v| params.radii.get(v)).collect();
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::invalid(format!(
            "radius must lie in (0, 1], got {r}"
        )));
    }
    let total = qs
        .iter()
        .try_fold(1u128, |acc, &q| acc.checked_mul(q as u128))
        .unwrap_or(u128::MAX);
    if total > params.budget {
        return Err(Error::BudgetExceeded {
            required: total,
            limit: params.budget,
        });
    }
    let exps: Vec<u32> = vars.iter().map(|&v| alpha.exponent(v)).collect();
    let point_sum = |idx: u128| -> Complex64 {
        let mut rest = idx;
        let mut coords = Vec::with_capacity(vars.len());
        let mut twist = Complex64::new(1.0, 0.0);
        for j in (0..vars.len()).rev() {
            let m = (rest % qs[j] as u128) as usize;
            rest /= qs[j] as u128;
            let phase = TAU * m as f64 / qs[j] as f64;
            coords.push((vars[j], Complex64::from_polar(radii[j], phase)));
            let k = (m * exps[j] as usize) % qs[j];
            twist *= Complex64::from_polar(1.0, -TAU * k as f64 / qs[j] as f64);
        }
        eval(&PolydiscPoint::new(coords)) * twist
    };
    const CHUNK: u128 = 1024;
    let chunks = total.div_ceil(CHUNK);
    let chunk_sum = |c: u128| -> Complex64 {
        (c * CHUNK..((c + 1) * CHUNK).min(total))
            .map(point_sum)
            .sum()
    };
    let partial: Vec<Complex64> = if params.parallel {
        (0..chunks).into_par_iter().map(chunk_sum).collect()
    } else {
        (0..chunks).map(chunk_sum).collect()
    };
    let mean = partial.into_iter().sum::<Complex64>() / total as f64;
    let scale: f64 = exps
        .iter()
        .zip(&radii)
        .map(|(&e, &r)| r.powi(e as i32))
        .product();
    Ok(mean / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ExactSeries, FloatSeries};

    fn table() -> PrimeTable {
        PrimeTable::sieve(1000).unwrap()
    }

    #[test]
    fn single_term_recovery() {
        let t = table();
        let f = ExactSeries::from_ints(12, [(12, 7)]).unwrap();
        let a = cauchy_series_coefficient(&f, 12, &CauchyParams::uniform(4, 0.5), &t).unwrap();
        assert!((a - Complex64::new(7.0, 0.0)).norm() < 1e-10 * 7.0);
    }

    #[test]
    fn constant_term() {
        let t = table();
        let one = ExactSeries::one(10).unwrap();
        let a = cauchy_series_coefficient(&one, 1, &CauchyParams::uniform(2, 0.5), &t).unwrap();
        assert_eq!(a, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mixed_series_and_evaluator_agree() {
        let t = table();
        let f = FloatSeries::from_coeffs(
            30,
            [
                (1, Complex64::new(1.0, 0.5)),
                (2, Complex64::new(-2.0, 0.0)),
                (6, Complex64::new(0.25, -1.0)),
                (12, Complex64::new(3.0, 0.0)),
                (30, Complex64::new(0.0, 2.0)),
            ],
        )
        .unwrap();
        let p = bohr_lift(&f, &t).unwrap();
        let params = CauchyParams::uniform(3, 0.8);
        for (n, c) in f.iter() {
            let a = cauchy_coefficient(&p, n, &params, &t).unwrap();
            assert!((a - c).norm() < 1e-10 * c.norm(), "n = {n}");
            let b = cauchy_coefficient_with(|z| p.eval_unchecked(z), n, &params, &t).unwrap();
            assert!((b - c).norm() < 1e-10 * c.norm(), "n = {n}");
        }
        let absent = cauchy_coefficient(&p, 4, &params, &t).unwrap();
        assert!(absent.norm() < 1e-12);
    }

    #[test]
    fn per_variable_parameters() {
        let t = table();
        let f = ExactSeries::from_ints(48, [(16, 2), (48, -5), (3, 1)]).unwrap();
        let p = bohr_lift(&f, &t).unwrap();
        let params = CauchyParams {
            grid: GridSize::PerVariable([(1, 5), (2, 2)].into()),
            radii: Radii::PerVariable([(1, 0.9), (2, 0.3)].into()),
            ..CauchyParams::default()
        };
        let a = cauchy_coefficient(&p, 48, &params, &t).unwrap();
        assert!((a - Complex64::new(-5.0, 0.0)).norm() < 1e-10 * 5.0);
    }

    #[test]
    fn small_grid_is_rejected() {
        let t = table();
        let f = ExactSeries::from_ints(16, [(16, 1)]).unwrap();
        let p = bohr_lift(&f, &t).unwrap();
        assert!(cauchy_coefficient(&p, 16, &CauchyParams::uniform(4, 0.5), &t).is_err());
        let budget = CauchyParams {
            budget: 4,
            ..CauchyParams::uniform(5, 0.5)
        };
        assert!(matches!(
            cauchy_coefficient(&p, 16, &budget, &t),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
