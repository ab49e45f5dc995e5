//! Coefficient recovery from values on a vertical line.
//!
//! `(1/2R) ∫_{-R}^{R} f(κ+it) n^{κ+it} dt = sum_m a_m (n/m)^κ sinc(R log(n/m))`,
//! so the `m = n` term returns `a_n` and every other term decays like
//! `1/(R |log(n/m)|)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::partial_sum;
use crate::arith::{Coeff, Series};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronReport {
    pub n: u64,
    pub kappa: f64,
    #[serde(rename = "R")]
    pub r_half: f64,
    pub steps: usize,
    pub value: Complex64,
}

/// Composite trapezoid rule with `steps` intervals for
/// `(1/2R) ∫_{-R}^{R} f(κ+it) n^{κ+it} dt`.
// Negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn perron_recover(
    eval: impl Fn(Complex64) -> Complex64 + Sync,
    n: u64,
    kappa: f64,
    r_half: f64,
    steps: usize,
) -> Result<PerronReport> {
    if !(kappa > 0.0) || !(r_half > 0.0) || steps == 0 || n == 0 {
        return Err(Error::invalid(
            "Perron recovery needs kappa > 0, R > 0, steps >= 1, n >= 1",
        ));
    }
    let ln_n = (n as f64).ln();
    let h = 2.0 * r_half / steps as f64;
    let integrand = |k: usize| -> Complex64 {
        let t = if k == steps {
            r_half
        } else {
            -r_half + h * k as f64
        };
        let s = Complex64::new(kappa, t);
        let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
        eval(s) * (s * ln_n).exp() * w
    };
    const CHUNK: usize = 4096;
    let partial: Vec<Complex64> = (0..(steps + 1).div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(steps + 1))
                .map(integrand)
                .sum()
        })
        .collect();
    let total: Complex64 = partial.into_iter().sum();
    let value = total * h / (2.0 * r_half);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NumericFailure(format!(
            "Perron integrand is not finite (n = {n}, kappa = {kappa}, R = {r_half})"
        )));
    }
    Ok(PerronReport {
        n,
        kappa,
        r_half,
        steps,
        value,
    })
}

/// [`perron_recover`] with `f` evaluated as its partial sum.
pub fn perron_recover_series<C: Coeff>(
    f: &Series<C>,
    n: u64,
    kappa: f64,
    r_half: f64,
    steps: usize,
) -> Result<PerronReport> {
    perron_recover(|s| partial_sum(f, s), n, kappa, r_half, steps)
}

/// Trapezoid rule applied to `(1/2R) ∫ e^{iωt} dt`, in closed form.
fn trapezoid_exp(omega: f64, r_half: f64, steps: usize) -> Complex64 {
    let h = 2.0 * r_half / steps as f64;
    let z = Complex64::from_polar(1.0, omega * h);
    let start = Complex64::from_polar(1.0, -omega * r_half);
    let end = Complex64::from_polar(1.0, omega * r_half);
    let geometric = if (z - 1.0).norm() < 1e-12 {
        Complex64::new((steps + 1) as f64, 0.0)
    } else {
        (z.powu(steps as u32 + 1) - 1.0) / (z - 1.0)
    };
    (start * geometric - (start + end) * 0.5) * h / (2.0 * r_half)
}

/// Upper bound for `|perron_recover_series(f, n, ..) - a_n|`:
/// `sum_{m != n} |a_m| (n/m)^κ (min(1, 1/(R|log(n/m)|)) + |T_h(ω) - sinc(Rω)|)`
/// with `ω = log(n/m)` and `T_h` the trapezoid rule, plus a rounding allowance.
pub fn perron_error_bound<C: Coeff>(
    f: &Series<C>,
    n: u64,
    kappa: f64,
    r_half: f64,
    steps: usize,
) -> f64 {
    let ln_n = (n as f64).ln();
    let mut bound = 0.0;
    let mut mass = 0.0;
    for (m, c) in f.iter() {
        let weight = c.modulus() * ((ln_n - (m as f64).ln()) * kappa).exp();
        mass += weight;
        if m == n {
            continue;
        }
        let omega = ln_n - (m as f64).ln();
        let sinc_bound = (1.0 / (r_half * omega.abs())).min(1.0);
        let exact = (r_half * omega).sin() / (r_half * omega);
        let quadrature = (trapezoid_exp(omega, r_half, steps) - exact).norm();
        bound += weight * (sinc_bound + quadrature);
    }
    bound + 1e-10 * (1.0 + mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactSeries;

    #[test]
    fn single_term_fixture() {
        let f = ExactSeries::from_ints(5, [(5, 3)]).unwrap();
        let at5 = perron_recover_series(&f, 5, 2.0, 2000.0, 200_000).unwrap();
        assert!((at5.value - 3.0).norm() < 1e-3);
        let at2 = perron_recover_series(&f, 2, 2.0, 2000.0, 200_000).unwrap();
        let bound = perron_error_bound(&f, 2, 2.0, 2000.0, 200_000);
        assert!(at2.value.norm() <= bound);
        assert!(bound < 1e-3);
    }

    #[test]
    fn constant_integrand() {
        let one = ExactSeries::one(3).unwrap();
        for (kappa, r) in [(0.5, 10.0), (3.0, 777.0)] {
            let v = perron_recover_series(&one, 1, kappa, r, 1000).unwrap();
            assert!((v.value - 1.0).norm() < 1e-8);
        }
    }

    #[test]
    fn trapezoid_closed_form_matches_direct_sum() {
        let (omega, r, steps) = (0.7, 50.0, 333);
        let h = 2.0 * r / steps as f64;
        let direct: Complex64 = (0..=steps)
            .map(|k| {
                let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
                Complex64::from_polar(w, omega * (-r + h * k as f64))
            })
            .sum::<Complex64>()
            * h
            / (2.0 * r);
        assert!((direct - trapezoid_exp(omega, r, steps)).norm() < 1e-12);
    }

    #[test]
    fn non_finite_values_fail() {
        let r = perron_recover(|_| Complex64::new(f64::NAN, 0.0), 1, 1.0, 1.0, 10);
        assert!(matches!(r, Err(Error::NumericFailure(_))));
    }
}
