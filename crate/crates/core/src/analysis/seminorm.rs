//! Seminorms `P_r`, their log-convexity, the uniform-convergence surrogate
//! and the coefficient bound `|a_n| r^{Ω(n)} <= sup`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::line::line_sup;
use crate::arith::{Coeff, Series};
use crate::bohr::{bohr_lift, torus_sup, torus_sup_seeded, TorusSearch};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Default absolute tolerance for convexity defects and first differences.
pub const DEFAULT_CONVEXITY_TOL: f64 = 1e-6;

/// How `sup_t |sum_{n <= N'} a_n n^{-it}|` is estimated.
#[derive(Clone, Debug, PartialEq)]
pub enum SupMethod {
    /// Torus sup of the lift at radius 1 (equal to the line sup).
    Torus(TorusSearch),
    /// Direct sampling of the line `σ = 0` on `[-T, T]`.
    Line {
        t_max: f64,
        samples: usize,
        refine: usize,
    },
}

impl SupMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            SupMethod::Torus(_) => "torus",
            SupMethod::Line { .. } => "line",
        }
    }

    fn sup<C: Coeff>(&self, f: &Series<C>, table: &PrimeTable) -> Result<f64> {
        match self {
            SupMethod::Torus(params) => Ok(torus_sup(&bohr_lift(f, table)?, 1.0, params)?.value),
            SupMethod::Line {
                t_max,
                samples,
                refine,
            } => Ok(line_sup(f, 0.0, *t_max, *samples, *refine)?.sup_estimate),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaUEstimate {
    /// `max(unclamped, 0)`.
    pub value: f64,
    /// Largest ratio found; `-inf` when every partial sum vanishes.
    pub unclamped: f64,
    /// `(N', log sup / log N')` at the maximizing `N'` of each block of
    /// constant partial sums.
    pub per_n: Vec<(u64, f64)>,
    pub method: &'static str,
}

/// `max_{2 <= N' <= N} log(sup_t |sum_{n <= N'} a_n n^{-it}|) / log N'`,
/// clamped below at 0.
///
/// The partial sum only changes at support points, so the sup is computed
/// once per block `[s_k, s_{k+1})`; within a block the ratio is maximal at
/// the left end when the log is nonnegative and at the right end otherwise.
pub fn sigma_u_plus_estimate<C: Coeff>(
    f: &Series<C>,
    table: &PrimeTable,
    method: &SupMethod,
) -> Result<SigmaUEstimate> {
    if f.window() < 2 {
        return Err(Error::invalid("the surrogate needs window >= 2"));
    }
    let support: Vec<u64> = f.support().collect();
    let mut per_n = Vec::new();
    let mut unclamped = f64::NEG_INFINITY;
    for (k, &s) in support.iter().enumerate() {
        let start = s.max(2);
        let end = support.get(k + 1).map_or(f.window(), |&next| next - 1);
        if start > end {
            continue;
        }
        let sup = method.sup(&f.truncate(s)?, table)?;
        if sup <= 0.0 {
            continue;
        }
        let l = sup.ln();
        let at = if l >= 0.0 { start } else { end };
        let ratio = l / (at as f64).ln();
        per_n.push((at, ratio));
        unclamped = unclamped.max(ratio);
    }
    Ok(SigmaUEstimate {
        value: unclamped.max(0.0),
        unclamped,
        per_n,
        method: method.tag(),
    })
}

/// `P_r(f)` as the torus sup of the lift at radius `r`.
pub fn seminorm_pr<C: Coeff>(
    f: &Series<C>,
    r: f64,
    table: &PrimeTable,
    params: &TorusSearch,
) -> Result<f64> {
    Ok(torus_sup(&bohr_lift(f, table)?, r, params)?.value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormProfile {
    pub r_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub method: &'static str,
}

/// `P_r` on an increasing grid in `(0, 1]`.
///
/// A forward sweep warm-starts each radius from the previous argmax, a
/// backward sweep from the next one, and the larger estimate is kept. The
/// argmax moves continuously with `r`, so this keeps neighbouring estimates
/// on the same branch.
pub fn seminorm_profile<C: Coeff>(
    f: &Series<C>,
    r_grid: &[f64],
    table: &PrimeTable,
    params: &TorusSearch,
) -> Result<SeminormProfile> {
    if r_grid.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(Error::invalid("radii must lie in (0, 1]"));
    }
    if r_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("radius grid must be strictly increasing"));
    }
    let p = bohr_lift(f, table)?;
    let mut values = vec![0.0; r_grid.len()];
    let mut seeds: Vec<BTreeMap<usize, f64>> = Vec::new();
    for (i, &r) in r_grid.iter().enumerate() {
        let s = torus_sup_seeded(&p, r, params, &seeds)?;
        values[i] = s.value;
        seeds = vec![s.phase_map()];
    }
    for (i, &r) in r_grid.iter().enumerate().rev() {
        let s = torus_sup_seeded(&p, r, params, &seeds)?;
        values[i] = values[i].max(s.value);
        seeds = vec![s.phase_map()];
    }
    Ok(SeminormProfile {
        r_grid: r_grid.to_vec(),
        values,
        method: "torus",
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    /// Chord minus value of `log P` at each interior point, against `log r`.
    pub defects: Vec<f64>,
    /// First differences of `log P`.
    pub differences: Vec<f64>,
    pub min_defect: f64,
    pub min_difference: f64,
    pub tolerance: f64,
    /// All values agree within the tolerance.
    pub constant: bool,
    pub pass: bool,
}

/// Checks that `t -> log P_{e^t}` is nondecreasing and convex on the grid.
// Negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn convexity_check(profile: &SeminormProfile, tol: f64) -> Result<ConvexityReport> {
    let n = profile.r_grid.len();
    if n < 3 || profile.values.len() != n {
        return Err(Error::invalid(
            "convexity check needs at least 3 aligned grid points",
        ));
    }
    if profile.values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("convexity check needs positive values"));
    }
    let x: Vec<f64> = profile.r_grid.iter().map(|r| r.ln()).collect();
    let y: Vec<f64> = profile.values.iter().map(|v| v.ln()).collect();
    let defects: Vec<f64> = (1..n - 1)
        .map(|i| {
            let lambda = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
            y[i - 1] + lambda * (y[i + 1] - y[i - 1]) - y[i]
        })
        .collect();
    let differences: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let min_defect = defects.iter().copied().fold(f64::INFINITY, f64::min);
    let min_difference = differences.iter().copied().fold(f64::INFINITY, f64::min);
    let (lo, hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    Ok(ConvexityReport {
        pass: min_defect >= -tol && min_difference >= -tol,
        constant: hi - lo <= tol,
        defects,
        differences,
        min_defect,
        min_difference,
        tolerance: tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientBound {
    pub n: u64,
    pub r: f64,
    /// `|a_n| r^{Ω(n)}`.
    pub lhs: f64,
    /// Sup over `r T^{π(n)}` of the lift with later variables set to 0.
    pub rhs: f64,
    pub margin: f64,
}

/// Both sides of `|a_n| r^{Ω(n)} <= sup_{|z_i| <= r, i <= π(n)} |f(z, 0, ...)|`.
pub fn coefficient_bound<C: Coeff>(
    f: &Series<C>,
    n: u64,
    r: f64,
    table: &PrimeTable,
    params: &TorusSearch,
) -> Result<CoefficientBound> {
    let a = f.get(n).map_or(0.0, Coeff::modulus);
    let omega = table.factor_smooth(n)?.omega();
    let lhs = a * r.powi(omega as i32);
    let p = bohr_lift(f, table)?.restrict_vars(|v| table.prime(v).is_ok_and(|q| q <= n));
    let rhs = torus_sup(&p, r, params)?.value;
    Ok(CoefficientBound {
        n,
        r,
        lhs,
        rhs,
        margin: rhs - lhs,
    })
}
