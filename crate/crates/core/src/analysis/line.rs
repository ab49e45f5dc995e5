//! Sup of `|f(σ + it)|` over a bounded window of a vertical line.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Coeff, Series};
use crate::bohr::torus::golden_max;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSupReport {
    pub sigma: f64,
    #[serde(rename = "T")]
    pub t_max: f64,
    pub samples: usize,
    pub sup_estimate: f64,
    pub argmax_t: f64,
    /// Best value on the uniform grid before refinement.
    pub grid_sup: f64,
}

/// Samples `|f(σ + it)|` at `samples` equispaced `t in [-T, T]`, then refines
/// the `refine` largest local grid maxima by golden-section search in the
/// neighbouring grid cells.
// Negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn line_sup<C: Coeff>(
    f: &Series<C>,
    sigma: f64,
    t_max: f64,
    samples: usize,
    refine: usize,
) -> Result<LineSupReport> {
    if samples < 2 {
        return Err(Error::invalid("line_sup needs at least 2 samples"));
    }
    if !(t_max >= 0.0) || !sigma.is_finite() {
        return Err(Error::invalid("line_sup needs finite sigma and T >= 0"));
    }
    // Damped coefficients and frequencies, so each sample is sum c_n e^{-i t log n}.
    let terms: Vec<(Complex64, f64)> = f
        .iter()
        .map(|(n, c)| {
            let ln = (n as f64).ln();
            (c.to_c64() * (-sigma * ln).exp(), ln)
        })
        .collect();
    let eval = |t: f64| -> f64 {
        terms
            .iter()
            .map(|&(c, ln)| c * Complex64::from_polar(1.0, -t * ln))
            .sum::<Complex64>()
            .norm()
    };
    let h = 2.0 * t_max / (samples - 1) as f64;
    let at = |k: usize| {
        if k + 1 == samples {
            t_max
        } else {
            -t_max + h * k as f64
        }
    };
    const CHUNK: usize = 8192;
    let values: Vec<f64> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(samples))
                .map(|k| eval(at(k)))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut best_k = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[best_k] {
            best_k = k;
        }
    }
    let grid_sup = values[best_k];
    let (mut best_t, mut best_v) = (at(best_k), grid_sup);
    if refine > 0 && h > 0.0 {
        let mut peaks: Vec<usize> = (0..samples)
            .filter(|&k| {
                (k == 0 || values[k] >= values[k - 1])
                    && (k + 1 == samples || values[k] >= values[k + 1])
            })
            .collect();
        peaks.sort_by(|&a, &b| {
            values[b]
                .partial_cmp(&values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        peaks.truncate(refine);
        let refined: Vec<(f64, f64)> = peaks
            .par_iter()
            .map(|&k| {
                let lo = (at(k) - h).max(-t_max);
                let hi = (at(k) + h).min(t_max);
                golden_max(eval, lo, hi, 1e-12 * (1.0 + t_max))
            })
            .collect();
        for (t, v) in refined {
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
    }
    Ok(LineSupReport {
        sigma,
        t_max,
        samples,
        sup_estimate: best_v,
        argmax_t: best_t,
        grid_sup,
    })
}
