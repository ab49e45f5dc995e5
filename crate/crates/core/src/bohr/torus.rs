//! Supremum of `|p|` over the torus `r T^k`.
//!
//! The search is a deterministic phase grid, followed by coordinatewise
//! ascent from the best grid points and from seeded random restarts, and a
//! damped Newton polish in phase space. The reported value is always the
//! modulus at an actual torus point, so it is a lower bound for the true sup.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{PolydiscPoint, SparseMultiPoly};
use crate::arith::Coeff;
use crate::error::{Error, Result};

/// Tuning knobs for [`torus_sup`].
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSearch {
    /// Phases per variable in the initial grid.
    pub grid_per_var: usize,
    /// Shrink `grid_per_var` until the grid fits `budget` instead of failing.
    pub auto_grid: bool,
    /// Number of best grid points used as ascent starts.
    pub grid_starts: usize,
    /// Number of uniformly random starts.
    pub restarts: usize,
    /// Maximum coordinate sweeps per start.
    pub refine_steps: usize,
    /// Maximum Newton iterations on the final candidates.
    pub newton_steps: usize,
    pub seed: u64,
    /// Maximum number of grid evaluations.
    pub budget: u128,
    pub parallel: bool,
}

impl Default for TorusSearch {
    fn default() -> Self {
        TorusSearch {
            grid_per_var: 8,
            auto_grid: true,
            grid_starts: 8,
            restarts: 32,
            refine_steps: 200,
            newton_steps: 50,
            seed: 0x5eed,
            budget: 1 << 22,
            parallel: true,
        }
    }
}

impl TorusSearch {
    /// Grid size actually used for `k` variables, or `BudgetExceeded`.
    pub fn grid_for(&self, k: usize) -> Result<usize> {
        let size = |g: usize| (g as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        let mut g = self.grid_per_var.max(1);
        if size(g) <= self.budget {
            return Ok(g);
        }
        if !self.auto_grid {
            return Err(Error::BudgetExceeded {
                required: size(g),
                limit: self.budget,
            });
        }
        while g > 1 && size(g) > self.budget {
            g -= 1;
        }
        Ok(g)
    }
}

/// Result of a torus search.
#[derive(Clone, Debug)]
pub struct TorusSup {
    /// `|p(r e^{iθ})|` at the best point found.
    pub value: f64,
    /// Best value on the initial grid alone.
    pub grid_value: f64,
    /// Variables searched, increasing.
    pub vars: Vec<usize>,
    /// Phases `θ` of the argmax, aligned with `vars`.
    pub phases: Vec<f64>,
    /// The argmax as a point `r e^{iθ}`.
    pub point: PolydiscPoint,
    /// Heuristic flag: ascent converged and the polish changed the value by
    /// less than `1e-6` relative.
    pub converged: bool,
}

impl TorusSup {
    /// Phases keyed by variable index, usable as a warm start.
    pub fn phase_map(&self) -> BTreeMap<usize, f64> {
        self.vars
            .iter()
            .copied()
            .zip(self.phases.iter().copied())
            .collect()
    }
}

/// Estimates `sup_{w in T^k} |p(r w)|` for `0 < r <= 1`.
pub fn torus_sup<C: Coeff>(
    p: &SparseMultiPoly<C>,
    radius: f64,
    params: &TorusSearch,
) -> Result<TorusSup> {
    torus_sup_seeded(p, radius, params, &[])
}

/// [`torus_sup`] with extra starting phases (missing variables start at 0).
pub fn torus_sup_seeded<C: Coeff>(
    p: &SparseMultiPoly<C>,
    radius: f64,
    params: &TorusSearch,
    seeds: &[BTreeMap<usize, f64>],
) -> Result<TorusSup> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::invalid(format!(
            "radius must lie in (0, 1], got {radius}"
        )));
    }
    let compiled = Compiled::new(p, radius);
    let k = compiled.vars.len();
    if k == 0 {
        let v = compiled.eval(&[]).norm();
        return Ok(TorusSup {
            value: v,
            grid_value: v,
            vars: Vec::new(),
            phases: Vec::new(),
            point: PolydiscPoint::default(),
            converged: true,
        });
    }
    let g = params.grid_for(k)?;
    let grid_top = compiled.grid_search(g, params.grid_starts.max(1), params.parallel);
    let grid_value = grid_top[0].0;

    let mut starts: Vec<Vec<f64>> = grid_top
        .iter()
        .map(|&(_, idx)| compiled.grid_phases(idx, g))
        .collect();
    for seed in seeds {
        starts.push(
            compiled
                .vars
                .iter()
                .map(|v| seed.get(v).copied().unwrap_or(0.0).rem_euclid(TAU))
                .collect(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.restarts {
        starts.push((0..k).map(|_| rng.gen::<f64>() * TAU).collect());
    }

    let ascend = |theta: &Vec<f64>| {
        let mut th = theta.clone();
        let (v, conv) = compiled.coordinate_ascent(&mut th, params.refine_steps);
        (v, th, conv)
    };
    let ascended: Vec<(f64, Vec<f64>, bool)> = if params.parallel {
        starts.par_iter().map(ascend).collect()
    } else {
        starts.iter().map(ascend).collect()
    };

    // Polish the few best ascents; order is (value desc, start index asc).
    let mut order: Vec<usize> = (0..ascended.len()).collect();
    order.sort_by(|&a, &b| {
        ascended[b]
            .0
            .partial_cmp(&ascended[a].0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let ascent_best = ascended[order[0]].0;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_theta = Vec::new();
    let mut best_conv = false;
    for &i in order.iter().take(3) {
        let (v0, th0, conv) = &ascended[i];
        let mut th = th0.clone();
        let v = compiled.newton_polish(&mut th, *v0, params.newton_steps);
        if v > best_value {
            best_value = v;
            best_theta = th;
            best_conv = *conv;
        }
    }
    let rel_change = (best_value - ascent_best).abs() / best_value.max(f64::MIN_POSITIVE);
    let point = PolydiscPoint::new(
        compiled
            .vars
            .iter()
            .zip(&best_theta)
            .map(|(&v, &t)| (v, Complex64::from_polar(radius, t))),
    );
    Ok(TorusSup {
        value: best_value,
        grid_value,
        vars: compiled.vars.clone(),
        phases: best_theta.iter().map(|t| t.rem_euclid(TAU)).collect(),
        point,
        converged: best_conv && rel_change < 1e-6,
    })
}

/// Polynomial restricted to its used variables, coefficients pre-scaled by
/// `r^{|α|}` so that evaluation happens on the unit torus.
pub(crate) struct Compiled {
    pub(crate) vars: Vec<usize>,
    degs: Vec<usize>,
    terms: Vec<(Complex64, Vec<(usize, u32)>)>,
}

impl Compiled {
    pub(crate) fn new<C: Coeff>(p: &SparseMultiPoly<C>, radius: f64) -> Self {
        let vars = p.used_vars();
        let local: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut degs = vec![0usize; vars.len()];
        let terms = p
            .terms()
            .map(|(m, c)| {
                let exps: Vec<(usize, u32)> = m
                    .entries()
                    .iter()
                    .map(|&(v, e)| {
                        let j = local[&v];
                        degs[j] = degs[j].max(e as usize);
                        (j, e)
                    })
                    .collect();
                (c.to_c64() * radius.powi(m.degree() as i32), exps)
            })
            .collect();
        Compiled { vars, degs, terms }
    }

    fn powers(&self, theta: &[f64]) -> Vec<Vec<Complex64>> {
        theta
            .iter()
            .zip(&self.degs)
            .map(|(&t, &d)| {
                (0..=d)
                    .map(|e| Complex64::from_polar(1.0, e as f64 * t))
                    .collect()
            })
            .collect()
    }

    pub(crate) fn eval(&self, theta: &[f64]) -> Complex64 {
        let pw = self.powers(theta);
        self.terms
            .iter()
            .map(|(c, exps)| exps.iter().fold(*c, |acc, &(j, e)| acc * pw[j][e as usize]))
            .sum()
    }

    fn grid_phases(&self, idx: u128, g: usize) -> Vec<f64> {
        let k = self.vars.len();
        let mut digits = vec![0usize; k];
        let mut rest = idx;
        for j in (0..k).rev() {
            digits[j] = (rest % g as u128) as usize;
            rest /= g as u128;
        }
        digits.iter().map(|&d| TAU * d as f64 / g as f64).collect()
    }

    /// Evaluates the full `g^k` grid (row-major, first variable most
    /// significant) and returns the `top` best `(value, index)` pairs, ties
    /// broken by the smaller index.
    fn grid_search(&self, g: usize, top: usize, parallel: bool) -> Vec<(f64, u128)> {
        let k = self.vars.len();
        let total = (g as u128).pow(k as u32);
        let roots: Vec<Complex64> = (0..g)
            .map(|m| Complex64::from_polar(1.0, TAU * m as f64 / g as f64))
            .collect();
        const CHUNK: u128 = 4096;
        let chunks = total.div_ceil(CHUNK);
        let scan = |chunk: u128| -> Vec<(f64, u128)> {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut best: Vec<(f64, u128)> = Vec::with_capacity(top + 1);
            let mut digits = vec![0usize; k];
            for idx in lo..hi {
                let mut rest = idx;
                for j in (0..k).rev() {
                    digits[j] = (rest % g as u128) as usize;
                    rest /= g as u128;
                }
                let v: Complex64 = self
                    .terms
                    .iter()
                    .map(|(c, exps)| {
                        exps.iter()
                            .fold(*c, |acc, &(j, e)| acc * roots[(digits[j] * e as usize) % g])
                    })
                    .sum();
                push_top(&mut best, (v.norm(), idx), top);
            }
            best
        };
        let partial: Vec<Vec<(f64, u128)>> = if parallel {
            (0..chunks).into_par_iter().map(scan).collect()
        } else {
            (0..chunks).map(scan).collect()
        };
        let mut merged = Vec::with_capacity(top + 1);
        for part in partial {
            for item in part {
                push_top(&mut merged, item, top);
            }
        }
        merged
    }

    fn univariate(&self, theta: &[f64], j: usize) -> Vec<Complex64> {
        let pw = self.powers(theta);
        let mut u = vec![Complex64::new(0.0, 0.0); self.degs[j] + 1];
        for (c, exps) in &self.terms {
            let mut val = *c;
            let mut ej = 0;
            for &(l, e) in exps {
                if l == j {
                    ej = e as usize;
                } else {
                    val *= pw[l][e as usize];
                }
            }
            u[ej] += val;
        }
        u
    }

    /// Coordinatewise maximization; returns the final modulus and whether the
    /// sweeps converged before `max_sweeps`.
    pub(crate) fn coordinate_ascent(&self, theta: &mut [f64], max_sweeps: usize) -> (f64, bool) {
        let mut value = self.eval(theta).norm();
        for _ in 0..max_sweeps {
            let before = value;
            for j in 0..theta.len() {
                if self.degs[j] == 0 {
                    continue;
                }
                let u = self.univariate(theta, j);
                let (phi, v) = maximize_trig_poly(&u, theta[j]);
                if v > value {
                    theta[j] = phi;
                    value = v;
                }
            }
            if value - before <= 1e-15 * value.max(1e-300) {
                return (value, true);
            }
        }
        (value, false)
    }

    /// `F = |p|^2` with gradient and Hessian in phase space.
    fn derivatives(&self, theta: &[f64]) -> (Complex64, Vec<Complex64>, Vec<Vec<Complex64>>) {
        let k = theta.len();
        let pw = self.powers(theta);
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = vec![Complex64::new(0.0, 0.0); k];
        let mut ddp = vec![vec![Complex64::new(0.0, 0.0); k]; k];
        let i = Complex64::new(0.0, 1.0);
        for (c, exps) in &self.terms {
            let t = exps.iter().fold(*c, |acc, &(j, e)| acc * pw[j][e as usize]);
            p += t;
            for &(j, ej) in exps {
                dp[j] += i * ej as f64 * t;
                for &(l, el) in exps {
                    ddp[j][l] -= (ej as f64 * el as f64) * t;
                }
            }
        }
        (p, dp, ddp)
    }

    /// Damped Newton ascent on `|p|^2`; only improving steps are accepted.
    fn newton_polish(&self, theta: &mut [f64], start_value: f64, steps: usize) -> f64 {
        let k = theta.len();
        let mut value = start_value.max(self.eval(theta).norm());
        for _ in 0..steps {
            let (p, dp, ddp) = self.derivatives(theta);
            let grad: Vec<f64> = dp.iter().map(|d| 2.0 * (p.conj() * d).re).collect();
            let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm <= 1e-15 * value.max(1e-300) {
                break;
            }
            let mut hess = vec![vec![0.0; k]; k];
            let mut scale: f64 = 0.0;
            for a in 0..k {
                for b in 0..k {
                    hess[a][b] = 2.0 * (dp[b].conj() * dp[a] + p.conj() * ddp[a][b]).re;
                    scale = scale.max(hess[a][b].abs());
                }
            }
            let mut improved = false;
            let mut lambda = 0.0;
            for _ in 0..30 {
                // Solve (lambda I - H) delta = grad.
                let mut m = vec![vec![0.0; k]; k];
                for a in 0..k {
                    for b in 0..k {
                        m[a][b] = -hess[a][b];
                    }
                    m[a][a] += lambda;
                }
                if let Some(delta) = cholesky_solve(&m, &grad) {
                    let trial: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + d).collect();
                    let v = self.eval(&trial).norm();
                    if v > value {
                        theta.copy_from_slice(&trial);
                        value = v;
                        improved = true;
                        break;
                    }
                }
                lambda = if lambda == 0.0 {
                    1e-9 * scale.max(1e-300)
                } else {
                    lambda * 10.0
                };
            }
            if !improved {
                break;
            }
        }
        value
    }
}

fn push_top(best: &mut Vec<(f64, u128)>, item: (f64, u128), top: usize) {
    let pos = best
        .iter()
        .position(|&(v, i)| item.0 > v || (item.0 == v && item.1 < i))
        .unwrap_or(best.len());
    if pos < top {
        best.insert(pos, item);
        best.truncate(top);
    }
}

/// Maximizes `|sum_e u_e e^{i e φ}|` by a scan anchored at `start` and a
/// golden-section refinement around the best scan point.
pub(crate) fn maximize_trig_poly(u: &[Complex64], start: f64) -> (f64, f64) {
    let eval = |phi: f64| -> f64 {
        let z = Complex64::from_polar(1.0, phi);
        u.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
            .norm()
    };
    let deg = u.len().saturating_sub(1);
    let samples = (16 * deg).max(32);
    let h = TAU / samples as f64;
    let (mut best_phi, mut best_v) = (start, eval(start));
    for m in 1..samples {
        let phi = start + h * m as f64;
        let v = eval(phi);
        if v > best_v {
            best_v = v;
            best_phi = phi;
        }
    }
    let (phi, v) = golden_max(eval, best_phi - h, best_phi + h, 1e-13);
    if v > best_v {
        (phi, v)
    } else {
        (best_phi, best_v)
    }
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
/// The tolerance is floored at a few ulps of the endpoints, so the loop ends
/// even when `tol` is below the float spacing.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let tol = tol.max(8.0 * f64::EPSILON * a.abs().max(b.abs()));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Solves `M x = rhs` for symmetric positive definite `M`; `None` otherwise.
fn cholesky_solve(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let chol = DMatrix::from_fn(n, n, |i, j| m[i][j]).cholesky()?;
    let x = chol.solve(&DVector::from_column_slice(rhs));
    x.iter()
        .all(|v| v.is_finite())
        .then(|| x.iter().copied().collect())
}
