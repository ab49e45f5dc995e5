//! Numerical suites: the Bohr correspondence, dilation, seminorm profiles and
//! coefficient recovery. Checks compare floating estimates with tolerances.

use std::collections::BTreeMap;

use dirichlet::analysis::{
    coefficient_bound, convexity_check, line_sup, perron_error_bound, perron_recover_series,
    seminorm_profile, sigma_u_plus_estimate, SupMethod, DEFAULT_CONVEXITY_TOL,
};
use dirichlet::arith::{Coeff, ExactSeries, FloatSeries, QComplex};
use dirichlet::bohr::{
    bohr_drop, bohr_drop_with_window, bohr_lift, cauchy_coefficient, torus_sup, torus_sup_seeded,
    CauchyParams, GridSize, Radii, TorusSearch,
};
use dirichlet::random::{
    random_exact_coeff, random_exact_series, random_float_series_nonzero, ExactCoeffs,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::codec::{
    complex_rational, exact, float, get, get_complex_rational, get_exact, get_float, get_var_map,
};
use super::{Ctx, Outcome, Property, Suite};
use crate::error::CliResult;

/// Slack for comparisons between two independent float estimates.
const SLACK: f64 = 1e-9;
/// Line sampling used for the line-versus-torus comparison.
const LINE_T: f64 = 1e4;
const LINE_SAMPLES: usize = 200_000;
const LINE_REFINE: usize = 64;
/// Largest relative gap accepted between the line and torus suprema.
const LINE_GAP: f64 = 1e-2;

fn shape() -> ExactCoeffs {
    ExactCoeffs {
        max_num: 9,
        max_den: 4,
        complex: true,
    }
}

fn search(ctx: &Ctx) -> TorusSearch {
    TorusSearch {
        parallel: ctx.parallel,
        ..TorusSearch::default()
    }
}

fn nonzero_exact(rng: &mut ChaCha8Rng, window: u64, density: f64) -> CliResult<ExactSeries> {
    loop {
        let f = random_exact_series(rng, window, density, &shape())?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

fn at_most(bound: f64, value: f64) -> Outcome {
    Outcome::from_bool(
        value <= bound + SLACK,
        || json!({ "at_most": bound }),
        || json!(value),
    )
}

fn gen_exact_pair(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(1..=256);
    let f = random_exact_series(rng, window, 0.1, &shape())?;
    let g = random_exact_series(rng, window, 0.1, &shape())?;
    let rho = random_exact_coeff(rng, &shape());
    Ok(json!({"f": exact(&f), "g": exact(&g), "rho": complex_rational(&rho)}))
}

fn check_lift_drop(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_exact(v, "f")?;
    let lifted = bohr_lift(&f, &ctx.table)?;
    let back = bohr_drop_with_window(&lifted, f.window(), &ctx.table)?;
    let bare = bohr_drop(&lifted, &ctx.table)?;
    Ok(Outcome::from_bool(
        back == f && bare.coeff_map() == f.coeff_map(),
        || exact(&f),
        || exact(&back),
    ))
}

fn check_lift_multiplicative(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let (f, g) = (get_exact(v, "f")?, get_exact(v, "g")?);
    let t = &ctx.table;
    let lhs = bohr_lift(&f.mul(&g), t)?;
    let rhs = bohr_lift(&f, t)?
        .mul(&bohr_lift(&g, t)?)
        .restrict_to_window(f.window(), t)?;
    Ok(Outcome::from_bool(
        lhs == rhs,
        || exact(&f.mul(&g)),
        || json!({ "terms_of_lift_product": rhs.len() }),
    ))
}

fn check_dilation_intertwining(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_exact(v, "f")?;
    let rho: QComplex = get_complex_rational(v, "rho")?;
    let t = &ctx.table;
    let lhs = bohr_lift(&f.dilate(&rho, t)?, t)?;
    let rhs = bohr_lift(&f, t)?.scale_vars(&rho);
    Ok(Outcome::from_bool(
        lhs == rhs,
        || json!({ "terms": rhs.len() }),
        || json!({ "terms": lhs.len() }),
    ))
}

fn gen_short_float(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(2..=20);
    Ok(json!({ "f": float(&random_float_series_nonzero(rng, window, 0.5)?) }))
}

/// Line and torus suprema, the torus search warm-started from the line argmax.
fn line_and_torus(f: &FloatSeries, ctx: &Ctx) -> CliResult<(f64, f64)> {
    let line = line_sup(f, 0.0, LINE_T, LINE_SAMPLES, LINE_REFINE)?;
    let p = bohr_lift(f, &ctx.table)?;
    let mut seed = BTreeMap::new();
    for v in p.used_vars() {
        seed.insert(v, -line.argmax_t * (ctx.table.prime(v)? as f64).ln());
    }
    let torus = torus_sup_seeded(&p, 1.0, &search(ctx), &[seed])?;
    Ok((line.sup_estimate, torus.value))
}

fn check_line_below_torus(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let (line, torus) = line_and_torus(&get_float(v, "f")?, ctx)?;
    Ok(at_most(torus, line))
}

fn check_line_approaches_torus(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let (line, torus) = line_and_torus(&get_float(v, "f")?, ctx)?;
    let gap = (torus - line) / torus;
    Ok(Outcome::from_bool(
        gap <= LINE_GAP,
        || json!({ "relative_gap_at_most": LINE_GAP, "T": LINE_T }),
        || json!({ "relative_gap": gap, "line": line, "torus": torus }),
    ))
}

fn gen_dilation(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(4..=24);
    let f = random_float_series_nonzero(rng, window, 0.4)?;
    Ok(json!({ "f": float(&f), "r": rng.gen_range(0.05..1.0) }))
}

fn check_dilation_contracts(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_float(v, "f")?;
    let r: f64 = get(v, "r")?;
    let p = bohr_lift(&f, &ctx.table)?;
    let full = torus_sup(&p, 1.0, &search(ctx))?.value;
    let shrunk = torus_sup(&p.scale_vars(&Complex64::new(r, 0.0)), 1.0, &search(ctx))?.value;
    Ok(at_most(full, shrunk))
}

fn check_sigma_u_dilation(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_float(v, "f")?;
    let r: f64 = get(v, "r")?;
    let method = SupMethod::Torus(search(ctx));
    let before = sigma_u_plus_estimate(&f, &ctx.table, &method)?.value;
    let dilated = f.dilate(&Complex64::new(r, 0.0), &ctx.table)?;
    let after = sigma_u_plus_estimate(&dilated, &ctx.table, &method)?.value;
    Ok(at_most(before, after))
}

fn gen_zeta_window(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    Ok(json!({ "window": rng.gen_range(2..=24u64) }))
}

/// Every partial sum of zeta peaks at `N'` at the origin of the torus.
fn check_zeta_sigma_u(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let window: u64 = get(v, "window")?;
    let z = ExactSeries::zeta(window)?;
    let e = sigma_u_plus_estimate(&z, &ctx.table, &SupMethod::Torus(search(ctx)))?;
    Ok(Outcome::from_bool(
        (e.value - 1.0).abs() <= SLACK,
        || json!(1.0),
        || json!(e.value),
    ))
}

fn profile_grid() -> Vec<f64> {
    (0..17).map(|k| 0.1 + 0.05 * k as f64).collect()
}

fn gen_profile(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(4..=32);
    Ok(json!({ "f": float(&random_float_series_nonzero(rng, window, 0.3)?) }))
}

fn check_profile_convex(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_float(v, "f")?;
    let profile = seminorm_profile(&f, &profile_grid(), &ctx.table, &search(ctx))?;
    let report = convexity_check(&profile, DEFAULT_CONVEXITY_TOL)?;
    Ok(Outcome::from_bool(
        report.pass,
        || json!("nondecreasing and convex in log r"),
        || json!({ "values": profile.values, "min_defect": report.min_defect, "min_difference": report.min_difference }),
    ))
}

fn gen_single_term(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let n = rng.gen_range(2..=1000u64);
    let c = random_exact_coeff(rng, &shape());
    Ok(json!({ "n": n, "c": complex_rational(&c) }))
}

/// `P_r(c n^{-s}) = |c| r^{Ω(n)}`.
fn check_single_term(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let n: u64 = get(v, "n")?;
    let c = get_complex_rational(v, "c")?;
    let f = ExactSeries::monomial(n, c.clone(), n)?;
    let grid = profile_grid();
    let profile = seminorm_profile(&f, &grid, &ctx.table, &search(ctx))?;
    let omega = ctx.table.factor(n)?.omega() as i32;
    let want: Vec<f64> = grid.iter().map(|r| c.modulus() * r.powi(omega)).collect();
    let ok = want
        .iter()
        .zip(&profile.values)
        .all(|(w, g)| (w - g).abs() <= SLACK * w.max(1.0));
    Ok(Outcome::from_bool(
        ok,
        || json!(want),
        || json!(profile.values),
    ))
}

fn gen_recovery(rng: &mut ChaCha8Rng, ctx: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(2..=40);
    let f = nonzero_exact(rng, window, 0.25)?;
    let support: Vec<u64> = f.support().collect();
    let n = support[rng.gen_range(0..support.len())];
    let p = bohr_lift(&f, &ctx.table)?;
    let mut grid = BTreeMap::new();
    let mut radii = BTreeMap::new();
    for (var, d) in p.max_degrees() {
        grid.insert(var.to_string(), d as usize + 1 + rng.gen_range(0..=2));
        radii.insert(var.to_string(), rng.gen_range(0.3..=1.0));
    }
    Ok(json!({ "f": exact(&f), "n": n, "grid": grid, "radii": radii }))
}

fn check_dft_recovery(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_exact(v, "f")?;
    let n: u64 = get(v, "n")?;
    let params = CauchyParams {
        grid: GridSize::PerVariable(get_var_map(v, "grid")?),
        radii: Radii::PerVariable(get_var_map(v, "radii")?),
        parallel: ctx.parallel,
        ..CauchyParams::default()
    };
    let got = cauchy_coefficient(&bohr_lift(&f, &ctx.table)?, n, &params, &ctx.table)?;
    let want = f.coeff(n)?.to_c64();
    let rel = (got - want).norm() / want.norm().max(f64::MIN_POSITIVE);
    Ok(Outcome::from_bool(
        rel <= 1e-10,
        || json!([want.re, want.im]),
        || json!({ "value": [got.re, got.im], "relative_error": rel }),
    ))
}

fn gen_bound(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(2..=40);
    let f = nonzero_exact(rng, window, 0.25)?;
    let support: Vec<u64> = f.support().collect();
    let n = support[rng.gen_range(0..support.len())];
    Ok(json!({ "f": exact(&f), "n": n, "r": rng.gen_range(0.05..0.999) }))
}

fn check_coefficient_bound(v: &Value, ctx: &Ctx) -> CliResult<Outcome> {
    let f = get_exact(v, "f")?.to_float();
    let n: u64 = get(v, "n")?;
    let r: f64 = get(v, "r")?;
    let b = coefficient_bound(&f, n, r, &ctx.table, &search(ctx))?;
    Ok(at_most(b.rhs, b.lhs))
}

fn gen_perron(rng: &mut ChaCha8Rng, _: &Ctx) -> CliResult<Value> {
    let window = rng.gen_range(2..=12);
    let f = random_float_series_nonzero(rng, window, 0.5)?;
    Ok(
        json!({ "f": float(&f), "n": rng.gen_range(1..=window), "kappa": 2.0, "R": 500.0, "steps": 50_000 }),
    )
}

fn check_perron(v: &Value, _: &Ctx) -> CliResult<Outcome> {
    let f = get_float(v, "f")?;
    let n: u64 = get(v, "n")?;
    let (kappa, r_half, steps): (f64, f64, usize) =
        (get(v, "kappa")?, get(v, "R")?, get(v, "steps")?);
    let got = perron_recover_series(&f, n, kappa, r_half, steps)?.value;
    let want = f.get(n).copied().unwrap_or_default();
    let bound = perron_error_bound(&f, n, kappa, r_half, steps);
    let err = (got - want).norm();
    Ok(Outcome::from_bool(
        err <= bound,
        || json!({ "error_at_most": bound }),
        || json!({ "error": err, "value": [got.re, got.im] }),
    ))
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "bohr-lemma",
            about: "the Bohr lift is a ring isomorphism intertwining dilation; line and torus suprema agree",
            default_trials: 20,
            properties: vec![
                Property { name: "lift-drop-roundtrip", generate: gen_exact_pair, check: check_lift_drop },
                Property { name: "lift-multiplicative", generate: gen_exact_pair, check: check_lift_multiplicative },
                Property { name: "dilation-intertwining", generate: gen_exact_pair, check: check_dilation_intertwining },
                Property { name: "line-below-torus", generate: gen_short_float, check: check_line_below_torus },
                Property { name: "line-approaches-torus", generate: gen_short_float, check: check_line_approaches_torus },
            ],
        },
        Suite {
            name: "prop1.1",
            about: "dilation by 0 < r < 1 contracts the torus supremum and the uniform abscissa surrogate",
            default_trials: 10,
            properties: vec![
                Property { name: "dilation-contracts", generate: gen_dilation, check: check_dilation_contracts },
                Property { name: "sigma-u-dilation", generate: gen_dilation, check: check_sigma_u_dilation },
                Property { name: "zeta-sigma-u", generate: gen_zeta_window, check: check_zeta_sigma_u },
            ],
        },
        Suite {
            name: "prop1.2",
            about: "log P_r is nondecreasing and convex in log r",
            default_trials: 10,
            properties: vec![
                Property { name: "profile-monotone-convex", generate: gen_profile, check: check_profile_convex },
                Property { name: "single-term-profile", generate: gen_single_term, check: check_single_term },
            ],
        },
        Suite {
            name: "eq2.8",
            about: "coefficient recovery by torus averages and Perron integrals, and the coefficient bound",
            default_trials: 50,
            properties: vec![
                Property { name: "dft-recovery", generate: gen_recovery, check: check_dft_recovery },
                Property { name: "coefficient-bound", generate: gen_bound, check: check_coefficient_bound },
                Property { name: "perron-within-bound", generate: gen_perron, check: check_perron },
            ],
        },
    ]
}
