use std::collections::BTreeSet;
use std::path::Path;

use dirichlet::analysis::{
    convexity_check, line_sup, number, perron_error_bound, perron_recover_series, seminorm_profile,
    sigma_u_plus_estimate, Record, SupMethod, DEFAULT_CONVEXITY_TOL,
};
use dirichlet::arith::{ComplexScalar, DynSeries, FloatSeries, ScalarMode};
use dirichlet::bohr::{
    bohr_drop, bohr_drop_with_window, bohr_lift, cauchy_series_coefficient, torus_sup,
    CauchyParams, DynPoly, TorusSearch,
};
use dirichlet::group::{
    act, group_average, phi_restrict, project_invariant, Permutation, PermutationGroup,
};
use dirichlet::primes::PrimeTable;
use dirichlet::random::{random_exact_series, random_float_series, rng, ExactCoeffs};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::args::{AnalyzeArgs, AnalyzeKind, BuildArgs, Format, OpArgs, OpName};
use crate::error::{CliError, CliResult};
use crate::io::{
    emit, emit_json, is_poly_document, poly_document, read_json, read_poly, read_series,
    series_document,
};

/// Applies a generic series operation in whichever mode the series carries.
macro_rules! on_series {
    ($s:expr, $x:ident => $body:expr) => {
        match $s {
            DynSeries::Exact($x) => DynSeries::Exact($body),
            DynSeries::Float($x) => DynSeries::Float($body),
        }
    };
}

/// Shared state for one command.
pub struct Context {
    pub header: Value,
    pub parallel: bool,
}

/// Prime table covering `window`, at least `2^20`.
pub fn table_for(window: u64) -> CliResult<PrimeTable> {
    let bound = window.clamp(1 << 20, 1 << 26);
    Ok(PrimeTable::sieve(bound)?)
}

fn complex_pair(z: Complex64) -> Value {
    json!([number(z.re), number(z.im)])
}

pub fn build(args: &BuildArgs, ctx: &Context) -> CliResult<()> {
    let mode: ScalarMode = args.mode.into();
    let window = args.window;
    let expr: Vec<&str> = args.expr.iter().map(String::as_str).collect();
    let series = match expr.as_slice() {
        ["zeta"] => DynSeries::zeta(window, mode)?,
        ["unit"] => DynSeries::one(window, mode)?,
        ["monomial", n, c] => {
            let n: u64 = n.parse().map_err(|_| CliError::usage(format!("monomial index {n:?} is not an integer")))?;
            DynSeries::monomial(n, &ComplexScalar::parse(c, mode)?, window)?
        }
        ["random"] => {
            if !(0.0..=1.0).contains(&args.density) {
                return Err(CliError::usage("--density must lie in [0, 1]"));
            }
            let mut r = rng(args.seed);
            match mode {
                ScalarMode::Exact => random_exact_series(&mut r, window, args.density, &ExactCoeffs::default())?.into(),
                ScalarMode::Float => random_float_series(&mut r, window, args.density)?.into(),
            }
        }
        ["file", path] => {
            let s = read_series(Path::new(path))?;
            match (s, mode) {
                (DynSeries::Exact(e), ScalarMode::Float) => DynSeries::Float(e.to_float()),
                (DynSeries::Float(_), ScalarMode::Exact) => {
                    return Err(CliError::usage("a float series cannot be rebuilt in exact mode"))
                }
                (s, _) => s,
            }
        }
        _ => {
            return Err(CliError::usage(format!(
                "unknown build expression {:?}; expected zeta, unit, monomial <n> <c>, random or file <path>",
                args.expr.join(" ")
            )))
        }
    };
    emit_json(args.out.as_deref(), &series_document(&series, &ctx.header))
}

fn group_from(gens: &[String]) -> CliResult<PermutationGroup> {
    if gens.is_empty() {
        return Err(CliError::usage(
            "this operation needs at least one --gens permutation",
        ));
    }
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    Ok(PermutationGroup::parse(&refs)?)
}

pub fn op(args: &OpArgs, ctx: &Context) -> CliResult<()> {
    let arity = match args.name {
        OpName::Add | OpName::Mul => 2,
        _ => 1,
    };
    if args.inputs.len() != arity {
        return Err(CliError::usage(format!(
            "{:?} takes {arity} input file(s), got {}",
            args.name,
            args.inputs.len()
        )));
    }
    if args.name == OpName::Drop {
        let p = read_poly(&args.inputs[0])?;
        let max_var = match &p {
            DynPoly::Exact(p) => p.nvars(),
            DynPoly::Float(p) => p.nvars(),
        };
        let table = table_for(args.window.unwrap_or(0).max(max_var as u64 * 32))?;
        let s = match (&p, args.window) {
            (DynPoly::Exact(p), Some(w)) => DynSeries::Exact(bohr_drop_with_window(p, w, &table)?),
            (DynPoly::Float(p), Some(w)) => DynSeries::Float(bohr_drop_with_window(p, w, &table)?),
            (DynPoly::Exact(p), None) => DynSeries::Exact(bohr_drop(p, &table)?),
            (DynPoly::Float(p), None) => DynSeries::Float(bohr_drop(p, &table)?),
        };
        return emit_json(args.out.as_deref(), &series_document(&s, &ctx.header));
    }
    let f = read_series(&args.inputs[0])?;
    let table = table_for(f.window())?;
    let result = match args.name {
        OpName::Add | OpName::Mul => {
            let g = read_series(&args.inputs[1])?;
            if args.name == OpName::Add {
                f.add(&g)?
            } else {
                f.mul(&g)?
            }
        }
        OpName::Invert => f.invert()?,
        OpName::Dilate => {
            let r = args
                .r
                .as_deref()
                .ok_or_else(|| CliError::usage("dilate needs --r"))?;
            f.dilate(&ComplexScalar::parse(r, f.mode())?, &table)?
        }
        OpName::Lift => {
            let p = match &f {
                DynSeries::Exact(s) => DynPoly::Exact(bohr_lift(s, &table)?),
                DynSeries::Float(s) => DynPoly::Float(bohr_lift(s, &table)?),
            };
            return emit_json(args.out.as_deref(), &poly_document(&p, &ctx.header));
        }
        OpName::Act => {
            let [sigma] = args.gens.as_slice() else {
                return Err(CliError::usage("act needs exactly one --gens permutation"));
            };
            let sigma: Permutation = sigma.parse()?;
            on_series!(&f, s => act(&sigma, s, &table)?)
        }
        OpName::Project => {
            let g = group_from(&args.gens)?;
            on_series!(&f, s => project_invariant(s, &g, args.policy.into(), &table)?)
        }
        OpName::Average => {
            let g = group_from(&args.gens)?;
            on_series!(&f, s => group_average(s, &g, &table)?)
        }
        OpName::Restrict => {
            let set: BTreeSet<usize> = args.set.iter().copied().collect();
            on_series!(&f, s => phi_restrict(s, &set, &table)?)
        }
        OpName::Drop => unreachable!("handled above"),
    };
    emit_json(args.out.as_deref(), &series_document(&result, &ctx.header))
}

/// Parses `a:b:k` into `k` equispaced points from `a` to `b`.
pub fn parse_r_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = || {
        CliError::usage(format!(
            "--r-grid must be a:b:k with 0 < a <= b <= 1 and k >= 1, got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, k] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if k == 0 || !(a > 0.0 && a <= b && b <= 1.0) {
        return Err(bad());
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    Ok((0..k)
        .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
        .collect())
}

fn torus_params(args: &AnalyzeArgs, ctx: &Context) -> TorusSearch {
    let d = TorusSearch::default();
    TorusSearch {
        grid_per_var: args.grid.unwrap_or(d.grid_per_var),
        restarts: args.refine.unwrap_or(d.restarts),
        seed: args.seed.unwrap_or(d.seed),
        parallel: ctx.parallel,
        ..d
    }
}

fn torus_params_json(p: &TorusSearch) -> Value {
    json!({
        "grid_per_var": p.grid_per_var,
        "restarts": p.restarts,
        "seed": p.seed,
        "budget": p.budget.to_string(),
    })
}

fn require_n(args: &AnalyzeArgs) -> CliResult<u64> {
    args.n
        .ok_or_else(|| CliError::usage(format!("{:?} needs --n", args.kind)))
}

fn emit_record(args: &AnalyzeArgs, ctx: &Context, record: Record) -> CliResult<()> {
    let mut doc = record.to_json();
    if let Value::Object(map) = &mut doc {
        map.insert("provenance".into(), ctx.header.clone());
    }
    emit_json(args.out.as_deref(), &doc)
}

pub fn analyze(args: &AnalyzeArgs, ctx: &Context) -> CliResult<()> {
    if args.kind == AnalyzeKind::TorusSup {
        let doc = read_json(&args.input)?;
        let params = torus_params(args, ctx);
        let (p, table_window) = if is_poly_document(&doc) {
            (read_poly(&args.input)?.to_float(), 0)
        } else {
            let f = read_series(&args.input)?;
            let t = table_for(f.window())?;
            (bohr_lift(&f.to_float(), &t)?, f.window())
        };
        let sup = torus_sup(&p, args.r, &params)?;
        let record = Record::new(
            "torus_sup",
            json!({"r": args.r, "search": torus_params_json(&params), "window": table_window}),
            number(sup.value),
            None,
            json!({
                "vars": sup.vars,
                "phases": sup.phases.iter().map(|&t| number(t)).collect::<Vec<_>>(),
                "grid_value": number(sup.grid_value),
                "converged": sup.converged,
            }),
        );
        return emit_record(args, ctx, record);
    }

    let f: FloatSeries = read_series(&args.input)?.to_float();
    let table = table_for(f.window())?;
    match args.kind {
        AnalyzeKind::TorusSup => unreachable!("handled above"),
        AnalyzeKind::SeminormProfile => {
            let grid = parse_r_grid(&args.r_grid)?;
            let params = torus_params(args, ctx);
            let profile = seminorm_profile(&f, &grid, &table, &params)?;
            match args.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["r", "value", "tolerance"])?;
                    for (r, v) in profile.r_grid.iter().zip(&profile.values) {
                        w.write_record([
                            r.to_string(),
                            v.to_string(),
                            DEFAULT_CONVEXITY_TOL.to_string(),
                        ])?;
                    }
                    let body = String::from_utf8(
                        w.into_inner().map_err(|e| CliError::usage(e.to_string()))?,
                    )
                    .expect("csv output is UTF-8");
                    let header = format!("# {}\n", serde_json::to_string(&ctx.header)?);
                    emit(args.out.as_deref(), &(header + &body))
                }
                Format::Json => {
                    let report = if grid.len() >= 3 && profile.values.iter().all(|&v| v > 0.0) {
                        serde_json::to_value(convexity_check(&profile, DEFAULT_CONVEXITY_TOL)?)?
                    } else {
                        Value::Null
                    };
                    let record = Record::new(
                        "seminorm_profile",
                        json!({"r_grid": profile.r_grid, "search": torus_params_json(&params)}),
                        json!(profile
                            .values
                            .iter()
                            .map(|&v| number(v))
                            .collect::<Vec<_>>()),
                        Some(DEFAULT_CONVEXITY_TOL),
                        json!({"convexity": report}),
                    );
                    emit_record(args, ctx, record)
                }
            }
        }
        AnalyzeKind::Perron => {
            let n = require_n(args)?;
            let steps = args
                .steps
                .unwrap_or((args.r_half * 100.0).ceil().max(1000.0) as usize);
            let rep = perron_recover_series(&f, n, args.kappa, args.r_half, steps)?;
            let bound = perron_error_bound(&f, n, args.kappa, args.r_half, steps);
            let expected = f.get(n).copied().unwrap_or_default();
            let record = Record::new(
                "perron_recover",
                json!({"n": n, "kappa": args.kappa, "R": args.r_half, "steps": steps}),
                complex_pair(rep.value),
                Some(bound),
                json!({"a_n": complex_pair(expected), "error": number((rep.value - expected).norm())}),
            );
            emit_record(args, ctx, record)
        }
        AnalyzeKind::LineSup => {
            let refine = args.refine.unwrap_or(64);
            let rep = line_sup(&f, args.sigma, args.t_max, args.samples, refine)?;
            let record = Record::new(
                "line_sup",
                json!({"sigma": args.sigma, "T": args.t_max, "samples": args.samples, "refine": refine}),
                number(rep.sup_estimate),
                None,
                json!({"argmax_t": number(rep.argmax_t), "grid_sup": number(rep.grid_sup)}),
            );
            emit_record(args, ctx, record)
        }
        AnalyzeKind::SigmaU => {
            let method = match args.method.as_str() {
                "torus" => SupMethod::Torus(torus_params(args, ctx)),
                "line" => SupMethod::Line {
                    t_max: args.t_max,
                    samples: args.samples,
                    refine: args.refine.unwrap_or(64),
                },
                other => {
                    return Err(CliError::usage(format!(
                        "--method must be torus or line, got {other:?}"
                    )))
                }
            };
            let est = sigma_u_plus_estimate(&f, &table, &method)?;
            let record = Record::new(
                "sigma_u_plus_estimate",
                json!({"method": method.tag()}),
                number(est.value),
                None,
                json!({
                    "unclamped": number(est.unclamped),
                    "per_n": est.per_n.iter().map(|&(n, v)| json!([n, number(v)])).collect::<Vec<_>>(),
                }),
            );
            emit_record(args, ctx, record)
        }
        AnalyzeKind::Coefficient => {
            let n = require_n(args)?;
            let p = bohr_lift(&f, &table)?;
            let q = args.grid.unwrap_or_else(|| {
                p.max_degrees().values().copied().max().unwrap_or(0) as usize + 1
            });
            let mut params = CauchyParams::uniform(q, args.r);
            params.parallel = ctx.parallel;
            let value = cauchy_series_coefficient(&f, n, &params, &table)?;
            let expected = f.get(n).copied().unwrap_or_default();
            let record = Record::new(
                "cauchy_coefficient",
                json!({"n": n, "grid": q, "r": args.r}),
                complex_pair(value),
                None,
                json!({"a_n": complex_pair(expected), "error": number((value - expected).norm())}),
            );
            emit_record(args, ctx, record)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_grid_parsing() {
        assert_eq!(parse_r_grid("0.1:0.9:9").unwrap().len(), 9);
        let g = parse_r_grid("0.5:1:3").unwrap();
        assert_eq!(g, vec![0.5, 0.75, 1.0]);
        assert_eq!(parse_r_grid("0.3:0.3:1").unwrap(), vec![0.3]);
        for bad in [
            "0:1:3",
            "0.5:0.4:3",
            "0.1:0.9",
            "0.1:0.9:0",
            "a:b:c",
            "0.1:1.5:3",
        ] {
            assert!(parse_r_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn table_has_a_floor() {
        assert_eq!(table_for(10).unwrap().bound(), 1 << 20);
    }
}
