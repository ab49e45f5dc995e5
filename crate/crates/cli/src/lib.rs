//! Command-line front end for the `dirichlet` crate.
//!
//! Exit codes: 0 on success, 1 when a verification suite finds
//! counterexamples, 2 on usage errors and 3 on numeric failures.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod suites;

use std::path::Path;

use serde_json::{json, Value};

use args::{Cli, Command, VerifyArgs};
use commands::Context;
use error::{CliError, CliResult};
use suites::{Ctx, Failure, SuiteResult};

/// Runs a parsed command line. `argv` is recorded in provenance headers.
pub fn run(cli: Cli, argv: &[String]) -> CliResult<()> {
    if let Some(n) = cli.parallel {
        if n == 0 {
            return Err(CliError::usage("--parallel needs at least 1 thread"));
        }
        if n > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))?;
        }
    }
    let ctx = Context {
        header: io::provenance(argv),
        parallel: cli.parallel != Some(1),
    };
    match &cli.command {
        Command::Build(a) => commands::build(a, &ctx),
        Command::Op(a) => commands::op(a, &ctx),
        Command::Analyze(a) => commands::analyze(a, &ctx),
        Command::Verify(a) => verify(a, &ctx),
    }
}

fn verify(args: &VerifyArgs, ctx: &Context) -> CliResult<()> {
    let out = args.out.as_deref();
    if args.list {
        let listing: Vec<Value> = suites::registry()
            .iter()
            .map(|s| {
                json!({
                    "suite": s.name,
                    "about": s.about,
                    "default_trials": s.default_trials,
                    "properties": s.properties.iter().map(|p| p.name).collect::<Vec<_>>(),
                })
            })
            .collect();
        return io::emit_json(out, &Value::Array(listing));
    }
    let checks = Ctx::new(ctx.parallel)?;
    if let Some(path) = &args.replay {
        let recorded = recorded_failures(path)?;
        let still = suites::replay(&recorded, &checks)?;
        let doc = json!({
            "replayed": recorded.len(),
            "failures": still,
            "provenance": ctx.header,
        });
        io::emit_json(out, &doc)?;
        return failures_to_result(still.len());
    }
    let name = args
        .suite
        .as_deref()
        .ok_or_else(|| CliError::usage("--suite is required"))?;
    let selected = suites::find(name)?;
    let mut results = Vec::with_capacity(selected.len());
    for suite in &selected {
        results.push(suites::run_suite(suite, args.seed, args.trials, &checks)?);
    }
    let failed: usize = results.iter().map(|r| r.failures.len()).sum();
    let doc = if name == "all" {
        serde_json::to_value(&results)?
    } else {
        serde_json::to_value(&results[0])?
    };
    io::emit_json(out, &doc)?;
    failures_to_result(failed)
}

fn failures_to_result(count: usize) -> CliResult<()> {
    if count == 0 {
        Ok(())
    } else {
        Err(CliError::Property(count))
    }
}

/// Accepts a suite result, an array of them, a replay report or a bare
/// failure list.
fn recorded_failures(path: &Path) -> CliResult<Vec<Failure>> {
    let v = io::read_json(path)?;
    let bad = |e: serde_json::Error| {
        CliError::usage(format!("{}: not a suite result: {e}", path.display()))
    };
    match &v {
        Value::Array(items)
            if items.iter().all(|x| x.get("suite").is_some()) && !items.is_empty() =>
        {
            let results: Vec<SuiteResult> = serde_json::from_value(v.clone()).map_err(bad)?;
            Ok(results.into_iter().flat_map(|r| r.failures).collect())
        }
        Value::Array(_) => serde_json::from_value(v.clone()).map_err(bad),
        Value::Object(map) if map.contains_key("failures") => {
            serde_json::from_value(map["failures"].clone()).map_err(bad)
        }
        _ => Err(CliError::usage(format!(
            "{}: not a suite result",
            path.display()
        ))),
    }
}
