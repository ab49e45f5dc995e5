use std::fs;
use std::io::Write;
use std::path::Path;

use dirichlet::arith::{series_from_json, series_to_json, DynSeries};
use dirichlet::bohr::{poly_from_json, poly_to_json, DynPoly};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Provenance header: tool, version and the invocation that produced the
/// output. The `--out` destination is left out so that the same command
/// writes identical bytes wherever it writes them.
pub fn provenance(argv: &[String]) -> Value {
    let mut invocation = Vec::with_capacity(argv.len());
    let mut skip = false;
    for arg in argv.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if arg == "--out" {
            skip = true;
            continue;
        }
        if arg.starts_with("--out=") {
            continue;
        }
        invocation.push(arg.clone());
    }
    json!({
        "tool": "dirichlet",
        "version": env!("CARGO_PKG_VERSION"),
        "invocation": invocation,
    })
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))
}

pub fn is_poly_document(v: &Value) -> bool {
    v.get("terms").is_some()
}

pub fn read_series(path: &Path) -> CliResult<DynSeries> {
    let v = read_json(path)?;
    if is_poly_document(&v) {
        return Err(CliError::usage(format!(
            "{} holds a polynomial, expected a series",
            path.display()
        )));
    }
    Ok(series_from_json(&v)?)
}

pub fn read_poly(path: &Path) -> CliResult<DynPoly> {
    let v = read_json(path)?;
    if !is_poly_document(&v) {
        return Err(CliError::usage(format!(
            "{} holds a series, expected a polynomial",
            path.display()
        )));
    }
    Ok(poly_from_json(&v)?)
}

pub fn series_document(s: &DynSeries, header: &Value) -> Value {
    series_to_json(s, Some(header.clone()))
}

pub fn poly_document(p: &DynPoly, header: &Value) -> Value {
    let mut doc = poly_to_json(p);
    if let Value::Object(map) = &mut doc {
        map.insert("provenance".into(), header.clone());
    }
    doc
}

/// Writes `content` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

pub fn emit_json(out: Option<&Path>, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}
