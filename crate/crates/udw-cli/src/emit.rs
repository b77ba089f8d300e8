//! CSV and JSON emission, bit-stable across runs for identical inputs.

use std::io::Write;

use serde::Serialize;
use udw_core::QuadratureSpec;

use crate::plan::{SweepPlan, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Format> {
        Ok(match s {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => anyhow::bail!("unknown format '{other}' (expected csv or json)"),
        })
    }
}

/// CSV with the fixed column set. Floats use the shortest round-trip
/// representation, so identical runs produce identical bytes.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("axis_name,axis_value,model,observable,value,est_error,causal_class\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.axis_name, r.axis_value, r.model, r.observable, r.value, r.est_error, r.causal_class
        ));
    }
    out
}

#[derive(Debug, Serialize)]
struct JsonMeta<'a> {
    plan: &'a SweepPlan,
    quadrature: &'a QuadratureSpec,
    version: &'static str,
}

#[derive(Debug, Serialize)]
struct JsonDoc<'a> {
    meta: JsonMeta<'a>,
    rows: &'a [SweepRow],
}

/// JSON document `{meta: {plan, quadrature, version}, rows: [...]}`.
pub fn to_json(plan: &SweepPlan, spec: &QuadratureSpec, rows: &[SweepRow]) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(&JsonDoc {
        meta: JsonMeta {
            plan,
            quadrature: spec,
            version: env!("CARGO_PKG_VERSION"),
        },
        rows,
    })?)
}

/// Write to a path, or stdout when no path is given.
pub fn emit(
    plan: &SweepPlan,
    spec: &QuadratureSpec,
    rows: &[SweepRow],
    format: Format,
    path: Option<&std::path::Path>,
) -> anyhow::Result<()> {
    if rows.is_empty() {
        anyhow::bail!("nothing to emit: sweep produced no rows");
    }
    let text = match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(plan, spec, rows)?,
    };
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
