use std::io::Write;
use std::path::Path;

use nodalkit::exact::{self, Rational};
use nodalkit::poly::ExactMeasure;
use nodalkit::weighted::ProbeReport;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

/// Rows of a CSV export, header first.
pub type Table = Vec<Vec<String>>;

#[derive(Debug, Default)]
pub struct Output {
    pub json: Value,
    pub csv: Option<Table>,
    pub svg: Option<String>,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Output { json, ..Default::default() }
    }
}

pub fn rational(q: &Rational) -> Value {
    json!({"exact": exact::fraction_string(q), "value": exact::to_f64(q)})
}

pub fn rationals(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(rational).collect())
}

pub fn measure(m: &ExactMeasure) -> Value {
    json!({
        "coefficient": exact::fraction_string(&m.coefficient),
        "unit": format!("omega_{}", m.dim - 1),
        "value": m.to_f64(),
    })
}

pub fn probe(r: &ProbeReport) -> Value {
    json!({
        "probe": r.probe,
        "a": exact::fraction_string(&r.a),
        "aS": exact::fraction_string(&r.a_s),
        "branch": r.branch.as_str(),
        "cases": r.cases.iter().map(|c| json!({"id": c.id, "lhs": c.lhs, "rhs": c.rhs, "ratio": c.ratio})).collect::<Vec<_>>(),
        "max_ratio": r.max_ratio,
        "bound": r.bound,
        "converged": r.converged,
        "classification": r.classification.map(|c| c.as_str()),
        "pass": r.pass,
    })
}

pub fn probe_rows(rows: &mut Table, label: &str, r: &ProbeReport) {
    if rows.is_empty() {
        rows.push(["poly", "probe", "a", "case", "lhs", "rhs", "ratio", "pass"].map(String::from).to_vec());
    }
    for c in &r.cases {
        rows.push(vec![
            label.to_string(),
            r.probe.clone(),
            exact::fraction_string(&r.a),
            c.id.clone(),
            c.lhs.to_string(),
            c.rhs.to_string(),
            c.ratio.to_string(),
            r.pass.to_string(),
        ]);
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn csv_bytes(table: &Table) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in table {
        w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn emit(config: &RunConfig, output: &Output) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&output.json).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    match &config.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(path) = &config.csv {
        let table = output
            .csv
            .as_ref()
            .ok_or_else(|| CliError::Config("csv: this sub-command has no CSV export".into()))?;
        write_atomic(path, &csv_bytes(table)?)?;
    }
    if let Some(path) = &config.svg {
        let svg = output
            .svg
            .as_ref()
            .ok_or_else(|| CliError::Config("svg: this sub-command has no SVG output".into()))?;
        write_atomic(path, svg.as_bytes())?;
    }
    Ok(())
}
