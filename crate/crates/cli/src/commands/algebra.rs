use nodalkit::exact::{self, Rational};
use nodalkit::poly::{self, harmonic_basis, liouville_ratio, LiouvilleFailure, Polynomial};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{rational, Output};
use crate::CliError;

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

pub fn parse(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let (gradient, laplacian) = u.differentiate();
    Ok(Output::json(json!({
        "input": c.poly_text()?,
        "canonical": u.to_string(),
        "dimension": u.dim(),
        "degree": u.degree(),
        "terms": u.num_terms(),
        "homogeneous": u.is_homogeneous(),
        "harmonic": laplacian.is_zero(),
        "gradient": strings(&gradient),
        "laplacian": laplacian.to_string(),
    })))
}

pub fn eval(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let point = c.point()?;
    let value = u.evaluate(&point)?;
    Ok(Output::json(json!({
        "poly": u.to_string(),
        "point": point.iter().map(exact::fraction_string).collect::<Vec<_>>(),
        "value": rational(&value),
    })))
}

pub fn basis(c: &RunConfig) -> Result<Output, CliError> {
    let n = c.dim()?;
    let k = c.degree.ok_or_else(|| CliError::Config("degree: required".into()))?;
    let b = harmonic_basis(n, i64::from(k))?;
    Ok(Output::json(json!({"dimension": n, "degree": k, "size": b.len(), "basis": strings(&b)})))
}

fn liouville_json(u: &Polynomial, v: &Polynomial) -> Result<Value, CliError> {
    if !u.is_harmonic() || !v.is_harmonic() || u.is_zero() {
        return Ok(Value::Null);
    }
    let gamma = Rational::from_integer((i64::from(v.degree().unwrap_or(0)) - i64::from(u.degree().unwrap_or(0))).into());
    let outcome = liouville_ratio(u, v, &gamma)?;
    Ok(match outcome {
        Ok(r) => json!({"gamma": exact::fraction_string(&gamma), "ok": true, "ratio": r.to_string(), "degree": r.degree()}),
        Err(LiouvilleFailure::NotDivisible { .. }) => {
            json!({"gamma": exact::fraction_string(&gamma), "ok": false, "failure": "not divisible"})
        }
        Err(LiouvilleFailure::DegreeTooLarge { degree, bound }) => json!({
            "gamma": exact::fraction_string(&gamma), "ok": false, "failure": "degree too large", "degree": degree, "bound": bound,
        }),
    })
}

pub fn divide(c: &RunConfig) -> Result<Output, CliError> {
    let p = c.polynomial()?;
    let q = c
        .optional_poly("divisor", &c.divisor)?
        .ok_or_else(|| CliError::Config("divisor: required".into()))?;
    let (quotient, remainder) = poly::divide(&p, &q)?;
    Ok(Output::json(json!({
        "dividend": p.to_string(),
        "divisor": q.to_string(),
        "quotient": quotient.to_string(),
        "remainder": remainder.to_string(),
        "divisible": remainder.is_zero(),
        "liouville": liouville_json(&q, &p)?,
    })))
}

pub fn ratio_space(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let m = c.m();
    let b = poly::ratio_space(&u, m)?;
    Ok(Output::json(json!({"poly": u.to_string(), "m": m, "dimension": b.len(), "basis": strings(&b)})))
}
