use nodalkit::degenerate::{
    assemble_solve, certified_pair, discrete_laplacian_residual, holder_seminorm, uniformity_experiment, weak_residual,
    CertifiedPair, GridField, GridSpec, HolderReport,
};
use nodalkit::exact::{self, rat, Rational};
use nodalkit::poly::{divide, liouville_ratio, FloatPoly, Polynomial};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{measure, probe as probe_json, probe_rows, rational, Output, Table};
use crate::CliError;

fn pairs(c: &RunConfig, default_samples: usize) -> Result<Vec<CertifiedPair>, CliError> {
    let (n0, m, seed) = (c.n0()?, c.m(), c.seed());
    let samples = c.samples.unwrap_or(default_samples);
    (0..samples as u64)
        .into_par_iter()
        .map(|i| certified_pair(n0, m, seed + i).map_err(CliError::from))
        .collect()
}

fn pair_json(p: &CertifiedPair) -> Result<Value, CliError> {
    let (_, remainder) = divide(&p.v, &p.u)?;
    let gamma = Rational::from_integer((i64::from(p.v.degree().unwrap_or(0)) - i64::from(p.u.degree().unwrap_or(0))).into());
    let liouville = liouville_ratio(&p.u, &p.v, &gamma)?;
    Ok(json!({
        "seed": p.seed,
        "attempts": p.attempts,
        "u": p.u.to_string(),
        "R": p.r.to_string(),
        "v": p.v.to_string(),
        "u_norm_sq_half_ball": measure(&p.u_norm_sq),
        "normalization": p.normalization(),
        "v_l2_sq": rational(&p.v_l2_sq()),
        "divisible": remainder.is_zero(),
        "gamma": exact::fraction_string(&gamma),
        "liouville_ok": liouville.as_ref().is_ok_and(|r| *r == p.r),
    }))
}

pub fn pair(c: &RunConfig) -> Result<Output, CliError> {
    let list = pairs(c, 1)?;
    let cases = list.iter().map(pair_json).collect::<Result<Vec<_>, _>>()?;
    let divisible = cases.iter().filter(|c| c["divisible"] == true).count();
    let liouville = cases.iter().filter(|c| c["liouville_ok"] == true).count();
    Ok(Output::json(json!({
        "N0": c.n0()?,
        "m": c.m(),
        "pairs": cases,
        "summary": {"pairs": list.len(), "divisible": divisible, "liouville_ok": liouville, "pass": divisible == list.len() && liouville == list.len()},
    })))
}

fn spec(c: &RunConfig, cells: usize) -> Result<GridSpec, CliError> {
    Ok(GridSpec::new(c.side()?, cells)?)
}

/// `u` and the exact field: the given polynomials, or a certified pair and
/// its ratio.
fn equation(c: &RunConfig) -> Result<(Polynomial, Polynomial, Value), CliError> {
    match &c.poly {
        Some(_) => {
            let u = c.polynomial()?;
            let w = c
                .optional_poly("field", &c.field)?
                .ok_or_else(|| CliError::Config("field: required with poly".into()))?;
            if u.dim() != 2 {
                return Err(CliError::Config("dimension: the solver needs 2".into()));
            }
            let source = json!({"u": u.to_string(), "w": w.to_string()});
            Ok((u, w, source))
        }
        None => {
            let p = certified_pair(c.n0()?, c.m(), c.seed())?;
            let source = pair_json(&p)?;
            Ok((p.u, p.r, source))
        }
    }
}

fn boundary_range(f: &GridField) -> (f64, f64) {
    let n = f.spec.nodes_per_side();
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..n {
        for i in 0..n {
            if f.spec.is_boundary(i, j) {
                range = (range.0.min(f.at(i, j)), range.1.max(f.at(i, j)));
            }
        }
    }
    range
}

pub fn solve(c: &RunConfig) -> Result<Output, CliError> {
    let (u, w, source) = equation(c)?;
    let ladder = c.cells_or("64")?;
    let tests = c.samples.unwrap_or(8);
    let fw = FloatPoly::from(&w);
    let mut levels = Vec::new();
    let mut errors = Vec::new();
    let mut residuals = Vec::new();
    let mut max_principle = true;
    for &cells in &ladder {
        let truth = GridField::from_poly(spec(c, cells)?, &fw);
        let s = assemble_solve(&u, &truth)?;
        let error = s.field.max_abs_diff(&truth);
        let (lo, hi) = boundary_range(&truth);
        let slack = 1e-9 * lo.abs().max(hi.abs()).max(1.0);
        let (min, max) = s.field.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |m, v| (m.0.min(*v), m.1.max(*v)));
        let principle = min >= lo - slack && max <= hi + slack;
        max_principle &= principle;
        let weak = weak_residual(&u, &s.field, tests, c.seed());
        errors.push(error);
        residuals.push(weak.max_ratio);
        levels.push(json!({
            "cells": cells,
            "h": s.field.spec.h(),
            "iterations": s.iterations,
            "relative_residual": s.relative_residual,
            "flagged_nodes": s.flagged_nodes,
            "max_error": error,
            "max_principle": principle,
            "weak_residual": weak.max_ratio,
            "laplacian_residual_uw": discrete_laplacian_residual(&u, &s.field),
        }));
    }
    let error_ratios: Vec<f64> = errors.windows(2).map(|e| e[0] / e[1]).collect();
    let residual_ratios: Vec<f64> = residuals.windows(2).map(|r| r[0] / r[1]).collect();
    let min_ratio = error_ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let monotone = residuals.windows(2).all(|r| r[1] < r[0]);
    Ok(Output::json(json!({
        "source": source,
        "side": c.side()?,
        "levels": levels,
        "error_ratios": error_ratios,
        "residual_ratios": residual_ratios,
        "summary": {
            "min_error_ratio": if error_ratios.is_empty() { Value::Null } else { json!(min_ratio) },
            "residual_decreasing": monotone,
            "max_principle": max_principle,
            "pass": max_principle && monotone && (error_ratios.is_empty() || min_ratio >= 1.7),
        },
    })))
}

pub fn residual(c: &RunConfig) -> Result<Output, CliError> {
    let (u, w, source) = equation(c)?;
    let ladder = c.cells_or("64")?;
    let tests = c.samples.unwrap_or(8);
    let fw = FloatPoly::from(&w);
    let mut table = Table::new();
    let mut levels = Vec::new();
    for &cells in &ladder {
        let field = GridField::from_poly(spec(c, cells)?, &fw);
        let r = weak_residual(&u, &field, tests, c.seed());
        probe_rows(&mut table, &format!("cells={cells}"), &r);
        let mut j = probe_json(&r);
        j["cells"] = json!(cells);
        levels.push(j);
    }
    let maxima: Vec<f64> = levels.iter().map(|l| l["max_ratio"].as_f64().unwrap_or(f64::NAN)).collect();
    Ok(Output {
        json: json!({
            "source": source,
            "levels": levels,
            "decreasing": maxima.windows(2).all(|m| m[1] <= m[0]),
        }),
        csv: Some(table),
        svg: None,
    })
}

fn holder_json(r: &HolderReport) -> Value {
    json!({
        "alpha": exact::fraction_string(&r.alpha),
        "radius": exact::fraction_string(&r.radius),
        "seminorm": r.seminorm,
        "coarse_seminorm": r.coarse_seminorm,
        "l2_v": r.l2_v,
        "quotient": r.quotient,
        "stable": r.stable,
    })
}

pub fn holder(c: &RunConfig) -> Result<Output, CliError> {
    let alpha = c.alpha()?;
    let cells = c.cells_or("128")?[0];
    let grid = spec(c, cells)?;
    let radius = rat(1, 2);
    let list = pairs(c, 5)?;
    let reports = list
        .par_iter()
        .map(|p| {
            let field = GridField::from_poly(grid, &FloatPoly::from(&p.r));
            let mut r = holder_seminorm(&field, &alpha, &radius)?;
            let l2 = p.v_l2();
            r.l2_v = Some(l2);
            r.quotient = Some(r.seminorm / l2);
            Ok(r)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table: Table = vec![["seed", "degU", "degR", "l2_v", "seminorm", "quotient", "stable"].map(String::from).to_vec()];
    let mut cases = Vec::new();
    for (p, r) in list.iter().zip(&reports) {
        table.push(vec![
            p.seed.to_string(),
            p.u.degree().unwrap_or(0).to_string(),
            p.r.degree().unwrap_or(0).to_string(),
            r.l2_v.unwrap_or(f64::NAN).to_string(),
            r.seminorm.to_string(),
            r.quotient.unwrap_or(f64::NAN).to_string(),
            r.stable.to_string(),
        ]);
        let mut j = holder_json(r);
        j["seed"] = json!(p.seed);
        j["u"] = json!(p.u.to_string());
        j["R"] = json!(p.r.to_string());
        cases.push(j);
    }
    Ok(Output {
        json: json!({
            "N0": c.n0()?,
            "m": c.m(),
            "alpha": exact::fraction_string(&alpha),
            "grid": {"side": grid.side, "h": grid.h()},
            "reports": cases,
        }),
        csv: Some(table),
        svg: None,
    })
}

pub fn uniformity(c: &RunConfig) -> Result<Output, CliError> {
    let alpha = c.alpha()?;
    let cells = c.cells_or("256")?[0];
    let grid = spec(c, cells)?;
    let r = uniformity_experiment(c.n0()?, c.m(), c.samples.unwrap_or(100), &alpha, c.seed(), grid)?;
    let mut table: Table = vec![["seed", "degU", "degR", "l2_v", "seminorm", "refined_seminorm", "quotient"].map(String::from).to_vec()];
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|p| {
            table.push(vec![
                p.seed.to_string(),
                p.deg_u.to_string(),
                p.deg_r.to_string(),
                p.l2_v.to_string(),
                p.seminorm.to_string(),
                p.refined_seminorm.to_string(),
                p.quotient.to_string(),
            ]);
            json!({
                "seed": p.seed,
                "attempts": p.attempts,
                "degU": p.deg_u,
                "degR": p.deg_r,
                "l2_v": p.l2_v,
                "seminorm": p.seminorm,
                "refined_seminorm": p.refined_seminorm,
                "quotient": p.quotient,
            })
        })
        .collect();
    Ok(Output {
        json: json!({
            "N0": r.n0,
            "m": r.m,
            "alpha": exact::fraction_string(&r.alpha),
            "grid": {"side": r.grid.side, "h": r.grid.h()},
            "pairs": pairs,
            "max_quotient": r.max_quotient,
            "refined_max_quotient": r.refined_max_quotient,
            "stability": r.stability,
            "stable": r.stable,
        }),
        csv: Some(table),
        svg: None,
    })
}
