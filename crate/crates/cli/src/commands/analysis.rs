use nodalkit::corpus::{planar_corpus, random_harmonic, random_rational};
use nodalkit::exact::{self, Rational};
use nodalkit::frequency::{self as freq, FrequencyProfile};
use nodalkit::nodal::{self, NodalReport, SingularPoint};
use nodalkit::poly::{FloatPoly, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{measure, rational, rationals, Output, Table};
use crate::svg::render_svg;
use crate::CliError;

const DEFAULT_LADDER: &str = "1/64,1/16,1/4,1,4,16,64";

/// Independent generator for corpus item `i`.
fn item_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

fn corpus_size(c: &RunConfig) -> Result<usize, CliError> {
    match c.corpus {
        Some(0) => Err(CliError::Config("corpus: must be positive".into())),
        Some(n) => Ok(n),
        None => Err(CliError::Config("poly: required (or give corpus)".into())),
    }
}

fn fractions(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(exact::fraction_string).collect()
}

fn singular_json(points: &[SingularPoint]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                json!({
                    "x": p.x,
                    "y": p.y,
                    "exact": p.exact.as_ref().map(|e| fractions(e)),
                    "order": p.order,
                    "residual": p.residual,
                })
            })
            .collect(),
    )
}

pub fn frequency(c: &RunConfig) -> Result<Output, CliError> {
    let radii = c.radii_or(DEFAULT_LADDER)?;
    if c.poly.is_none() {
        return frequency_corpus(c, &radii);
    }
    let u = c.polynomial()?;
    let center = c.center()?;
    let curve = freq::frequency_curve(&u, &center, &radii)?;
    let profile = FrequencyProfile::new(&u, &center)?;
    let order = freq::vanishing_order(&u, &center)?;
    let centre_text = fractions(&center).join(",");
    let mut table: Table = vec![["center", "r", "N", "N_float"].map(String::from).to_vec()];
    for (r, n) in curve.radii.iter().zip(&curve.values) {
        table.push(vec![centre_text.clone(), exact::fraction_string(r), exact::fraction_string(n), exact::to_f64(n).to_string()]);
    }
    let json = json!({
        "poly": u.to_string(),
        "center": fractions(&center),
        "radii": fractions(&curve.radii),
        "N": rationals(&curve.values),
        "monotone": curve.monotone,
        "limit_at_zero": profile.limit_at_zero().as_ref().map(rational),
        "limit_at_infinity": profile.limit_at_infinity().as_ref().map(rational),
        "vanishing_order": order.order,
        "leading_part": order.leading_part.to_string(),
    });
    Ok(Output { json, csv: Some(table), svg: None })
}

/// Random harmonic `u` with random rational centres, and (every other case)
/// `u` built to vanish to a prescribed order at the origin.
fn frequency_corpus(c: &RunConfig, radii: &[Rational]) -> Result<Output, CliError> {
    let n = corpus_size(c)?;
    let dim = c.dim()?;
    let max_deg = c.degree.unwrap_or(4).max(1);
    let seed = c.seed();
    let cases = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let deg = rng.random_range(1..=max_deg);
            let (u, center) = if i % 2 == 0 {
                let low = rng.random_range(1..=deg);
                (random_harmonic(&mut rng, dim, low, deg), vec![Rational::from_integer(0.into()); dim])
            } else {
                let u = random_harmonic(&mut rng, dim, 0, deg);
                let center: Vec<Rational> = (0..dim).map(|_| random_rational(&mut rng, 1, 4)).collect();
                (u, center)
            };
            let curve = freq::frequency_curve(&u, &center, radii)?;
            let profile = FrequencyProfile::new(&u, &center)?;
            let order = freq::vanishing_order(&u, &center)?.order;
            let limit = profile.limit_at_zero();
            let limit_ok = limit.as_ref() == Some(&Rational::from_integer(order.into()));
            Ok(json!({
                "poly": u.to_string(),
                "center": fractions(&center),
                "N": fractions(&curve.values),
                "monotone": curve.monotone,
                "vanishing_order": order,
                "limit_at_zero": limit.as_ref().map(exact::fraction_string),
                "limit_matches_order": limit_ok,
            }))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    let monotone = cases.iter().filter(|c| c["monotone"] == true).count();
    let limits = cases.iter().filter(|c| c["limit_matches_order"] == true).count();
    let vanishing = cases.iter().filter(|c| c["vanishing_order"].as_u64().unwrap_or(0) >= 1).count();
    let mut table: Table = vec![["case", "center", "r", "N"].map(String::from).to_vec()];
    for (i, case) in cases.iter().enumerate() {
        for (r, v) in radii.iter().zip(case["N"].as_array().into_iter().flatten()) {
            table.push(vec![i.to_string(), case["center"].to_string(), exact::fraction_string(r), v.as_str().unwrap_or("").into()]);
        }
    }
    let json = json!({
        "seed": seed,
        "radii": fractions(radii),
        "cases": cases,
        "summary": {
            "cases": n,
            "monotone": monotone,
            "limit_matches": limits,
            "vanishing_cases": vanishing,
            "pass": monotone == n && limits == n,
        },
    });
    Ok(Output { json, csv: Some(table), svg: None })
}

pub fn doubling(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let center = c.center()?;
    let mut radii = c.radii_or("1/4,1/2,1")?;
    radii.sort();
    if radii.len() < 2 {
        return Err(CliError::Config("radii: need at least two".into()));
    }
    let reports = radii
        .windows(2)
        .map(|w| freq::doubling_check(&u, &center, &w[0], &w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Output::json(json!({
        "polynomial": u.to_string(),
        "center": fractions(&center),
        "radii": fractions(&radii),
        "witness": reports.iter().map(|r| r.witness).collect::<Vec<_>>(),
        "bound": reports.iter().map(|r| r.bound).collect::<Vec<_>>(),
        "frequency_outer": reports.iter().map(|r| rational(&r.frequency_outer)).collect::<Vec<_>>(),
        "pass": reports.iter().all(|r| r.pass()),
    })))
}

pub fn blowup(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let center = c.center()?;
    let r = c.radius_or("1")?;
    let b = freq::blow_up(&u, &center, &r)?;
    let coefficients: Vec<Value> = b
        .normalized_coefficients()
        .into_iter()
        .map(|(m, v)| json!({"exponents": m.exponents(), "value": v}))
        .collect();
    Ok(Output::json(json!({
        "poly": u.to_string(),
        "center": fractions(&center),
        "radius": exact::fraction_string(&r),
        "rescaled": b.rescaled.to_string(),
        "normalization": measure(&b.normalization),
        "normalized_coefficients": coefficients,
        "frequency_at_1": rational(&b.frequency(&Rational::from_integer(1.into()))?),
    })))
}

fn blowdown_case(u: &Polynomial, radii: &[Rational]) -> Result<Value, CliError> {
    let b = freq::blow_down_degree(u, radii)?;
    let deg = u.degree().unwrap_or(0);
    let last = exact::to_f64(b.values.last().expect("nonempty radii"));
    Ok(json!({
        "poly": u.to_string(),
        "degree": deg,
        "blow_down_degree": b.degree,
        "matches": b.degree == deg,
        "N_last": last,
        "gap": rational(&b.gap),
        "monotone": b.monotone,
        "within_tolerance": (last - f64::from(deg)).abs() < 1e-2,
    }))
}

pub fn blowdown(c: &RunConfig) -> Result<Output, CliError> {
    let radii = c.radii_or("1,10,100,1000")?;
    if c.poly.is_some() {
        let u = c.polynomial()?;
        return Ok(Output::json(blowdown_case(&u, &radii)?));
    }
    let n = corpus_size(c)?;
    let dim = c.dim()?;
    let max_deg = c.degree.unwrap_or(5).max(1);
    let seed = c.seed();
    let cases = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let deg = rng.random_range(1..=max_deg);
            blowdown_case(&random_harmonic(&mut rng, dim, 0, deg), &radii)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let matches = cases.iter().filter(|c| c["matches"] == true).count();
    let within = cases.iter().filter(|c| c["within_tolerance"] == true).count();
    Ok(Output::json(json!({
        "seed": seed,
        "radii": fractions(&radii),
        "cases": cases,
        "summary": {"cases": n, "matches": matches, "within_tolerance": within, "pass": matches == n && within == n},
    })))
}

fn portrait(u: &Polynomial, radius: f64, resolution: usize, singular: &[SingularPoint]) -> String {
    let segments = if u.is_constant() { Vec::new() } else { nodal::nodal_segments(&FloatPoly::from(u), radius, resolution) };
    let inside: Vec<SingularPoint> = singular.iter().filter(|p| p.x.hypot(p.y) <= radius).cloned().collect();
    render_svg(radius, &segments, &inside)
}

pub fn singular(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let points = nodal::singular_points(&u)?;
    let reach = points.iter().map(|p| p.x.hypot(p.y)).fold(0.0, f64::max);
    let radius = (1.25 * reach).max(1.0);
    Ok(Output {
        json: json!({"poly": u.to_string(), "singular": singular_json(&points)}),
        csv: None,
        svg: Some(portrait(&u, radius, 256, &points)),
    })
}

pub fn count(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let radius = c.radius_or("1")?;
    let resolution = c.resolution_or(128)?;
    let d = nodal::count_domains(&u, &radius, resolution)?;
    Ok(Output::json(json!({
        "poly": u.to_string(),
        "radius": exact::fraction_string(&radius),
        "count": d.count,
        "resolution": d.resolution,
        "history": d.history,
    })))
}

fn euler_json(r: &NodalReport, u: &Polynomial) -> Value {
    let n = r.n_infinity as usize;
    let k = r.k_floodfill;
    json!({
        "poly": r.poly,
        "degree": r.degree,
        "n_infinity": r.n_infinity,
        "k_floodfill": k,
        "k_formula": r.k_formula,
        "singular": singular_json(&r.singular_points),
        "radius": r.radius,
        "resolution": r.resolution,
        "pass": r.pass(),
        "lower_ok": k <= 2 * n,
        "upper_ok": n < k,
        "homogeneous": u.is_homogeneous(),
        "shifted": !u.constant_term().eq(&Rational::from_integer(0.into())),
        "note": r.regular_vertices_note,
    })
}

pub fn euler(c: &RunConfig) -> Result<Output, CliError> {
    let resolution = c.resolution_or(128)?;
    let polys = match &c.poly {
        Some(_) => c.polynomials()?,
        None => {
            let n = corpus_size(c)?;
            planar_corpus(&mut ChaCha8Rng::seed_from_u64(c.seed()), n, c.degree.unwrap_or(5).max(1))
        }
    };
    if c.dim()? != 2 {
        return Err(CliError::Config("dimension: euler needs 2".into()));
    }
    let mut table: Table = vec![["poly", "k_floodfill", "k_formula", "n_infinity", "resolved", "pass"].map(String::from).to_vec()];
    let row = |u: &Polynomial, v: &Value| {
        vec![
            u.to_string(),
            v["k_floodfill"].to_string(),
            v["k_formula"].to_string(),
            v["n_infinity"].to_string(),
            "true".into(),
            v["pass"].to_string(),
        ]
    };
    if polys.len() == 1 && c.poly.is_some() {
        let r = nodal::euler_check(&polys[0], resolution)?;
        let svg = portrait(&polys[0], r.radius, 256, &r.singular_points);
        let json = euler_json(&r, &polys[0]);
        table.push(row(&polys[0], &json));
        return Ok(Output { json, csv: Some(table), svg: Some(svg) });
    }
    let results: Vec<Result<Value, CliError>> = polys
        .par_iter()
        .map(|u| nodal::euler_check(u, resolution).map(|r| euler_json(&r, u)).map_err(CliError::from))
        .collect();
    let mut cases = Vec::new();
    for (u, r) in polys.iter().zip(results) {
        match r {
            Ok(v) => {
                table.push(row(u, &v));
                cases.push(v);
            }
            Err(CliError::Config(e)) => return Err(CliError::Config(e)),
            Err(e) => {
                table.push(vec![u.to_string(), String::new(), String::new(), String::new(), "false".into(), "false".into()]);
                cases.push(json!({"poly": u.to_string(), "resolved": false, "error": e.to_string()}));
            }
        }
    }
    let resolved: Vec<&Value> = cases.iter().filter(|c| c.get("error").is_none()).collect();
    let agree = resolved.iter().filter(|c| c["pass"] == true).count();
    let lower = resolved.iter().filter(|c| c["lower_ok"] == true).count();
    let upper = resolved.iter().filter(|c| c["upper_ok"] == true).count();
    let homogeneous: Vec<&&Value> = resolved.iter().filter(|c| c["homogeneous"] == true).collect();
    let homogeneous_eq = homogeneous.iter().filter(|c| c["k_floodfill"].as_u64() == c["n_infinity"].as_u64().map(|n| 2 * n)).count();
    let sard: Vec<&&Value> = resolved
        .iter()
        .filter(|c| c["shifted"] == true && c["singular"].as_array().is_some_and(|s| s.is_empty()))
        .collect();
    let sard_eq = sard.iter().filter(|c| c["k_floodfill"].as_u64() == c["n_infinity"].as_u64().map(|n| n + 1)).count();
    let rate = resolved.len() as f64 / cases.len() as f64;
    let summary = json!({
        "cases": cases.len(),
        "resolved": resolved.len(),
        "resolved_rate": rate,
        "agree": agree,
        "lower_ok": lower,
        "upper_ok": upper,
        "homogeneous": homogeneous.len(),
        "homogeneous_equality": homogeneous_eq,
        "sard_shifted": sard.len(),
        "sard_equality": sard_eq,
        "pass": agree == resolved.len() && rate >= 0.9 && lower == resolved.len() && upper == resolved.len(),
    });
    Ok(Output { json: json!({"resolution": resolution, "cases": cases, "summary": summary}), csv: Some(table), svg: None })
}

pub fn length(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let radius = c.radius_or("1")?;
    let resolution = c.resolution_or(64)?;
    let l = nodal::nodal_length(&u, &radius, resolution)?;
    Ok(Output::json(json!({"poly": u.to_string(), "radius": exact::fraction_string(&radius), "length": l})))
}

pub fn render(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    if u.dim() != 2 {
        return Err(CliError::Config("dimension: render needs 2".into()));
    }
    let radius = exact::to_f64(&c.radius_or("1")?);
    let resolution = c.resolution_or(256)?;
    let points = if u.is_constant() { Vec::new() } else { nodal::singular_points(&u)? };
    let svg = portrait(&u, radius, resolution, &points);
    Ok(Output {
        json: json!({"poly": u.to_string(), "radius": radius, "singular": singular_json(&points), "svg": svg}),
        csv: None,
        svg: Some(svg),
    })
}
