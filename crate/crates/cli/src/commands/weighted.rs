use nodalkit::corpus::random_harmonic;
use nodalkit::exact::{self, rat, Rational};
use nodalkit::poly::{FloatPoly, Polynomial};
use nodalkit::weighted::{self as w, Exponent, ProbeReport, WeightedError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::report::{probe as probe_json, probe_rows, rational, Output, Table};
use crate::CliError;

fn optional_rational(q: &Option<Rational>) -> Value {
    q.as_ref().map(rational).unwrap_or(Value::Null)
}

pub fn exponents(c: &RunConfig) -> Result<Output, CliError> {
    let n = c.dim()?;
    let a = c.a()?;
    let nbar0 = match (&c.nbar0, &c.poly) {
        (Some(t), _) => crate::config::rational("Nbar0", t)?,
        (None, Some(_)) => w::nbar0(&c.polynomial()?),
        (None, None) => return Err(CliError::Config("Nbar0: required (or give poly)".into())),
    };
    let e = w::sobolev_exponents(n, &a, &nbar0)?;
    let two_star = match &e.two_star {
        Some(Exponent::Finite(q)) => rational(q),
        Some(Exponent::Unbounded) => json!("unbounded"),
        None => Value::Null,
    };
    Ok(Output::json(json!({
        "n": n,
        "a": exact::fraction_string(&a),
        "Nbar0": exact::fraction_string(&nbar0),
        "aS": exact::fraction_string(&e.a_s),
        "branch": e.branch.as_str(),
        "two_star": two_star,
        "gamma": optional_rational(&e.gamma),
        "alpha_moser": optional_rational(&e.alpha_moser),
        "probe_exponent": optional_rational(&e.probe_exponent()),
    })))
}

fn run_probe(command: Command, c: &RunConfig, u: &Polynomial, a: &Rational, seed: u64) -> Result<ProbeReport, WeightedError> {
    let n = u.dim();
    match command {
        Command::Integrability => w::integrability_probe(u, a, c.samples.unwrap_or(6)),
        Command::Muckenhoupt => w::muckenhoupt_estimate(u, a, c.samples.unwrap_or(200), seed),
        Command::Capacity => w::capacity_decay(u, a, &c.epsilons().expect("validated")),
        Command::Hardy => w::hardy_probe(u, a, &w::test_functions(n, &rat(1, 1), c.samples.unwrap_or(20), seed)),
        Command::Sobolev => w::sobolev_probe(u, a, &w::test_functions(n, &rat(7, 8), c.samples.unwrap_or(20), seed)),
        _ => unreachable!("not a probe command"),
    }
}

/// Weighted probes on one `u`, or on `corpus` harmonic polynomials vanishing
/// at the origin.
pub fn probe(command: Command, c: &RunConfig) -> Result<Output, CliError> {
    let a = c.a()?;
    c.epsilons()?;
    let seed = c.seed();
    let mut table = Table::new();
    if c.poly.is_some() {
        let u = c.polynomial()?;
        let r = run_probe(command, c, &u, &a, seed)?;
        probe_rows(&mut table, &u.to_string(), &r);
        let mut json = probe_json(&r);
        json["poly"] = json!(u.to_string());
        return Ok(Output { json, csv: Some(table), svg: None });
    }
    let n = c.corpus.ok_or_else(|| CliError::Config("poly: required (or give corpus)".into()))?;
    let dim = c.dim()?;
    let max_deg = c.degree.unwrap_or(3).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<Polynomial> = (0..n)
        .map(|_| {
            let deg = rng.random_range(1..=max_deg);
            random_harmonic(&mut rng, dim, 1, deg)
        })
        .collect();
    let mut cases = Vec::new();
    let mut pass = true;
    let mut converged = true;
    let mut max_ratio = f64::NEG_INFINITY;
    for (i, u) in polys.iter().enumerate() {
        let r = run_probe(command, c, u, &a, seed.wrapping_add(i as u64 + 1))?;
        probe_rows(&mut table, &u.to_string(), &r);
        pass &= r.pass;
        converged &= r.converged;
        max_ratio = max_ratio.max(r.max_ratio);
        let mut json = probe_json(&r);
        json["poly"] = json!(u.to_string());
        cases.push(json);
    }
    let json = json!({
        "probe": command.name(),
        "a": exact::fraction_string(&a),
        "seed": seed,
        "cases": cases,
        "summary": {"polynomials": n, "max_ratio": max_ratio, "converged": converged, "pass": pass},
    });
    Ok(Output { json, csv: Some(table), svg: None })
}

pub fn moser(c: &RunConfig) -> Result<Output, CliError> {
    let u = c.polynomial()?;
    let a = c.a()?;
    let field = c.optional_poly("field", &c.field)?.unwrap_or_else(|| Polynomial::one(u.dim()));
    let rho = c.rational_or("rho", &c.rho, "1/4")?;
    let r = c.radius_or("1/2")?;
    let p = c.rational_or("p", &c.p, "2")?;
    let report = w::moser_bound_probe(&u, &a, &FloatPoly::from(&field), &rho, &r, &p)?;
    let mut table = Table::new();
    probe_rows(&mut table, &u.to_string(), &report);
    let mut json = probe_json(&report);
    json["poly"] = json!(u.to_string());
    json["field"] = json!(field.to_string());
    Ok(Output { json, csv: Some(table), svg: None })
}
