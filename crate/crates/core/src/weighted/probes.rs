use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::quadrature::{gauss_legendre, gauss_unit, polar_midpoint, BallRule};
use super::{
    branch_of, sobolev_exponents, Branch, Integrability, ProbeCase, ProbeReport, WeightedError,
};
use crate::corpus::random_rational;
use crate::exact::{self, int, Rational};
use crate::field::ScalarField;
use crate::poly::{FloatPoly, Monomial, Polynomial};

/// Exclusion ladder for `{|u| < delta}`.
pub const DELTAS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Largest relative gap between the extrapolated ladder value and the
/// direct integral for the ladder to count as converged.
const LADDER_TOL: f64 = 1e-2;
/// Inequality tolerance of the probes.
const PROBE_TOL: f64 = 0.02;
/// Relative accuracy requested from the adaptive angular panels.
const RULE_TOL: f64 = 1e-6;
const SOBOLEV_RADIUS: f64 = 0.875;

/// Bound on vanishing orders used for `aS`: a harmonic polynomial never
/// vanishes to order above its degree.
pub fn nbar0(u: &Polynomial) -> Rational {
    int(u.degree().unwrap_or(0).max(1) as i64)
}

fn check_dim(u: &Polynomial) -> Result<usize, WeightedError> {
    match u.dim() {
        2 | 3 => Ok(u.dim()),
        d => Err(WeightedError::InvalidDimension(d)),
    }
}

fn check_harmonic(u: &Polynomial) -> Result<(), WeightedError> {
    if u.is_zero() {
        return Err(WeightedError::ZeroPolynomial);
    }
    if !u.is_harmonic() {
        return Err(WeightedError::NotHarmonic);
    }
    Ok(())
}

struct Ladder {
    direct: BallRule,
    cuts: Vec<BallRule>,
    stable: bool,
}

impl Ladder {
    fn build(u: &FloatPoly, degree: usize, center: &[f64], radius: f64, exponent: f64, with_cuts: bool) -> Ladder {
        match center.len() {
            2 => {
                let c = [center[0], center[1]];
                let deltas: &[f64] = if with_cuts { &DELTAS } else { &[] };
                let (direct, stable) = BallRule::planar(u, degree, c, radius, 0.0, exponent, RULE_TOL);
                let cuts: Vec<(BallRule, bool)> = deltas
                    .par_iter()
                    .map(|&d| BallRule::planar(u, degree, c, radius, d, exponent, RULE_TOL))
                    .collect();
                let stable = stable && cuts.iter().all(|c| c.1);
                Ladder { direct, cuts: cuts.into_iter().map(|c| c.0).collect(), stable }
            }
            _ => {
                let c = [center[0], center[1], center[2]];
                let coarse = BallRule::spatial(u, c, radius, 0);
                let direct = BallRule::spatial(u, c, radius, 1);
                let (a, b) = (coarse.integrate(exponent, |_, _| 1.0), direct.integrate(exponent, |_, _| 1.0));
                let stable = (a - b).abs() <= 1e-3 * b.abs();
                Ladder { direct, cuts: Vec::new(), stable }
            }
        }
    }

    /// `int |u|^s f`: Richardson-extrapolated from the exclusion ladder with
    /// excluded mass `~ delta^order`, checked against the direct rule.
    fn integral<F>(&self, s: f64, order: f64, f: F) -> (f64, bool)
    where
        F: Fn(&[f64], f64) -> f64,
    {
        let direct = self.direct.integrate(s, &f);
        if self.cuts.len() < 2 {
            return (direct, self.stable);
        }
        let vals: Vec<f64> = self.cuts.iter().map(|r| r.integrate(s, &f)).collect();
        let q = 10f64.powf(-order);
        let n = vals.len();
        let extrapolated = (vals[n - 1] - q * vals[n - 2]) / (1.0 - q);
        let ok = self.stable && (extrapolated - direct).abs() <= LADDER_TOL * direct.abs() + 1e-14;
        (extrapolated, ok)
    }
}

fn float_gradient(p: &Polynomial) -> Vec<FloatPoly> {
    p.gradient().iter().map(FloatPoly::from).collect()
}

fn eval_norm_sq(grad: &[FloatPoly], x: &[f64]) -> f64 {
    grad.iter().map(|g| g.eval(x).powi(2)).sum()
}

/// Test functions `q (1 - |x|^2 / r^2)^2` with `q` a random polynomial of
/// degree at most 3.
pub fn test_functions(n: usize, radius: &Rational, count: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2 = radius * radius;
    let mut inner = Polynomial::one(n);
    for i in 0..n {
        inner = &inner - &Polynomial::var(n, i).pow(2).scale(&(int(1) / &r2));
    }
    let bump = inner.pow(2);
    let monomials = Monomial::all_up_to_degree(n, 3);
    (0..count)
        .map(|_| loop {
            let q = Polynomial::from_terms(n, monomials.iter().map(|m| (m.clone(), random_rational(&mut rng, 3, 2))))
                .expect("consistent dimensions");
            if !q.is_zero() {
                return &q * &bump;
            }
        })
        .collect()
}

/// Squared sharp constant `K` in `||w||_{2*}^2 <= K ||grad w||_2^2` on `R^n`.
pub fn talenti_constant(n: usize) -> f64 {
    assert!(n >= 3);
    let gamma_half = |k: usize| {
        // Gamma(k / 2)
        let (mut g, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt(), 0.5) };
        while x < k as f64 / 2.0 - 1e-9 {
            g *= x;
            x += 1.0;
        }
        g
    };
    let nf = n as f64;
    (gamma_half(2 * n) / gamma_half(n)).powf(2.0 / nf) / (std::f64::consts::PI * nf * (nf - 2.0))
}

/// Grid integrals of `|u|^a` on `B_{7/8}` with `64, 128, ...` radial cells,
/// classified by the decay of successive differences.
pub fn integrability_probe(u: &Polynomial, a: &Rational, refinements: usize) -> Result<ProbeReport, WeightedError> {
    let dim = check_dim(u)?;
    if u.is_zero() {
        return Err(WeightedError::ZeroPolynomial);
    }
    if !(3..=6).contains(&refinements) {
        return Err(WeightedError::InvalidParameter(format!("refinements must be in 3..=6, got {refinements}")));
    }
    let fu = FloatPoly::from(u);
    let af = exact::to_f64(a);
    let weight = |p: &[f64]| {
        let v = fu.eval(p);
        if af == 0.0 {
            1.0
        } else if v == 0.0 {
            0.0
        } else {
            v.abs().powf(af)
        }
    };
    let sizes: Vec<usize> = (0..refinements).map(|k| 64usize << k).collect();
    let values: Vec<f64> = sizes.iter().map(|&n| polar_midpoint(dim, 0.875, n, weight)).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut cases = Vec::new();
    for k in 1..diffs.len() {
        let ratio = if diffs[k] <= 1e-12 * values[k + 1].abs() { 0.0 } else { diffs[k] / diffs[k - 1] };
        cases.push(ProbeCase { id: format!("cells={}", sizes[k + 1]), lhs: values[k + 1], rhs: diffs[k], ratio });
    }
    let ratios: Vec<f64> = cases.iter().map(|c| c.ratio).collect();
    let last = *ratios.last().unwrap();
    let tail = &ratios[ratios.len().saturating_sub(2)..];
    let classification = if tail.iter().all(|&q| q < 0.9) {
        Integrability::Convergent
    } else if last >= 0.95 {
        Integrability::Divergent
    } else {
        Integrability::Inconclusive
    };
    let nb = nbar0(u);
    let mut report = ProbeReport::finish("integrability", a, &nb, cases, Some(0.9), classification != Integrability::Inconclusive);
    report.classification = Some(classification);
    report.pass = classification == Integrability::Convergent;
    Ok(report)
}

/// Largest `avg_B |u|^a * avg_B |u|^{-a}` over the ball `B_{7/8}` and
/// `ball_samples` random balls inside it.
pub fn muckenhoupt_estimate(u: &Polynomial, a: &Rational, ball_samples: usize, seed: u64) -> Result<ProbeReport, WeightedError> {
    let dim = check_dim(u)?;
    if u.is_zero() {
        return Err(WeightedError::ZeroPolynomial);
    }
    let nb = nbar0(u);
    if branch_of(a, &nb) != Branch::Muckenhoupt {
        return Err(WeightedError::WrongBranch { a: a.clone(), expected: "muckenhoupt" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut balls = vec![(vec![0.0; dim], 0.875)];
    while balls.len() < ball_samples + 1 {
        let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.875..0.875)).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let room = 0.875 - norm;
        if room < 1e-3 {
            continue;
        }
        let t: f64 = rng.random_range(0.0..1.0);
        balls.push((c, (room * t * t).max(1e-3)));
    }
    let fu = FloatPoly::from(u);
    let deg = u.degree().unwrap_or(0) as usize;
    let af = exact::to_f64(a);
    let results: Vec<(ProbeCase, bool)> = balls
        .par_iter()
        .enumerate()
        .map(|(i, (c, r))| {
            let ladder = Ladder::build(&fu, deg, c, *r, -af.abs(), false);
            let vol = ladder.direct.integrate(0.0, |_, _| 1.0);
            let plus = ladder.direct.integrate(af, |_, _| 1.0) / vol;
            let minus = ladder.direct.integrate(-af, |_, _| 1.0) / vol;
            let id = format!("ball{i} c=({}) r={r:.4}", c.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(","));
            (ProbeCase { id, lhs: plus, rhs: minus, ratio: plus * minus }, ladder.stable)
        })
        .collect();
    let converged = results.iter().all(|(_, ok)| *ok);
    let cases = results.into_iter().map(|(c, _)| c).collect();
    Ok(ProbeReport::finish("muckenhoupt", a, &nb, cases, None, converged))
}

/// `F(s) = int_{eps^2}^{min(eps, s)} t^{a-2} dt` for `s > eps^2`, else 0.
fn capacity_primitive(s: f64, a: f64, eps: f64) -> f64 {
    let lo = eps * eps;
    if s <= lo {
        return 0.0;
    }
    let hi = s.min(eps);
    if a == 1.0 {
        (hi / lo).ln()
    } else {
        (hi.powf(a - 1.0) - lo.powf(a - 1.0)) / (a - 1.0)
    }
}

/// `E(eps) = log(eps)^{-2} int_{eps^2 <= |u| <= eps} |u|^{a-2} |grad u|^2` over
/// `B_1`. By the coarea formula and the divergence theorem on `{u > t}` the
/// level-set fluxes equal boundary integrals of `d_r u`, which reduces `E`
/// to a single integral over the unit sphere. Returns the value and whether
/// the sphere quadrature stabilised.
pub fn capacity_energy(u: &Polynomial, a: f64, eps: f64) -> (f64, bool) {
    let dim = u.dim();
    let fu = FloatPoly::from(u);
    let grad = float_gradient(u);
    let scale = eps.ln().powi(2);
    let gl = gauss_unit(8);
    if dim == 2 {
        let ring = |n: usize| ring_flux(&fu, &grad, &gl, a, eps, n, |t| [t.cos(), t.sin(), 0.0]);
        let mut prev = ring(4096);
        for k in 1..=6 {
            let next = ring(4096 << k);
            if (next - prev).abs() <= 1e-9 * next.abs().max(1e-300) {
                return (next / scale, true);
            }
            prev = next;
        }
        return (prev / scale, false);
    }
    // Gauss nodes in the polar cosine, each latitude ring split like the circle
    let eval = |level: u32| {
        gauss_legendre(32 << level)
            .par_iter()
            .map(|&(ct, wc)| {
                let st = (1.0 - ct * ct).sqrt();
                wc * ring_flux(&fu, &grad, &gl, a, eps, 256, |t| [st * t.cos(), st * t.sin(), ct])
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum::<f64>()
    };
    let mut prev = eval(0);
    for level in 1..=4 {
        let next = eval(level);
        if (next - prev).abs() <= 1e-6 * next.abs().max(1e-300) {
            return (next / scale, true);
        }
        prev = next;
    }
    (prev / scale, false)
}

/// Flux integral over a closed ring `t -> at(t)` on the unit sphere, on `n`
/// equal arcs each split where `u` crosses `±eps` or `±eps^2`, with a Gauss
/// rule on every piece.
fn ring_flux<P>(fu: &FloatPoly, grad: &[FloatPoly], gl: &[(f64, f64)], a: f64, eps: f64, n: usize, at: P) -> f64
where
    P: Fn(f64) -> [f64; 3] + Sync,
{
    let dim = fu.dim();
    let levels = [-eps, -eps * eps, eps * eps, eps];
    let value = |t: f64| fu.eval(&at(t)[..dim]);
    let integrand = |t: f64| {
        let p = at(t);
        let x = &p[..dim];
        let v = fu.eval(x);
        let dr: f64 = grad.iter().zip(x).map(|(g, xi)| g.eval(x) * xi).sum();
        dr * (capacity_primitive(v, a, eps) - capacity_primitive(-v, a, eps))
    };
    let dt = 2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .into_par_iter()
        .map(|j| {
            let (t0, t1) = (j as f64 * dt, (j + 1) as f64 * dt);
            let (v0, v1) = (value(t0), value(t1));
            let mut cuts = vec![t0, t1];
            for c in levels {
                if (v0 - c) * (v1 - c) < 0.0 {
                    let (mut lo, mut hi) = (t0, t1);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if (value(mid) - c) * (v0 - c) > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    cuts.push(0.5 * (lo + hi));
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.windows(2)
                .map(|w| gl.iter().map(|&(x, wt)| wt * (w[1] - w[0]) * integrand(w[0] + x * (w[1] - w[0]))).sum::<f64>())
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// Capacity-cutoff energies along a decreasing `eps` ladder; each case
/// compares `E(eps_i)` with `E(eps_{i-1})` and passes when strictly smaller.
pub fn capacity_decay(u: &Polynomial, a: &Rational, epsilons: &[f64]) -> Result<ProbeReport, WeightedError> {
    check_dim(u)?;
    check_harmonic(u)?;
    if *a < int(1) {
        return Err(WeightedError::WrongBranch { a: a.clone(), expected: "a >= 1" });
    }
    if epsilons.len() < 2 || epsilons.windows(2).any(|w| !(w[1] < w[0])) || epsilons.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(WeightedError::InvalidParameter("epsilons must be strictly decreasing in (0, 1)".into()));
    }
    let af = exact::to_f64(a);
    let energies: Vec<(f64, bool)> = epsilons.iter().map(|&e| capacity_energy(u, af, e)).collect();
    let cases = (1..energies.len())
        .map(|i| ProbeCase {
            id: format!("eps={:e}", epsilons[i]),
            lhs: energies[i].0,
            rhs: energies[i - 1].0,
            ratio: energies[i].0 / energies[i - 1].0,
        })
        .collect();
    let converged = energies.iter().all(|e| e.1);
    let mut report = ProbeReport::finish("capacity", a, &nbar0(u), cases, Some(1.0), converged);
    report.pass = report.pass && report.max_ratio < 1.0;
    Ok(report)
}

/// `((a-1)/2)^2 int |u|^{a-2} |grad u|^2 w^2` against `int |u|^a |grad w|^2`
/// over `B_1` for each test function.
pub fn hardy_probe(u: &Polynomial, a: &Rational, test_fns: &[Polynomial]) -> Result<ProbeReport, WeightedError> {
    let dim = check_dim(u)?;
    check_harmonic(u)?;
    if *a <= int(1) {
        return Err(WeightedError::WrongBranch { a: a.clone(), expected: "a > 1" });
    }
    check_test_dims(dim, test_fns)?;
    let af = exact::to_f64(a);
    let constant = ((af - 1.0) / 2.0).powi(2);
    let fu = FloatPoly::from(u);
    let gu = float_gradient(u);
    let ladder = Ladder::build(&fu, u.degree().unwrap() as usize, &vec![0.0; dim], 1.0, af - 2.0, true);
    let results: Vec<(ProbeCase, bool)> = test_fns
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let fw = FloatPoly::from(w);
            let gw = float_gradient(w);
            let (lhs, ok) = ladder.integral(af - 2.0, af - 1.0, |p, _| eval_norm_sq(&gu, p) * fw.eval(p).powi(2));
            let lhs = constant * lhs;
            let rhs = ladder.direct.integrate(af, |p, _| eval_norm_sq(&gw, p));
            (ProbeCase { id: format!("w{i}"), lhs, rhs, ratio: lhs / rhs }, ok)
        })
        .collect();
    let converged = ladder.stable && results.iter().all(|(_, ok)| *ok);
    let cases = results.into_iter().map(|(c, _)| c).collect();
    Ok(ProbeReport::finish("hardy", a, &nbar0(u), cases, Some(1.0 + PROBE_TOL), converged))
}

fn check_test_dims(dim: usize, test_fns: &[Polynomial]) -> Result<(), WeightedError> {
    if test_fns.is_empty() {
        return Err(WeightedError::InvalidParameter("no test functions".into()));
    }
    for w in test_fns {
        if w.dim() != dim {
            return Err(crate::poly::PolyError::DimensionMismatch { expected: dim, found: w.dim() }.into());
        }
    }
    Ok(())
}

/// Empirical weighted Sobolev ratios
/// `(int |u|^a |w|^p)^{2/p} / int |u|^a |grad w|^2` on `B_{7/8}` with `p` the
/// exponent from [`sobolev_exponents`].
pub fn sobolev_probe(u: &Polynomial, a: &Rational, test_fns: &[Polynomial]) -> Result<ProbeReport, WeightedError> {
    let dim = check_dim(u)?;
    if u.is_zero() {
        return Err(WeightedError::ZeroPolynomial);
    }
    check_test_dims(dim, test_fns)?;
    let nb = nbar0(u);
    let exps = sobolev_exponents(dim, a, &nb)?;
    let p = exps
        .probe_exponent()
        .ok_or_else(|| WeightedError::WrongBranch { a: a.clone(), expected: "muckenhoupt or superdegenerate" })?;
    let p = exact::to_f64(&p);
    let af = exact::to_f64(a);
    let fu = FloatPoly::from(u);
    let ladder = Ladder::build(&fu, u.degree().unwrap() as usize, &vec![0.0; dim], SOBOLEV_RADIUS, af.min(0.0), af < 0.0);
    let results: Vec<(ProbeCase, bool)> = test_fns
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let fw = FloatPoly::from(w);
            let gw = float_gradient(w);
            let (top, ok1) = ladder.integral(af, af + 1.0, |x, _| fw.eval(x).abs().powf(p));
            let (rhs, ok2) = ladder.integral(af, af + 1.0, |x, _| eval_norm_sq(&gw, x));
            let lhs = top.powf(2.0 / p);
            (ProbeCase { id: format!("w{i}"), lhs, rhs, ratio: lhs / rhs }, ok1 && ok2)
        })
        .collect();
    let bound = (a.is_zero() && dim >= 3).then(|| talenti_constant(dim) * (1.0 + PROBE_TOL));
    let converged = ladder.stable && results.iter().all(|(_, ok)| *ok);
    let cases = results.into_iter().map(|(c, _)| c).collect();
    Ok(ProbeReport::finish("sobolev", a, &nb, cases, bound, converged))
}

/// `sup_{B_rho} |w|` against `((r - rho)^{-alpha} int_{B_r} |u|^a |w|^p)^{1/p}`
/// with `alpha` the local-boundedness exponent for `(n, a, nbar0(u))`.
pub fn moser_bound_probe(
    u: &Polynomial,
    a: &Rational,
    w: &dyn ScalarField,
    rho: &Rational,
    r: &Rational,
    p: &Rational,
) -> Result<ProbeReport, WeightedError> {
    let dim = check_dim(u)?;
    if u.is_zero() {
        return Err(WeightedError::ZeroPolynomial);
    }
    if w.dim() != dim {
        return Err(crate::poly::PolyError::DimensionMismatch { expected: dim, found: w.dim() }.into());
    }
    if !(rho.is_positive() && rho < r && *r < crate::exact::rat(7, 8)) {
        return Err(WeightedError::InvalidParameter("need 0 < rho < r < 7/8".into()));
    }
    if !p.is_positive() {
        return Err(WeightedError::InvalidParameter("p must be positive".into()));
    }
    let nb = nbar0(u);
    let exps = sobolev_exponents(dim, a, &nb)?;
    let alpha = exps
        .alpha_moser
        .clone()
        .ok_or_else(|| WeightedError::WrongBranch { a: a.clone(), expected: "muckenhoupt or superdegenerate" })?;
    let (rhof, rf, pf, af) = (exact::to_f64(rho), exact::to_f64(r), exact::to_f64(p), exact::to_f64(a));
    let sup = sup_on_ball(w, dim, rhof)?;
    let fu = FloatPoly::from(u);
    let ladder = Ladder::build(&fu, u.degree().unwrap() as usize, &vec![0.0; dim], rf, af.min(0.0), af < 0.0);
    let (integral, ok) = ladder.integral(af, af + 1.0, |x, _| w.value(x).abs().powf(pf));
    if !integral.is_finite() {
        return Err(WeightedError::Field(f64::NAN, f64::NAN));
    }
    let rhs = ((rf - rhof).powf(-exact::to_f64(&alpha)) * integral).powf(1.0 / pf);
    let case = ProbeCase {
        id: format!("rho={} r={} p={}", exact::fraction_string(rho), exact::fraction_string(r), exact::fraction_string(p)),
        lhs: sup,
        rhs,
        ratio: sup / rhs,
    };
    Ok(ProbeReport::finish("moser", a, &nb, vec![case], None, ladder.stable && ok))
}

fn sup_on_ball(w: &dyn ScalarField, dim: usize, radius: f64) -> Result<f64, WeightedError> {
    let mut points: Vec<Vec<f64>> = vec![vec![0.0; dim]];
    let (nr, nt) = if dim == 2 { (96, 384) } else { (32, 96) };
    for i in 1..=nr {
        let r = radius * i as f64 / nr as f64;
        for j in 0..nt {
            let t = 2.0 * std::f64::consts::PI * j as f64 / nt as f64;
            if dim == 2 {
                points.push(vec![r * t.cos(), r * t.sin()]);
            } else {
                for k in 0..=nt / 4 {
                    let s = std::f64::consts::PI * k as f64 / (nt / 4) as f64;
                    points.push(vec![r * s.sin() * t.cos(), r * s.sin() * t.sin(), r * s.cos()]);
                }
            }
        }
    }
    let mut sup: f64 = 0.0;
    for p in &points {
        let v = w.value(p);
        if !v.is_finite() {
            return Err(WeightedError::Field(p[0], p[1]));
        }
        sup = sup.max(v.abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::poly::parse_polynomial;
    use std::f64::consts::PI;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    fn bump(dim: usize) -> Polynomial {
        let s = if dim == 2 { "(1 - x^2 - y^2)^2" } else { "(1 - x^2 - y^2 - z^2)^2" };
        parse_polynomial(s, dim).unwrap()
    }

    #[test]
    fn integrability_examples() {
        let r = integrability_probe(&p("x"), &rat(-1, 2), 5).unwrap();
        assert_eq!(r.classification, Some(Integrability::Convergent), "{:?}", r.cases);
        let r = integrability_probe(&p("x"), &int(-1), 5).unwrap();
        assert_eq!(r.classification, Some(Integrability::Divergent), "{:?}", r.cases);
        assert_eq!(r.branch, Branch::OutOfRange);
        let r = integrability_probe(&p("x^2 - y^2"), &rat(-2, 3), 5).unwrap();
        assert_eq!(r.classification, Some(Integrability::Convergent), "{:?}", r.cases);
        assert!(r.pass);
    }

    #[test]
    fn muckenhoupt_examples() {
        let r = muckenhoupt_estimate(&p("x"), &int(0), 8, 1).unwrap();
        assert!(r.cases.iter().all(|c| c.ratio == 1.0));
        let r = muckenhoupt_estimate(&p("x"), &rat(1, 2), 8, 1).unwrap();
        assert!(r.pass && r.max_ratio.is_finite() && r.max_ratio >= 1.0, "{r:?}");
        let r = muckenhoupt_estimate(&p("x^2 - y^2"), &rat(1, 2), 8, 2).unwrap();
        assert!(r.pass && r.max_ratio < 10.0, "{r:?}");
        assert!(muckenhoupt_estimate(&p("x^2 - y^2"), &int(1), 8, 2).is_err());
    }

    #[test]
    fn capacity_closed_form_line() {
        // u = x, a = 2: the shell is two strips of the unit disk
        let strip = |t: f64| t * (1.0 - t * t).sqrt() + t.asin();
        for eps in [1e-2, 1e-3, 1e-4] {
            let (e, ok) = capacity_energy(&p("x"), 2.0, eps);
            let want = 2.0 * (strip(eps) - strip(eps * eps)) / eps.ln().powi(2);
            assert!(ok && (e - want).abs() < 1e-6 * want, "{e} {want}");
        }
        let r = capacity_decay(&p("x"), &int(2), &DELTAS).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn capacity_matches_shell_quadrature() {
        // independent evaluation: difference of two cut ray rules
        let u = p("x^2 - y^2 + 1/3*x");
        let fu = FloatPoly::from(&u);
        let gu = float_gradient(&u);
        for (a, eps) in [(1.0, 1e-2), (2.0, 1e-2), (1.5, 1e-3)] {
            let outer = BallRule::planar(&fu, 2, [0.0, 0.0], 1.0, eps * eps, a - 2.0, 1e-6).0;
            let inner = BallRule::planar(&fu, 2, [0.0, 0.0], 1.0, eps, a - 2.0, 1e-6).0;
            let f = |x: &[f64], _| eval_norm_sq(&gu, x);
            let shell = outer.integrate(a - 2.0, f) - inner.integrate(a - 2.0, f);
            let want = shell / eps.ln().powi(2);
            let (got, ok) = capacity_energy(&u, a, eps);
            assert!(ok && (got - want).abs() < 1e-3 * want, "{a} {eps}: {got} {want}");
        }
        let r = capacity_decay(&p("x^2 - y^2"), &int(1), &DELTAS).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn capacity_rejects_bad_input() {
        assert!(capacity_decay(&p("x"), &rat(1, 2), &DELTAS).is_err());
        assert!(capacity_decay(&p("x"), &int(1), &[1e-3, 1e-2]).is_err());
        assert!(capacity_decay(&p("x^2"), &int(1), &DELTAS).is_err());
    }

    #[test]
    fn hardy_line_closed_form() {
        // lhs = (1/4) int (1-r^2)^4 = pi/20, rhs = int x^2 |grad w|^2 = 4 pi / 15
        let r = hardy_probe(&p("x"), &int(2), &[bump(2)]).unwrap();
        let c = &r.cases[0];
        assert!((c.lhs - PI / 20.0).abs() < 1e-8 && (c.rhs - 4.0 * PI / 15.0).abs() < 1e-8, "{c:?}");
        assert!((c.ratio - 3.0 / 16.0).abs() < 1e-8);
        assert!(r.pass);
    }

    #[test]
    fn hardy_family() {
        let u = p("x^3 - 3*x*y^2 + x*y");
        let mut fns = test_functions(2, &int(1), 6, 3);
        fns.push(&u * &bump(2));
        for a in [rat(3, 2), int(2), int(3)] {
            let r = hardy_probe(&u, &a, &fns).unwrap();
            assert!(r.pass && r.converged, "{a}: {r:?}");
        }
        assert!(hardy_probe(&u, &int(1), &fns).is_err());
    }

    #[test]
    fn sobolev_classical_three_d() {
        let u = parse_polynomial("x*y + z", 3).unwrap();
        let fns = test_functions(3, &rat(7, 8), 4, 5);
        let r = sobolev_probe(&u, &int(0), &fns).unwrap();
        assert!(r.pass && r.max_ratio < talenti_constant(3), "{r:?}");
        assert!((talenti_constant(3) - 0.182_5).abs() < 1e-3);
    }

    #[test]
    fn sobolev_scaling_and_degenerate_weight() {
        let u = p("2*x*y");
        let w = &p("x^2 - y^2") * &test_functions(2, &rat(7, 8), 1, 0)[0];
        let doubled = w.scale(&int(2));
        let r = sobolev_probe(&u, &int(2), &[w, doubled]).unwrap();
        assert!(r.pass && r.max_ratio.is_finite());
        assert!((r.cases[0].ratio - r.cases[1].ratio).abs() < 1e-12 * r.cases[0].ratio);
        let r = sobolev_probe(&p("x"), &rat(-1, 2), &test_functions(2, &rat(7, 8), 3, 1)).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn moser_constant_solution() {
        let u = p("2*x*y");
        let one = Polynomial::one(2);
        let r = moser_bound_probe(&u, &int(2), &one, &rat(1, 4), &rat(1, 2), &int(2)).unwrap();
        // alpha = 10; int_{B_1/2} 4 x^2 y^2 = pi / 384
        let want = (4f64.powi(10) * PI / 384.0).sqrt();
        let c = &r.cases[0];
        assert_eq!(c.lhs, 1.0);
        assert!((c.rhs - want).abs() < 1e-8 * want, "{c:?}");
        let w = p("2*x^2 - 2*y^2");
        let r2 = moser_bound_probe(&u, &int(2), &w, &rat(1, 4), &rat(1, 2), &int(2)).unwrap();
        let r4 = moser_bound_probe(&u, &int(2), &w, &rat(1, 4), &rat(1, 2), &int(4)).unwrap();
        assert!(r2.pass && r4.pass && r2.max_ratio > 0.0 && r4.max_ratio > 0.0);
        assert!(moser_bound_probe(&u, &int(2), &w, &rat(1, 2), &rat(1, 4), &int(2)).is_err());
    }
}
