use num_traits::Zero;

use super::resultant::resultant;
use super::NodalError;
use crate::exact::{self, Rational};
use crate::frequency::vanishing_order;
use crate::poly::univariate::UniPoly;
use crate::poly::{FloatPoly, Polynomial};

/// Residual bound for certified critical points.
pub const CERTIFY_TOL: f64 = 1e-10;
/// Scaled residual above which a candidate is simply not a critical point.
const REJECT_TOL: f64 = 1e-6;
const DEDUP_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    /// Exact location when it is a small-denominator rational point.
    pub exact: Option<[Rational; 2]>,
    /// `u` at the point (exact evaluation at the float location).
    pub value: f64,
    /// `max(|u|, |grad u|)` at the float location.
    pub residual: f64,
    /// Frobenius norm of the Hessian.
    pub hessian_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub x: f64,
    pub y: f64,
    pub exact: Option<[Rational; 2]>,
    pub order: u32,
    pub residual: f64,
}

fn to_exact(v: f64) -> Rational {
    Rational::from_float(v).expect("finite coordinate")
}

fn eval_exact(p: &Polynomial, x: f64, y: f64) -> f64 {
    exact::to_f64(&p.evaluate(&[to_exact(x), to_exact(y)]).expect("planar"))
}

fn coefficient_scale(p: &Polynomial, r: f64) -> f64 {
    let r = r.max(1.0);
    p.terms()
        .map(|(m, c)| exact::to_f64(c).abs() * r.powi(m.degree() as i32))
        .sum::<f64>()
        .max(f64::MIN_POSITIVE)
}

fn real_roots_f64(p: &UniPoly) -> Vec<(f64, Option<Rational>)> {
    p.real_roots()
        .into_iter()
        .map(|mut root| {
            let mag = exact::to_f64(&root.hi).abs().max(exact::to_f64(&root.lo).abs()).max(1.0);
            let width = Rational::from_float(mag * 2f64.powi(-54)).unwrap();
            root.refine(&width);
            let exact_root = root.exact().cloned();
            (root.midpoint_f64(), exact_root)
        })
        .collect()
}

/// All real critical points of a planar polynomial.
///
/// The coordinates come from the real roots of the two resultants of the
/// gradient components; every pairing is polished by Newton's method on the
/// gradient and kept when the exact residual certifies it.
pub fn critical_points(u: &Polynomial) -> Result<Vec<CriticalPoint>, NodalError> {
    if u.dim() != 2 {
        return Err(NodalError::NotPlanar(u.dim()));
    }
    if u.is_constant() {
        return Err(NodalError::Constant);
    }
    let g = u.gradient();
    for (i, gi) in g.iter().enumerate() {
        if gi.is_constant() {
            if gi.is_zero() && !g[1 - i].is_constant() {
                return Err(NodalError::Degenerate("gradient component vanishes identically".into()));
            }
            return Ok(Vec::new());
        }
    }
    let rx = resultant(&g[0], &g[1], 1);
    let ry = resultant(&g[0], &g[1], 0);
    if rx.is_zero() || ry.is_zero() {
        return Err(NodalError::Degenerate("gradient components share a factor".into()));
    }
    let xs = real_roots_f64(&rx);
    let ys = real_roots_f64(&ry);

    let fx = FloatPoly::from(&g[0]);
    let fy = FloatPoly::from(&g[1]);
    let h = [g[0].partial(0), g[0].partial(1), g[1].partial(1)];
    let fh: Vec<FloatPoly> = h.iter().map(FloatPoly::from).collect();

    let mut found: Vec<CriticalPoint> = Vec::new();
    for (x0, ex) in &xs {
        for (y0, ey) in &ys {
            let scale = coefficient_scale(&g[0], x0.hypot(*y0)) + coefficient_scale(&g[1], x0.hypot(*y0));
            let quick = fx.eval2(*x0, *y0).abs().max(fy.eval2(*x0, *y0).abs());
            if quick / scale > 1e-3 {
                continue;
            }
            let (x, y, res) = polish(&g, &fx, &fy, &fh, *x0, *y0);
            if (x - x0).hypot(y - y0) > 1e-6 * (1.0 + x0.hypot(*y0)) {
                continue;
            }
            if res >= CERTIFY_TOL {
                if res / scale > REJECT_TOL {
                    continue;
                }
                return Err(NodalError::Tolerance { x, y, residual: res });
            }
            if found.iter().any(|p| (p.x - x).hypot(p.y - y) < DEDUP_TOL * (1.0 + x.hypot(y))) {
                continue;
            }
            let exact_loc = match (ex, ey) {
                (Some(a), Some(b)) if vanishes_at(&g, &[a.clone(), b.clone()]) => Some([a.clone(), b.clone()]),
                _ => reconstruct(&g, x, y),
            };
            let (value, residual) = match &exact_loc {
                Some(p) => (exact::to_f64(&u.evaluate(p).unwrap()), 0.0),
                None => {
                    let v = eval_exact(u, x, y);
                    (v, res)
                }
            };
            let hv: Vec<f64> = fh.iter().map(|f| f.eval2(x, y)).collect();
            let hessian_norm = (hv[0] * hv[0] + 2.0 * hv[1] * hv[1] + hv[2] * hv[2]).sqrt();
            let (x, y) = match &exact_loc {
                Some([a, b]) => (exact::to_f64(a), exact::to_f64(b)),
                None => (x, y),
            };
            found.push(CriticalPoint { x, y, exact: exact_loc, value, residual: residual.max(0.0), hessian_norm });
        }
    }
    found.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Ok(found)
}

fn polish(
    g: &[Polynomial],
    fx: &FloatPoly,
    fy: &FloatPoly,
    fh: &[FloatPoly],
    x0: f64,
    y0: f64,
) -> (f64, f64, f64) {
    let residual = |x: f64, y: f64| eval_exact(&g[0], x, y).abs().max(eval_exact(&g[1], x, y).abs());
    let (mut x, mut y) = (x0, y0);
    let mut best = residual(x, y);
    for _ in 0..8 {
        if best < CERTIFY_TOL * 1e-3 {
            break;
        }
        let (a, b, c) = (fh[0].eval2(x, y), fh[1].eval2(x, y), fh[2].eval2(x, y));
        let det = a * c - b * b;
        if det.abs() < 1e-300 {
            break;
        }
        let (gx, gy) = (fx.eval2(x, y), fy.eval2(x, y));
        let nx = x - (c * gx - b * gy) / det;
        let ny = y - (a * gy - b * gx) / det;
        let r = residual(nx, ny);
        if !(r < best) {
            break;
        }
        x = nx;
        y = ny;
        best = r;
    }
    (x, y, best)
}

/// Small-denominator rational point near `(x, y)` where the gradient
/// vanishes exactly.
fn reconstruct(g: &[Polynomial], x: f64, y: f64) -> Option<[Rational; 2]> {
    let a = exact::approximate(x, 1_000_000)?;
    let b = exact::approximate(y, 1_000_000)?;
    if (exact::to_f64(&a) - x).abs() > 1e-9 || (exact::to_f64(&b) - y).abs() > 1e-9 {
        return None;
    }
    let p = [a, b];
    vanishes_at(g, &p).then_some(p)
}

fn vanishes_at(g: &[Polynomial], p: &[Rational; 2]) -> bool {
    g.iter().all(|gi| gi.evaluate(p).unwrap().is_zero())
}

/// Vanishing order at a point known only in floating point: the lowest
/// Taylor component whose size is not negligible against the largest one.
fn numeric_order(u: &Polynomial, x: f64, y: f64) -> u32 {
    let shifted = u.shift_scale(&[to_exact(x), to_exact(y)], &Rational::from_integer(1.into())).unwrap();
    let deg = shifted.degree().unwrap_or(0);
    let norms: Vec<f64> = (0..=deg)
        .map(|d| shifted.homogeneous_component(d).max_abs_coefficient())
        .collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    norms
        .iter()
        .position(|&v| v > 1e-8 * max)
        .unwrap_or(0) as u32
}

fn to_singular(u: &Polynomial, c: &CriticalPoint) -> Option<SingularPoint> {
    let scale = coefficient_scale(u, c.x.hypot(c.y));
    let on_zero_set = match &c.exact {
        Some(p) => u.evaluate(p).unwrap().is_zero(),
        None => c.value.abs() < CERTIFY_TOL || c.value.abs() / scale < 1e-14,
    };
    if !on_zero_set {
        return None;
    }
    let order = match &c.exact {
        Some(p) => vanishing_order(u, p).ok()?.order,
        None => numeric_order(u, c.x, c.y),
    };
    Some(SingularPoint {
        x: c.x,
        y: c.y,
        exact: c.exact.clone(),
        order: order.max(2),
        residual: c.residual.max(c.value.abs()),
    })
}

/// Singular points `{u = 0, grad u = 0}` in the closed disk of the given
/// radius about the origin (all of them when `radius` is `None`).
pub fn singular_points_within(u: &Polynomial, radius: Option<f64>) -> Result<Vec<SingularPoint>, NodalError> {
    Ok(singular_among(u, &critical_points(u)?, radius))
}

/// The singular points among already computed critical points of `u`.
pub fn singular_among(u: &Polynomial, crit: &[CriticalPoint], radius: Option<f64>) -> Vec<SingularPoint> {
    crit.iter()
        .filter(|c| radius.is_none_or(|r| c.x.hypot(c.y) <= r * (1.0 + 1e-12)))
        .filter_map(|c| to_singular(u, c))
        .collect()
}

/// Singular points in the closed unit disk.
pub fn singular_points(u: &Polynomial) -> Result<Vec<SingularPoint>, NodalError> {
    singular_points_within(u, Some(1.0))
}
