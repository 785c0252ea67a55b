//! Planar nodal sets: singular points, domain counts and the Euler formula.

mod grid;
pub mod resultant;
mod singular;

pub use grid::{count_components, nodal_segments, total_length, FeaturePoint, Segment};
pub use singular::{critical_points, singular_among, singular_points, singular_points_within, CriticalPoint, SingularPoint, CERTIFY_TOL};

use thiserror::Error;

use crate::exact::{self, Rational};
use crate::poly::{FloatPoly, PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NodalError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("nodal analysis needs a planar polynomial, got dimension {0}")]
    NotPlanar(usize),
    #[error("polynomial is constant")]
    Constant,
    #[error("polynomial is not harmonic")]
    NotHarmonic,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("critical point near ({x}, {y}) not certified: residual {residual:e}")]
    Tolerance { x: f64, y: f64, residual: f64 },
    #[error("resolution must be at least 64, got {0}")]
    Resolution(usize),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("domain count unresolved: {0:?} (resolution, count)")]
    Unresolved(Vec<(usize, usize)>),
    #[error("no enclosing radius found up to {0}")]
    NoEnclosingRadius(f64),
    #[error("nodal length did not stabilise: {0:?}")]
    NonStabilizing(Vec<f64>),
}

/// Largest number of global doublings tried by [`count_domains`].
const MAX_DOUBLINGS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainCount {
    pub count: usize,
    /// Coarser of the two agreeing resolutions.
    pub resolution: usize,
    /// Every `(resolution, count)` evaluated.
    pub history: Vec<(usize, usize)>,
}

fn check_planar(u: &Polynomial) -> Result<(), NodalError> {
    if u.dim() != 2 {
        return Err(NodalError::NotPlanar(u.dim()));
    }
    Ok(())
}

/// Refinement features from critical points of `u`. Saddles open at right
/// angles; a singular point of order `k <= deg u` opens at `pi / k`.
pub fn feature_points(u: &Polynomial, crit: &[CriticalPoint]) -> Vec<FeaturePoint> {
    let degree = u.degree().unwrap_or(1).max(2);
    crit.iter()
        .map(|c| {
            let (wedge, corridor) = if c.value.abs() < CERTIFY_TOL {
                (std::f64::consts::PI / degree as f64, 0.0)
            } else {
                (std::f64::consts::FRAC_PI_2, (c.value.abs() / c.hessian_norm.max(1e-300)).sqrt())
            };
            FeaturePoint { x: c.x, y: c.y, wedge, corridor }
        })
        .collect()
}

/// Counts with the stability rule: the answers at `n` and `2n` must agree,
/// escalating through `2n, 4n, 8n` before giving up.
pub fn count_domains_field(
    f: &FloatPoly,
    features: &[FeaturePoint],
    radius: f64,
    resolution: usize,
) -> Result<DomainCount, NodalError> {
    if resolution < 64 {
        return Err(NodalError::Resolution(resolution));
    }
    if !(radius > 0.0) {
        return Err(NodalError::NonPositiveRadius);
    }
    let mut history = Vec::new();
    let mut n = resolution;
    let mut prev = count_components(f, radius, n, features);
    history.push((n, prev));
    for _ in 0..MAX_DOUBLINGS {
        let next = count_components(f, radius, 2 * n, features);
        history.push((2 * n, next));
        if next == prev {
            return Ok(DomainCount { count: next, resolution: n, history });
        }
        n *= 2;
        prev = next;
    }
    Err(NodalError::Unresolved(history))
}

/// Connected components of `{u != 0}` in the disk of the given radius.
pub fn count_domains(u: &Polynomial, radius: &Rational, resolution: usize) -> Result<DomainCount, NodalError> {
    check_planar(u)?;
    let r = exact::to_f64(radius);
    if u.is_constant() {
        if resolution < 64 {
            return Err(NodalError::Resolution(resolution));
        }
        let count = usize::from(!u.is_zero());
        return Ok(DomainCount { count, resolution, history: vec![(resolution, count)] });
    }
    let crit = critical_points(u)?;
    let features: Vec<FeaturePoint> = feature_points(u, &crit)
        .into_iter()
        .filter(|p| p.x.hypot(p.y) <= r * 1.1 + 1e-9)
        .collect();
    count_domains_field(&FloatPoly::from(u), &features, r, resolution)
}

/// Smallest radius (from a geometric search) beyond which the top
/// homogeneous part dominates: checked at `4 deg` angles placed between the
/// nodal rays of the top part, confirmed at `8 deg` angles, and with exactly
/// `2 deg` sign changes of `u` on a dense sampling of the circle.
pub fn enclosing_radius(u: &Polynomial, start: f64) -> Result<f64, NodalError> {
    let d = u.degree().unwrap_or(0) as usize;
    let top = u.top_component();
    let tail = u - &top;
    let ft = FloatPoly::from(&top);
    let ftail = FloatPoly::from(&tail);
    let fu = FloatPoly::from(u);
    // top(cos t, sin t) = A cos(d (t - phi)) for a planar harmonic form
    let c = ft.eval2(1.0, 0.0);
    let s = ft.eval2((std::f64::consts::FRAC_PI_2 / d as f64).cos(), (std::f64::consts::FRAC_PI_2 / d as f64).sin());
    let phi = s.atan2(c) / d as f64;
    let dominates = |r: f64, samples: usize| {
        (0..samples).all(|j| {
            let t = phi + (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / samples as f64;
            let (x, y) = (r * t.cos(), r * t.sin());
            ft.eval2(x, y).abs() > ftail.eval2(x, y).abs()
        })
    };
    let sign_changes = |r: f64| {
        let m = 64 * d.max(1);
        let vals: Vec<bool> = (0..m)
            .map(|j| {
                let t = j as f64 * 2.0 * std::f64::consts::PI / m as f64;
                fu.eval2(r * t.cos(), r * t.sin()) >= 0.0
            })
            .collect();
        (0..m).filter(|&j| vals[j] != vals[(j + 1) % m]).count()
    };
    let mut r = start.max(1.0);
    for _ in 0..200 {
        if dominates(r, 4 * d) && dominates(r, 8 * d) && sign_changes(r) == 2 * d {
            return Ok(r);
        }
        r *= 1.25;
    }
    Err(NodalError::NoEnclosingRadius(r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodalReport {
    pub poly: String,
    pub degree: u32,
    pub n_infinity: u32,
    pub singular_points: Vec<SingularPoint>,
    pub k_formula: usize,
    pub k_floodfill: usize,
    pub radius: f64,
    pub resolution: usize,
    pub regular_vertices_note: String,
}

impl NodalReport {
    pub fn pass(&self) -> bool {
        self.k_floodfill == self.k_formula
    }
}

/// Euler-formula reconciliation `k = 1 + N_inf + sum (order - 1)` against a
/// flood-fill count on a disk enclosing every singular point and bounded
/// nodal feature.
pub fn euler_check(u: &Polynomial, resolution: usize) -> Result<NodalReport, NodalError> {
    check_planar(u)?;
    if u.is_constant() {
        return Err(NodalError::Constant);
    }
    if !u.is_harmonic() {
        return Err(NodalError::NotHarmonic);
    }
    let degree = u.degree().unwrap();
    let crit = critical_points(u)?;
    let singular = singular_among(u, &crit, None);
    let k_formula = 1 + degree as usize + singular.iter().map(|s| (s.order - 1) as usize).sum::<usize>();
    let reach = crit.iter().map(|c| c.x.hypot(c.y)).fold(0.0, f64::max);
    let enclosing = enclosing_radius(u, 1.25 * reach)?;
    let radius = 1.25 * enclosing;
    let count = count_domains_field(&FloatPoly::from(u), &feature_points(u, &crit), radius, resolution)?;
    Ok(NodalReport {
        poly: u.to_string(),
        degree,
        n_infinity: degree,
        singular_points: singular,
        k_formula,
        k_floodfill: count.count,
        radius,
        resolution: count.resolution,
        regular_vertices_note: "regular vertices on the sphere are not computed".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassBounds {
    pub k: usize,
    pub n_infinity: u32,
    /// `k <= 2 N_inf`
    pub lower_ok: bool,
    /// `N_inf <= k - 1`
    pub upper_ok: bool,
}

pub fn class_bounds(u: &Polynomial, resolution: usize) -> Result<ClassBounds, NodalError> {
    let report = euler_check(u, resolution)?;
    let k = report.k_floodfill;
    let n = report.n_infinity as usize;
    Ok(ClassBounds {
        k,
        n_infinity: report.n_infinity,
        lower_ok: k <= 2 * n,
        upper_ok: n < k,
    })
}

/// Marching-squares length of `{u = 0}` in the disk, doubling the grid
/// until successive estimates agree within 2%.
pub fn nodal_length(u: &Polynomial, radius: &Rational, resolution: usize) -> Result<f64, NodalError> {
    check_planar(u)?;
    let r = exact::to_f64(radius);
    if !(r > 0.0) {
        return Err(NodalError::NonPositiveRadius);
    }
    let f = FloatPoly::from(u);
    let mut n = resolution.max(8);
    let mut history = vec![total_length(&nodal_segments(&f, r, n))];
    for _ in 0..4 {
        n *= 2;
        let next = total_length(&nodal_segments(&f, r, n));
        let prev = *history.last().unwrap();
        history.push(next);
        if (next - prev).abs() <= 0.02 * next.max(prev) {
            return Ok(next);
        }
    }
    Err(NodalError::NonStabilizing(history))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn domain_counts() {
        assert_eq!(count_domains(&p("x^2 - y^2"), &int(1), 64).unwrap().count, 4);
        assert_eq!(count_domains(&p("x^3 - 3*x*y^2"), &int(1), 64).unwrap().count, 6);
        assert_eq!(count_domains(&p("x^3 - 3*x*y^2 + 1"), &int(4), 128).unwrap().count, 4);
        assert!(matches!(count_domains(&p("x"), &int(1), 32), Err(NodalError::Resolution(32))));
    }

    #[test]
    fn figure_polynomials() {
        for (s, k) in [
            ("x^3 - 3*x*y^2", 6),
            ("x^3 - 3*x*y^2 + 1", 4),
            ("x^3 - 3*x*y^2 + x*y", 6),
            ("x^3 - 3*x*y^2 + x^2 - y^2", 5),
        ] {
            let r = euler_check(&p(s), 128).unwrap();
            assert_eq!((r.k_formula, r.k_floodfill), (k, k), "{s}");
        }
    }

    #[test]
    fn bounds() {
        let b = class_bounds(&p("x^3 - 3*x*y^2"), 128).unwrap();
        assert_eq!((b.k, b.lower_ok, b.upper_ok), (6, true, true));
        let b = class_bounds(&p("x^3 - 3*x*y^2 + 1"), 128).unwrap();
        assert_eq!((b.k, b.lower_ok, b.upper_ok), (4, true, true));
        let b = class_bounds(&p("2*x - y + 1/3"), 128).unwrap();
        assert_eq!((b.k, b.n_infinity), (2, 1));
    }

    #[test]
    fn lengths() {
        let l = nodal_length(&p("x"), &rat(1, 2), 64).unwrap();
        assert!((l - 1.0).abs() < 0.02);
        let l = nodal_length(&p("x^3 - 3*x*y^2"), &rat(1, 2), 64).unwrap();
        assert!((l - 3.0).abs() < 0.06);
    }
}
