//! Quadrature on balls for weights `|u|^s` that degenerate on `Z(u)`.
//!
//! Planar rules integrate along rays from the ball center, splitting each
//! ray at the roots of `u` (and of `u = ±delta` when a cut is requested) and
//! clustering Gauss nodes at the split points with a power substitution.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::poly::FloatPoly;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// Gauss-Legendre rule mapped to `[0, 1]`.
pub fn gauss_unit(n: usize) -> Vec<(f64, f64)> {
    gauss_legendre(n).into_iter().map(|(x, w)| ((x + 1.0) / 2.0, w / 2.0)).collect()
}

const RAY_NODES: usize = 16;
const MAX_PANELS: usize = 4096;

/// Nodes and weights of a quadrature rule on a ball, with the value of `u`
/// cached at every node.
#[derive(Clone, Debug)]
pub struct BallRule {
    pub dim: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub u_values: Vec<f64>,
}

impl BallRule {
    /// Ray rule on the disk `B_radius(center)` restricted to `{|u| >= delta}`.
    ///
    /// `exponent` is the most singular weight exponent the rule will see: it
    /// sets the node clustering at roots along each ray, and the angular
    /// panel with the largest error estimate is bisected until the estimated
    /// error of `int |u|^exponent` drops below `tol` relative to the total.
    /// Rays start from a point of the disk where `|u|` is large, so that
    /// `Z(u)` is crossed transversally by almost every ray. The flag is false
    /// when the panel budget ran out first.
    pub fn planar(u: &FloatPoly, degree: usize, center: [f64; 2], radius: f64, delta: f64, exponent: f64, tol: f64) -> (Self, bool) {
        let rays = Rays::new(u, degree, center, radius, delta, exponent);
        let angular = gauss_unit(8);
        let panel = |lo: f64, hi: f64| {
            let nodes: Vec<(f64, Vec<RayNode>)> = angular
                .iter()
                .map(|&(t, w)| (w * (hi - lo), rays.ray(lo + (hi - lo) * t)))
                .collect();
            let estimate = nodes
                .iter()
                .map(|(w, ray)| w * ray.iter().map(|n| n.weight * weight_power(n.u, exponent)).sum::<f64>())
                .sum::<f64>();
            (nodes, estimate)
        };
        let split = |lo: f64, hi: f64, est: f64| {
            let mid = 0.5 * (lo + hi);
            let (left, el) = panel(lo, mid);
            let (right, er) = panel(mid, hi);
            Panel { lo, hi, err: (el + er - est).abs(), halves: [(left, el), (right, er)] }
        };
        let initial = 32;
        let step = 2.0 * PI / initial as f64;
        let mut heap: BinaryHeap<Panel> = (0..initial)
            .map(|k| {
                let (lo, hi) = (k as f64 * step, (k + 1) as f64 * step);
                split(lo, hi, panel(lo, hi).1)
            })
            .collect();
        let total: f64 = heap.iter().map(|p| p.halves[0].1.abs() + p.halves[1].1.abs()).sum();
        let budget = tol * total.max(f64::MIN_POSITIVE);
        let mut error: f64 = heap.iter().map(|p| p.err).sum();
        while error > budget && heap.len() < MAX_PANELS {
            let worst = heap.pop().expect("nonempty");
            error -= worst.err;
            let mid = 0.5 * (worst.lo + worst.hi);
            let [(_, el), (_, er)] = worst.halves;
            for (lo, hi, est) in [(worst.lo, mid, el), (mid, worst.hi, er)] {
                let child = split(lo, hi, est);
                error += child.err;
                heap.push(child);
            }
        }
        let resolved = error <= budget;
        let accepted = heap.into_iter().flat_map(|p| {
            let [(l, _), (r, _)] = p.halves;
            l.into_iter().chain(r)
        });
        let mut rule = BallRule { dim: 2, points: Vec::new(), weights: Vec::new(), u_values: Vec::new() };
        for (w, ray) in accepted {
            for n in ray {
                rule.points.push([n.x, n.y, 0.0]);
                rule.weights.push(w * n.weight);
                rule.u_values.push(n.u);
            }
        }
        (rule, resolved)
    }

    /// Product rule on a ball in `R^3` (Gauss in radius and polar cosine,
    /// trapezoid in azimuth), refined by `level`.
    pub fn spatial(u: &FloatPoly, center: [f64; 3], radius: f64, level: u32) -> Self {
        let panels = 2usize << level;
        let radial = gauss_unit(8);
        let polar = gauss_legendre(16 << level);
        let azimuth = 32usize << level;
        let mut rule = BallRule { dim: 3, points: Vec::new(), weights: Vec::new(), u_values: Vec::new() };
        let dphi = 2.0 * PI / azimuth as f64;
        for p in 0..panels {
            let h = radius / panels as f64;
            for &(t, wr) in &radial {
                let rho = (p as f64 + t) * h;
                for &(ct, wc) in &polar {
                    let st = (1.0 - ct * ct).sqrt();
                    for k in 0..azimuth {
                        let phi = (k as f64 + 0.5) * dphi;
                        let pt = [
                            center[0] + rho * st * phi.cos(),
                            center[1] + rho * st * phi.sin(),
                            center[2] + rho * ct,
                        ];
                        rule.weights.push(wr * h * rho * rho * wc * dphi);
                        rule.u_values.push(u.eval(&pt));
                        rule.points.push(pt);
                    }
                }
            }
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i][..self.dim]
    }

    /// `sum_i w_i |u_i|^s f(x_i)`, skipping exact zeros of `u` when `s < 0`.
    pub fn integrate<F>(&self, s: f64, f: F) -> f64
    where
        F: Fn(&[f64], f64) -> f64,
    {
        let mut acc = 0.0;
        for i in 0..self.len() {
            let uv = self.u_values[i];
            let weight = if s == 0.0 {
                1.0
            } else if uv == 0.0 {
                if s < 0.0 {
                    continue;
                }
                0.0
            } else {
                uv.abs().powf(s)
            };
            acc += self.weights[i] * weight * f(self.point(i), uv);
        }
        acc
    }
}

fn weight_power(u: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if u == 0.0 {
        0.0
    } else {
        u.abs().powf(s)
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    err: f64,
    halves: [(Vec<(f64, Vec<RayNode>)>, f64); 2],
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

struct RayNode {
    x: f64,
    y: f64,
    u: f64,
    /// Radial Gauss weight times the polar Jacobian.
    weight: f64,
}

struct Rays<'a> {
    u: &'a FloatPoly,
    origin: [f64; 2],
    offset: [f64; 2],
    radius: f64,
    delta: f64,
    power: usize,
    gauss: Vec<(f64, f64)>,
    samples: usize,
}

impl<'a> Rays<'a> {
    fn new(u: &'a FloatPoly, degree: usize, center: [f64; 2], radius: f64, delta: f64, exponent: f64) -> Self {
        let origin = ray_origin(u, center, radius);
        Rays {
            u,
            origin,
            offset: [origin[0] - center[0], origin[1] - center[1]],
            radius,
            delta,
            power: clustering_power(exponent),
            gauss: gauss_unit(RAY_NODES),
            samples: 24 * (degree + 2),
        }
    }

    /// Nodes on the ray at angle `theta`, split at the roots of `u`
    /// (or of `u = +-delta`) and clustered toward every split point.
    fn ray(&self, theta: f64) -> Vec<RayNode> {
        let (c, s) = (theta.cos(), theta.sin());
        let [ox, oy] = self.origin;
        let b = self.offset[0] * c + self.offset[1] * s;
        let d2 = self.offset[0].powi(2) + self.offset[1].powi(2);
        let reach = -b + (b * b - d2 + self.radius * self.radius).max(0.0).sqrt();
        let g = |rho: f64| self.u.eval2(ox + rho * c, oy + rho * s);
        let samples = self.samples;
        let at = |i: usize| reach * i as f64 / samples as f64;
        let values: Vec<f64> = (0..=samples).map(|i| g(at(i))).collect();
        let mut out = Vec::new();
        if values.iter().all(|v| *v == 0.0) {
            return out;
        }
        let mut breaks = vec![0.0, reach];
        let targets: &[f64] = if self.delta > 0.0 { &[self.delta, -self.delta] } else { &[0.0] };
        for &t in targets {
            for i in 0..samples {
                let (lo, hi) = (values[i] - t, values[i + 1] - t);
                if lo == 0.0 {
                    breaks.push(at(i));
                } else if lo * hi < 0.0 {
                    breaks.push(bisect(|r| g(r) - t, at(i), at(i + 1), lo));
                }
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let m = self.power as i32;
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            if self.delta > 0.0 && g(mid).abs() < self.delta {
                continue;
            }
            for (anchor, len) in [(lo, mid - lo), (hi, mid - hi)] {
                for &(t, wt) in &self.gauss {
                    let rho = anchor + len * t.powi(m);
                    let jac = len.abs() * m as f64 * t.powi(m - 1);
                    let (x, y) = (ox + rho * c, oy + rho * s);
                    out.push(RayNode { x, y, u: self.u.eval2(x, y), weight: wt * jac * rho });
                }
            }
        }
        out
    }
}

fn ray_origin(u: &FloatPoly, center: [f64; 2], radius: f64) -> [f64; 2] {
    let mut best = (u.eval2(center[0], center[1]).abs(), center);
    for ring in [0.2, 0.4] {
        for k in 0..12 {
            let t = (k as f64 + 0.25) * PI / 6.0;
            let p = [center[0] + ring * radius * t.cos(), center[1] + ring * radius * t.sin()];
            let v = u.eval2(p[0], p[1]).abs();
            if v > best.0 {
                best = (v, p);
            }
        }
    }
    best.1
}

fn clustering_power(exponent: f64) -> usize {
    if exponent >= 2.0 {
        1
    } else {
        ((3.0 / (1.0 + exponent.max(-0.9))).ceil() as usize).clamp(1, 12)
    }
}

fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, glo: f64) -> f64 {
    let lo_sign = glo > 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Midpoint rule in polar (or spherical) coordinates on `B_radius(0)` with
/// `n` radial cells; `f` receives the point.
pub fn polar_midpoint<F>(dim: usize, radius: f64, n: usize, f: F) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    use rayon::prelude::*;
    match dim {
        2 => {
            let nt = 4 * n;
            let (dr, dt) = (radius / n as f64, 2.0 * PI / nt as f64);
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let r = (i as f64 + 0.5) * dr;
                    (0..nt)
                        .map(|j| {
                            let t = (j as f64 + 0.5) * dt;
                            f(&[r * t.cos(), r * t.sin()]) * r * dr * dt
                        })
                        .sum::<f64>()
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum()
        }
        3 => {
            let (nr, nc, np) = (n / 4, n / 4, n / 2);
            let (dr, dc, dp) = (radius / nr as f64, 2.0 / nc as f64, 2.0 * PI / np as f64);
            (0..nr)
                .into_par_iter()
                .map(|i| {
                    let r = (i as f64 + 0.5) * dr;
                    let mut acc = 0.0;
                    for j in 0..nc {
                        let ct = -1.0 + (j as f64 + 0.5) * dc;
                        let st = (1.0 - ct * ct).sqrt();
                        for k in 0..np {
                            let p = (k as f64 + 0.5) * dp;
                            acc += f(&[r * st * p.cos(), r * st * p.sin(), r * ct]) * r * r * dr * dc * dp;
                        }
                    }
                    acc
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum()
        }
        _ => panic!("polar_midpoint supports dimensions 2 and 3"),
    }
}

/// Nodes and weights for the unit circle or unit sphere.
pub fn unit_sphere_rule(dim: usize, level: u32) -> Vec<([f64; 3], f64)> {
    match dim {
        2 => {
            let n = 4096usize << level;
            let dt = 2.0 * PI / n as f64;
            (0..n)
                .map(|j| {
                    let t = (j as f64 + 0.5) * dt;
                    ([t.cos(), t.sin(), 0.0], dt)
                })
                .collect()
        }
        3 => {
            let polar = gauss_legendre(64 << level);
            let np = 128usize << level;
            let dp = 2.0 * PI / np as f64;
            let mut out = Vec::with_capacity(polar.len() * np);
            for &(ct, wc) in &polar {
                let st = (1.0 - ct * ct).sqrt();
                for k in 0..np {
                    let p = (k as f64 + 0.5) * dp;
                    out.push(([st * p.cos(), st * p.sin(), ct], wc * dp));
                }
            }
            out
        }
        _ => panic!("unit_sphere_rule supports dimensions 2 and 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn gauss_exactness() {
        let rule = gauss_legendre(5);
        for k in 0..10 {
            let got: f64 = rule.iter().map(|(x, w)| w * x.powi(k)).sum();
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "{k}");
        }
        assert_eq!(gauss_legendre(1), vec![(0.0, 2.0)]);
    }

    #[test]
    fn disk_area_and_moments() {
        let u = FloatPoly::from(&parse_polynomial("x", 2).unwrap());
        let (rule, ok) = BallRule::planar(&u, 1, [0.0, 0.0], 1.0, 0.0, -0.5, 1e-6);
        assert!(ok);
        assert!((rule.integrate(0.0, |_, _| 1.0) - PI).abs() < 1e-10);
        // int |x|^{-1/2} over the unit disk = 4 * int_0^1 t^{-1/2} sqrt(1 - t^2) dt
        let got = rule.integrate(-0.5, |_, _| 1.0);
        let want = 2.0 * beta(0.25, 1.5);
        assert!((got - want).abs() < 1e-5 * want, "{got} {want}");
    }

    fn beta(a: f64, b: f64) -> f64 {
        // int_0^1 s^{a-1} (1-s)^{b-1} ds via substitution s = t^4
        let g = gauss_unit(200);
        g.iter()
            .map(|&(t, w)| {
                let s = t.powi(4);
                w * 4.0 * t.powi(3) * s.powf(a - 1.0) * (1.0 - s).powf(b - 1.0)
            })
            .sum()
    }

    #[test]
    fn cut_rule_excludes_strip() {
        let u = FloatPoly::from(&parse_polynomial("x", 2).unwrap());
        let (rule, ok) = BallRule::planar(&u, 1, [0.0, 0.0], 1.0, 0.1, 0.0, 1e-10);
        assert!(ok);
        // disk minus the strip |x| < 0.1
        let strip = 2.0 * (0.1 * (1.0f64 - 0.01).sqrt() + 0.1f64.asin());
        assert!((rule.integrate(0.0, |_, _| 1.0) - (PI - strip)).abs() < 1e-8);
    }

    #[test]
    fn spatial_volume() {
        let u = FloatPoly::from(&parse_polynomial("x*y - z^2 + 1", 3).unwrap());
        let rule = BallRule::spatial(&u, [0.0, 0.0, 0.0], 0.5, 0);
        let vol = 4.0 / 3.0 * PI * 0.125;
        assert!((rule.integrate(0.0, |_, _| 1.0) - vol).abs() < 1e-12);
        let second = rule.integrate(0.0, |p, _| p[2] * p[2]);
        assert!((second - vol * 0.25 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn midpoint_and_sphere_rules() {
        let area = polar_midpoint(2, 0.5, 64, |_| 1.0);
        assert!((area - PI / 4.0).abs() < 1e-12);
        let s: f64 = unit_sphere_rule(3, 0).iter().map(|(_, w)| w).sum();
        assert!((s - 4.0 * PI).abs() < 1e-10);
    }
}
