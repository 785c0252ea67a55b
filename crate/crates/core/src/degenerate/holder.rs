use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{certified_pair, DegenerateError, GridField, GridSpec};
use crate::exact::{self, Rational};
use crate::poly::FloatPoly;

/// Sampled pairs per dyadic scale.
pub const PAIRS_PER_SCALE: usize = 10_000;
/// Offsets up to this many nodes are enumerated exhaustively.
const EXHAUSTIVE_REACH: i64 = 4;
/// Best sampled pairs handed to the local search.
const REFINED_PAIRS: usize = 32;
const SAMPLING_SEED: u64 = 0x4f1d;
const STABILITY_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct HolderReport {
    pub alpha: Rational,
    pub radius: Rational,
    pub seminorm: f64,
    /// Same estimator on every other node; `None` when the grid cannot be
    /// halved.
    pub coarse_seminorm: Option<f64>,
    pub l2_v: Option<f64>,
    pub quotient: Option<f64>,
    /// Estimate moved by less than 5% between the two resolutions.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairRecord {
    pub seed: u64,
    pub attempts: u32,
    pub deg_u: u32,
    pub deg_r: u32,
    pub l2_v: f64,
    pub seminorm: f64,
    pub refined_seminorm: f64,
    pub quotient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityReport {
    pub n0: u32,
    pub m: u32,
    pub alpha: Rational,
    pub grid: GridSpec,
    pub pairs: Vec<PairRecord>,
    pub max_quotient: f64,
    /// Maximum on the grid with twice the resolution.
    pub refined_max_quotient: f64,
    /// `|refined - max| / max`, zero when every quotient vanishes.
    pub stability: f64,
    pub stable: bool,
}

struct Region<'a> {
    w: &'a GridField,
    radius: f64,
    alpha: f64,
}

impl Region<'_> {
    fn inside(&self, i: i64, j: i64) -> bool {
        let n = self.w.spec.nodes_per_side() as i64;
        if i < 0 || j < 0 || i >= n || j >= n {
            return false;
        }
        let [x, y] = self.w.spec.point(i as usize, j as usize);
        x.hypot(y) <= self.radius + 1e-12
    }

    fn quotient(&self, a: (i64, i64), b: (i64, i64)) -> f64 {
        if a == b {
            return 0.0;
        }
        let h = self.w.spec.h();
        let d = (((a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)) as f64).sqrt() * h;
        let dw = self.w.at(a.0 as usize, a.1 as usize) - self.w.at(b.0 as usize, b.1 as usize);
        dw.abs() / d.powf(self.alpha)
    }

    /// Greedy coordinate moves of either endpoint, with steps halving down
    /// to one node.
    fn climb(&self, mut a: (i64, i64), mut b: (i64, i64)) -> f64 {
        let mut best = self.quotient(a, b);
        let span = (a.0 - b.0).abs().max((a.1 - b.1).abs());
        let mut step = (span / 4).max(1);
        loop {
            let mut improved = false;
            for end in 0..2 {
                for (di, dj) in [(step, 0), (-step, 0), (0, step), (0, -step)] {
                    let (na, nb) = if end == 0 { ((a.0 + di, a.1 + dj), b) } else { (a, (b.0 + di, b.1 + dj)) };
                    let moved = if end == 0 { na } else { nb };
                    if !self.inside(moved.0, moved.1) {
                        continue;
                    }
                    let q = self.quotient(na, nb);
                    if q > best {
                        best = q;
                        a = na;
                        b = nb;
                        improved = true;
                    }
                }
            }
            if !improved {
                if step == 1 {
                    return best;
                }
                step /= 2;
            }
        }
    }

    fn estimate(&self) -> f64 {
        let spec = self.w.spec;
        let n = spec.nodes_per_side() as i64;
        let nodes: Vec<(i64, i64)> = (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).filter(|&(i, j)| self.inside(i, j)).collect();
        if nodes.len() < 2 {
            return 0.0;
        }
        let h = spec.h();
        let mut offsets = Vec::new();
        for dj in 0..=EXHAUSTIVE_REACH {
            for di in -EXHAUSTIVE_REACH..=EXHAUSTIVE_REACH {
                let d2 = di * di + dj * dj;
                if (dj > 0 || di > 0) && d2 <= EXHAUSTIVE_REACH * EXHAUSTIVE_REACH {
                    offsets.push((di, dj, ((d2 as f64).sqrt() * h).powf(self.alpha)));
                }
            }
        }
        let mut top = Top::default();
        for &a in &nodes {
            let wa = self.w.at(a.0 as usize, a.1 as usize);
            for &(di, dj, denom) in &offsets {
                let b = (a.0 + di, a.1 + dj);
                if self.inside(b.0, b.1) {
                    let q = (wa - self.w.at(b.0 as usize, b.1 as usize)).abs() / denom;
                    top.push(q, a, b);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        let mut upper = 2.0 * self.radius;
        while upper / 2.0 > EXHAUSTIVE_REACH as f64 * h {
            let lower = upper / 2.0;
            for k in 0..PAIRS_PER_SCALE {
                let a = nodes[rng.random_range(0..nodes.len())];
                let theta = std::f64::consts::TAU * (k as f64 + rng.random::<f64>()) / PAIRS_PER_SCALE as f64;
                let len = lower * 2f64.powf(rng.random::<f64>()) / h;
                let b = (a.0 + (len * theta.cos()).round() as i64, a.1 + (len * theta.sin()).round() as i64);
                if self.inside(b.0, b.1) {
                    top.push(self.quotient(a, b), a, b);
                }
            }
            upper = lower;
        }
        top.pairs.iter().map(|&(_, a, b)| self.climb(a, b)).fold(0.0, f64::max)
    }
}

/// The `REFINED_PAIRS` largest quotients seen so far.
#[derive(Default)]
struct Top {
    pairs: Vec<(f64, (i64, i64), (i64, i64))>,
    floor: f64,
}

impl Top {
    fn push(&mut self, q: f64, a: (i64, i64), b: (i64, i64)) {
        if self.pairs.len() < REFINED_PAIRS {
            self.pairs.push((q, a, b));
        } else if q > self.floor {
            let k = (0..self.pairs.len()).min_by(|&i, &j| self.pairs[i].0.total_cmp(&self.pairs[j].0)).unwrap();
            self.pairs[k] = (q, a, b);
        } else {
            return;
        }
        if self.pairs.len() == REFINED_PAIRS {
            self.floor = self.pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        }
    }
}

fn check_alpha(alpha: &Rational) -> Result<f64, DegenerateError> {
    if !(*alpha > Rational::zero() && *alpha <= Rational::one()) {
        return Err(DegenerateError::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(exact::to_f64(alpha))
}

fn region<'a>(w: &'a GridField, alpha: f64, radius: &Rational) -> Result<Region<'a>, DegenerateError> {
    let r = exact::to_f64(radius);
    let spec = w.spec;
    let room = spec.side / 2.0 - spec.center[0].abs().max(spec.center[1].abs());
    if !(r > 0.0) || r > room + 1e-12 {
        return Err(DegenerateError::RegionOutsideGrid(r));
    }
    Ok(Region { w, radius: r, alpha })
}

/// Multiscale estimate of `sup |w(x) - w(y)| / |x - y|^alpha` over grid
/// nodes in the disk of the given radius about the origin.
pub fn holder_seminorm(w: &GridField, alpha: &Rational, radius: &Rational) -> Result<HolderReport, DegenerateError> {
    let a = check_alpha(alpha)?;
    let seminorm = region(w, a, radius)?.estimate();
    let coarse_seminorm = match w.coarsened() {
        Some(c) => Some(region(&c, a, radius)?.estimate()),
        None => None,
    };
    let stable = coarse_seminorm.is_some_and(|c| relative_change(seminorm, c) < STABILITY_TOL);
    Ok(HolderReport {
        alpha: alpha.clone(),
        radius: radius.clone(),
        seminorm,
        coarse_seminorm,
        l2_v: None,
        quotient: None,
        stable,
    })
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Seminorm of the exact ratio on `B_{1/2}` against `||v||_{L^2(B_1)}` for
/// pairs drawn with seeds `seed_base .. seed_base + samples`, on `spec` and
/// on its refinement.
pub fn uniformity_experiment(
    n0: u32,
    m: u32,
    samples: usize,
    alpha: &Rational,
    seed_base: u64,
    spec: GridSpec,
) -> Result<UniformityReport, DegenerateError> {
    if samples < 20 {
        return Err(DegenerateError::InvalidParameter(format!("need at least 20 samples, got {samples}")));
    }
    let a = check_alpha(alpha)?;
    let half = exact::rat(1, 2);
    let fine = spec.refined();
    let pairs = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let pair = certified_pair(n0, m, seed_base + i)?;
            let r = FloatPoly::from(&pair.r);
            let seminorm = region(&GridField::from_poly(spec, &r), a, &half)?.estimate();
            let refined_seminorm = region(&GridField::from_poly(fine, &r), a, &half)?.estimate();
            let l2_v = pair.v_l2();
            Ok(PairRecord {
                seed: pair.seed,
                attempts: pair.attempts,
                deg_u: pair.u.degree().unwrap_or(0),
                deg_r: pair.r.degree().unwrap_or(0),
                l2_v,
                seminorm,
                refined_seminorm,
                quotient: seminorm / l2_v,
            })
        })
        .collect::<Result<Vec<_>, DegenerateError>>()?;
    let max_quotient = pairs.iter().map(|p| p.quotient).fold(0.0, f64::max);
    let refined_max_quotient = pairs.iter().map(|p| p.refined_seminorm / p.l2_v).fold(0.0, f64::max);
    let stability = relative_change(max_quotient, refined_max_quotient);
    Ok(UniformityReport {
        n0,
        m,
        alpha: alpha.clone(),
        grid: spec,
        pairs,
        max_quotient,
        refined_max_quotient,
        stability,
        stable: stability < STABILITY_TOL && max_quotient.is_finite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn quadratic(cells: usize, scale: f64) -> GridField {
        GridField::from_fn(GridSpec::new(1.0, cells).unwrap(), move |x, y| scale * 2.0 * (x * x - y * y))
    }

    #[test]
    fn lipschitz_constant_of_quadratic() {
        let r = holder_seminorm(&quadratic(256, 1.0), &int(1), &rat(1, 2)).unwrap();
        assert!((r.seminorm - 2.0).abs() < 0.1, "{}", r.seminorm);
        assert!(r.stable);
    }

    #[test]
    fn half_exponent_matches_a_fine_search() {
        // sup over the disk is attained on the boundary circle; brute force
        // over boundary angle pairs
        let f = |t: f64| 0.5 * (2.0 * t).cos();
        let mut best: f64 = 0.0;
        let n = 2000;
        for i in 0..n {
            for j in 0..i {
                let (s, t) = (std::f64::consts::TAU * i as f64 / n as f64, std::f64::consts::TAU * j as f64 / n as f64);
                let d = ((s.cos() - t.cos()).powi(2) + (s.sin() - t.sin()).powi(2)).sqrt() / 2.0;
                best = best.max((f(s) - f(t)).abs() / d.sqrt());
            }
        }
        let r = holder_seminorm(&quadratic(128, 1.0), &rat(1, 2), &rat(1, 2)).unwrap();
        assert!((r.seminorm - best).abs() < 0.03 * best, "{} vs {best}", r.seminorm);
    }

    #[test]
    fn homogeneity_and_constants() {
        let one = holder_seminorm(&quadratic(64, 1.0), &rat(3, 4), &rat(1, 2)).unwrap().seminorm;
        let two = holder_seminorm(&quadratic(64, 2.0), &rat(3, 4), &rat(1, 2)).unwrap().seminorm;
        assert!((two - 2.0 * one).abs() < 1e-12 * two);
        let c = GridField::from_fn(GridSpec::new(1.0, 64).unwrap(), |_, _| 7.0);
        assert_eq!(holder_seminorm(&c, &rat(1, 4), &rat(1, 2)).unwrap().seminorm, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let w = quadratic(16, 1.0);
        assert!(holder_seminorm(&w, &int(0), &rat(1, 2)).is_err());
        assert!(matches!(holder_seminorm(&w, &rat(1, 2), &rat(3, 4)), Err(DegenerateError::RegionOutsideGrid(_))));
        assert!(uniformity_experiment(2, 2, 5, &rat(1, 2), 0, GridSpec::new(1.0, 16).unwrap()).is_err());
    }

    #[test]
    fn small_experiment_is_deterministic() {
        let spec = GridSpec::new(1.0, 32).unwrap();
        let a = uniformity_experiment(2, 2, 20, &rat(1, 2), 11, spec).unwrap();
        let b = uniformity_experiment(2, 2, 20, &rat(1, 2), 11, spec).unwrap();
        assert_eq!(a, b);
        assert!(a.max_quotient.is_finite() && a.max_quotient > 0.0);
        assert_eq!(a.pairs.len(), 20);
    }
}
