use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GridField, GridSpec};
use crate::corpus::random_rational;
use crate::exact::{int, Rational};
use crate::poly::{FloatPoly, Monomial, Polynomial};
use crate::weighted::{nbar0, ProbeCase, ProbeReport};

/// Test functions on the grid square in coordinates centred at the square's
/// centre: `q(X, Y) ((1 - (X/s)^2)(1 - (Y/s)^2))^2`, `s` the half side and
/// `q` random of degree at most 3.
pub fn square_test_functions(spec: &GridSpec, count: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = crate::exact::approximate(spec.side / 2.0, 1 << 20).unwrap_or_else(|| int(1) / int(2));
    let inv_s2 = int(1) / (&s * &s);
    let edge = |k: usize| &Polynomial::one(2) - &Polynomial::var(2, k).pow(2).scale(&inv_s2);
    let bump = (&edge(0) * &edge(1)).pow(2);
    let monomials = Monomial::all_up_to_degree(2, 3);
    (0..count)
        .map(|_| loop {
            let q = Polynomial::from_terms(2, monomials.iter().map(|m| (m.clone(), random_rational(&mut rng, 3, 2))))
                .expect("planar monomials");
            if !q.is_zero() {
                return &q * &bump;
            }
        })
        .collect()
}

/// Cell-centred gradient of a grid field, row-major over cells.
fn cell_gradients(w: &GridField) -> Vec<[f64; 2]> {
    let spec = w.spec;
    let c = spec.cells;
    let h = spec.h();
    let mut out = Vec::with_capacity(c * c);
    for j in 0..c {
        for i in 0..c {
            let (a, b, d, e) = (w.at(i, j), w.at(i + 1, j), w.at(i, j + 1), w.at(i + 1, j + 1));
            out.push([(b + e - a - d) / (2.0 * h), (d + e - a - b) / (2.0 * h)]);
        }
    }
    out
}

/// Normalized weak residual `|int u^2 grad w . grad phi| / int u^2 |grad w| |grad phi|`
/// over random bump test functions, by the cell-midpoint rule.
pub fn weak_residual(u: &Polynomial, w: &GridField, count: usize, seed: u64) -> ProbeReport {
    let spec = w.spec;
    let fu = FloatPoly::from(u);
    let grads = cell_gradients(w);
    let c = spec.cells;
    let h = spec.h();
    let centres: Vec<[f64; 2]> = (0..c * c)
        .map(|k| {
            let (i, j) = (k % c, k / c);
            let [x, y] = spec.point(i, j);
            [x + h / 2.0, y + h / 2.0]
        })
        .collect();
    let weights: Vec<f64> = centres.iter().map(|p| fu.eval2(p[0], p[1]).powi(2)).collect();
    let cases = square_test_functions(&spec, count, seed)
        .iter()
        .enumerate()
        .map(|(idx, phi)| {
            let dphi: Vec<FloatPoly> = phi.gradient().iter().map(FloatPoly::from).collect();
            let (mut signed, mut total) = (0.0, 0.0);
            for (k, p) in centres.iter().enumerate() {
                let (x, y) = (p[0] - spec.center[0], p[1] - spec.center[1]);
                let g = [dphi[0].eval2(x, y), dphi[1].eval2(x, y)];
                let gw = grads[k];
                signed += weights[k] * (gw[0] * g[0] + gw[1] * g[1]);
                total += weights[k] * gw[0].hypot(gw[1]) * g[0].hypot(g[1]);
            }
            let (lhs, rhs) = (signed.abs() * h * h, total * h * h);
            let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
            ProbeCase { id: format!("phi{idx}"), lhs, rhs, ratio }
        })
        .collect();
    let a: Rational = int(2);
    ProbeReport::finish("weak_residual", &a, &nbar0(u), cases, None, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use rand::Rng;

    fn setup(cells: usize) -> (Polynomial, GridSpec) {
        (parse_polynomial("2*x*y", 2).unwrap(), GridSpec::new(1.0, cells).unwrap())
    }

    #[test]
    fn exact_ratio_residual_is_small_and_shrinks() {
        let (u, _) = setup(8);
        let mut prev = f64::INFINITY;
        for cells in [64, 128, 256] {
            let spec = GridSpec::new(1.0, cells).unwrap();
            let w = GridField::from_fn(spec, |x, y| 2.0 * (x * x - y * y));
            let r = weak_residual(&u, &w, 8, 3).max_ratio;
            assert!(r < prev, "{cells}: {r}");
            prev = r;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn constant_field_has_zero_residual() {
        let (u, spec) = setup(32);
        let w = GridField::from_fn(spec, |_, _| -1.5);
        assert_eq!(weak_residual(&u, &w, 5, 1).max_ratio, 0.0);
    }

    #[test]
    fn noise_is_detected() {
        let (u, spec) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut coarse = GridField::from_fn(GridSpec::new(1.0, 8).unwrap(), |_, _| 0.0);
        for v in coarse.values.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
        let w = GridField::from_fn(spec, |x, y| coarse.sample(x, y));
        assert!(weak_residual(&u, &w, 8, 3).max_ratio > 0.1);
    }

    #[test]
    fn test_functions_vanish_on_the_edges() {
        let spec = GridSpec::new(1.0, 16).unwrap();
        for phi in square_test_functions(&spec, 4, 2) {
            let f = FloatPoly::from(&phi);
            assert!(f.eval2(0.5, 0.13).abs() < 1e-12 && f.eval2(-0.2, -0.5).abs() < 1e-12);
        }
    }
}
