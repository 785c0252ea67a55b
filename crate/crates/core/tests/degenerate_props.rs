use nodalkit::degenerate::{assemble_solve, certified_pair, weak_residual, GridField, GridSpec};
use nodalkit::exact::{int, rat};
use nodalkit::poly::{parse_polynomial, FloatPoly, Polynomial};
use nodalkit::weighted::moser_bound_probe;
use proptest::prelude::*;

fn boundary_extremes(f: &GridField) -> (f64, f64) {
    let n = f.spec.nodes_per_side();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..n {
        for i in 0..n {
            if f.spec.is_boundary(i, j) {
                lo = lo.min(f.at(i, j));
                hi = hi.max(f.at(i, j));
            }
        }
    }
    (lo, hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solutions_obey_the_maximum_principle(seed in 0u64..1000, k in 1.0f64..4.0, phase in 0.0f64..6.3) {
        let pair = certified_pair(3, 3, seed).unwrap();
        let spec = GridSpec::new(1.0, 32).unwrap();
        let boundary = GridField::from_fn(spec, |x, y| (k * x + phase).sin() * (k * y).cos() + x * y);
        let solved = assemble_solve(&pair.u, &boundary).unwrap();
        let (lo, hi) = boundary_extremes(&boundary);
        let tol = 1e-8 * (hi - lo).abs().max(1.0);
        prop_assert!(solved.field.values.iter().all(|&v| v >= lo - tol && v <= hi + tol), "{}", pair.u);
    }
}

fn residual_at(u: &Polynomial, r: &Polynomial, cells: usize) -> f64 {
    let spec = GridSpec::new(1.0, cells).unwrap();
    let boundary = GridField::from_poly(spec, &FloatPoly::from(r));
    let solved = assemble_solve(u, &boundary).unwrap();
    weak_residual(u, &solved.field, 20, 7).max_ratio
}

#[test]
fn weak_residual_shrinks_under_refinement() {
    let manufactured = (parse_polynomial("2*x*y", 2).unwrap(), parse_polynomial("2*x^2 - 2*y^2", 2).unwrap());
    let mut cases = vec![manufactured];
    for seed in [3, 4] {
        let pair = certified_pair(3, 3, seed).unwrap();
        cases.push((pair.u, pair.r));
    }
    for (u, r) in &cases {
        let values: Vec<f64> = [32, 64, 128].iter().map(|&c| residual_at(u, r, c)).collect();
        for w in values.windows(2) {
            assert!(w[0] / w[1] >= 1.5, "u = {u}, R = {r}: {values:?}");
        }
    }
}

/// The local bound for the ratio field holds with constant one at every
/// radius.
#[test]
fn ratio_bound_holds_at_every_radius() {
    for seed in [1, 2, 3] {
        let pair = certified_pair(3, 3, seed).unwrap();
        let mut ratios = Vec::new();
        for (rho, r) in [(rat(1, 8), rat(1, 4)), (rat(1, 4), rat(1, 2)), (rat(3, 8), rat(3, 4))] {
            let report = moser_bound_probe(&pair.u, &int(2), &pair.r, &rho, &r, &int(2)).unwrap();
            assert!(report.converged);
            ratios.push(report.max_ratio);
        }
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        assert!(lo > 0.0 && hi.is_finite(), "{ratios:?}");
        assert!(hi < 1.0, "seed {seed}: {ratios:?}");
    }
}
