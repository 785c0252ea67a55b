use nodalkit::corpus::random_harmonic;
use nodalkit::exact::{self, int, rat, Rational};
use nodalkit::weighted::{
    capacity_decay, critical_a, muckenhoupt_estimate, moser_bound_probe, nbar0, sobolev_exponents, sobolev_probe,
    test_functions, Branch, Exponent, WeightedError,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lattice() -> impl Strategy<Value = (usize, Rational, Rational)> {
    (2usize..=5, 1i64..=12, 1i64..=2, -24i64..=32).prop_map(|(n, p, q, k)| (n, rat(p, q), rat(k, 8)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exponents_follow_the_branch_rules((n, nb, a) in lattice()) {
        let a_s = if int(2) / &nb < int(1) { int(2) / &nb } else { int(1) };
        prop_assert_eq!(critical_a(&nb), a_s.clone());
        let exps = match sobolev_exponents(n, &a, &nb) {
            Err(WeightedError::NotIntegrable { .. }) => {
                prop_assert!(a <= -a_s);
                return Ok(());
            }
            other => other.unwrap(),
        };
        let a_plus = if a > int(0) { a.clone() } else { int(0) };
        match exps.branch {
            Branch::Muckenhoupt => {
                prop_assert!(-a_s.clone() < a && a < a_s);
                let d = int(n as i64) + &a_plus * &nb;
                prop_assert_eq!(exps.alpha_moser.clone(), Some(d.clone()));
                let expected = if d > int(2) { Exponent::Finite(int(2) * &d / (&d - int(2))) } else { Exponent::Unbounded };
                prop_assert_eq!(exps.two_star.clone(), Some(expected));
            }
            Branch::Superdegenerate => {
                prop_assert!(a > int(1));
                let g = exps.gamma.clone().unwrap();
                prop_assert!(g > int(2));
                if n >= 3 {
                    prop_assert!(g < int(2 * n as i64) / int(n as i64 - 2));
                }
                prop_assert_eq!(exps.alpha_moser.clone(), Some(int(2) * &g / (&g - int(2))));
            }
            Branch::OutOfRange => {
                prop_assert!(a_s <= a && a <= int(1));
                prop_assert!(exps.two_star.is_none() && exps.alpha_moser.is_none());
            }
        }
    }

    #[test]
    fn exponents_move_continuously_inside_a_branch((n, nb, a) in lattice()) {
        let step = rat(1, 1000);
        let (Ok(lo), Ok(hi)) = (sobolev_exponents(n, &a, &nb), sobolev_exponents(n, &(&a + &step), &nb)) else {
            return Ok(());
        };
        prop_assume!(lo.branch == hi.branch && lo.branch != Branch::OutOfRange);
        let (x, y) = (exact::to_f64(&lo.alpha_moser.unwrap()), exact::to_f64(&hi.alpha_moser.unwrap()));
        prop_assert!((x - y).abs() < 0.1, "alpha jumps {} -> {}", x, y);
        if let (Some(Exponent::Finite(p)), Some(Exponent::Finite(q))) = (lo.two_star, hi.two_star) {
            let (p, q) = (exact::to_f64(&p), exact::to_f64(&q));
            prop_assert!((p - q).abs() < 0.1 * p.max(1.0), "2* jumps {} -> {}", p, q);
        }
    }
}

#[test]
fn capacity_energy_decreases_for_a_at_least_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (n, a) in [(2, int(1)), (2, rat(3, 2)), (2, int(2)), (3, int(2))] {
        let deg = rng.random_range(1..=3);
        let u = random_harmonic(&mut rng, n, 1, deg);
        let report = capacity_decay(&u, &a, &[1e-2, 1e-3, 1e-4]).unwrap();
        assert!(report.converged, "{u}");
        assert!(report.cases.iter().all(|c| c.lhs < c.rhs), "{u}, a = {a}: {:?}", report.cases);
    }
}

#[test]
fn constant_weight_is_exactly_muckenhoupt_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [2, 3] {
        let u = random_harmonic(&mut rng, n, 1, 3);
        let report = muckenhoupt_estimate(&u, &int(0), 8, 5).unwrap();
        for case in &report.cases {
            assert!((case.ratio - 1.0).abs() < 1e-12, "{}: {}", case.id, case.ratio);
        }
    }
}

/// Sobolev and local-boundedness ratios stay finite and below fixed
/// constants across a corpus, for Muckenhoupt and superdegenerate `a`.
#[test]
fn probe_constants_are_bounded_over_a_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut worst_sobolev: f64 = 0.0;
    let mut worst_moser: f64 = 0.0;
    for _ in 0..6 {
        let deg = rng.random_range(1..=3);
        let u = random_harmonic(&mut rng, 2, 1, deg);
        let a_s = critical_a(&nbar0(&u));
        let fns = test_functions(2, &rat(7, 8), 4, rng.random());
        for a in [a_s / int(2), int(2)] {
            let s = sobolev_probe(&u, &a, &fns).unwrap();
            assert!(s.max_ratio.is_finite(), "{u}, a = {a}");
            worst_sobolev = worst_sobolev.max(s.max_ratio);
            let m = moser_bound_probe(&u, &a, &u, &rat(1, 4), &rat(1, 2), &int(2)).unwrap();
            assert!(m.max_ratio.is_finite(), "{u}, a = {a}");
            worst_moser = worst_moser.max(m.max_ratio);
        }
    }
    println!("sobolev {worst_sobolev:.4} moser {worst_moser:.4}");
    assert!(worst_sobolev < 10.0 && worst_moser < 10.0, "sobolev {worst_sobolev} moser {worst_moser}");
}
