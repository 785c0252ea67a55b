use nodalkit::corpus::{random_harmonic, random_rational};
use nodalkit::exact::{self, int, Rational};
use nodalkit::poly::{
    divide, harmonic_basis, parse_polynomial, ratio_space, sphere_ball_integral, unit_sphere_area, Monomial, Polynomial,
    Region,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for _ in 0..rng.random_range(1..=6) {
        let mut term = Polynomial::constant(n, random_rational(rng, 9, 5));
        let mut left = rng.random_range(0..=max_degree);
        for i in 0..n {
            let e = if i + 1 == n { left } else { rng.random_range(0..=left) };
            left -= e;
            term = &term * &Polynomial::var(n, i).pow(e);
        }
        p = &p + &term;
    }
    p
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng, 7, 6)).collect()
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_multiplicative(seed: u64, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, n, 4);
        let q = random_poly(&mut rng, n, 4);
        let x = random_point(&mut rng, n);
        let lhs = (&p * &q).evaluate(&x).unwrap();
        prop_assert_eq!(lhs, p.evaluate(&x).unwrap() * q.evaluate(&x).unwrap());
    }

    #[test]
    fn division_recombines(seed: u64, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, n, 6);
        let q = random_poly(&mut rng, n, 6);
        prop_assume!(!q.is_zero());
        let (quotient, remainder) = divide(&p, &q).unwrap();
        prop_assert_eq!(&(&quotient * &q) + &remainder, p);
    }

    #[test]
    fn exact_multiples_divide(seed: u64, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_poly(&mut rng, n, 3);
        let r = random_poly(&mut rng, n, 3);
        prop_assume!(!q.is_zero());
        let (quotient, remainder) = divide(&(&q * &r), &q).unwrap();
        prop_assert!(remainder.is_zero());
        prop_assert_eq!(quotient, r);
    }

    #[test]
    fn printing_round_trips(seed: u64, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, n, 5);
        let text = p.to_string();
        let again = parse_polynomial(&text, n).unwrap();
        prop_assert_eq!(again.to_string(), text);
        prop_assert_eq!(again, p);
    }

    #[test]
    fn ratio_space_products_are_harmonic(seed: u64, m in 0u32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = rng.random_range(1..=3);
        let u = random_harmonic(&mut rng, 2, 1, deg);
        for r in ratio_space(&u, m).unwrap() {
            prop_assert!((&u * &r).is_harmonic(), "u = {}, R = {}", u, r);
            prop_assert!(r.degree().unwrap_or(0) <= m);
        }
    }
}

#[test]
fn harmonic_bases_are_homogeneous_harmonic_and_complete() {
    for n in 2..=4usize {
        for k in 0..=6i64 {
            let basis = harmonic_basis(n, k).unwrap();
            let expected = binomial(n as i64 + k - 1, k) - binomial(n as i64 + k - 3, k - 2);
            assert_eq!(basis.len() as i64, expected, "n = {n}, k = {k}");
            for b in &basis {
                assert!(b.is_homogeneous() && b.degree() == Some(k as u32), "{b}");
                assert!(b.laplacian().is_zero(), "{b}");
            }
        }
    }
}

/// Monte Carlo over the ball against the exact integral, within three
/// standard errors.
#[test]
fn ball_integrals_match_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    const SAMPLES: usize = 200_000;
    for n in [2usize, 3] {
        for _ in 0..20 {
            let exps: Vec<u32> = (0..n).map(|_| rng.random_range(0..=4)).collect();
            let p = Polynomial::from_terms(n, [(Monomial::new(exps.clone()), int(1))]).unwrap();
            let exact_value = sphere_ball_integral(&p, &int(1), Region::Ball).unwrap().to_f64();
            let volume = unit_sphere_area(n) / n as f64;
            let (mut sum, mut sum_sq, mut kept) = (0.0, 0.0, 0usize);
            while kept < SAMPLES {
                let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                if x.iter().map(|v| v * v).sum::<f64>() > 1.0 {
                    continue;
                }
                let v = p.evaluate_f64(&x).unwrap();
                sum += v;
                sum_sq += v * v;
                kept += 1;
            }
            let mean = sum / SAMPLES as f64;
            let var = (sum_sq / SAMPLES as f64 - mean * mean).max(0.0);
            let se = volume * (var / SAMPLES as f64).sqrt();
            let estimate = volume * mean;
            assert!(
                (estimate - exact_value).abs() <= 3.0 * se + 1e-12,
                "x^{exps:?}: exact {exact_value}, estimate {estimate} +- {se}"
            );
        }
    }
}

#[test]
fn sphere_integral_of_one_is_the_area() {
    for n in 2..=5usize {
        let m = sphere_ball_integral(&Polynomial::one(n), &int(1), Region::Sphere).unwrap();
        assert_eq!(m.coefficient, int(1));
        assert!((m.to_f64() - unit_sphere_area(n)).abs() < 1e-12);
        let ball = sphere_ball_integral(&Polynomial::one(n), &exact::rat(1, 2), Region::Ball).unwrap();
        assert_eq!(ball.coefficient, exact::rat(1, (n as i64) * (1 << n)));
    }
}
