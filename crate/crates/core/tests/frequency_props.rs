use nodalkit::corpus::{random_harmonic, random_nonzero_rational, random_rational};
use nodalkit::exact::{self, int, rat, Rational};
use nodalkit::frequency::{blow_down_degree, blow_up, frequency_curve, vanishing_order, FrequencyProfile};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ladder() -> Vec<Rational> {
    [rat(1, 64), rat(1, 16), rat(1, 4), int(1), int(4), int(16), int(64)].to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn frequency_never_decreases(seed: u64, n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = rng.random_range(1..=if n == 2 { 5 } else { 3 });
        let u = random_harmonic(&mut rng, n, 0, deg);
        let mut center = Vec::with_capacity(n);
        for _ in 0..n {
            center.push(random_rational(&mut rng, 1, 4));
        }
        let curve = frequency_curve(&u, &center, &ladder()).unwrap();
        prop_assert!(curve.values.windows(2).all(|w| w[0] <= w[1]), "{}: {:?}", u, curve.values);
        prop_assert!(curve.monotone);
    }

    #[test]
    fn blow_up_rescales_the_radius(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = rng.random_range(1..=4);
        let u = random_harmonic(&mut rng, 2, 0, deg);
        let center = vec![random_rational(&mut rng, 1, 3), random_rational(&mut rng, 1, 3)];
        let r = exact::pow(&rat(1, 2), rng.random_range(0..=4)) * int(rng.random_range(1..=3));
        let t = rat(rng.random_range(1..=7), rng.random_range(1..=4));
        let direct = FrequencyProfile::new(&u, &center).unwrap().at(&(&t * &r)).unwrap();
        prop_assert_eq!(blow_up(&u, &center, &r).unwrap().frequency(&t).unwrap(), direct);
    }

    #[test]
    fn frequency_ignores_constant_factors(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = rng.random_range(1..=4);
        let u = random_harmonic(&mut rng, 2, 0, deg);
        let c = random_nonzero_rational(&mut rng, 9, 7);
        let center = vec![random_rational(&mut rng, 1, 2), random_rational(&mut rng, 1, 2)];
        let a = frequency_curve(&u, &center, &ladder()).unwrap();
        let b = frequency_curve(&u.scale(&c), &center, &ladder()).unwrap();
        prop_assert_eq!(a.values, b.values);
    }

    #[test]
    fn blow_down_recovers_the_degree(seed: u64, n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = rng.random_range(1..=4);
        let u = random_harmonic(&mut rng, n, 0, deg);
        let b = blow_down_degree(&u, &[int(1), int(10), int(100), int(1000)]).unwrap();
        prop_assert_eq!(b.degree, deg);
        let last = exact::to_f64(b.values.last().unwrap());
        prop_assert!((last - deg as f64).abs() < 1e-2);
    }

    #[test]
    fn small_radius_frequency_is_the_vanishing_order(seed: u64, n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let low = rng.random_range(1..=3);
        let high = low + rng.random_range(0..=1);
        let u = random_harmonic(&mut rng, n, low, high);
        let origin = vec![int(0); n];
        let order = vanishing_order(&u, &origin).unwrap().order;
        let profile = FrequencyProfile::new(&u, &origin).unwrap();
        prop_assert_eq!(profile.limit_at_zero(), Some(int(order as i64)));
        let small = exact::to_f64(&profile.at(&rat(1, 1000)).unwrap());
        prop_assert!((small - order as f64).abs() < 0.05, "N = {} vs order {}", small, order);
    }
}

#[test]
fn off_nodal_centres_have_order_zero() {
    let u = nodalkit::poly::parse_polynomial("x^2 - y^2 + 1", 2).unwrap();
    let origin = [int(0), int(0)];
    assert_eq!(vanishing_order(&u, &origin).unwrap().order, 0);
    assert_eq!(FrequencyProfile::new(&u, &origin).unwrap().limit_at_zero(), Some(int(0)));
}
