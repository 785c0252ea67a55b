use nodalkit::corpus::{planar_corpus, random_harmonic};
use nodalkit::exact::int;
use nodalkit::nodal::{class_bounds, count_domains, count_domains_field, critical_points, euler_check, feature_points, FeaturePoint};
use nodalkit::poly::FloatPoly;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn counts_survive_rotation(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = rng.random_range(1..=4);
        let u = random_harmonic(&mut rng, 2, 0, deg);
        let plain = count_domains(&u, &int(2), 128);
        let theta = std::f64::consts::FRAC_PI_6;
        let (c, s) = (theta.cos(), theta.sin());
        let crit = critical_points(&u).unwrap();
        let features: Vec<FeaturePoint> = feature_points(&u, &crit)
            .into_iter()
            .map(|p| FeaturePoint { x: c * p.x + s * p.y, y: -s * p.x + c * p.y, ..p })
            .filter(|p| p.x.hypot(p.y) <= 2.2 + 1e-9)
            .collect();
        let rotated = count_domains_field(&FloatPoly::from(&u).rotate2(theta), &features, 2.0, 128);
        if let (Ok(a), Ok(b)) = (plain, rotated) {
            prop_assert_eq!(a.count, b.count, "{}", u);
        }
    }

    #[test]
    fn euler_sum_matches_the_count(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for u in planar_corpus(&mut rng, 4, 4) {
            let report = euler_check(&u, 128).unwrap();
            let excess: usize = report.singular_points.iter().map(|p| (p.order - 1) as usize).sum();
            prop_assert_eq!(excess + 1 + report.degree as usize, report.k_floodfill, "{}", u);
            let bounds = class_bounds(&u, 128).unwrap();
            prop_assert!(bounds.lower_ok && bounds.upper_ok, "{}: {:?}", u, bounds);
        }
    }
}

#[test]
fn rotating_a_saddle_keeps_four_domains() {
    let u = nodalkit::poly::parse_polynomial("x^2 - y^2", 2).unwrap();
    let f = FloatPoly::from(&u);
    let origin = [FeaturePoint { x: 0.0, y: 0.0, wedge: std::f64::consts::FRAC_PI_2, corridor: 0.0 }];
    for k in 0..8 {
        let theta = k as f64 * std::f64::consts::PI / 8.0;
        assert_eq!(count_domains_field(&f.rotate2(theta), &origin, 1.0, 64).unwrap().count, 4);
    }
}
