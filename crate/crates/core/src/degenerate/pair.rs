use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DegenerateError;
use crate::corpus::{random_harmonic, random_rational};
use crate::exact::{rat, Rational};
use crate::poly::{divide, ratio_space, sphere_ball_integral, ExactMeasure, Polynomial, Region};

/// Bounded retries when a nontrivial ratio is required.
pub const MAX_ATTEMPTS: u32 = 32;

/// A harmonic `u` vanishing at the origin, a ratio `R` with `u R` harmonic,
/// and `v = u R`.
///
/// `u` keeps its rational coefficients; its normalization is carried by the
/// exact squared norm `||u||^2_{L^2(B_{1/2})}`, so that every derived
/// quantity stays exact up to a final square root.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedPair {
    pub n0: u32,
    pub m: u32,
    pub seed: u64,
    pub attempts: u32,
    pub u: Polynomial,
    pub r: Polynomial,
    pub v: Polynomial,
    pub u_norm_sq: ExactMeasure,
}

impl CertifiedPair {
    /// Factor that brings `u` to unit norm on `B_{1/2}`.
    pub fn normalization(&self) -> f64 {
        1.0 / self.u_norm_sq.to_f64().sqrt()
    }

    /// `||v||^2_{L^2(B_1)}` for the normalized pair, as an exact rational
    /// (the sphere-area factors cancel).
    pub fn v_l2_sq(&self) -> Rational {
        let v_sq = sphere_ball_integral(&(&self.v * &self.v), &Rational::from_integer(1.into()), Region::Ball)
            .expect("positive radius");
        v_sq.ratio(&self.u_norm_sq).expect("u is nonzero")
    }

    pub fn v_l2(&self) -> f64 {
        crate::exact::to_f64(&self.v_l2_sq()).sqrt()
    }

    /// Exact checks: harmonicity of `u` and `v`, `u(0) = 0`, and exact
    /// divisibility of `v` by `u` with quotient `R`.
    pub fn verify(&self) -> Result<(), DegenerateError> {
        if !self.u.is_harmonic() || !self.v.is_harmonic() {
            return Err(DegenerateError::Verification("u or v is not harmonic".into()));
        }
        if !self.u.constant_term().is_zero() {
            return Err(DegenerateError::Verification("u does not vanish at 0".into()));
        }
        let (q, rem) = divide(&self.v, &self.u)?;
        if !rem.is_zero() || q != self.r {
            return Err(DegenerateError::Verification("v is not u R".into()));
        }
        Ok(())
    }
}

pub fn certified_pair(n0: u32, m: u32, seed: u64) -> Result<CertifiedPair, DegenerateError> {
    certified_pair_with(n0, m, seed, m > 0)
}

/// Draws `u` from the planar harmonic bases of degrees `1..=n0` and `R`
/// from `ratio_space(u, m)` with random rational coordinates. With
/// `require_nontrivial`, draws whose ratio space holds only constants are
/// rejected and redrawn from the next random stream.
pub fn certified_pair_with(n0: u32, m: u32, seed: u64, require_nontrivial: bool) -> Result<CertifiedPair, DegenerateError> {
    if n0 < 1 {
        return Err(DegenerateError::InvalidParameter("N0 must be at least 1".into()));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let u = random_harmonic(&mut rng, 2, 1, n0);
        let basis = ratio_space(&u, m)?;
        if require_nontrivial && basis.len() < 2 {
            continue;
        }
        let r = loop {
            let mut r = Polynomial::zero(2);
            for b in &basis {
                r = &r + &b.scale(&random_rational(&mut rng, 5, 4));
            }
            let nontrivial = r.degree().is_some_and(|d| d > 0);
            if !r.is_zero() && (nontrivial || !require_nontrivial) {
                break r;
            }
        };
        let v = &u * &r;
        let u_norm_sq = sphere_ball_integral(&(&u * &u), &rat(1, 2), Region::Ball)?;
        let pair = CertifiedPair { n0, m, seed, attempts: attempt + 1, u, r, v, u_norm_sq };
        pair.verify()?;
        return Ok(pair);
    }
    Err(DegenerateError::RetriesExhausted { n0, m, seed, attempts: MAX_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn pairs_are_certified() {
        for seed in 0..20 {
            let pair = certified_pair(3, 3, seed).unwrap();
            pair.verify().unwrap();
            assert!(pair.r.degree().unwrap() > 0);
            assert!(pair.u.degree().unwrap() <= 3);
        }
    }

    #[test]
    fn constant_ratio_when_m_is_zero() {
        let pair = certified_pair(2, 0, 4).unwrap();
        assert_eq!(pair.r.degree(), Some(0));
        assert_eq!(pair.attempts, 1);
    }

    #[test]
    fn normalization_of_known_pair() {
        // u = 2xy: int_{B_1/2} 4 x^2 y^2 = pi / 384
        let u = parse_polynomial("2*x*y", 2).unwrap();
        let r = parse_polynomial("x^2 - y^2", 2).unwrap();
        let v = &u * &r;
        let u_norm_sq = sphere_ball_integral(&(&u * &u), &rat(1, 2), Region::Ball).unwrap();
        let pair = CertifiedPair { n0: 2, m: 2, seed: 0, attempts: 1, u, r, v, u_norm_sq };
        pair.verify().unwrap();
        assert!((pair.u_norm_sq.to_f64() - std::f64::consts::PI / 384.0).abs() < 1e-15);
        // v = Im(z^4) / 2 = 2x^3 y - 2x y^3: int_{B_1} v^2 = pi / 40
        assert_eq!(pair.v_l2_sq(), rat(384, 40));
        assert_eq!(ratio_space(&pair.u, 2).unwrap()[1], pair.r);
    }
}
