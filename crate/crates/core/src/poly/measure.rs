use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Polynomial};
use crate::exact::{self, Rational};

/// `coefficient * omega_{n-1}`, where `omega_{n-1}` is the surface area of
/// the unit sphere in `R^n`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMeasure {
    pub coefficient: Rational,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Sphere,
    Ball,
}

impl ExactMeasure {
    pub fn new(coefficient: Rational, dim: usize) -> Self {
        ExactMeasure { coefficient, dim }
    }

    pub fn zero(dim: usize) -> Self {
        ExactMeasure { coefficient: Rational::zero(), dim }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    /// Exact ratio `self / other`; `None` if `other` is zero.
    pub fn ratio(&self, other: &ExactMeasure) -> Option<Rational> {
        assert_eq!(self.dim, other.dim, "measures on different spheres");
        (!other.coefficient.is_zero()).then(|| &self.coefficient / &other.coefficient)
    }

    pub fn to_f64(&self) -> f64 {
        exact::to_f64(&self.coefficient) * unit_sphere_area(self.dim)
    }
}

impl Add for &ExactMeasure {
    type Output = ExactMeasure;
    fn add(self, rhs: &ExactMeasure) -> ExactMeasure {
        assert_eq!(self.dim, rhs.dim);
        ExactMeasure::new(&self.coefficient + &rhs.coefficient, self.dim)
    }
}

impl Mul<&Rational> for &ExactMeasure {
    type Output = ExactMeasure;
    fn mul(self, rhs: &Rational) -> ExactMeasure {
        ExactMeasure::new(&self.coefficient * rhs, self.dim)
    }
}

/// Surface area of the unit sphere in `R^n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * unit_sphere_area(n - 2),
    }
}

/// Average of `x^alpha` over the unit sphere in `R^n`.
pub fn sphere_average(m: &Monomial) -> Rational {
    let e = m.exponents();
    if e.iter().any(|&a| a % 2 == 1) {
        return Rational::zero();
    }
    let n = e.len() as u64;
    let mut num = BigInt::one();
    for &a in e {
        let mut k = a as i64 - 1;
        while k > 1 {
            num *= k;
            k -= 2;
        }
    }
    let mut den = BigInt::one();
    let half = m.degree() as u64 / 2;
    for j in 0..half {
        den *= n + 2 * j;
    }
    Rational::new(num, den)
}

/// `m[d] = sum over |alpha| = d of c_alpha * avg(x^alpha)`, so that the
/// sphere integral at radius `r` is `omega * sum_d m[d] r^(d+n-1)`.
pub fn radial_moments(p: &Polynomial) -> Vec<Rational> {
    let deg = p.degree().unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        let avg = sphere_average(m);
        if !avg.is_zero() {
            out[m.degree() as usize] += c * avg;
        }
    }
    out
}

/// Exact integral of `p` over the sphere or ball of the given radius about
/// the origin.
pub fn sphere_ball_integral(
    p: &Polynomial,
    radius: &Rational,
    region: Region,
) -> Result<ExactMeasure, PolyError> {
    if !radius.is_positive() {
        return Err(PolyError::NonPositiveRadius);
    }
    let n = p.dim() as u32;
    let mut total = Rational::zero();
    for (d, md) in radial_moments(p).into_iter().enumerate() {
        if md.is_zero() {
            continue;
        }
        let d = d as u32;
        total += match region {
            Region::Sphere => md * exact::pow(radius, d + n - 1),
            Region::Ball => md * exact::pow(radius, d + n) / Rational::from_integer((d + n).into()),
        };
    }
    Ok(ExactMeasure::new(total, p.dim()))
}
