//! Almgren frequency of polynomials for the flat Laplacian.
//!
//! After shifting `u` to the center, `H(r)` and `D(r)` are polynomials in
//! `r` times the symbolic sphere area, so `N(r) = r D(r) / H(r)` is an exact
//! rational function of `r`.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{self, Rational};
use crate::poly::univariate::UniPoly;
use crate::poly::{radial_moments, sphere_ball_integral, ExactMeasure, Monomial, PolyError, Polynomial, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrequencyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is not harmonic")]
    NotHarmonic,
    #[error("height vanishes at radius {0}")]
    VanishingHeight(String),
    #[error("inner radius exceeds outer radius")]
    RadiiOrder,
    #[error("{0}")]
    OutOfRange(String),
    #[error("empty sample grid")]
    EmptyGrid,
}

/// Height on `dB_r(center)` and Dirichlet energy on `B_r(center)`.
pub fn height_energy(
    u: &Polynomial,
    center: &[Rational],
    r: &Rational,
) -> Result<(ExactMeasure, ExactMeasure), FrequencyError> {
    if !r.is_positive() {
        return Err(FrequencyError::NonPositiveRadius);
    }
    let v = u.shift_scale(center, &Rational::one())?;
    let h = sphere_ball_integral(&(&v * &v), r, Region::Sphere)?;
    let d = sphere_ball_integral(&v.gradient_norm_sq(), r, Region::Ball)?;
    Ok((h, d))
}

/// `N(center, u, r)` as the rational function `A(r) / B(r)` where
/// `A(r) = r^(2-n) D(r) / omega` and `B(r) = r^(1-n) H(r) / omega`.
#[derive(Clone, Debug)]
pub struct FrequencyProfile {
    pub center: Vec<Rational>,
    pub numerator: UniPoly,
    pub denominator: UniPoly,
}

impl FrequencyProfile {
    pub fn new(u: &Polynomial, center: &[Rational]) -> Result<Self, FrequencyError> {
        if u.is_zero() {
            return Err(FrequencyError::ZeroPolynomial);
        }
        let v = u.shift_scale(center, &Rational::one())?;
        let n = u.dim();
        let denominator = UniPoly::new(radial_moments(&(&v * &v)));
        let energy = radial_moments(&v.gradient_norm_sq());
        let mut num = vec![Rational::zero(); energy.len() + 2];
        for (d, m) in energy.into_iter().enumerate() {
            num[d + 2] = m / Rational::from_integer(((d + n) as i64).into());
        }
        Ok(FrequencyProfile { center: center.to_vec(), numerator: UniPoly::new(num), denominator })
    }

    pub fn at(&self, r: &Rational) -> Result<Rational, FrequencyError> {
        if !r.is_positive() {
            return Err(FrequencyError::NonPositiveRadius);
        }
        let h = self.denominator.eval(r);
        if h.is_zero() {
            return Err(FrequencyError::VanishingHeight(exact::fraction_string(r)));
        }
        Ok(self.numerator.eval(r) / h)
    }

    /// Exact `lim_{r -> 0+} N(r)`; `None` if it diverges.
    pub fn limit_at_zero(&self) -> Option<Rational> {
        let lb = self.denominator.low_degree()?;
        match self.numerator.low_degree() {
            None => Some(Rational::zero()),
            Some(la) if la > lb => Some(Rational::zero()),
            Some(la) if la == lb => Some(self.numerator.coeff(la) / self.denominator.coeff(lb)),
            Some(_) => None,
        }
    }

    /// Exact `lim_{r -> inf} N(r)`; `None` if it diverges.
    pub fn limit_at_infinity(&self) -> Option<Rational> {
        let db = self.denominator.degree()?;
        match self.numerator.degree() {
            None => Some(Rational::zero()),
            Some(da) if da < db => Some(Rational::zero()),
            Some(da) if da == db => Some(self.numerator.leading() / self.denominator.leading()),
            Some(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyCurve {
    pub center: Vec<Rational>,
    pub radii: Vec<Rational>,
    pub values: Vec<Rational>,
    pub monotone: bool,
}

pub fn frequency_curve(
    u: &Polynomial,
    center: &[Rational],
    radii: &[Rational],
) -> Result<FrequencyCurve, FrequencyError> {
    let profile = FrequencyProfile::new(u, center)?;
    let mut radii = radii.to_vec();
    radii.sort();
    let values = radii.iter().map(|r| profile.at(r)).collect::<Result<Vec<_>, _>>()?;
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);
    Ok(FrequencyCurve { center: center.to_vec(), radii, values, monotone })
}

/// Radii `2^-j` for `j` in `from..=to`, increasing.
pub fn geometric_radii(from: u32, to: u32) -> Vec<Rational> {
    (from..=to)
        .rev()
        .map(|j| Rational::new(1.into(), num_bigint::BigInt::from(1) << j))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingOrder {
    pub order: u32,
    pub leading_part: Polynomial,
}

pub fn vanishing_order(u: &Polynomial, x0: &[Rational]) -> Result<VanishingOrder, FrequencyError> {
    if u.is_zero() {
        return Err(FrequencyError::ZeroPolynomial);
    }
    let v = u.shift_scale(x0, &Rational::one())?;
    let order = v.low_degree().expect("nonzero");
    let leading_part = v.homogeneous_component(order);
    if u.is_harmonic() && !leading_part.is_harmonic() {
        return Err(FrequencyError::NotHarmonic);
    }
    Ok(VanishingOrder { order, leading_part })
}

#[derive(Clone, Debug)]
pub struct DoublingReport {
    pub inner: ExactMeasure,
    pub outer: ExactMeasure,
    /// `log(I(R)/I(r)) / log(R/r)`.
    pub witness: f64,
    pub frequency_outer: Rational,
    /// `n + 2 N(x0, u, R)`.
    pub bound: f64,
}

impl DoublingReport {
    pub fn pass(&self) -> bool {
        self.witness <= self.bound + 1e-12
    }
}

fn ball_l2(u: &Polynomial, x0: &[Rational], r: &Rational) -> Result<ExactMeasure, FrequencyError> {
    let v = u.shift_scale(x0, &Rational::one())?;
    Ok(sphere_ball_integral(&(&v * &v), r, Region::Ball)?)
}

pub fn doubling_check(
    u: &Polynomial,
    x0: &[Rational],
    r: &Rational,
    big_r: &Rational,
) -> Result<DoublingReport, FrequencyError> {
    if !r.is_positive() {
        return Err(FrequencyError::NonPositiveRadius);
    }
    if r > big_r {
        return Err(FrequencyError::RadiiOrder);
    }
    if u.is_zero() {
        return Err(FrequencyError::ZeroPolynomial);
    }
    let inner = ball_l2(u, x0, r)?;
    let outer = ball_l2(u, x0, big_r)?;
    let witness = if r == big_r {
        f64::NAN
    } else {
        let ratio = outer.ratio(&inner).ok_or_else(|| FrequencyError::VanishingHeight(exact::fraction_string(r)))?;
        exact::ln_abs(&ratio) / exact::ln_abs(&(big_r / r))
    };
    let frequency_outer = FrequencyProfile::new(u, x0)?.at(big_r)?;
    let bound = u.dim() as f64 + 2.0 * exact::to_f64(&frequency_outer);
    Ok(DoublingReport { inner, outer, witness, frequency_outer, bound })
}

#[derive(Clone, Debug)]
pub struct NondegeneracyReport {
    pub lhs: ExactMeasure,
    /// `int_{B_1} u^2`, to be multiplied by `r^(n + 2 Nbar0)`.
    pub unit_mass: ExactMeasure,
    /// `lhs / rhs`, exact when `2 Nbar0` is an integer.
    pub exact_ratio: Option<Rational>,
    pub ratio: f64,
}

pub fn nondegeneracy_check(
    u: &Polynomial,
    x0: &[Rational],
    r: &Rational,
    nbar0: &Rational,
) -> Result<NondegeneracyReport, FrequencyError> {
    if u.is_zero() {
        return Err(FrequencyError::ZeroPolynomial);
    }
    let norm_sq: Rational = x0.iter().map(|c| c * c).sum();
    if norm_sq >= exact::rat(9, 16) {
        return Err(FrequencyError::OutOfRange("center must lie in B_{3/4}".into()));
    }
    if !r.is_positive() || *r > exact::rat(1, 8) {
        return Err(FrequencyError::OutOfRange("radius must lie in (0, 1/8]".into()));
    }
    let lhs = ball_l2(u, x0, r)?;
    let origin = vec![Rational::zero(); u.dim()];
    let unit_mass = ball_l2(u, &origin, &Rational::one())?;
    let base = lhs.ratio(&unit_mass).expect("nonzero polynomial has positive mass");
    let exponent = Rational::from_integer((u.dim() as i64).into()) + nbar0 * exact::int(2);
    let exact_ratio = (exact::is_integer(&exponent) && !exponent.is_negative()).then(|| {
        let e = exact::floor_to_i64(&exponent).unwrap() as u32;
        &base / exact::pow(r, e)
    });
    let ratio = (exact::ln_abs(&base) - exact::to_f64(&exponent) * exact::ln_abs(r)).exp();
    Ok(NondegeneracyReport { lhs, unit_mass, exact_ratio, ratio })
}

/// `u(x0 + r x)` together with its height on the unit sphere.
///
/// The normalized blow-up is `rescaled / sqrt(normalization)`; keeping the
/// square root symbolic means `H(0, rescaled, 1) = normalization` holds
/// exactly, i.e. the normalized function has unit height up to `omega`.
#[derive(Clone, Debug)]
pub struct BlowUpResult {
    pub rescaled: Polynomial,
    pub normalization: ExactMeasure,
}

impl BlowUpResult {
    /// Float coefficients of `rescaled / sqrt(normalization.coefficient)`.
    pub fn normalized_coefficients(&self) -> Vec<(Monomial, f64)> {
        let s = exact::to_f64(&self.normalization.coefficient).sqrt();
        self.rescaled
            .terms()
            .map(|(m, c)| (m.clone(), exact::to_f64(c) / s))
            .collect()
    }

    pub fn frequency(&self, t: &Rational) -> Result<Rational, FrequencyError> {
        FrequencyProfile::new(&self.rescaled, &vec![Rational::zero(); self.rescaled.dim()])?.at(t)
    }
}

pub fn blow_up(u: &Polynomial, x0: &[Rational], r: &Rational) -> Result<BlowUpResult, FrequencyError> {
    if !r.is_positive() {
        return Err(FrequencyError::NonPositiveRadius);
    }
    if u.is_zero() {
        return Err(FrequencyError::ZeroPolynomial);
    }
    let rescaled = u.shift_scale(x0, r)?;
    let normalization = sphere_ball_integral(&(&rescaled * &rescaled), &Rational::one(), Region::Sphere)?;
    Ok(BlowUpResult { rescaled, normalization })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowDown {
    /// Exact limit of `N(0, u, t)` as `t -> inf`.
    pub degree: u32,
    pub radii: Vec<Rational>,
    pub values: Vec<Rational>,
    /// `degree - N(0, u, t_max)`.
    pub gap: Rational,
    pub monotone: bool,
}

pub fn blow_down_degree(u: &Polynomial, radii: &[Rational]) -> Result<BlowDown, FrequencyError> {
    if u.is_zero() {
        return Err(FrequencyError::ZeroPolynomial);
    }
    if !u.is_harmonic() {
        return Err(FrequencyError::NotHarmonic);
    }
    if radii.is_empty() {
        return Err(FrequencyError::EmptyGrid);
    }
    let origin = vec![Rational::zero(); u.dim()];
    let profile = FrequencyProfile::new(u, &origin)?;
    let limit = profile.limit_at_infinity().expect("harmonic frequency is bounded");
    let degree = exact::floor_to_i64(&limit).expect("small degree") as u32;
    let curve = frequency_curve(u, &origin, radii)?;
    let gap = &limit - curve.values.last().unwrap();
    Ok(BlowDown { degree, radii: curve.radii, values: curve.values, gap, monotone: curve.monotone })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencySup {
    pub value: Rational,
    pub center: Vec<Rational>,
    pub radius: Rational,
}

/// Maximum of `N(x0, u, r)` over sampled centers and radii.
pub fn frequency_sup(
    u: &Polynomial,
    centers: &[Vec<Rational>],
    radii: &[Rational],
) -> Result<FrequencySup, FrequencyError> {
    if centers.is_empty() || radii.is_empty() {
        return Err(FrequencyError::EmptyGrid);
    }
    let limit = exact::rat(49, 64);
    if centers.iter().any(|c| c.iter().map(|v| v * v).sum::<Rational>() >= limit) {
        return Err(FrequencyError::OutOfRange("centers must lie in B_{7/8}".into()));
    }
    if radii.iter().any(|r| !r.is_positive() || *r > exact::rat(1, 16)) {
        return Err(FrequencyError::OutOfRange("radii must lie in (0, 1/16]".into()));
    }
    let mut best: Option<FrequencySup> = None;
    for c in centers {
        let profile = FrequencyProfile::new(u, c)?;
        for r in radii {
            let value = profile.at(r)?;
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(FrequencySup { value, center: c.clone(), radius: r.clone() });
            }
        }
    }
    Ok(best.unwrap())
}

/// Centers of a `k x k` grid on `[-1/2, 1/2]^2`.
pub fn planar_center_grid(k: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let step = if k > 1 { Rational::one() / exact::int(k as i64 - 1) } else { Rational::zero() };
    for i in 0..k {
        for j in 0..k {
            let x = if k > 1 { exact::rat(-1, 2) + &step * exact::int(i as i64) } else { Rational::zero() };
            let y = if k > 1 { exact::rat(-1, 2) + &step * exact::int(j as i64) } else { Rational::zero() };
            out.push(vec![x, y]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    fn origin() -> Vec<Rational> {
        vec![int(0), int(0)]
    }

    #[test]
    fn height_and_energy_examples() {
        let (h, d) = height_energy(&p("x^2 - y^2"), &origin(), &int(1)).unwrap();
        assert_eq!((h.coefficient, d.coefficient), (rat(1, 2), int(1)));
        let (h, d) = height_energy(&p("3"), &origin(), &rat(1, 2)).unwrap();
        assert_eq!((h.coefficient, d.coefficient), (rat(9, 2), int(0)));
        let (h, d) = height_energy(&p("x"), &origin(), &int(1)).unwrap();
        assert_eq!((h.coefficient, d.coefficient), (rat(1, 2), rat(1, 2)));
        assert_eq!(height_energy(&p("x"), &origin(), &int(0)), Err(FrequencyError::NonPositiveRadius));
    }

    #[test]
    fn frequency_values() {
        let c = frequency_curve(&p("x^2 - y^2"), &origin(), &[int(1)]).unwrap();
        assert_eq!(c.values, vec![int(2)]);
        let c = frequency_curve(&p("x^2 - y^2 + x"), &origin(), &[rat(1, 4), int(1), int(4)]).unwrap();
        assert!(c.monotone);
        assert!(c.values.windows(2).all(|w| w[0] < w[1]));
        assert!(c.values.iter().all(|v| *v > int(1) && *v < int(2)));
        let h = harmonic_cubic();
        let c = frequency_curve(&h, &origin(), &geometric_radii(0, 6)).unwrap();
        assert!(c.values.iter().all(|v| *v == int(3)));
    }

    fn harmonic_cubic() -> Polynomial {
        p("x^3 - 3*x*y^2")
    }

    #[test]
    fn vanishing_orders() {
        let u = p("x^3 - 3*x*y^2 + x*y");
        let v = vanishing_order(&u, &origin()).unwrap();
        assert_eq!((v.order, v.leading_part), (2, p("x*y")));
        let v = vanishing_order(&u, &[int(0), rat(1, 3)]).unwrap();
        assert_eq!((v.order, v.leading_part), (2, p("-x*y")));
        assert_eq!(vanishing_order(&p("x^2 - y^2 + x"), &origin()).unwrap().order, 1);
        let prof = FrequencyProfile::new(&u, &[int(0), rat(1, 3)]).unwrap();
        assert_eq!(prof.limit_at_zero(), Some(int(2)));
        assert_eq!(prof.limit_at_infinity(), Some(int(3)));
    }

    #[test]
    fn doubling_witnesses() {
        let w = doubling_check(&harmonic_cubic(), &origin(), &rat(1, 2), &int(1)).unwrap();
        assert!((w.witness - 8.0).abs() < 1e-12);
        let w = doubling_check(&p("x^2 - y^2 + x"), &origin(), &rat(1, 2), &int(1)).unwrap();
        assert!(w.witness > 4.0 && w.witness < 6.0 && w.pass());
        let w = doubling_check(&p("5"), &origin(), &rat(1, 3), &int(1)).unwrap();
        assert!((w.witness - 2.0).abs() < 1e-12);
        assert!(doubling_check(&p("x"), &origin(), &int(2), &int(1)).is_err());
    }

    #[test]
    fn nondegeneracy_ratios() {
        let u = p("x^2 - y^2");
        let a = nondegeneracy_check(&u, &origin(), &rat(1, 8), &int(2)).unwrap();
        let b = nondegeneracy_check(&u, &origin(), &rat(1, 32), &int(2)).unwrap();
        assert_eq!(a.exact_ratio, b.exact_ratio);
        assert_eq!(a.exact_ratio, Some(int(1)));
        let c = nondegeneracy_check(&p("x"), &[rat(1, 2), int(0)], &rat(1, 8), &int(1)).unwrap();
        assert!(c.exact_ratio.unwrap().is_positive());
        assert!(nondegeneracy_check(&u, &[int(1), int(0)], &rat(1, 8), &int(2)).is_err());
    }

    #[test]
    fn blow_up_and_down() {
        let u = p("x^2 - y^2");
        let b = blow_up(&u, &origin(), &rat(1, 3)).unwrap();
        assert_eq!(b.rescaled, u.scale(&rat(1, 9)));
        let u = p("x^3 - 3*x*y^2 + x*y");
        let x0 = [int(0), rat(1, 3)];
        let b = blow_up(&u, &x0, &rat(1, 2)).unwrap();
        let prof = FrequencyProfile::new(&u, &x0).unwrap();
        for t in [rat(1, 3), int(1), int(5)] {
            assert_eq!(b.frequency(&t).unwrap(), prof.at(&(rat(1, 2) * &t)).unwrap());
        }
        let bd = blow_down_degree(&p("x^2 - y^2 + x"), &[int(1), int(10), int(100), int(1000)]).unwrap();
        assert_eq!(bd.degree, 2);
        assert!(bd.monotone && exact::to_f64(&bd.gap) < 1e-2);
        assert_eq!(blow_down_degree(&p("1"), &[int(1)]).unwrap().degree, 0);
        assert_eq!(blow_down_degree(&p("x^2"), &[int(1)]), Err(FrequencyError::NotHarmonic));
    }

    #[test]
    fn sup_over_grid() {
        let grid = planar_center_grid(3);
        assert_eq!(grid.len(), 9);
        let s = frequency_sup(&p("x^2 - y^2 + x"), &grid, &[rat(1, 16)]).unwrap();
        assert!(s.value >= int(1) && s.value <= int(2));
        assert_eq!(frequency_sup(&p("7"), &grid, &[rat(1, 16)]).unwrap().value, int(0));
        let s = frequency_sup(&harmonic_cubic(), &grid, &[rat(1, 16)]).unwrap();
        assert_eq!((s.value, s.center), (int(3), origin()));
    }
}
