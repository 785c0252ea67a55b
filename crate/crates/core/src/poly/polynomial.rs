use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, MAX_DIM};
use crate::exact::{self, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a graded-lex ordered map; zero coefficients are never
/// stored, so the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Polynomial::constant(dim, Rational::one())
    }

    pub fn var(dim: usize, index: usize) -> Self {
        let mut p = Polynomial::zero(dim);
        p.add_term(Monomial::var(dim, index), Rational::one());
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(PolyError::InvalidDimension(dim));
        }
        let mut p = Polynomial::zero(dim);
        for (m, c) in terms {
            if m.dim() != dim {
                return Err(PolyError::DimensionMismatch { expected: dim, found: m.dim() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Convenience constructor from `(coefficient, exponents)` pairs with
    /// small integer coefficients; panics on inconsistent dimensions.
    pub fn from_int_terms(dim: usize, terms: &[(i64, &[u32])]) -> Self {
        Polynomial::from_terms(
            dim,
            terms.iter().map(|(c, e)| (Monomial::new(e.to_vec()), exact::int(*c))),
        )
        .expect("consistent dimensions")
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the `-inf` degree of the zero
    /// polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Degree of the lowest nonzero homogeneous component.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.low_degree()
    }

    /// Graded-lex leading term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn homogeneous_component(&self, degree: u32) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn top_component(&self) -> Polynomial {
        match self.degree() {
            Some(d) => self.homogeneous_component(d),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(self.dim);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn check_point_len(&self, len: usize) -> Result<(), PolyError> {
        if len != self.dim {
            return Err(PolyError::DimensionMismatch { expected: self.dim, found: len });
        }
        Ok(())
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_point_len(point.len())?;
        let max_deg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(max_deg + 1);
                row.push(Rational::one());
                for k in 1..=max_deg {
                    let next = &row[k - 1] * x;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation; see [`super::FloatPoly`] for the compiled
    /// fast path used on grids.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_point_len(point.len())?;
        Ok(super::FloatPoly::from(self).eval(point))
    }

    pub fn partial(&self, index: usize) -> Polynomial {
        assert!(index < self.dim);
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.dim).map(|i| self.partial(i)).collect()
    }

    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            for i in 0..self.dim {
                let e = m.exponents()[i];
                if e < 2 {
                    continue;
                }
                let mut exps = m.exponents().to_vec();
                exps[i] -= 2;
                out.add_term(
                    Monomial::new(exps),
                    c * Rational::from_integer(BigInt::from(e * (e - 1))),
                );
            }
        }
        out
    }

    /// Gradient and Laplacian together.
    pub fn differentiate(&self) -> (Vec<Polynomial>, Polynomial) {
        (self.gradient(), self.laplacian())
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_zero()
    }

    /// `|grad p|^2` as a polynomial.
    pub fn gradient_norm_sq(&self) -> Polynomial {
        self.gradient()
            .iter()
            .fold(Polynomial::zero(self.dim), |acc, g| &acc + &(g * g))
    }

    /// The polynomial `x -> p(center + scale * x)`.
    pub fn shift_scale(&self, center: &[Rational], scale: &Rational) -> Result<Polynomial, PolyError> {
        self.check_point_len(center.len())?;
        let max_deg = self.degree().unwrap_or(0);
        // powers[i][k] = (center_i + scale * x_i)^k
        let powers: Vec<Vec<Polynomial>> = (0..self.dim)
            .map(|i| {
                let lin = &Polynomial::constant(self.dim, center[i].clone())
                    + &Polynomial::var(self.dim, i).scale(scale);
                let mut row = vec![Polynomial::one(self.dim)];
                for k in 1..=max_deg as usize {
                    let next = &row[k - 1] * &lin;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(self.dim, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Largest absolute coefficient as a float.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| exact::to_f64(c).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p(s: &str) -> Polynomial {
        crate::poly::parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn evaluates_exactly() {
        assert_eq!(p("x^2 - y^2").evaluate(&[int(1), int(2)]).unwrap(), int(-3));
        assert_eq!(p("x^3 - 3*x*y^2").evaluate(&[int(1), int(1)]).unwrap(), int(-2));
        let q = p("x^3 + 5*y - 7/2");
        assert_eq!(q.evaluate(&[int(0), int(0)]).unwrap(), rat(-7, 2));
        assert!(matches!(
            q.evaluate(&[int(0)]),
            Err(PolyError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn derivatives() {
        let (grad, lap) = p("x^2 - y^2").differentiate();
        assert_eq!(grad, vec![p("2*x"), p("-2*y")]);
        assert!(lap.is_zero());
        assert_eq!(p("x^2").laplacian(), p("2"));
        assert!(p("2*x*y*(x^2 - y^2)").is_harmonic());
    }

    #[test]
    fn zero_polynomial_degree_sentinel() {
        let z = p("0");
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert!(p("(x+y)^2 - x^2 - y^2 - 2*x*y").is_zero());
    }

    #[test]
    fn shift_and_scale() {
        let u = p("x^3 - 3*x*y^2 + x*y");
        let shifted = u.shift_scale(&[int(0), rat(1, 3)], &int(1)).unwrap();
        // x^3 - 3x(y + 1/3)^2 + x(y + 1/3) = x^3 - 3xy^2 - xy
        assert_eq!(shifted, p("x^3 - 3*x*y^2 - x*y"));
        assert_eq!(u.shift_scale(&[int(0), int(0)], &int(1)).unwrap(), u);
        assert_eq!(p("x").shift_scale(&[int(1), int(0)], &int(2)).unwrap(), p("1 + 2*x"));
        assert_eq!(shifted.degree(), u.degree());
    }
}
