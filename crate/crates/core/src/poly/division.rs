use num_traits::{One, Zero};

use super::{linalg, Monomial, PolyError, Polynomial};
use crate::exact::Rational;

/// Graded-lex division `P = Q R + remainder`, where no remainder term is
/// divisible by the leading monomial of `Q`.
pub fn divide(p: &Polynomial, q: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
    if q.dim() != p.dim() {
        return Err(PolyError::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let (lm, lc) = match q.leading_term() {
        Some((m, c)) => (m.clone(), c.clone()),
        None => return Err(PolyError::DivisionByZero),
    };
    let lc_inv = lc.recip();
    let mut work = p.clone();
    let mut quotient = Polynomial::zero(p.dim());
    let mut remainder = Polynomial::zero(p.dim());
    while let Some((m, c)) = work.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        if lm.divides(&m) {
            let t = lm.quotient_of(&m);
            let f = &c * &lc_inv;
            work = &work - &q.mul_monomial(&t, &f);
            quotient.add_term(t, f);
        } else {
            remainder.add_term(m.clone(), c.clone());
            work.add_term(m, -c);
        }
    }
    Ok((quotient, remainder))
}

/// Why a ratio `v / u` failed to be an admissible polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiouvilleFailure {
    /// `u` does not divide `v`; the zero set of `u` is not inside that of `v`.
    NotDivisible { remainder: Polynomial },
    /// The quotient exists but its degree exceeds `floor(gamma)`.
    DegreeTooLarge { degree: u32, bound: i64 },
}

pub type LiouvilleOutcome = Result<Polynomial, LiouvilleFailure>;

pub fn liouville_ratio(
    u: &Polynomial,
    v: &Polynomial,
    gamma: &Rational,
) -> Result<LiouvilleOutcome, PolyError> {
    if u.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !u.is_harmonic() || !v.is_harmonic() {
        return Err(PolyError::NotHarmonic);
    }
    let (r, rem) = divide(v, u)?;
    if !rem.is_zero() {
        return Ok(Err(LiouvilleFailure::NotDivisible { remainder: rem }));
    }
    let bound = crate::exact::floor_to_i64(gamma).unwrap_or(i64::MAX);
    match r.degree() {
        Some(d) if i64::from(d) > bound => Ok(Err(LiouvilleFailure::DegreeTooLarge { degree: d, bound })),
        _ => Ok(Ok(r)),
    }
}

/// Basis of `{R : deg R <= m, u R harmonic}`. The constant `1` is always the
/// first element; the others are scaled to a monic leading coefficient.
pub fn ratio_space(u: &Polynomial, m: u32) -> Result<Vec<Polynomial>, PolyError> {
    if u.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !u.is_harmonic() {
        return Err(PolyError::NotHarmonic);
    }
    let n = u.dim();
    let domain = Monomial::all_up_to_degree(n, m);
    let images: Vec<Polynomial> = domain
        .iter()
        .map(|mono| u.mul_monomial(mono, &Rational::one()).laplacian())
        .collect();
    let mut codomain: Vec<Monomial> = images
        .iter()
        .flat_map(|p| p.terms().map(|(k, _)| k.clone()))
        .collect();
    codomain.sort();
    codomain.dedup();
    let mut rows = vec![vec![Rational::zero(); domain.len()]; codomain.len()];
    for (j, img) in images.iter().enumerate() {
        for (k, c) in img.terms() {
            let i = codomain.binary_search(k).expect("collected monomial");
            rows[i][j] = c.clone();
        }
    }
    let mut basis: Vec<Polynomial> = linalg::null_space(&rows, domain.len())
        .into_iter()
        .map(|v| {
            let p = Polynomial::from_terms(n, domain.iter().cloned().zip(v))?;
            let lead = p.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
            Ok(p.scale(&lead.recip()))
        })
        .collect::<Result<_, PolyError>>()?;
    basis.sort_by_key(|p| p.degree());
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn exact_and_inexact_division() {
        let (r, rem) = divide(&p("(x^2 - y^2)*(x^2 + y^2 + 1)"), &p("x^2 - y^2")).unwrap();
        assert_eq!(r, p("x^2 + y^2 + 1"));
        assert!(rem.is_zero());
        let (r, rem) = divide(&p("x^2"), &p("y")).unwrap();
        assert!(r.is_zero());
        assert_eq!(rem, p("x^2"));
        let (r, rem) = divide(&p("4*x^3*y - 4*x*y^3"), &p("2*x*y")).unwrap();
        assert_eq!(r, p("2*x^2 - 2*y^2"));
        assert!(rem.is_zero());
        assert_eq!(divide(&p("x"), &p("0")), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn liouville_cases() {
        let u = p("2*x*y");
        let r = liouville_ratio(&u, &p("4*x^3*y - 4*x*y^3"), &int(2)).unwrap();
        assert_eq!(r, Ok(p("2*x^2 - 2*y^2")));
        let r = liouville_ratio(&u, &p("4*x^3*y - 4*x*y^3"), &int(1)).unwrap();
        assert!(matches!(r, Err(LiouvilleFailure::DegreeTooLarge { degree: 2, bound: 1 })));
        assert_eq!(liouville_ratio(&u, &u, &int(0)).unwrap(), Ok(Polynomial::one(2)));
        match liouville_ratio(&u, &p("x^2 - y^2"), &int(5)).unwrap() {
            Err(LiouvilleFailure::NotDivisible { remainder }) => assert_eq!(remainder, p("x^2 - y^2")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(liouville_ratio(&p("x^2"), &u, &int(1)), Err(PolyError::NotHarmonic));
    }

    #[test]
    fn ratio_space_of_xy() {
        let basis = ratio_space(&p("2*x*y"), 2).unwrap();
        assert_eq!(basis, vec![p("1"), p("x^2 - y^2")]);
        assert_eq!(ratio_space(&p("x^3 - 3*x*y^2 + 2"), 0).unwrap(), vec![p("1")]);
        for r in ratio_space(&p("x"), 3).unwrap() {
            assert!((&p("x") * &r).is_harmonic());
        }
    }
}
