use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{linalg, Monomial, PolyError, Polynomial, MAX_DIM};
use crate::exact::Rational;

/// Basis of the homogeneous harmonic polynomials of degree `k` in `n`
/// variables.
///
/// In the plane this is `Re (x+iy)^k, Im (x+iy)^k`; otherwise the kernel of
/// the Laplacian on degree-`k` forms, each element scaled to a monic
/// graded-lex leading coefficient.
pub fn harmonic_basis(n: usize, k: i64) -> Result<Vec<Polynomial>, PolyError> {
    if !(2..=MAX_DIM).contains(&n) || k < 0 {
        return Err(PolyError::InvalidBasis { n, k });
    }
    let k = k as u32;
    if k == 0 {
        return Ok(vec![Polynomial::one(n)]);
    }
    if n == 2 {
        return Ok(planar_pair(k).into());
    }
    let domain = Monomial::all_of_degree(n, k);
    let codomain = if k >= 2 { Monomial::all_of_degree(n, k - 2) } else { Vec::new() };
    let mut rows = vec![vec![Rational::zero(); domain.len()]; codomain.len()];
    for (j, m) in domain.iter().enumerate() {
        let lap = Polynomial::from_terms(n, [(m.clone(), Rational::one())])?.laplacian();
        for (mm, c) in lap.terms() {
            let i = codomain.binary_search(mm).expect("degree k-2 monomial");
            rows[i][j] = c.clone();
        }
    }
    let basis = linalg::null_space(&rows, domain.len())
        .into_iter()
        .map(|v| {
            let p = Polynomial::from_terms(n, domain.iter().cloned().zip(v))?;
            let lead = p.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
            Ok(p.scale(&lead.recip()))
        })
        .collect::<Result<Vec<_>, PolyError>>()?;
    Ok(basis)
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `(Re z^k, Im z^k)` with `z = x + iy`.
fn planar_pair(k: u32) -> [Polynomial; 2] {
    let mut re = Polynomial::zero(2);
    let mut im = Polynomial::zero(2);
    for j in 0..=k {
        // i^j
        let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
        let c = Rational::from_integer(binomial(k, j) * sign);
        let m = Monomial::new(vec![k - j, j]);
        if j % 2 == 0 {
            re.add_term(m, c);
        } else {
            im.add_term(m, c);
        }
    }
    [re, im]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn planar_cubic_pair() {
        let b = harmonic_basis(2, 3).unwrap();
        assert_eq!(b[0], parse_polynomial("x^3 - 3*x*y^2", 2).unwrap());
        assert_eq!(b[1], parse_polynomial("3*x^2*y - y^3", 2).unwrap());
        assert_eq!(harmonic_basis(2, 0).unwrap(), vec![Polynomial::one(2)]);
    }

    #[test]
    fn spatial_dimensions() {
        for k in 0..5 {
            let b = harmonic_basis(3, k).unwrap();
            assert_eq!(b.len() as i64, 2 * k + 1);
            for p in &b {
                assert!(p.is_harmonic());
                assert!(p.is_homogeneous());
                assert_eq!(p.degree(), Some(k as u32));
            }
        }
        // dim H_k(R^4) = (k+1)^2
        assert_eq!(harmonic_basis(4, 3).unwrap().len(), 16);
    }

    #[test]
    fn rejects_invalid_arguments() {
        assert!(harmonic_basis(1, 2).is_err());
        assert!(harmonic_basis(3, -1).is_err());
        assert!(harmonic_basis(9, 1).is_err());
    }
}
