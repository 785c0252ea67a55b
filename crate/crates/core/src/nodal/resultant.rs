//! Elimination for planar polynomial systems.

use num_traits::Zero;

use crate::exact::{self, Rational};
use crate::poly::linalg;
use crate::poly::univariate::UniPoly;
use crate::poly::Polynomial;

/// Coefficients of `p` as a polynomial in variable `var`, each coefficient a
/// univariate polynomial in the other variable.
pub fn coefficients_in(p: &Polynomial, var: usize) -> Vec<UniPoly> {
    assert_eq!(p.dim(), 2);
    let other = 1 - var;
    let deg = p.terms().map(|(m, _)| m.exponents()[var]).max().unwrap_or(0) as usize;
    let mut raw = vec![Vec::<Rational>::new(); deg + 1];
    for (m, c) in p.terms() {
        let e = m.exponents();
        let row = &mut raw[e[var] as usize];
        let k = e[other] as usize;
        if row.len() <= k {
            row.resize(k + 1, Rational::zero());
        }
        row[k] += c;
    }
    raw.into_iter().map(UniPoly::new).collect()
}

fn sylvester_det(a: &[Rational], b: &[Rational]) -> Rational {
    let m = a.len() - 1;
    let l = b.len() - 1;
    let size = m + l;
    if size == 0 {
        return Rational::from_integer(1.into());
    }
    let mut rows = vec![vec![Rational::zero(); size]; size];
    // coefficient vectors written highest power first
    for i in 0..l {
        for (j, c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[l + i][i + j] = c.clone();
        }
    }
    linalg::determinant(rows)
}

/// `Res_var(p, q)` as a polynomial in the remaining variable, using the
/// formal degrees in `var` so that specialization commutes with the
/// determinant. Computed by exact evaluation and interpolation.
pub fn resultant(p: &Polynomial, q: &Polynomial, var: usize) -> UniPoly {
    let pc = coefficients_in(p, var);
    let qc = coefficients_in(q, var);
    let bound = (p.degree().unwrap_or(0) * q.degree().unwrap_or(0)) as i64;
    let xs: Vec<Rational> = (0..=bound).map(|k| exact::int(k - bound / 2)).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let a: Vec<Rational> = pc.iter().map(|c| c.eval(x)).collect();
            let b: Vec<Rational> = qc.iter().map(|c| c.eval(x)).collect();
            sylvester_det(&a, &b)
        })
        .collect();
    UniPoly::interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::poly::parse_polynomial;

    #[test]
    fn circle_and_line() {
        let p = parse_polynomial("x^2 + y^2 - 1", 2).unwrap();
        let q = parse_polynomial("x - y", 2).unwrap();
        // eliminate y: x^2 + x^2 - 1
        let r = resultant(&p, &q, 1);
        let monic = r.monic();
        assert_eq!(monic, UniPoly::new(vec![crate::exact::rat(-1, 2), int(0), int(1)]));
    }

    #[test]
    fn gradient_of_cubic_with_saddle() {
        let u = parse_polynomial("x^3 - 3*x*y^2 + x*y", 2).unwrap();
        let g = u.gradient();
        let rx = resultant(&g[0], &g[1], 1);
        assert!(!rx.is_zero());
        assert!(rx.eval(&int(0)).is_zero());
        let ry = resultant(&g[0], &g[1], 0);
        assert!(ry.eval(&crate::exact::rat(1, 3)).is_zero());
    }
}
