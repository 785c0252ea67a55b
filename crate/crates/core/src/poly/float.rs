use super::Polynomial;
use crate::exact;

/// Floating-point copy of a polynomial for repeated evaluation on grids.
///
/// Two-dimensional inputs are stored densely and evaluated by nested Horner
/// (`x` outer, `y` inner); other dimensions fall back to a term list with
/// per-variable power tables.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    dim: usize,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    /// `rows[i][j]` is the coefficient of `x^i y^j`.
    Dense2 { rows: Vec<Vec<f64>> },
    Sparse { degree: u32, terms: Vec<(f64, Vec<u32>)> },
}

impl From<&Polynomial> for FloatPoly {
    fn from(p: &Polynomial) -> Self {
        let dim = p.dim();
        if dim == 2 {
            let d = p.degree().unwrap_or(0) as usize;
            let mut rows = vec![vec![0.0; d + 1]; d + 1];
            for (m, c) in p.terms() {
                let e = m.exponents();
                rows[e[0] as usize][e[1] as usize] = exact::to_f64(c);
            }
            return FloatPoly { dim, repr: Repr::Dense2 { rows } };
        }
        let terms = p
            .terms()
            .map(|(m, c)| (exact::to_f64(c), m.exponents().to_vec()))
            .collect();
        FloatPoly { dim, repr: Repr::Sparse { degree: p.degree().unwrap_or(0), terms } }
    }
}

impl FloatPoly {
    /// Builds a planar polynomial from dense coefficients `rows[i][j]` of
    /// `x^i y^j`.
    pub fn from_dense2(rows: Vec<Vec<f64>>) -> Self {
        FloatPoly { dim: 2, repr: Repr::Dense2 { rows } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.dim);
        match &self.repr {
            Repr::Dense2 { rows } => eval2(rows, point[0], point[1]),
            Repr::Sparse { degree, terms } => {
                let d = *degree as usize;
                let powers: Vec<Vec<f64>> = point
                    .iter()
                    .map(|&x| {
                        let mut row = vec![1.0; d + 1];
                        for k in 1..=d {
                            row[k] = row[k - 1] * x;
                        }
                        row
                    })
                    .collect();
                terms
                    .iter()
                    .map(|(c, e)| {
                        e.iter()
                            .enumerate()
                            .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
                    })
                    .sum()
            }
        }
    }

    #[inline]
    pub fn eval2(&self, x: f64, y: f64) -> f64 {
        match &self.repr {
            Repr::Dense2 { rows } => eval2(rows, x, y),
            Repr::Sparse { .. } => self.eval(&[x, y]),
        }
    }

    /// The planar polynomial `x -> p(Q x)` where `Q` is rotation by `theta`.
    pub fn rotate2(&self, theta: f64) -> FloatPoly {
        let rows = match &self.repr {
            Repr::Dense2 { rows } => rows,
            Repr::Sparse { .. } => panic!("rotate2 needs a planar polynomial"),
        };
        let d = rows.len().saturating_sub(1);
        let (c, s) = (theta.cos(), theta.sin());
        // x' = c x - s y, y' = s x + c y
        let xp = vec![vec![0.0, -s], vec![c, 0.0]];
        let yp = vec![vec![0.0, c], vec![s, 0.0]];
        let xpow = dense_powers(&xp, d);
        let ypow = dense_powers(&yp, d);
        let mut out = vec![vec![0.0; d + 1]; d + 1];
        for (i, row) in rows.iter().enumerate() {
            for (j, &coef) in row.iter().enumerate() {
                if coef == 0.0 {
                    continue;
                }
                let prod = dense_mul(&xpow[i], &ypow[j]);
                for (a, prow) in prod.iter().enumerate() {
                    for (b, &v) in prow.iter().enumerate() {
                        if a <= d && b <= d {
                            out[a][b] += coef * v;
                        }
                    }
                }
            }
        }
        FloatPoly::from_dense2(out)
    }
}

#[inline]
fn eval2(rows: &[Vec<f64>], x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for row in rows.iter().rev() {
        let mut inner = 0.0;
        for &c in row.iter().rev() {
            inner = inner * y + c;
        }
        acc = acc * x + inner;
    }
    acc
}

fn dense_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len() + b.len() - 1;
    let mut out = vec![vec![0.0; n]; n];
    for (i, ra) in a.iter().enumerate() {
        for (j, &ca) in ra.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (k, rb) in b.iter().enumerate() {
                for (l, &cb) in rb.iter().enumerate() {
                    out[i + k][j + l] += ca * cb;
                }
            }
        }
    }
    out
}

fn dense_powers(base: &[Vec<f64>], d: usize) -> Vec<Vec<Vec<f64>>> {
    let mut out = vec![vec![vec![1.0]]];
    for k in 1..=d {
        let next = dense_mul(&out[k - 1], base);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn matches_exact_evaluation() {
        let p = parse_polynomial("x^3 - 3*x*y^2 + 1/2*x*y - 2", 2).unwrap();
        let f = FloatPoly::from(&p);
        assert!((f.eval2(0.3, -1.2) - (0.027 - 3.0 * 0.3 * 1.44 - 0.18 - 2.0)).abs() < 1e-12);
        let q = parse_polynomial("x*y*z - z^2 + 3", 3).unwrap();
        assert!((FloatPoly::from(&q).eval(&[1.0, 2.0, 3.0]) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let p = parse_polynomial("x^2 - y^2 + x", 2).unwrap();
        let r = FloatPoly::from(&p).rotate2(std::f64::consts::FRAC_PI_2);
        // p(Q(x,y)) = p(-y, x) = y^2 - x^2 - y
        for &(x, y) in &[(0.2, 0.7), (-1.0, 0.5)] {
            assert!((r.eval2(x, y) - (y * y - x * x - y)).abs() < 1e-12);
        }
    }
}
