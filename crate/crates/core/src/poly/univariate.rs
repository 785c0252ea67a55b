//! Dense univariate polynomials over Q with Sturm-sequence root isolation.

use num_traits::{One, Signed, Zero};

use crate::exact::{self, Rational};

/// Coefficients low to high, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + exact::to_f64(c))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() * &lead_inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                let t = c * &f;
                r[k + j] -= t;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Newton interpolation through `(xs[i], ys[i])` with distinct nodes.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<Rational> = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        let mut acc = UniPoly::zero();
        for i in (0..n).rev() {
            // acc = acc * (x - xs[i]) + dd[i]
            let lin = UniPoly::new(vec![-xs[i].clone(), Rational::one()]);
            acc = acc.mul(&lin);
            let mut c = acc.coeffs.clone();
            if c.is_empty() {
                c.push(Rational::zero());
            }
            c[0] += &dd[i];
            acc = UniPoly::new(c);
        }
        acc
    }

    /// Strict bound on the absolute value of every root.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        Rational::one() + max
    }

    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    /// Isolating intervals for all real roots, in increasing order.
    pub fn real_roots(&self) -> Vec<RootInterval> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.square_free();
        let sturm = p.sturm_sequence();
        let b = p.cauchy_bound();
        let lo = -b.clone();
        let total = variations(&sturm, &lo) - variations(&sturm, &b);
        let mut out = Vec::new();
        isolate(&p, &sturm, lo, b, total, &mut out);
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out.into_iter()
            .map(|mut r| {
                r.poly = Some(p.clone());
                r
            })
            .collect()
    }
}

fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(seq: &[UniPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let s = sign(&p.eval(x));
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// A real root of a square-free polynomial in `(lo, hi]`, or exactly `lo`
/// when `lo == hi`.
#[derive(Clone, Debug)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    poly: Option<UniPoly>,
}

impl RootInterval {
    pub fn exact(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn midpoint_f64(&self) -> f64 {
        exact::to_f64(&((&self.lo + &self.hi) / Rational::from_integer(2.into())))
    }

    /// Bisects until the interval is narrower than `width`.
    pub fn refine(&mut self, width: &Rational) {
        let Some(p) = self.poly.clone() else { return };
        if p.eval(&self.hi).is_zero() {
            self.lo = self.hi.clone();
            return;
        }
        let two = Rational::from_integer(2.into());
        while &(&self.hi - &self.lo) > width {
            let m = (&self.lo + &self.hi) / &two;
            let pm = p.eval(&m);
            if pm.is_zero() {
                self.lo = m.clone();
                self.hi = m;
                return;
            }
            if sign(&pm) == sign(&p.eval(&self.lo)) {
                self.lo = m;
            } else {
                self.hi = m;
            }
        }
    }
}

fn isolate(
    p: &UniPoly,
    sturm: &[UniPoly],
    a: Rational,
    b: Rational,
    count: usize,
    out: &mut Vec<RootInterval>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(RootInterval { lo: a, hi: b, poly: None });
        return;
    }
    let width = &b - &a;
    let mut m = (&a + &b) / Rational::from_integer(2.into());
    let mut k = 3i64;
    while p.eval(&m).is_zero() {
        m = &a + &width * Rational::new(k.into(), (2 * k + 1).into());
        k += 1;
    }
    let left = variations(sturm, &a) - variations(sturm, &m);
    isolate(p, sturm, a, m.clone(), left, out);
    isolate(p, sturm, m, b, count - left, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let p = up(&[-1, 0, 1]); // x^2 - 1
        let (q, r) = p.div_rem(&up(&[-1, 1]));
        assert_eq!(q, up(&[1, 1]));
        assert!(r.is_zero());
        let sq = up(&[1, -2, 1]).mul(&up(&[2, 1])); // (x-1)^2 (x+2)
        assert_eq!(sq.square_free(), up(&[-2, 1, 1]));
    }

    #[test]
    fn isolates_roots() {
        let p = up(&[0, -1, 0, 1]); // x^3 - x
        let roots = p.real_roots();
        assert_eq!(roots.len(), 3);
        let mut vals: Vec<f64> = roots
            .into_iter()
            .map(|mut r| {
                r.refine(&rat(1, 1 << 30));
                r.midpoint_f64()
            })
            .collect();
        vals.sort_by(f64::total_cmp);
        for (v, e) in vals.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-8);
        }
        assert!(up(&[1, 0, 1]).real_roots().is_empty());
        let mut r = up(&[-2, 0, 1]).real_roots();
        r[1].refine(&rat(1, 1 << 40));
        assert!((r[1].midpoint_f64() - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = up(&[3, 0, -2, 1]);
        let xs: Vec<Rational> = (0..4).map(int).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), p);
    }
}
