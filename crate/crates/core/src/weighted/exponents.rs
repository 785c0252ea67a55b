use num_traits::{Signed, Zero};

use super::WeightedError;
use crate::exact::{int, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `-aS < a < aS`: the weight is an A2 weight.
    Muckenhoupt,
    /// `a > 1`.
    Superdegenerate,
    OutOfRange,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Muckenhoupt => "muckenhoupt",
            Branch::Superdegenerate => "superdegenerate",
            Branch::OutOfRange => "out_of_range",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Finite(Rational),
    /// Every finite exponent is admissible.
    Unbounded,
}

/// Exponent used by probes when the Sobolev exponent is unbounded.
pub const UNBOUNDED_PROBE_EXPONENT: i64 = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct SobolevExponents {
    pub n: usize,
    pub a: Rational,
    pub nbar0: Rational,
    pub a_s: Rational,
    pub branch: Branch,
    pub two_star: Option<Exponent>,
    pub gamma: Option<Rational>,
    pub alpha_moser: Option<Rational>,
}

impl SobolevExponents {
    /// The finite exponent a probe should integrate with.
    pub fn probe_exponent(&self) -> Option<Rational> {
        match &self.two_star {
            Some(Exponent::Finite(q)) => Some(q.clone()),
            Some(Exponent::Unbounded) => Some(int(UNBOUNDED_PROBE_EXPONENT)),
            None => None,
        }
    }
}

/// `aS = min(1, 2 / nbar0)`.
pub fn critical_a(nbar0: &Rational) -> Rational {
    let two_over = int(2) / nbar0;
    if two_over < int(1) {
        two_over
    } else {
        int(1)
    }
}

pub fn branch_of(a: &Rational, nbar0: &Rational) -> Branch {
    let a_s = critical_a(nbar0);
    if a.abs() < a_s {
        Branch::Muckenhoupt
    } else if *a > int(1) {
        Branch::Superdegenerate
    } else {
        Branch::OutOfRange
    }
}

/// `gamma = (2n(2 + a nbar0) / (2n - 4 + a n nbar0) + 2) / 2`.
pub fn gamma(n: usize, a: &Rational, nbar0: &Rational) -> Rational {
    let n = int(n as i64);
    let an = a * nbar0;
    let num = int(2) * &n * (int(2) + &an);
    let den = int(2) * &n - int(4) + &an * &n;
    (num / den + int(2)) * rat(1, 2)
}

pub fn sobolev_exponents(n: usize, a: &Rational, nbar0: &Rational) -> Result<SobolevExponents, WeightedError> {
    if n < 2 {
        return Err(WeightedError::InvalidDimension(n));
    }
    if !nbar0.is_positive() {
        return Err(WeightedError::InvalidParameter("nbar0 must be positive".into()));
    }
    let a_s = critical_a(nbar0);
    if *a <= -a_s.clone() {
        return Err(WeightedError::NotIntegrable { a: a.clone(), a_s });
    }
    let branch = branch_of(a, nbar0);
    let mut out = SobolevExponents {
        n,
        a: a.clone(),
        nbar0: nbar0.clone(),
        a_s,
        branch,
        two_star: None,
        gamma: None,
        alpha_moser: None,
    };
    match branch {
        Branch::Muckenhoupt => {
            let a_plus = if a.is_positive() { a.clone() } else { Rational::zero() };
            let d = int(n as i64) + a_plus * nbar0;
            out.two_star = Some(if d > int(2) {
                Exponent::Finite(int(2) * &d / (&d - int(2)))
            } else {
                Exponent::Unbounded
            });
            out.alpha_moser = Some(d);
        }
        Branch::Superdegenerate => {
            let g = gamma(n, a, nbar0);
            out.alpha_moser = Some(int(2) * &g / (&g - int(2)));
            out.two_star = Some(Exponent::Finite(g.clone()));
            out.gamma = Some(g);
        }
        Branch::OutOfRange => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e = sobolev_exponents(3, &int(0), &int(5)).unwrap();
        assert_eq!(e.two_star, Some(Exponent::Finite(int(6))));
        assert_eq!(e.alpha_moser, Some(int(3)));
        let e = sobolev_exponents(3, &int(2), &int(1)).unwrap();
        assert_eq!(e.branch, Branch::Superdegenerate);
        assert_eq!(e.gamma, Some(rat(5, 2)));
        assert_eq!(e.alpha_moser, Some(int(10)));
        assert_eq!(critical_a(&int(4)), rat(1, 2));
    }

    #[test]
    fn planar_unweighted_is_unbounded() {
        let e = sobolev_exponents(2, &rat(-1, 3), &int(1)).unwrap();
        assert_eq!(e.two_star, Some(Exponent::Unbounded));
        assert_eq!(e.probe_exponent(), Some(int(4)));
        assert_eq!(e.alpha_moser, Some(int(2)));
    }

    #[test]
    fn ranges() {
        assert!(matches!(sobolev_exponents(2, &int(-1), &int(1)), Err(WeightedError::NotIntegrable { .. })));
        assert!(matches!(sobolev_exponents(2, &rat(-1, 2), &int(4)), Err(WeightedError::NotIntegrable { .. })));
        let e = sobolev_exponents(2, &rat(3, 4), &int(4)).unwrap();
        assert_eq!(e.branch, Branch::OutOfRange);
        assert_eq!((e.two_star, e.gamma, e.alpha_moser), (None, None, None));
        let e = sobolev_exponents(2, &int(1), &int(1)).unwrap();
        assert_eq!(e.branch, Branch::OutOfRange);
        assert!(sobolev_exponents(1, &int(0), &int(1)).is_err());
        assert!(sobolev_exponents(2, &int(0), &int(0)).is_err());
    }
}
