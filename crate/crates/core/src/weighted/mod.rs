//! Weighted Sobolev machinery for the weights `|u|^a`: critical exponents,
//! integrability and A2 probes, capacity cutoffs, and Hardy, Sobolev and
//! local-boundedness inequality probes.

mod exponents;
mod probes;
pub mod quadrature;

pub use exponents::{branch_of, critical_a, gamma, sobolev_exponents, Branch, Exponent, SobolevExponents, UNBOUNDED_PROBE_EXPONENT};
pub use probes::{
    capacity_decay, capacity_energy, hardy_probe, integrability_probe, moser_bound_probe, muckenhoupt_estimate, nbar0,
    sobolev_probe, talenti_constant, test_functions,
};

use thiserror::Error;

use crate::exact::Rational;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightedError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("unsupported dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("|u|^{a} is not integrable: need a > -{a_s}")]
    NotIntegrable { a: Rational, a_s: Rational },
    #[error("exponent a = {a} is outside the {expected} range")]
    WrongBranch { a: Rational, expected: &'static str },
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not harmonic")]
    NotHarmonic,
    #[error("field is not finite at ({0}, {1})")]
    Field(f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeCase {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrability {
    Convergent,
    Divergent,
    Inconclusive,
}

impl Integrability {
    pub fn as_str(self) -> &'static str {
        match self {
            Integrability::Convergent => "convergent",
            Integrability::Divergent => "divergent",
            Integrability::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub probe: String,
    pub a: Rational,
    pub a_s: Rational,
    pub branch: Branch,
    pub cases: Vec<ProbeCase>,
    pub max_ratio: f64,
    /// `None` when the probe only requires a finite maximum.
    pub bound: Option<f64>,
    /// Quadrature stabilised (ray doubling, resolution ladder and the
    /// `delta` exclusion ladder, as applicable).
    pub converged: bool,
    pub classification: Option<Integrability>,
    pub pass: bool,
}

impl ProbeReport {
    pub(crate) fn finish(
        probe: &str,
        a: &Rational,
        nbar0: &Rational,
        cases: Vec<ProbeCase>,
        bound: Option<f64>,
        converged: bool,
    ) -> Self {
        let max_ratio = cases.iter().map(|c| c.ratio).fold(f64::NEG_INFINITY, f64::max);
        let finite = cases.iter().all(|c| c.ratio.is_finite());
        let pass = converged
            && finite
            && !cases.is_empty()
            && match bound {
                Some(b) => max_ratio <= b,
                None => true,
            };
        ProbeReport {
            probe: probe.to_string(),
            a: a.clone(),
            a_s: critical_a(nbar0),
            branch: branch_of(a, nbar0),
            cases,
            max_ratio,
            bound,
            converged,
            classification: None,
            pass,
        }
    }
}
