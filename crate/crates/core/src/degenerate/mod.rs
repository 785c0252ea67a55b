//! The `a = 2` degenerate equation `div(u^2 grad w) = 0`: certified
//! `(u, v)` pairs, ratio fields, a finite-volume solver, weak residuals and
//! Hölder seminorm experiments.

mod grid;
mod holder;
mod pair;
mod residual;
mod solver;

pub use grid::{ratio_field, GridField, GridSpec, RatioField};
pub use holder::{holder_seminorm, uniformity_experiment, HolderReport, PairRecord, UniformityReport, PAIRS_PER_SCALE};
pub use pair::{certified_pair, certified_pair_with, CertifiedPair, MAX_ATTEMPTS};
pub use residual::{square_test_functions, weak_residual};
pub use solver::{assemble_solve, discrete_laplacian_residual, SolveReport, CG_TOL};

use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegenerateError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no pair with a nontrivial ratio space after {attempts} attempts (N0 = {n0}, m = {m}, seed = {seed})")]
    RetriesExhausted { n0: u32, m: u32, seed: u64, attempts: u32 },
    #[error("pair verification failed: {0}")]
    Verification(String),
    #[error("grid square is not inside the unit ball")]
    DomainOutsideUnitBall,
    #[error("region of radius {0} does not fit in the grid")]
    RegionOutsideGrid(f64),
    #[error("boundary value at node ({0}, {1}) is not finite")]
    NonFiniteBoundary(usize, usize),
    #[error("conjugate gradient stopped after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
}
