//! Exact harmonic-polynomial analysis: frequency, nodal domains, weighted
//! inequality probes and the degenerate ratio equation.

pub mod exact;
pub mod poly;
pub mod frequency;
pub mod nodal;
pub mod weighted;
pub mod degenerate;
pub mod field;
pub mod corpus;
