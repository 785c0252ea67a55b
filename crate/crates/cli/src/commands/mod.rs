mod algebra;
mod analysis;
mod degenerate;
mod weighted;

use nodalkit::degenerate::DegenerateError;
use nodalkit::frequency::FrequencyError;
use nodalkit::nodal::NodalError;
use nodalkit::poly::PolyError;
use nodalkit::weighted::WeightedError;

use crate::config::{Command, RunConfig};
use crate::report::Output;
use crate::CliError;

pub fn dispatch(command: Command, config: &RunConfig) -> Result<Output, CliError> {
    use Command::*;
    match command {
        Parse => algebra::parse(config),
        Eval => algebra::eval(config),
        Basis => algebra::basis(config),
        Divide => algebra::divide(config),
        RatioSpace => algebra::ratio_space(config),
        Frequency => analysis::frequency(config),
        Doubling => analysis::doubling(config),
        Blowup => analysis::blowup(config),
        Blowdown => analysis::blowdown(config),
        Singular => analysis::singular(config),
        Count => analysis::count(config),
        Euler => analysis::euler(config),
        Length => analysis::length(config),
        Render => analysis::render(config),
        Exponents => weighted::exponents(config),
        Integrability | Muckenhoupt | Capacity | Hardy | Sobolev => weighted::probe(command, config),
        Moser => weighted::moser(config),
        Pair => degenerate::pair(config),
        Solve => degenerate::solve(config),
        Residual => degenerate::residual(config),
        Holder => degenerate::holder(config),
        Uniformity => degenerate::uniformity(config),
        Run => Err(CliError::Config("command: 'run' needs a command in the config file".into())),
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<FrequencyError> for CliError {
    fn from(e: FrequencyError) -> Self {
        match e {
            FrequencyError::Poly(p) => p.into(),
            FrequencyError::VanishingHeight(_) => CliError::Compute(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<NodalError> for CliError {
    fn from(e: NodalError) -> Self {
        match e {
            NodalError::Poly(p) => p.into(),
            NodalError::NotPlanar(_)
            | NodalError::Constant
            | NodalError::NotHarmonic
            | NodalError::Resolution(_)
            | NodalError::NonPositiveRadius => CliError::Config(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<WeightedError> for CliError {
    fn from(e: WeightedError) -> Self {
        match e {
            WeightedError::Poly(p) => p.into(),
            WeightedError::Field(..) => CliError::Compute(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<DegenerateError> for CliError {
    fn from(e: DegenerateError) -> Self {
        match e {
            DegenerateError::Poly(p) => p.into(),
            DegenerateError::InvalidParameter(_)
            | DegenerateError::DomainOutsideUnitBall
            | DegenerateError::RegionOutsideGrid(_)
            | DegenerateError::NonFiniteBoundary(..) => CliError::Config(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes() {
        assert!(matches!(CliError::from(NodalError::Unresolved(vec![(64, 3), (128, 4)])), CliError::Compute(_)));
        assert!(matches!(CliError::from(NodalError::NotHarmonic), CliError::Config(_)));
        assert!(matches!(CliError::from(DegenerateError::NotConverged { iterations: 9, residual: 1.0 }), CliError::Compute(_)));
        assert!(matches!(CliError::from(DegenerateError::DomainOutsideUnitBall), CliError::Config(_)));
    }
}
