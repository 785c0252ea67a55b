use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use nodalkit::exact::{self, Rational};
use nodalkit::poly::{parse_polynomial, Polynomial};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Parse,
    Eval,
    Basis,
    Divide,
    RatioSpace,
    Frequency,
    Doubling,
    Blowup,
    Blowdown,
    Singular,
    Count,
    Euler,
    Length,
    Exponents,
    Integrability,
    Muckenhoupt,
    Capacity,
    Hardy,
    Sobolev,
    Moser,
    Pair,
    Solve,
    Residual,
    Holder,
    Uniformity,
    Render,
    /// Take the command from the config file.
    Run,
}

impl Command {
    pub fn has_csv(self) -> bool {
        use Command::*;
        matches!(
            self,
            Frequency | Integrability | Muckenhoupt | Capacity | Hardy | Sobolev | Moser | Residual | Holder | Uniformity | Euler
        )
    }

    pub fn has_svg(self) -> bool {
        matches!(self, Command::Render | Command::Euler | Command::Singular)
    }

    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Every run parameter. Loaded from a JSON file, then overridden by flags.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Sub-command name (config files only).
    #[arg(skip)]
    pub command: Option<String>,
    /// Polynomial text; `euler` accepts several separated by ';'.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Divisor for `divide`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub divisor: Option<String>,
    /// Polynomial field `w` for `moser`, `solve`, `residual` and `render`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub field: Option<String>,
    #[arg(long = "dim", global = true)]
    #[serde(alias = "dim")]
    pub dimension: Option<usize>,
    /// Comma-separated rational coordinates.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Comma-separated rationals.
    #[arg(long, global = true)]
    pub radii: Option<String>,
    #[arg(long, global = true)]
    pub radius: Option<String>,
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    #[arg(long = "N0", alias = "n0", global = true)]
    #[serde(rename = "N0")]
    pub n0: Option<u32>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long = "Nbar0", alias = "nbar0", global = true)]
    #[serde(rename = "Nbar0")]
    pub nbar0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub rho: Option<String>,
    #[arg(long, global = true)]
    pub p: Option<String>,
    /// Comma-separated decreasing floats.
    #[arg(long, global = true)]
    pub epsilons: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Number of generated polynomials when no `poly` is given.
    #[arg(long, global = true)]
    pub corpus: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub side: Option<String>,
    /// Cells per side; `solve` and `residual` accept a comma-separated ladder.
    #[arg(long, global = true)]
    pub cells: Option<String>,
    /// JSON report path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $(if $top.$f.is_some() { $base.$f = $top.$f; })*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        overlay!(
            self, top, command, poly, divisor, field, dimension, center, point, radii, radius, resolution, degree, n0, m,
            nbar0, a, alpha, rho, p, epsilons, samples, corpus, seed, side, cells, out, csv, svg
        );
        self
    }

    /// Checks every supplied field, whatever the sub-command uses.
    pub fn validate(&self) -> Result<(), CliError> {
        let command = self.command()?;
        self.dim()?;
        for (name, text) in [("poly", &self.poly), ("divisor", &self.divisor), ("field", &self.field)] {
            if let Some(t) = text {
                for part in t.split(';') {
                    parse_field(name, part, self.dim()?)?;
                }
            }
        }
        if self.center.is_some() {
            self.center()?;
        }
        if self.point.is_some() {
            self.point()?;
        }
        if self.radii.is_some() {
            self.radii_or("")?;
        }
        if self.radius.is_some() {
            self.radius_or("")?;
        }
        if self.resolution.is_some() {
            self.resolution_or(0)?;
        }
        if self.a.is_some() {
            self.a()?;
        }
        if self.alpha.is_some() {
            self.alpha()?;
        }
        for (name, value) in [("Nbar0", &self.nbar0), ("rho", &self.rho), ("p", &self.p)] {
            if let Some(t) = value {
                rational(name, t)?;
            }
        }
        if self.epsilons.is_some() {
            self.epsilons()?;
        }
        if self.n0.is_some() {
            self.n0()?;
        }
        if self.side.is_some() {
            self.side()?;
        }
        if self.cells.is_some() {
            self.cells_or("")?;
        }
        if self.csv.is_some() && !command.has_csv() {
            return Err(CliError::Config(format!("csv: '{}' has no CSV export", command.name())));
        }
        if self.svg.is_some() && !command.has_svg() {
            return Err(CliError::Config(format!("svg: '{}' has no SVG output", command.name())));
        }
        Ok(())
    }

    pub fn command(&self) -> Result<Command, CliError> {
        let name = self.command.as_deref().ok_or_else(|| CliError::Config("command: missing".into()))?;
        match Command::from_str(name, true) {
            Ok(Command::Run) | Err(_) => Err(CliError::Config(format!("command: unknown sub-command '{name}'"))),
            Ok(c) => Ok(c),
        }
    }

    pub fn dim(&self) -> Result<usize, CliError> {
        match self.dimension.unwrap_or(2) {
            d @ 1..=8 => Ok(d),
            d => Err(CliError::Config(format!("dimension: {d} outside 1..=8"))),
        }
    }

    pub fn poly_text(&self) -> Result<&str, CliError> {
        self.poly.as_deref().ok_or_else(|| CliError::Config("poly: required".into()))
    }

    pub fn polynomial(&self) -> Result<Polynomial, CliError> {
        parse_field("poly", self.poly_text()?, self.dim()?)
    }

    pub fn polynomials(&self) -> Result<Vec<Polynomial>, CliError> {
        let dim = self.dim()?;
        self.poly_text()?.split(';').map(|t| parse_field("poly", t, dim)).collect()
    }

    pub fn optional_poly(&self, name: &str, text: &Option<String>) -> Result<Option<Polynomial>, CliError> {
        text.as_deref().map(|t| parse_field(name, t, self.dim()?)).transpose()
    }

    pub fn center(&self) -> Result<Vec<Rational>, CliError> {
        let dim = self.dim()?;
        let c = match &self.center {
            None => vec![Rational::from_integer(0.into()); dim],
            Some(text) => rational_list("center", text)?,
        };
        if c.len() != dim {
            return Err(CliError::Config(format!("center: expected {dim} coordinates, got {}", c.len())));
        }
        Ok(c)
    }

    pub fn point(&self) -> Result<Vec<Rational>, CliError> {
        let text = self.point.as_deref().ok_or_else(|| CliError::Config("point: required".into()))?;
        let p = rational_list("point", text)?;
        let dim = self.dim()?;
        if p.len() != dim {
            return Err(CliError::Config(format!("point: expected {dim} coordinates, got {}", p.len())));
        }
        Ok(p)
    }

    pub fn radii_or(&self, default: &str) -> Result<Vec<Rational>, CliError> {
        let r = rational_list("radii", self.radii.as_deref().unwrap_or(default))?;
        if r.is_empty() || r.iter().any(|x| *x <= Rational::from_integer(0.into())) {
            return Err(CliError::Config("radii: need positive values".into()));
        }
        Ok(r)
    }

    pub fn radius_or(&self, default: &str) -> Result<Rational, CliError> {
        positive("radius", self.radius.as_deref().unwrap_or(default))
    }

    pub fn resolution_or(&self, default: usize) -> Result<usize, CliError> {
        match self.resolution.unwrap_or(default) {
            r if r >= 64 => Ok(r),
            r => Err(CliError::Config(format!("resolution: must be at least 64, got {r}"))),
        }
    }

    pub fn a(&self) -> Result<Rational, CliError> {
        rational("a", self.a.as_deref().ok_or_else(|| CliError::Config("a: required".into()))?)
    }

    pub fn alpha(&self) -> Result<Rational, CliError> {
        let a = rational("alpha", self.alpha.as_deref().unwrap_or("1/2"))?;
        if a <= Rational::from_integer(0.into()) || a > Rational::from_integer(1.into()) {
            return Err(CliError::Config(format!("alpha: must lie in (0, 1], got {a}")));
        }
        Ok(a)
    }

    pub fn rational_or(&self, name: &str, value: &Option<String>, default: &str) -> Result<Rational, CliError> {
        rational(name, value.as_deref().unwrap_or(default))
    }

    pub fn epsilons(&self) -> Result<Vec<f64>, CliError> {
        let text = self.epsilons.as_deref().unwrap_or("1e-2,1e-3,1e-4");
        let eps = text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Config(format!("epsilons: '{s}': {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CliError::Config("epsilons: need a decreasing list in (0, 1)".into()));
        }
        Ok(eps)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn n0(&self) -> Result<u32, CliError> {
        match self.n0.unwrap_or(2) {
            0 => Err(CliError::Config("N0: must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn m(&self) -> u32 {
        self.m.unwrap_or(2)
    }

    pub fn side(&self) -> Result<f64, CliError> {
        let s = exact::to_f64(&positive("side", self.side.as_deref().unwrap_or("1"))?);
        if s > std::f64::consts::SQRT_2 {
            return Err(CliError::Config(format!("side: square of side {s} leaves the unit ball")));
        }
        Ok(s)
    }

    pub fn cells_or(&self, default: &str) -> Result<Vec<usize>, CliError> {
        let text = self.cells.as_deref().unwrap_or(default);
        let cells = text
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| CliError::Config(format!("cells: '{s}': {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if cells.is_empty() || cells.iter().any(|&c| c < 4 || c % 2 != 0) {
            return Err(CliError::Config("cells: need even values of at least 4".into()));
        }
        Ok(cells)
    }
}

fn parse_field(name: &str, text: &str, dim: usize) -> Result<Polynomial, CliError> {
    parse_polynomial(text, dim).map_err(|e| CliError::Config(format!("{name}: {e}")))
}

pub fn rational(name: &str, text: &str) -> Result<Rational, CliError> {
    exact::parse_rational(text).ok_or_else(|| CliError::Config(format!("{name}: '{text}' is not a rational p/q")))
}

fn positive(name: &str, text: &str) -> Result<Rational, CliError> {
    let r = rational(name, text)?;
    if r <= Rational::from_integer(0.into()) {
        return Err(CliError::Config(format!("{name}: must be positive")));
    }
    Ok(r)
}

fn rational_list(name: &str, text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(|s| rational(name, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig = serde_json::from_str(r#"{"command": "frequency", "poly": "x", "seed": 3}"#).unwrap();
        let flags = RunConfig { poly: Some("y".into()), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!(merged.poly.as_deref(), Some("y"));
        assert_eq!(merged.seed, Some(3));
        assert_eq!(merged.command().unwrap(), Command::Frequency);
    }

    #[test]
    fn field_level_messages() {
        let bad: Result<RunConfig, _> = serde_json::from_str(r#"{"command": "euler", "polly": "x"}"#);
        assert!(bad.is_err());
        let c = RunConfig { center: Some("0,1/0".into()), ..Default::default() };
        let err = c.center().unwrap_err().to_string();
        assert!(err.contains("center"), "{err}");
        let c = RunConfig { command: Some("nope".into()), ..Default::default() };
        assert!(c.command().is_err());
        let c = RunConfig { resolution: Some(10), ..Default::default() };
        assert!(c.resolution_or(128).unwrap_err().to_string().contains("resolution"));
    }
}
