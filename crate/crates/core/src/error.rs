use std::fmt;

use crate::potential::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The physical context is missing a scale the operation needs, or holds a non-positive value.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid deformation: {0}")]
    InvalidDeformation(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("odd or zero exponent {exponent} at position {position}")]
    BadExponent { position: usize, exponent: i64 },

    #[error("negative coefficient at position {position}")]
    NegativeCoefficient { position: usize },

    #[error("unknown identifier '{name}' at position {position}")]
    UnknownIdentifier { position: usize, name: String },

    #[error("potential is not admissible: {}", ViolationList(.0))]
    Inadmissible(Vec<Violation>),

    #[error("argument {0} is outside the domain xi > 0")]
    Domain(f64),

    #[error("degenerate potential: {0}")]
    DegeneratePotential(String),

    /// No stationary point of the constrained energy exists; a physical outcome, not a failure.
    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no feasible point on the grid")]
    EmptyFeasibleGrid,
}

impl Error {
    /// Stable snake_case tag used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::InvalidDeformation(_) => "invalid_deformation",
            Error::Syntax { .. } => "syntax",
            Error::BadExponent { .. } => "bad_exponent",
            Error::NegativeCoefficient { .. } => "negative_coefficient",
            Error::UnknownIdentifier { .. } => "unknown_identifier",
            Error::Inadmissible(_) => "inadmissible_potential",
            Error::Domain(_) => "domain",
            Error::DegeneratePotential(_) => "degenerate_potential",
            Error::NoBoundState(_) => "no_bound_state",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::EmptyFeasibleGrid => "empty_feasible_grid",
        }
    }
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
