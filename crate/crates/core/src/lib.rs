//! Lower bounds on ground-state energies under a deformed uncertainty
//! relation `dx dp >= hbar/2 (1 + alpha' dx^2 + beta' dp^2)`.
//!
//! The bound is the minimum of `q^2 + V(xi)` over the region allowed by the
//! dimensionless constraint `xi q >= 1/2 + beta q^2 + alpha xi^2`.

pub mod cli;
pub mod error;
pub mod existence;
pub mod harmonic;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod potential;
pub mod solver;

pub use error::{Error, Result};
pub use model::{DeformationParams, Method, PhysicalContext, SolveResult, UncertaintyPoint};
pub use potential::{PotentialEvaluator, PotentialSpec};
