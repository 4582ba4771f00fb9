//! Reaction networks and their mass-action ODE semantics.

mod crn;
mod ode;
mod reaction;
mod species;

pub use crn::{merge, Crn, CrnJson, ReactionJson};
pub use ode::{mass_action_odes, OdeSystem};
pub use reaction::{net_change, Multiset, Provenance, Reaction};
pub use species::{Namespace, SpeciesName};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IrError {
    #[error("reaction rate must be positive and finite, got {0}")]
    BadRate(f64),
    #[error("reaction has neither reactants nor products")]
    EmptyReaction,
    #[error("initial concentration of {species} must be nonnegative and finite, got {value}")]
    BadConcentration { species: SpeciesName, value: f64 },
    #[error("conflicting initial concentrations for {species}: {first} vs {second}")]
    ConflictingInitial { species: SpeciesName, first: f64, second: f64 },
    #[error("invalid species name `{0}`")]
    BadSpeciesName(String),
    #[error("malformed CRN JSON: {0}")]
    Json(String),
}
