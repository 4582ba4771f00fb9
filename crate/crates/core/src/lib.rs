//! Compiler and deterministic mass-action simulator for CRN++ programs.
//!
//! The pipeline is
//!
//! ```text
//! source --parse--> Program --validate--> ValidatedProgram --compile--> CompiledProgram
//!                                               |                            |
//!                                          interpret                      simulate
//!                                               |                            |
//!                                        OracleTimeline  <--align-->  phase-end samples
//! ```
//!
//! Modules map one-to-one onto the stages: [`frontend`] lexes, parses and
//! checks source text; [`ir`] holds reaction networks and their mass-action
//! ODEs; [`compiler`] lowers programs to a single clocked network;
//! [`simulator`] integrates the ODEs under a chemical oscillator or an ideal
//! square-wave clock; [`oracle`] executes programs exactly; [`analysis`]
//! measures the gap between the two.

pub mod analysis;
pub mod compiler;
pub mod corpus;
pub mod export;
pub mod frontend;
pub mod ir;
pub mod number;
pub mod oracle;
pub mod simulator;

pub use analysis::{evaluate_error, ErrorReport, ErrorSurface};
pub use compiler::{compile, ClockSchedule, CompileConfig, CompiledProgram, FlagSet};
pub use frontend::{parse, validate, Diagnostic, Program, ValidatedProgram};
pub use ir::{Crn, Multiset, Namespace, OdeSystem, Reaction, SpeciesName};
pub use number::{Bindings, Number};
pub use oracle::{interpret, OracleTimeline};
pub use simulator::{simulate, ClockBackend, RunLength, SolverConfig, Trace};
