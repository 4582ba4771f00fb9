//! CRN++ source text → checked AST.

mod ast;
mod diagnostic;
mod lexer;
mod parser;
mod validate;

pub use ast::{
    Command, CondKind, ConcDecl, ConcValue, Conditional, ExplicitRxn, ModuleCall, ModuleKind, Outcome, Program, Span,
    Step,
};
pub use diagnostic::{Diagnostic, Severity};
pub use parser::parse;
pub use validate::{validate, FlatCommand, FlatKind, StepPlan, ValidatedProgram};
