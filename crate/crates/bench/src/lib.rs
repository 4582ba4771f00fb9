//! Shared fixtures for the pipeline benchmarks.

use crnpp_core::corpus;
use crnpp_core::{compile, parse, validate, CompileConfig, CompiledProgram, ValidatedProgram};

/// A bundled program, validated, with its default bindings.
pub fn program(name: &str) -> ValidatedProgram {
    let p = corpus::find(name).unwrap_or_else(|| panic!("no bundled program `{name}`"));
    validate(&parse(p.source).expect("bundled programs parse")).expect("bundled programs validate")
}

pub fn compiled(name: &str) -> CompiledProgram {
    let p = corpus::find(name).unwrap_or_else(|| panic!("no bundled program `{name}`"));
    compile(&program(name), &p.default_bindings(), &CompileConfig::default()).expect("bundled programs compile")
}
