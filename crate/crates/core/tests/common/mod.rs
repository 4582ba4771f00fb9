#![allow(dead_code)]

use crnpp_core::corpus::{self, CorpusProgram};
use crnpp_core::{compile, parse, validate, Bindings, CompileConfig, CompiledProgram, Number, ValidatedProgram};

pub fn validated(src: &str) -> ValidatedProgram {
    validate(&parse(src).expect("parses")).expect("validates")
}

pub fn bindings(pairs: &[(&str, i64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), Number::from_integer(*v))).collect()
}

pub fn corpus(name: &str) -> &'static CorpusProgram {
    corpus::find(name).expect("bundled program")
}

pub fn compiled(name: &str) -> (ValidatedProgram, Bindings, CompiledProgram) {
    let p = corpus(name);
    let vp = validated(p.source);
    let b = p.default_bindings();
    let cp = compile(&vp, &b, &CompileConfig::default()).expect("compiles");
    (vp, b, cp)
}
