//! Bundled example programs with their default parameters.
//!
//! Sources are embedded at build time; setting `CRNPP_EXAMPLES` to a
//! directory makes [`load_source`] read `<dir>/<name>.crnpp` instead.

use std::path::PathBuf;

use crate::number::{Bindings, Number};

/// How closely a program's simulation must track the oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    /// Integer-valued programs: absolute error bound.
    Absolute(f64),
    /// Real-valued approximations: relative error bound.
    Relative(f64),
}

impl Tolerance {
    pub fn admits(self, simulated: f64, expected: f64) -> bool {
        match self {
            Tolerance::Absolute(tol) => (simulated - expected).abs() <= tol,
            Tolerance::Relative(tol) => (simulated - expected).abs() <= tol * expected.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusProgram {
    pub name: &'static str,
    pub source: &'static str,
    pub bindings: &'static [(&'static str, i64)],
    /// Species whose values the program exists to compute.
    pub tracked: &'static [&'static str],
    /// Reference (species, reactions) counts of the compiled network.
    pub reference_size: Option<(usize, usize)>,
    pub tolerance: Tolerance,
}

impl CorpusProgram {
    pub fn default_bindings(&self) -> Bindings {
        self.bindings.iter().map(|(k, v)| (k.to_string(), Number::from_integer(*v))).collect()
    }
}

macro_rules! source {
    ($name:literal) => {
        include_str!(concat!("../../../corpus/", $name, ".crnpp"))
    };
}

const DISCRETE: Tolerance = Tolerance::Absolute(0.5);
const REAL: Tolerance = Tolerance::Relative(1e-2);

pub const PROGRAMS: &[CorpusProgram] = &[
    CorpusProgram {
        name: "gcd",
        source: source!("gcd"),
        bindings: &[("a0", 32), ("b0", 12)],
        tracked: &["a", "b"],
        reference_size: None,
        tolerance: DISCRETE,
    },
    CorpusProgram {
        name: "counter",
        source: source!("counter"),
        bindings: &[("c0", 3)],
        tracked: &["c"],
        reference_size: Some((25, 31)),
        tolerance: DISCRETE,
    },
    CorpusProgram {
        name: "factorial",
        source: source!("factorial"),
        bindings: &[("f0", 5)],
        tracked: &["f", "i"],
        reference_size: Some((26, 33)),
        tolerance: DISCRETE,
    },
    CorpusProgram {
        name: "int_division",
        source: source!("int_division"),
        bindings: &[("a0", 20), ("b0", 3)],
        tracked: &["q", "r"],
        reference_size: Some((32, 39)),
        tolerance: DISCRETE,
    },
    CorpusProgram {
        name: "int_sqrt",
        source: source!("int_sqrt"),
        bindings: &[("n0", 10)],
        tracked: &["z", "out"],
        reference_size: Some((26, 32)),
        tolerance: DISCRETE,
    },
    CorpusProgram {
        name: "euler",
        source: source!("euler"),
        bindings: &[],
        tracked: &["e"],
        reference_size: Some((24, 20)),
        tolerance: REAL,
    },
    CorpusProgram {
        name: "pi",
        source: source!("pi"),
        bindings: &[],
        tracked: &["pi"],
        reference_size: Some((29, 29)),
        tolerance: REAL,
    },
    CorpusProgram {
        name: "sub_alternative",
        source: source!("sub_alternative"),
        bindings: &[("a0", 10), ("b0", 4)],
        tracked: &["a", "b"],
        reference_size: None,
        tolerance: DISCRETE,
    },
    CorpusProgram {
        name: "mul_demo",
        source: source!("mul_demo"),
        bindings: &[],
        tracked: &["C"],
        reference_size: None,
        tolerance: Tolerance::Relative(1e-2),
    },
];

pub fn find(name: &str) -> Option<&'static CorpusProgram> {
    PROGRAMS.iter().find(|p| p.name == name)
}

/// Directory named by `CRNPP_EXAMPLES`, if set.
pub fn override_dir() -> Option<PathBuf> {
    std::env::var_os("CRNPP_EXAMPLES").map(PathBuf::from)
}

/// Source of a bundled program, honouring `CRNPP_EXAMPLES`.
pub fn load_source(name: &str) -> std::io::Result<String> {
    if let Some(dir) = override_dir() {
        return std::fs::read_to_string(dir.join(format!("{name}.crnpp")));
    }
    find(name)
        .map(|p| p.source.to_string())
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::NotFound, format!("no bundled program named `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse, validate};

    #[test]
    fn every_program_validates_cleanly() {
        for p in PROGRAMS {
            let vp = validate(&parse(p.source).unwrap_or_else(|d| panic!("{}: {d:?}", p.name)))
                .unwrap_or_else(|d| panic!("{}: {d:?}", p.name));
            // The Euler program declares a species it never uses.
            let expected_warnings = if p.name == "euler" { 1 } else { 0 };
            assert_eq!(vp.warnings().len(), expected_warnings, "{}: {:?}", p.name, vp.warnings());
            let params = vp.parameters();
            let bound: std::collections::BTreeSet<String> = p.bindings.iter().map(|(k, _)| k.to_string()).collect();
            assert_eq!(params, bound, "{}", p.name);
            let species = vp.species();
            for t in p.tracked {
                assert!(species.contains(*t), "{} tracks unknown {t}", p.name);
            }
        }
    }

    #[test]
    fn tolerances() {
        assert!(Tolerance::Absolute(0.5).admits(4.4, 4.0));
        assert!(!Tolerance::Absolute(0.5).admits(4.6, 4.0));
        assert!(Tolerance::Relative(1e-2).admits(2.52, 2.5));
        assert!(!Tolerance::Relative(1e-3).admits(2.51, 2.5));
    }
}
