use std::collections::BTreeMap;

use serde::Serialize;

use super::modules::rxn;
use crate::frontend::CondKind;
use crate::ir::{Reaction, SpeciesName};

/// Flag species shared by every comparison in a program.
///
/// The X side tracks `x` against `y + ε`, the Y side tracks `y` against
/// `x + ε`; `Bx`/`By` are the approximate-majority buffer species and
/// `CmpOffset` is a constant catalyst at concentration ε.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagSet {
    pub xgty: SpeciesName,
    pub xlty: SpeciesName,
    pub bx: SpeciesName,
    pub ygtx: SpeciesName,
    pub yltx: SpeciesName,
    pub by: SpeciesName,
    pub offset: SpeciesName,
}

impl Default for FlagSet {
    fn default() -> Self {
        Self {
            xgty: SpeciesName::flag("XgtY"),
            xlty: SpeciesName::flag("XltY"),
            bx: SpeciesName::flag("Bx"),
            ygtx: SpeciesName::flag("YgtX"),
            yltx: SpeciesName::flag("YltX"),
            by: SpeciesName::flag("By"),
            offset: SpeciesName::flag("CmpOffset"),
        }
    }
}

impl FlagSet {
    /// Both sides start undecided (0.5/0.5/0) and the offset holds ε.
    pub fn initials(&self, epsilon: f64) -> BTreeMap<SpeciesName, f64> {
        [
            (&self.xgty, 0.5),
            (&self.xlty, 0.5),
            (&self.bx, 0.0),
            (&self.ygtx, 0.5),
            (&self.yltx, 0.5),
            (&self.by, 0.0),
            (&self.offset, epsilon),
        ]
        .into_iter()
        .map(|(s, v)| (s.clone(), v))
        .collect()
    }

    pub fn species(&self) -> [&SpeciesName; 7] {
        [&self.xgty, &self.xlty, &self.bx, &self.ygtx, &self.yltx, &self.by, &self.offset]
    }
}

/// Reactions of one `cmp[x,y]`, split by the phase that runs them.
#[derive(Clone, Debug, PartialEq)]
pub struct CmpExpansion {
    /// Maps the compared values onto the flags (first phase of the step).
    pub normalization: Vec<Reaction>,
    /// Amplifies the flags to a digital decision (second phase).
    pub majority: Vec<Reaction>,
}

pub fn expand_cmp(x: &SpeciesName, y: &SpeciesName, flags: &FlagSet) -> CmpExpansion {
    let f = flags;
    let normalization = vec![
        rxn(&[&f.xgty, y], &[&f.xlty, y], 1.0),
        rxn(&[&f.xlty, x], &[&f.xgty, x], 1.0),
        rxn(&[&f.xlty, &f.offset], &[&f.xgty, &f.offset], 1.0),
        rxn(&[&f.ygtx, x], &[&f.yltx, x], 1.0),
        rxn(&[&f.yltx, y], &[&f.ygtx, y], 1.0),
        rxn(&[&f.yltx, &f.offset], &[&f.ygtx, &f.offset], 1.0),
    ];
    let mut majority = approximate_majority(&f.xgty, &f.xlty, &f.bx);
    majority.extend(approximate_majority(&f.ygtx, &f.yltx, &f.by));
    CmpExpansion { normalization, majority }
}

/// `X + Y → Y + B`, `B + Y → 2Y`, `Y + X → X + B`, `B + X → 2X`.
pub fn approximate_majority(x: &SpeciesName, y: &SpeciesName, b: &SpeciesName) -> Vec<Reaction> {
    vec![
        rxn(&[x, y], &[y, b], 1.0),
        rxn(&[b, y], &[y, y], 1.0),
        rxn(&[y, x], &[x, b], 1.0),
        rxn(&[b, x], &[x, x], 1.0),
    ]
}

/// Flags that must be high for a conditional branch to run.
pub fn flag_catalysts(kind: CondKind, flags: &FlagSet) -> Vec<SpeciesName> {
    let f = flags;
    match kind {
        CondKind::Gt => vec![f.xgty.clone(), f.yltx.clone()],
        CondKind::Eq => vec![f.xgty.clone(), f.ygtx.clone()],
        CondKind::Lt => vec![f.xlty.clone(), f.ygtx.clone()],
        CondKind::Ge => vec![f.xgty.clone()],
        CondKind::Le => vec![f.ygtx.clone()],
    }
}
