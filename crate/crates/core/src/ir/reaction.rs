use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{IrError, SpeciesName};

/// Species → multiplicity. Absent keys have multiplicity 0; stored
/// multiplicities are always ≥ 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset(BTreeMap<SpeciesName, u32>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, species: SpeciesName, count: u32) {
        if count > 0 {
            *self.0.entry(species).or_insert(0) += count;
        }
    }

    pub fn with(mut self, species: SpeciesName, count: u32) -> Self {
        self.add(species, count);
        self
    }

    pub fn multiplicity(&self, species: &SpeciesName) -> u32 {
        self.0.get(species).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SpeciesName, u32)> {
        self.0.iter().map(|(s, &m)| (s, m))
    }

    pub fn species(&self) -> impl Iterator<Item = &SpeciesName> {
        self.0.keys()
    }

    /// Total molecule count, `Σ multiplicity`.
    pub fn size(&self) -> u32 {
        self.0.values().sum()
    }
}

impl FromIterator<SpeciesName> for Multiset {
    fn from_iter<I: IntoIterator<Item = SpeciesName>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for s in iter {
            m.add(s, 1);
        }
        m
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let mut first = true;
        for (s, m) in self.iter() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m > 1 {
                write!(f, "{m}")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Where a compiled reaction came from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Zero-based step index in the source program.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub step: Option<usize>,
    /// Source-level description, e.g. `sub[atmp,btmp,a]` or `oscillator`.
    pub command: String,
    /// Clock phase whose catalyst gates the reaction.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phase: Option<usize>,
}

impl Provenance {
    pub fn new(command: impl Into<String>) -> Self {
        Self { step: None, command: command.into(), phase: None }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.command)?;
        if let Some(step) = self.step {
            write!(f, " (step {}", step + 1)?;
            if let Some(phase) = self.phase {
                write!(f, ", phase {phase}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reaction {
    reactants: Multiset,
    products: Multiset,
    rate: f64,
    provenance: Provenance,
}

impl Reaction {
    pub fn new(reactants: Multiset, products: Multiset, rate: f64) -> Result<Self, IrError> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(IrError::BadRate(rate));
        }
        if reactants.is_empty() && products.is_empty() {
            return Err(IrError::EmptyReaction);
        }
        Ok(Self { reactants, products, rate, provenance: Provenance::default() })
    }

    pub fn reactants(&self) -> &Multiset {
        &self.reactants
    }

    pub fn products(&self) -> &Multiset {
        &self.products
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Adds each species once to both sides.
    pub fn catalyzed_by<'a>(mut self, catalysts: impl IntoIterator<Item = &'a SpeciesName>) -> Self {
        for c in catalysts {
            self.reactants.add(c.clone(), 1);
            self.products.add(c.clone(), 1);
        }
        self
    }

    pub fn net_change(&self, species: &SpeciesName) -> i64 {
        i64::from(self.products.multiplicity(species)) - i64::from(self.reactants.multiplicity(species))
    }

    /// True when `species` appears with equal multiplicity on both sides.
    pub fn is_catalyst(&self, species: &SpeciesName) -> bool {
        let m = self.reactants.multiplicity(species);
        m > 0 && m == self.products.multiplicity(species)
    }

    pub fn species(&self) -> impl Iterator<Item = &SpeciesName> {
        self.reactants.species().chain(self.products.species())
    }
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.reactants, self.products)?;
        if self.rate != 1.0 {
            write!(f, " (k={})", self.rate)?;
        }
        Ok(())
    }
}

/// Products multiplicity minus reactants multiplicity of `s` in `r`.
pub fn net_change(s: &SpeciesName, r: &Reaction) -> i64 {
    r.net_change(s)
}
