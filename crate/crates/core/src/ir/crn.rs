use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{IrError, Multiset, Provenance, Reaction, SpeciesName};

/// A reaction network with initial concentrations. Species that appear in
/// a reaction but not in `initial` start at 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Crn {
    reactions: Vec<Reaction>,
    initial: BTreeMap<SpeciesName, f64>,
}

impl Crn {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, reaction: Reaction) {
        self.reactions.push(reaction);
    }

    pub fn extend(&mut self, reactions: impl IntoIterator<Item = Reaction>) {
        self.reactions.extend(reactions);
    }

    pub fn set_initial(&mut self, species: SpeciesName, value: f64) -> Result<(), IrError> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(IrError::BadConcentration { species, value });
        }
        self.initial.insert(species, value);
        Ok(())
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    /// Explicitly declared initial concentrations.
    pub fn declared_initial(&self) -> &BTreeMap<SpeciesName, f64> {
        &self.initial
    }

    pub fn initial(&self, species: &SpeciesName) -> f64 {
        self.initial.get(species).copied().unwrap_or(0.0)
    }

    /// Every species named by a reaction or an initial concentration.
    pub fn species(&self) -> BTreeSet<SpeciesName> {
        let mut all: BTreeSet<SpeciesName> = self.initial.keys().cloned().collect();
        for r in &self.reactions {
            all.extend(r.species().cloned());
        }
        all
    }

    pub fn to_json(&self) -> CrnJson {
        CrnJson {
            species: self.species().into_iter().map(|s| {
                let v = self.initial(&s);
                (s.to_string(), v)
            }).collect(),
            reactions: self
                .reactions
                .iter()
                .map(|r| ReactionJson {
                    reactants: r.reactants().clone(),
                    products: r.products().clone(),
                    rate: r.rate(),
                    provenance: r.provenance().clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &CrnJson) -> Result<Self, IrError> {
        let mut crn = Crn::new();
        for (name, &value) in &json.species {
            crn.set_initial(name.parse()?, value)?;
        }
        for r in &json.reactions {
            crn.push(Reaction::new(r.reactants.clone(), r.products.clone(), r.rate)?.with_provenance(r.provenance.clone()));
        }
        Ok(crn)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("CRN JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, IrError> {
        let json: CrnJson = serde_json::from_str(s).map_err(|e| IrError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// On-disk form: `species` maps every species to its initial
/// concentration; keys are sorted so files diff cleanly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrnJson {
    pub species: BTreeMap<String, f64>,
    pub reactions: Vec<ReactionJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReactionJson {
    pub reactants: Multiset,
    pub products: Multiset,
    pub rate: f64,
    #[serde(default)]
    pub provenance: Provenance,
}

/// Union of reactions and initial concentrations. Identical reactions from
/// different inputs are all kept, so their fluxes add.
pub fn merge(crns: &[Crn]) -> Result<Crn, IrError> {
    let mut out = Crn::new();
    for crn in crns {
        for (s, &v) in &crn.initial {
            match out.initial.get(s) {
                Some(&existing) if existing != v => {
                    return Err(IrError::ConflictingInitial { species: s.clone(), first: existing, second: v });
                }
                _ => {
                    out.initial.insert(s.clone(), v);
                }
            }
        }
        out.reactions.extend(crn.reactions.iter().cloned());
    }
    Ok(out)
}
