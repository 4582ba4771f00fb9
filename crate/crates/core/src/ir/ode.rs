use std::collections::{BTreeMap, BTreeSet};

use super::{Crn, Provenance, SpeciesName};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    State(usize),
    Exogenous(usize),
}

#[derive(Clone, Debug)]
struct Term {
    rate: f64,
    reactants: Vec<(Slot, i32)>,
    deltas: Vec<(usize, f64)>,
    provenance: Provenance,
}

/// Mass-action ODEs of a network:
///
/// `d[S]/dt = Σ_rxn k(rxn) · netChange(S, rxn) · Π_R [R]^m(R)`.
///
/// Some species may be declared exogenous: they are not part of the state
/// vector, their values are supplied by the caller at each evaluation, and
/// any net change a reaction would apply to them is ignored. Reactions left
/// with no effect on the state are dropped. The ideal clock backend uses
/// this to drive clock catalysts as square waves.
#[derive(Clone, Debug)]
pub struct OdeSystem {
    species: Vec<SpeciesName>,
    exogenous: Vec<SpeciesName>,
    terms: Vec<Term>,
}

/// The ODE system of `crn` with every species as a state variable.
pub fn mass_action_odes(crn: &Crn) -> OdeSystem {
    OdeSystem::with_exogenous(crn, &BTreeSet::new())
}

impl OdeSystem {
    pub fn with_exogenous(crn: &Crn, exogenous: &BTreeSet<SpeciesName>) -> Self {
        let all = crn.species();
        let species: Vec<SpeciesName> = all.iter().filter(|s| !exogenous.contains(*s)).cloned().collect();
        let exo: Vec<SpeciesName> = exogenous.iter().cloned().collect();
        let state_index: BTreeMap<&SpeciesName, usize> = species.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let exo_index: BTreeMap<&SpeciesName, usize> = exo.iter().enumerate().map(|(i, s)| (s, i)).collect();

        let terms = crn
            .reactions()
            .iter()
            .filter_map(|r| {
                let deltas: Vec<(usize, f64)> = r
                    .species()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .filter_map(|s| {
                        let change = r.net_change(s);
                        let idx = state_index.get(s)?;
                        (change != 0).then_some((*idx, change as f64))
                    })
                    .collect();
                if deltas.is_empty() {
                    return None;
                }
                let reactants = r
                    .reactants()
                    .iter()
                    .map(|(s, m)| {
                        let slot = match state_index.get(s) {
                            Some(&i) => Slot::State(i),
                            None => Slot::Exogenous(exo_index[s]),
                        };
                        (slot, m as i32)
                    })
                    .collect();
                Some(Term { rate: r.rate(), reactants, deltas, provenance: r.provenance().clone() })
            })
            .collect();

        Self { species, exogenous: exo, terms }
    }

    pub fn dimension(&self) -> usize {
        self.species.len()
    }

    pub fn species(&self) -> &[SpeciesName] {
        &self.species
    }

    pub fn exogenous(&self) -> &[SpeciesName] {
        &self.exogenous
    }

    pub fn index_of(&self, species: &SpeciesName) -> Option<usize> {
        self.species.binary_search(species).ok()
    }

    pub fn exogenous_index_of(&self, species: &SpeciesName) -> Option<usize> {
        self.exogenous.binary_search(species).ok()
    }

    pub fn reaction_count(&self) -> usize {
        self.terms.len()
    }

    pub fn initial_state(&self, crn: &Crn) -> Vec<f64> {
        self.species.iter().map(|s| crn.initial(s)).collect()
    }

    /// Derivative for a system without exogenous species.
    pub fn derivative(&self, state: &[f64], out: &mut [f64]) {
        self.derivative_with(state, &[], out);
    }

    pub fn derivative_with(&self, state: &[f64], exogenous: &[f64], out: &mut [f64]) {
        debug_assert_eq!(state.len(), self.species.len());
        debug_assert_eq!(exogenous.len(), self.exogenous.len());
        out.iter_mut().for_each(|d| *d = 0.0);
        for term in &self.terms {
            let flux = self.term_flux(term, state, exogenous);
            if flux != 0.0 {
                for &(i, change) in &term.deltas {
                    out[i] += change * flux;
                }
            }
        }
    }

    /// Flux `k · Π [R]^m` of every retained reaction, in network order.
    pub fn fluxes(&self, state: &[f64], exogenous: &[f64]) -> Vec<f64> {
        self.terms.iter().map(|t| self.term_flux(t, state, exogenous)).collect()
    }

    pub fn provenance(&self, term: usize) -> &Provenance {
        &self.terms[term].provenance
    }

    /// Net change applied to state species `index` by reaction `term`.
    pub fn delta(&self, term: usize, index: usize) -> f64 {
        self.terms[term].deltas.iter().find(|(i, _)| *i == index).map_or(0.0, |(_, d)| *d)
    }

    fn term_flux(&self, term: &Term, state: &[f64], exogenous: &[f64]) -> f64 {
        let mut flux = term.rate;
        for &(slot, m) in &term.reactants {
            let x = match slot {
                Slot::State(i) => state[i],
                Slot::Exogenous(i) => exogenous[i],
            };
            flux *= if m == 1 { x } else { x.powi(m) };
        }
        flux
    }
}
