use serde::Serialize;

use super::rk45::Stats;
use crate::ir::SpeciesName;

/// One window of the ideal clock: phase `phase` of cycle `cycle` was
/// active during `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseWindow {
    pub cycle: usize,
    pub phase: usize,
    pub start: f64,
    pub end: f64,
}

/// Concentrations over time, one row per accepted solver step.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub species: Vec<SpeciesName>,
    /// Strictly increasing, starting at 0.
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Exact phase windows when the clock backend provides them.
    pub phase_annotations: Vec<PhaseWindow>,
    /// Smallest concentration produced by the solver before negative
    /// values were clamped to 0 (`+inf` for an empty run).
    pub min_before_clamp: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trace {
    pub(crate) fn start(species: Vec<SpeciesName>, initial: &[f64]) -> Self {
        Self {
            species,
            times: vec![0.0],
            states: vec![initial.to_vec()],
            phase_annotations: Vec::new(),
            min_before_clamp: initial.iter().copied().fold(f64::INFINITY, f64::min),
            accepted_steps: 0,
            rejected_steps: 0,
        }
    }

    pub(crate) fn push(&mut self, t: f64, state: &[f64]) {
        match self.times.last() {
            Some(&last) if t <= last => {
                *self.states.last_mut().expect("states parallel times") = state.to_vec();
            }
            _ => {
                self.times.push(t);
                self.states.push(state.to_vec());
            }
        }
    }

    pub(crate) fn finish(&mut self, stats: &Stats) {
        self.min_before_clamp = self.min_before_clamp.min(stats.min_before_clamp);
        self.accepted_steps = stats.accepted;
        self.rejected_steps = stats.rejected;
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn index_of(&self, species: &SpeciesName) -> Option<usize> {
        self.species.iter().position(|s| s == species)
    }

    pub fn column(&self, species: &SpeciesName) -> Option<Vec<f64>> {
        let i = self.index_of(species)?;
        Some(self.states.iter().map(|row| row[i]).collect())
    }

    pub fn end_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_value(&self, species: &SpeciesName) -> Option<f64> {
        let i = self.index_of(species)?;
        self.states.last().map(|row| row[i])
    }

    /// State at time `t`, linearly interpolated between recorded steps and
    /// clamped to the recorded range.
    pub fn state_at(&self, t: f64) -> Option<Vec<f64>> {
        let first = *self.times.first()?;
        if t <= first {
            return Some(self.states[0].clone());
        }
        let hi = self.times.partition_point(|&x| x < t);
        if hi >= self.times.len() {
            return self.states.last().cloned();
        }
        let (t0, t1) = (self.times[hi - 1], self.times[hi]);
        if self.times[hi] == t {
            return Some(self.states[hi].clone());
        }
        let w = (t - t0) / (t1 - t0);
        Some(self.states[hi - 1].iter().zip(&self.states[hi]).map(|(a, b)| a + w * (b - a)).collect())
    }

    pub fn value_at(&self, species: &SpeciesName, t: f64) -> Option<f64> {
        let i = self.index_of(species)?;
        self.state_at(t).map(|s| s[i])
    }

    /// Keeps every `every`-th row plus the last one.
    pub fn downsample(&self, every: usize) -> Trace {
        let every = every.max(1);
        let mut out = self.clone();
        let keep: Vec<usize> =
            (0..self.len()).filter(|&i| i % every == 0 || i + 1 == self.len()).collect();
        out.times = keep.iter().map(|&i| self.times[i]).collect();
        out.states = keep.iter().map(|&i| self.states[i].clone()).collect();
        out
    }
}
