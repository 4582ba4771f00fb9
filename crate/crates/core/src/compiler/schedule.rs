use serde::Serialize;

use crate::frontend::ValidatedProgram;
use crate::ir::SpeciesName;

/// Assignment of program steps to oscillator phases.
///
/// Phase `i` is gated by clock species `X_{3(i+1)}` (X3, X6, X9, ...), so
/// each phase owns three consecutive clock species and adjacent gates never
/// neighbour each other in the oscillator ring.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClockSchedule {
    pub total_phases: usize,
    /// Phases of each step, in program order: one phase, or two consecutive
    /// phases (normalization, then approximate majority) for a step with `cmp`.
    pub step_phases: Vec<Vec<usize>>,
}

impl ClockSchedule {
    pub fn catalyst(&self, phase: usize) -> SpeciesName {
        catalyst_of_phase(phase)
    }

    pub fn clock_species_count(&self) -> usize {
        3 * self.total_phases
    }

    pub fn catalysts(&self) -> Vec<SpeciesName> {
        (0..self.total_phases).map(catalyst_of_phase).collect()
    }

    /// The step executing in `phase`, or `None` for a padding phase.
    pub fn step_of_phase(&self, phase: usize) -> Option<usize> {
        self.step_phases.iter().position(|ps| ps.contains(&phase))
    }
}

pub fn catalyst_of_phase(phase: usize) -> SpeciesName {
    SpeciesName::clock(3 * (phase + 1))
}

/// Phases are handed out in program order. A single-phase program is
/// padded with an idle second phase so that its gate switches off and back
/// on every cycle.
pub fn schedule_steps(program: &ValidatedProgram) -> ClockSchedule {
    let mut next = 0;
    let step_phases = program
        .plans()
        .iter()
        .map(|plan| {
            let width = if plan.has_cmp { 2 } else { 1 };
            let phases = (next..next + width).collect();
            next += width;
            phases
        })
        .collect();
    ClockSchedule { total_phases: next.max(2), step_phases }
}
