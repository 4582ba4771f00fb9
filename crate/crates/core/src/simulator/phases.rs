use serde::Serialize;

use super::{SimError, Trace};
use crate::compiler::ClockSchedule;

/// State at the end of one phase occurrence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseSample {
    pub cycle: usize,
    pub phase: usize,
    pub start: f64,
    pub end: f64,
    pub state: Vec<f64>,
}

/// One snapshot per completed phase occurrence, in chronological order.
///
/// Ideal-clock traces carry their windows. For oscillator traces a phase
/// occurrence is a maximal interval where the phase's catalyst exceeds
/// `threshold` (conventionally half the clock total); crossings are located
/// by linear interpolation and windows still open at the end of the trace
/// are dropped.
pub fn sample_at_phase_ends(trace: &Trace, schedule: &ClockSchedule, threshold: f64) -> Result<Vec<PhaseSample>, SimError> {
    if trace.is_empty() || trace.len() == 1 {
        return Ok(Vec::new());
    }
    if !trace.phase_annotations.is_empty() {
        return Ok(trace
            .phase_annotations
            .iter()
            .map(|w| PhaseSample {
                cycle: w.cycle,
                phase: w.phase,
                start: w.start,
                end: w.end,
                state: trace.state_at(w.end).expect("trace is non-empty"),
            })
            .collect());
    }

    let mut samples = Vec::new();
    for phase in 0..schedule.total_phases {
        let catalyst = schedule.catalyst(phase);
        let column = trace.column(&catalyst).ok_or_else(|| {
            SimError::PhaseReconstruction(format!("trace has neither phase annotations nor clock species {catalyst}"))
        })?;
        let mut opened: Option<f64> = if column[0] > threshold { Some(0.0) } else { None };
        let mut cycle = 0;
        for i in 1..column.len() {
            let (a, b) = (column[i - 1], column[i]);
            let crossing = || {
                let (t0, t1) = (trace.times[i - 1], trace.times[i]);
                t0 + (threshold - a) / (b - a) * (t1 - t0)
            };
            if a <= threshold && b > threshold {
                opened = Some(crossing());
            } else if a > threshold && b <= threshold {
                if let Some(start) = opened.take() {
                    let end = crossing();
                    samples.push(PhaseSample { cycle, phase, start, end, state: trace.state_at(end).expect("non-empty") });
                    cycle += 1;
                }
            }
        }
    }
    if samples.is_empty() {
        return Err(SimError::PhaseReconstruction(format!(
            "no clock catalyst rose above {threshold} and fell back during the run"
        )));
    }
    samples.sort_by(|a, b| a.end.total_cmp(&b.end));
    Ok(samples)
}
