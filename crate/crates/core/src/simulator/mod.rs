//! Deterministic mass-action simulation of compiled programs and raw CRNs.

mod phases;
mod rk45;
mod trace;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use phases::{sample_at_phase_ends, PhaseSample};
pub use trace::{PhaseWindow, Trace};

use crate::compiler::CompiledProgram;
use crate::ir::{Crn, OdeSystem, SpeciesName};
use rk45::{Control, Integrator, Tolerances};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SimError {
    #[error("step size underflow at t={time} (h={step}); the system is too stiff for the explicit solver")]
    StepUnderflow { time: f64, step: f64 },
    #[error("species {species} diverged to {value} at t={time}; dominant flux from {provenance}")]
    Divergence { species: String, time: f64, value: f64, provenance: String },
    #[error("gave up after {steps} solver steps at t={time}")]
    TooManySteps { time: f64, steps: usize },
    #[error("oscillator completed only {completed} of {requested} cycles by t={time}")]
    OscillatorStalled { time: f64, completed: usize, requested: usize },
    #[error("cannot reconstruct clock phases: {0}")]
    PhaseReconstruction(String),
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step the integrator may take. `None` picks
    /// `phase_duration / 50` for the ideal clock and 0.5 for the oscillator.
    pub max_step: Option<f64>,
    /// Absolute tolerance of clock species. They sit near `clock_eps`
    /// between pulses and must be tracked relative to that scale, or the
    /// oscillator loses its timing.
    pub clock_abs_tol: f64,
    pub max_steps: usize,
    /// Any concentration above this aborts the run.
    pub overflow: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, max_step: None, clock_abs_tol: 1e-22, max_steps: 20_000_000, overflow: 1e12 }
    }
}

impl SolverConfig {
    fn check(&self) -> Result<(), SimError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.rel_tol) && positive(self.abs_tol) && positive(self.clock_abs_tol) && positive(self.overflow)) {
            return Err(SimError::BadConfig("tolerances and overflow bound must be positive".into()));
        }
        if self.max_step.is_some_and(|h| !positive(h)) {
            return Err(SimError::BadConfig("max_step must be positive".into()));
        }
        Ok(())
    }

    fn tolerances(&self, ode: &OdeSystem, default_max_step: f64) -> Tolerances {
        Tolerances {
            rel: self.rel_tol,
            abs: ode.species().iter().map(|s| if s.is_clock() { self.clock_abs_tol } else { self.abs_tol }).collect(),
            max_step: self.max_step.unwrap_or(default_max_step),
            max_steps: self.max_steps,
            overflow: self.overflow,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClockBackend {
    /// Clock species integrated as part of the network.
    Oscillator,
    /// Clock species replaced by square waves: the catalyst of phase `i`
    /// is 1 during `[(k·P + i)·T, (k·P + i + 1)·T)` and 0 otherwise, where
    /// `P` is the phase count and `T` the phase duration.
    Ideal { phase_duration: f64 },
}

impl ClockBackend {
    pub const DEFAULT_PHASE_DURATION: f64 = 50.0;

    pub fn ideal() -> Self {
        ClockBackend::Ideal { phase_duration: Self::DEFAULT_PHASE_DURATION }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunLength {
    /// Full clock cycles. With the oscillator, the run stops once the last
    /// phase's catalyst has left its dominance window this many times.
    Cycles(usize),
    Time(f64),
}

/// Simulates a compiled program under the chosen clock backend.
pub fn simulate(cp: &CompiledProgram, backend: ClockBackend, run: RunLength, cfg: &SolverConfig) -> Result<Trace, SimError> {
    cfg.check()?;
    match backend {
        ClockBackend::Ideal { phase_duration } => simulate_ideal(cp, phase_duration, run, cfg),
        ClockBackend::Oscillator => simulate_oscillator(cp, run, cfg),
    }
}

/// Integrates a network with no clock handling over `[0, duration]`.
pub fn simulate_crn(crn: &Crn, duration: f64, cfg: &SolverConfig) -> Result<Trace, SimError> {
    cfg.check()?;
    if !(duration.is_finite() && duration > 0.0) {
        return Err(SimError::BadConfig(format!("duration must be positive, got {duration}")));
    }
    let ode = OdeSystem::with_exogenous(crn, &BTreeSet::new());
    let mut y = ode.initial_state(crn);
    let mut trace = Trace::start(ode.species().to_vec(), &y);
    let mut integ = Integrator::new(&ode, cfg.tolerances(&ode, duration / 50.0));
    integ.integrate(0.0, duration, &mut y, &[], |t, y| {
        trace.push(t, y);
        Control::Continue
    })?;
    trace.finish(&integ.stats);
    Ok(trace)
}

fn simulate_ideal(cp: &CompiledProgram, phase_duration: f64, run: RunLength, cfg: &SolverConfig) -> Result<Trace, SimError> {
    if !(phase_duration.is_finite() && phase_duration > 0.0) {
        return Err(SimError::BadConfig(format!("phase duration must be positive, got {phase_duration}")));
    }
    let phases = cp.schedule.total_phases;
    let end = match run {
        RunLength::Cycles(n) => n as f64 * phases as f64 * phase_duration,
        RunLength::Time(t) if t.is_finite() && t > 0.0 => t,
        RunLength::Time(t) => return Err(SimError::BadConfig(format!("duration must be positive, got {t}"))),
    };
    let clocks: BTreeSet<SpeciesName> = cp.crn.species().into_iter().filter(SpeciesName::is_clock).collect();
    let ode = OdeSystem::with_exogenous(&cp.crn, &clocks);
    let catalyst_slots: Vec<Option<usize>> =
        cp.schedule.catalysts().iter().map(|c| ode.exogenous_index_of(c)).collect();

    let mut y = ode.initial_state(&cp.crn);
    let mut trace = Trace::start(ode.species().to_vec(), &y);
    let mut integ = Integrator::new(&ode, cfg.tolerances(&ode, phase_duration / 50.0));
    let mut gates = vec![0.0; ode.exogenous().len()];
    let mut window = 0usize;
    loop {
        let start = window as f64 * phase_duration;
        if start >= end * (1.0 - 1e-12) {
            break;
        }
        let stop = ((window + 1) as f64 * phase_duration).min(end);
        let phase = window % phases;
        gates.iter_mut().for_each(|g| *g = 0.0);
        if let Some(slot) = catalyst_slots[phase] {
            gates[slot] = 1.0;
        }
        integ.invalidate();
        integ.integrate(start, stop, &mut y, &gates, |t, y| {
            trace.push(t, y);
            Control::Continue
        })?;
        trace.phase_annotations.push(PhaseWindow { cycle: window / phases, phase, start, end: stop });
        window += 1;
    }
    trace.finish(&integ.stats);
    Ok(trace)
}

fn simulate_oscillator(cp: &CompiledProgram, run: RunLength, cfg: &SolverConfig) -> Result<Trace, SimError> {
    let ode = OdeSystem::with_exogenous(&cp.crn, &BTreeSet::new());
    let mut y = ode.initial_state(&cp.crn);
    let mut trace = Trace::start(ode.species().to_vec(), &y);
    let mut integ = Integrator::new(&ode, cfg.tolerances(&ode, 0.5));
    let threshold = 0.5 * cp.config.clock_total;
    match run {
        RunLength::Time(t) => {
            if !(t.is_finite() && t > 0.0) {
                return Err(SimError::BadConfig(format!("duration must be positive, got {t}")));
            }
            integ.integrate(0.0, t, &mut y, &[], |t, y| {
                trace.push(t, y);
                Control::Continue
            })?;
        }
        RunLength::Cycles(requested) => {
            let last = cp.schedule.catalyst(cp.schedule.total_phases - 1);
            let idx = ode.index_of(&last).expect("the last phase catalyst is part of the network");
            let horizon = 1000.0 * (requested.max(1) * cp.schedule.clock_species_count()) as f64;
            let mut above = y[idx] > threshold;
            let mut completed = 0;
            let reached = if requested == 0 {
                0.0
            } else {
                integ.integrate(0.0, horizon, &mut y, &[], |t, y| {
                    trace.push(t, y);
                    let now = y[idx] > threshold;
                    if above && !now {
                        completed += 1;
                    }
                    above = now;
                    if completed >= requested {
                        Control::Stop
                    } else {
                        Control::Continue
                    }
                })?
            };
            if completed < requested {
                return Err(SimError::OscillatorStalled { time: reached, completed, requested });
            }
        }
    }
    trace.finish(&integ.stats);
    Ok(trace)
}
