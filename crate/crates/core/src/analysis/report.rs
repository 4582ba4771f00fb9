use std::collections::BTreeMap;

use serde::Serialize;

use super::{fit_slope, AnalysisError};
use crate::compiler::{compile, CompileConfig, CompiledProgram};
use crate::frontend::ValidatedProgram;
use crate::ir::SpeciesName;
use crate::number::Bindings;
use crate::oracle::{interpret_with, OracleTimeline, TiePolicy};
use crate::simulator::{sample_at_phase_ends, simulate, ClockBackend, PhaseSample, RunLength, SolverConfig, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorConfig {
    pub compile: CompileConfig,
    pub backend: ClockBackend,
    pub cycles: usize,
    pub solver: SolverConfig,
}

impl Default for ErrorConfig {
    fn default() -> Self {
        Self { compile: CompileConfig::default(), backend: ClockBackend::ideal(), cycles: 6, solver: SolverConfig::default() }
    }
}

/// One phase-end comparison. `error` is exactly `|simulated − expected|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRow {
    pub occurrence: usize,
    pub cycle: usize,
    pub phase: usize,
    pub time: f64,
    pub simulated: f64,
    pub expected: f64,
    pub error: f64,
    /// The oracle hit a tied comparison in this phase.
    pub undefined: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeciesError {
    pub species: String,
    pub rows: Vec<ErrorRow>,
    pub max_error: f64,
    pub final_error: f64,
    /// Slope of the per-cycle maximum error against the cycle index.
    pub growth_rate: f64,
}

/// `|sim(t) − expected(t)|` at every trace time, where the expectation is
/// the oracle value after the phase occurrence containing (or next ending
/// after) `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorCurve {
    pub times: Vec<f64>,
    pub errors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub tracked: Vec<SpeciesError>,
    pub curve: ErrorCurve,
    pub warnings: Vec<String>,
}

impl ErrorReport {
    pub fn species(&self, name: &str) -> Option<&SpeciesError> {
        self.tracked.iter().find(|s| s.species == name)
    }

    pub fn max_error(&self) -> f64 {
        self.tracked.iter().map(|s| s.max_error).fold(0.0, f64::max)
    }
}

/// Compiles, simulates and interprets `program`, then compares the tracked
/// species at every phase end.
pub fn evaluate_error(
    program: &ValidatedProgram,
    bindings: &Bindings,
    tracked: &[String],
    cfg: &ErrorConfig,
) -> Result<ErrorReport, AnalysisError> {
    let cp = compile(program, bindings, &cfg.compile)?;
    let trace = simulate(&cp, cfg.backend, RunLength::Cycles(cfg.cycles), &cfg.solver)?;
    let oracle = interpret_with(program, bindings, cfg.cycles, cfg.compile.epsilon, TiePolicy::Annotate)?;
    report_from_runs(&cp, &trace, &oracle, tracked)
}

/// Builds the report from runs that already exist.
pub fn report_from_runs(
    cp: &CompiledProgram,
    trace: &Trace,
    oracle: &OracleTimeline,
    tracked: &[String],
) -> Result<ErrorReport, AnalysisError> {
    let samples: Vec<PhaseSample> = sample_at_phase_ends(trace, &cp.schedule, 0.5 * cp.config.clock_total)?
        .into_iter()
        .filter(|s| oracle.entry(s.cycle, s.phase).is_some())
        .collect();
    let columns: Vec<usize> = tracked
        .iter()
        .map(|name| {
            if !oracle.species.contains(name) {
                return Err(AnalysisError::UnknownSpecies(name.clone()));
            }
            trace.index_of(&SpeciesName::user(name)).ok_or_else(|| AnalysisError::UnknownSpecies(name.clone()))
        })
        .collect::<Result<_, _>>()?;

    let mut out = Vec::new();
    for (name, &col) in tracked.iter().zip(&columns) {
        let rows: Vec<ErrorRow> = samples
            .iter()
            .enumerate()
            .map(|(occurrence, s)| {
                let entry = oracle.entry(s.cycle, s.phase).expect("filtered above");
                let simulated = s.state[col];
                let expected = entry.env[name].to_f64();
                ErrorRow {
                    occurrence,
                    cycle: s.cycle,
                    phase: s.phase,
                    time: s.end,
                    simulated,
                    expected,
                    error: (simulated - expected).abs(),
                    undefined: entry.undefined,
                }
            })
            .collect();
        let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
        let final_error = rows.last().map_or(0.0, |r| r.error);
        let mut per_cycle: BTreeMap<usize, f64> = BTreeMap::new();
        for r in &rows {
            let e = per_cycle.entry(r.cycle).or_insert(0.0);
            *e = e.max(r.error);
        }
        let xs: Vec<f64> = per_cycle.keys().map(|&c| c as f64).collect();
        let ys: Vec<f64> = per_cycle.values().copied().collect();
        out.push(SpeciesError { species: name.clone(), rows, max_error, final_error, growth_rate: fit_slope(&xs, &ys) });
    }

    let curve = continuous_curve(trace, &samples, oracle, tracked, &columns);
    Ok(ErrorReport { tracked: out, curve, warnings: oracle.warnings.clone() })
}

fn continuous_curve(
    trace: &Trace,
    samples: &[PhaseSample],
    oracle: &OracleTimeline,
    tracked: &[String],
    columns: &[usize],
) -> ErrorCurve {
    let mut errors = vec![Vec::with_capacity(trace.len()); tracked.len()];
    if samples.is_empty() {
        return ErrorCurve { times: Vec::new(), errors };
    }
    for (t, state) in trace.times.iter().zip(&trace.states) {
        let j = samples.partition_point(|s| s.end < *t).min(samples.len() - 1);
        let entry = oracle.entry(samples[j].cycle, samples[j].phase).expect("samples are aligned");
        for (k, (name, &col)) in tracked.iter().zip(columns).enumerate() {
            errors[k].push((state[col] - entry.env[name].to_f64()).abs());
        }
    }
    ErrorCurve { times: trace.times.clone(), errors }
}
