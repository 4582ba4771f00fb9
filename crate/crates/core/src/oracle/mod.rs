//! Exact reference interpreter: what the compiled network ought to compute.
//!
//! Steps run in program order, repeating forever. Within a step, commands
//! run in dataflow order (a module reading a species that another module
//! of the same step writes sees the new value), which is how the chemical
//! cascade settles. A `cmp` reads its operands after the step's other
//! modules and publishes its outcome at the start of the step's second
//! phase.

mod real;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use real::Real;

use crate::compiler::schedule_steps;
use crate::frontend::{ConcValue, FlatKind, ModuleKind, Outcome, ValidatedProgram};
use crate::number::Bindings;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum OracleError {
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("division by zero in {command} (step {step}, cycle {cycle})")]
    DivisionByZero { command: String, step: usize, cycle: usize },
    #[error("cmp[{x},{y}] is a tie at |x - y| = epsilon (cycle {cycle}); the guarded branch {command} is undefined")]
    Tie { x: String, y: String, cycle: usize, command: String },
    #[error("explicit reaction {0} has no imperative meaning")]
    ExplicitReaction(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
}

/// Outcome of the most recent comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum FlagState {
    /// No comparison has completed yet.
    Unset,
    Gt,
    Eq,
    Lt,
    /// `|x − y| = ε` exactly: the chemical flags settle at ⅓ each and no
    /// branch is well defined.
    TieUndefined,
}

impl FlagState {
    pub fn outcome(self) -> Option<Outcome> {
        match self {
            FlagState::Gt => Some(Outcome::Gt),
            FlagState::Eq => Some(Outcome::Eq),
            FlagState::Lt => Some(Outcome::Lt),
            FlagState::Unset | FlagState::TieUndefined => None,
        }
    }
}

impl fmt::Display for FlagState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagState::Unset => "UNSET",
            FlagState::Gt => "GT",
            FlagState::Eq => "EQ",
            FlagState::Lt => "LT",
            FlagState::TieUndefined => "TIE-UNDEFINED",
        })
    }
}

/// `GT` iff `x > y + ε`, `LT` iff `y > x + ε`, `EQ` iff `|x − y| < ε`.
pub fn compare(x: &Real, y: &Real, epsilon: &Real) -> FlagState {
    use std::cmp::Ordering::*;
    match x.sub(y).abs().cmp_total(epsilon) {
        Less => FlagState::Eq,
        Equal => FlagState::TieUndefined,
        Greater if x.cmp_total(y) == Greater => FlagState::Gt,
        Greater => FlagState::Lt,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimelineEntry {
    pub cycle: usize,
    pub phase: usize,
    /// Step executing in this phase; `None` for a padding phase.
    pub step: Option<usize>,
    pub env: BTreeMap<String, Real>,
    pub flag: FlagState,
    /// Set when a guarded command was skipped because the live
    /// comparison was a tie (lenient mode only).
    pub undefined: bool,
}

/// Environment after every phase occurrence, in chronological order.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleTimeline {
    pub species: Vec<String>,
    pub phases_per_cycle: usize,
    pub entries: Vec<TimelineEntry>,
    pub warnings: Vec<String>,
}

impl OracleTimeline {
    pub fn entry(&self, cycle: usize, phase: usize) -> Option<&TimelineEntry> {
        self.entries.get(cycle * self.phases_per_cycle + phase)
    }

    pub fn final_value(&self, species: &str) -> Option<&Real> {
        self.entries.last()?.env.get(species)
    }
}

/// Value of `species` after each phase occurrence: a step function of the
/// occurrence index, aligned with `OracleTimeline::entries`.
pub fn expected_series(timeline: &OracleTimeline, species: &str) -> Result<Vec<f64>, OracleError> {
    if !timeline.species.iter().any(|s| s == species) {
        return Err(OracleError::UnknownSpecies(species.to_string()));
    }
    Ok(timeline.entries.iter().map(|e| e.env[species].to_f64()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TiePolicy {
    /// A conditional reached with a tied comparison is an error.
    Error,
    /// Skip the guarded command, mark the entry undefined, add a warning.
    Annotate,
}

/// Runs `cycles` full clock cycles, failing on ties.
pub fn interpret(program: &ValidatedProgram, bindings: &Bindings, cycles: usize, epsilon: f64) -> Result<OracleTimeline, OracleError> {
    interpret_with(program, bindings, cycles, epsilon, TiePolicy::Error)
}

pub fn interpret_with(
    program: &ValidatedProgram,
    bindings: &Bindings,
    cycles: usize,
    epsilon: f64,
    ties: TiePolicy,
) -> Result<OracleTimeline, OracleError> {
    let schedule = schedule_steps(program);
    let species: Vec<String> = program.species().into_iter().collect();
    let mut env: BTreeMap<String, Real> = species.iter().map(|s| (s.clone(), Real::zero())).collect();
    for decl in &program.program().concs {
        let value = match &decl.value {
            ConcValue::Literal(n) => Real::from(n),
            ConcValue::Param(p) => Real::from(bindings.get(p).ok_or_else(|| OracleError::UnboundParameter(p.clone()))?),
        };
        env.insert(decl.species.clone(), value);
    }
    let eps = Real::from_f64(epsilon);

    let mut flag = FlagState::Unset;
    let mut entries = Vec::with_capacity(cycles * schedule.total_phases);
    let mut warnings = Vec::new();
    for cycle in 0..cycles {
        let mut phase = 0;
        for (step, plan) in program.plans().iter().enumerate() {
            let mut pending = None;
            let mut undefined = false;
            for cmd in &plan.commands {
                if let Some(guard) = cmd.guard {
                    match flag.outcome() {
                        Some(o) if guard.admits(o) => {}
                        Some(_) => continue,
                        None => {
                            let m = cmd.module().expect("guarded commands are modules or reactions");
                            let err = OracleError::Tie {
                                x: m.args.first().cloned().unwrap_or_default(),
                                y: m.args.get(1).cloned().unwrap_or_default(),
                                cycle,
                                command: cmd.describe(),
                            };
                            match ties {
                                TiePolicy::Error => return Err(err),
                                TiePolicy::Annotate => {
                                    warnings.push(format!("cycle {cycle}, step {}: skipped {} (comparison {flag})", step + 1, cmd.describe()));
                                    undefined = true;
                                    continue;
                                }
                            }
                        }
                    }
                }
                let m = match &cmd.kind {
                    FlatKind::Module(m) => m,
                    FlatKind::Rxn(r) => match ties {
                        TiePolicy::Error => return Err(OracleError::ExplicitReaction(r.to_string())),
                        TiePolicy::Annotate => {
                            warnings.push(format!("explicit reaction {r} ignored"));
                            continue;
                        }
                    },
                };
                let arg = |i: usize| &env[&m.args[i]];
                let result = match m.kind {
                    ModuleKind::Ld => arg(0).clone(),
                    ModuleKind::Add => arg(0).add(arg(1)),
                    ModuleKind::Sub => arg(0).truncated_sub(arg(1)),
                    ModuleKind::Mul => arg(0).mul(arg(1)),
                    ModuleKind::Div => arg(0).div(arg(1)).ok_or_else(|| OracleError::DivisionByZero {
                        command: cmd.describe(),
                        step: step + 1,
                        cycle,
                    })?,
                    ModuleKind::Sqrt => arg(0).sqrt(),
                    ModuleKind::Cmp => {
                        pending = Some(compare(arg(0), arg(1), &eps));
                        continue;
                    }
                };
                let out = m.output().expect("non-cmp modules have an output");
                env.insert(out.to_string(), result);
            }
            entries.push(TimelineEntry { cycle, phase, step: Some(step), env: env.clone(), flag, undefined });
            phase += 1;
            if let Some(outcome) = pending {
                flag = outcome;
                entries.push(TimelineEntry { cycle, phase, step: Some(step), env: env.clone(), flag, undefined: false });
                phase += 1;
            }
        }
        while phase < schedule.total_phases {
            entries.push(TimelineEntry { cycle, phase, step: None, env: env.clone(), flag, undefined: false });
            phase += 1;
        }
    }
    Ok(OracleTimeline { species, phases_per_cycle: schedule.total_phases, entries, warnings })
}
