//! Lowering of a validated program to a single clocked CRN.
//!
//! Each step runs in its own oscillator phase (two for a step holding
//! `cmp`): every reaction of the step carries that phase's clock species
//! as a catalyst, and reactions inside a conditional additionally carry
//! the flag species of their branch.

mod cmp;
mod modules;
mod oscillator;
mod schedule;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

pub use cmp::{approximate_majority, expand_cmp, flag_catalysts, CmpExpansion, FlagSet};
pub use modules::{expand_module, ExpansionContext};
pub use oscillator::synthesize_oscillator;
pub use schedule::{catalyst_of_phase, schedule_steps, ClockSchedule};

use crate::frontend::{ConcValue, FlatKind, ModuleKind, ValidatedProgram};
use crate::ir::{Crn, IrError, Multiset, Namespace, Provenance, Reaction, SpeciesName};
use crate::number::Bindings;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompileConfig {
    /// Equality tolerance of `cmp`; the concentration of `CmpOffset`.
    pub epsilon: f64,
    /// Initial concentration of every clock species except `X1`.
    pub clock_eps: f64,
    /// Initial concentration of `X1`, and so the conserved clock total.
    pub clock_total: f64,
}

impl Default for CompileConfig {
    fn default() -> Self {
        Self { epsilon: 0.5, clock_eps: 1e-10, clock_total: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CompileError {
    #[error("parameter `{0}` is not bound (pass it with -p {0}=<value>)")]
    UnboundParameter(String),
    #[error("parameter `{name}` must be a nonnegative number, got {value}")]
    BadParameter { name: String, value: String },
    #[error("oscillator size {0} is not a positive multiple of 3")]
    OscillatorSize(usize),
    #[error("invalid compile configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Ir(#[from] IrError),
}

/// What a clock phase does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseRole {
    /// Runs the commands of a step (and a `cmp` normalization, if any).
    Step,
    /// Runs the approximate-majority half of a `cmp`.
    CmpMajority,
    /// Idle phase added so that a one-step program still oscillates.
    Padding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseInfo {
    pub phase: usize,
    pub catalyst: SpeciesName,
    pub step: Option<usize>,
    pub role: PhaseRole,
    pub commands: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeBreakdown {
    pub species: usize,
    pub reactions: usize,
    pub species_by_namespace: BTreeMap<&'static str, usize>,
    pub program_reactions: usize,
    pub oscillator_reactions: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledProgram {
    pub crn: Crn,
    pub schedule: ClockSchedule,
    pub phases: Vec<PhaseInfo>,
    /// Empty for programs without `cmp`, one shared set otherwise.
    pub flag_sets: Vec<FlagSet>,
    pub param_bindings: BTreeMap<String, f64>,
    pub config: CompileConfig,
    pub source: ValidatedProgram,
}

impl CompiledProgram {
    pub fn species_count(&self) -> usize {
        self.crn.species().len()
    }

    pub fn reaction_count(&self) -> usize {
        self.crn.reactions().len()
    }

    /// Species counts per namespace plus reaction counts per origin, used to
    /// explain size differences against other compilers.
    pub fn size_breakdown(&self) -> SizeBreakdown {
        let species = self.crn.species();
        let species_by_namespace =
            Namespace::ALL.iter().map(|ns| (ns.label(), species.iter().filter(|s| s.namespace() == *ns).count())).collect();
        let oscillator = self.crn.reactions().iter().filter(|r| r.provenance().step.is_none()).count();
        SizeBreakdown {
            species: species.len(),
            reactions: self.reaction_count(),
            species_by_namespace,
            program_reactions: self.reaction_count() - oscillator,
            oscillator_reactions: oscillator,
        }
    }

    /// Reactions gated by the clock catalyst of `phase`.
    pub fn phase_reactions(&self, phase: usize) -> impl Iterator<Item = &Reaction> {
        self.crn.reactions().iter().filter(move |r| r.provenance().phase == Some(phase))
    }

    /// The network JSON extended with `schedule`, `flags`, `parameters`
    /// and `config` sections.
    pub fn to_json(&self) -> serde_json::Value {
        let mut value = serde_json::to_value(self.crn.to_json()).expect("crn serializes");
        let obj = value.as_object_mut().expect("crn json is an object");
        obj.insert(
            "schedule".into(),
            json!({
                "total_phases": self.schedule.total_phases,
                "clock_species": self.schedule.clock_species_count(),
                "phases": self.phases,
            }),
        );
        obj.insert("flags".into(), serde_json::to_value(&self.flag_sets).expect("flags serialize"));
        obj.insert("parameters".into(), serde_json::to_value(&self.param_bindings).expect("bindings serialize"));
        obj.insert("config".into(), serde_json::to_value(self.config).expect("config serializes"));
        value
    }
}

fn resolve_bindings(program: &ValidatedProgram, bindings: &Bindings) -> Result<BTreeMap<String, f64>, CompileError> {
    let mut out = BTreeMap::new();
    for name in program.parameters() {
        let value = bindings.get(&name).ok_or_else(|| CompileError::UnboundParameter(name.clone()))?;
        if value.is_negative() {
            return Err(CompileError::BadParameter { name, value: value.to_string() });
        }
        out.insert(name, value.to_f64());
    }
    Ok(out)
}

fn check_config(cfg: &CompileConfig) -> Result<(), CompileError> {
    let ok = |v: f64| v.is_finite() && v >= 0.0;
    if !ok(cfg.epsilon) || !ok(cfg.clock_eps) || !(cfg.clock_total.is_finite() && cfg.clock_total > 0.0) {
        return Err(CompileError::BadConfig(format!(
            "epsilon {} and clock_eps {} must be nonnegative, clock_total {} positive",
            cfg.epsilon, cfg.clock_eps, cfg.clock_total
        )));
    }
    Ok(())
}

/// Compiles a validated program with all of its parameters bound.
///
/// The resulting network is the union, without deduplication, of every
/// command's catalysed module reactions and the oscillator. Every user
/// species is given an explicit initial concentration (0 unless declared).
pub fn compile(program: &ValidatedProgram, bindings: &Bindings, cfg: &CompileConfig) -> Result<CompiledProgram, CompileError> {
    check_config(cfg)?;
    let params = resolve_bindings(program, bindings)?;
    let schedule = schedule_steps(program);
    let has_cmp = program.plans().iter().any(|p| p.has_cmp);
    let flags = FlagSet::default();

    let mut crn = Crn::new();
    for species in program.species() {
        crn.set_initial(SpeciesName::user(species), 0.0)?;
    }
    for decl in &program.program().concs {
        let value = match &decl.value {
            ConcValue::Literal(n) => n.to_f64(),
            ConcValue::Param(p) => params[p],
        };
        crn.set_initial(SpeciesName::user(&decl.species), value)?;
    }
    if has_cmp {
        for (s, v) in flags.initials(cfg.epsilon) {
            crn.set_initial(s, v)?;
        }
    }

    let mut phases: Vec<PhaseInfo> = (0..schedule.total_phases)
        .map(|phase| PhaseInfo {
            phase,
            catalyst: schedule.catalyst(phase),
            step: schedule.step_of_phase(phase),
            role: PhaseRole::Padding,
            commands: Vec::new(),
        })
        .collect();

    for (step, plan) in program.plans().iter().enumerate() {
        let step_phases = &schedule.step_phases[step];
        let first = step_phases[0];
        let clock = schedule.catalyst(first);
        phases[first].role = PhaseRole::Step;
        for command in &plan.commands {
            let description = command.describe();
            phases[first].commands.push(description.clone());
            let provenance = |phase| Provenance { step: Some(step), command: description.clone(), phase: Some(phase) };
            let guard: Vec<SpeciesName> = command.guard.map(|g| flag_catalysts(g, &flags)).unwrap_or_default();
            let base = match &command.kind {
                FlatKind::Module(m) if m.kind == ModuleKind::Cmp => {
                    let x = SpeciesName::user(&m.args[0]);
                    let y = SpeciesName::user(&m.args[1]);
                    let expansion = expand_cmp(&x, &y, &flags);
                    let second = step_phases[1];
                    let am_clock = schedule.catalyst(second);
                    phases[second].role = PhaseRole::CmpMajority;
                    phases[second].commands.push(description.clone());
                    for r in expansion.majority {
                        crn.push(r.catalyzed_by([&am_clock]).with_provenance(provenance(second)));
                    }
                    expansion.normalization
                }
                FlatKind::Module(m) => expand_module(m, &ExpansionContext { step, index: command.index }),
                FlatKind::Rxn(r) => {
                    let side = |names: &[String]| {
                        let mut m = Multiset::new();
                        for n in names {
                            m.add(SpeciesName::user(n), 1);
                        }
                        m
                    };
                    vec![Reaction::new(side(&r.reactants), side(&r.products), r.rate.to_f64())?]
                }
            };
            for r in base {
                crn.push(r.catalyzed_by(std::iter::once(&clock).chain(&guard)).with_provenance(provenance(first)));
            }
        }
    }

    let (osc, osc_initials) = synthesize_oscillator(schedule.clock_species_count(), cfg)?;
    crn.extend(osc);
    for (s, v) in osc_initials {
        crn.set_initial(s, v)?;
    }

    Ok(CompiledProgram {
        crn,
        schedule,
        phases,
        flag_sets: if has_cmp { vec![flags] } else { Vec::new() },
        param_bindings: params,
        config: *cfg,
        source: program.clone(),
    })
}
