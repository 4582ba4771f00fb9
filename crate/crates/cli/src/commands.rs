use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use crnpp_core::analysis::{evaluate_error, sweep_module_error, AnalysisError, ErrorConfig, GridSpec, SweepConfig};
use crnpp_core::corpus::PROGRAMS;
use crnpp_core::export::{error_report_csv, error_svg, format_g17, surface_csv, surface_svg, timeline_csv, trace_csv, trace_svg};
use crnpp_core::frontend::ModuleKind;
use crnpp_core::ir::Namespace;
use crnpp_core::oracle::{interpret_with, TiePolicy};
use crnpp_core::simulator::{simulate_crn, SimError};
use crnpp_core::{compile, simulate, ClockBackend, CompileConfig, Crn, RunLength, SolverConfig, SpeciesName, Trace};

use crate::input::{self, Source};
use crate::manifest::RunManifest;
use crate::{Clock, Command, CorpusAction, ProgramArgs, RunArgs, SolverArgs, SweepModule};

/// Raised when `check-error --max-error` is exceeded.
#[derive(Debug, thiserror::Error)]
#[error("tracked error {actual} exceeds the bound {bound}")]
pub struct ThresholdExceeded {
    pub actual: f64,
    pub bound: f64,
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    let numerical = e.chain().any(|c| {
        c.is::<SimError>() || c.is::<ThresholdExceeded>() || matches!(c.downcast_ref::<AnalysisError>(), Some(AnalysisError::Sim(_)))
    });
    if numerical {
        2
    } else {
        1
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Compile { program, stats } => cmd_compile(&program, stats),
        Command::Simulate { program, run, time, plot, every } => cmd_simulate(&program, &run, time, &plot, every),
        Command::Interpret { program, cycles } => cmd_interpret(&program, cycles),
        Command::CheckError { program, run, track, max_error } => cmd_check_error(&program, &run, &track, max_error),
        Command::Sweep { module, min, max, step, duration, solver, out } => {
            cmd_sweep(module, GridSpec { min, max, step }, duration, &solver, &out)
        }
        Command::Corpus { action } => cmd_corpus(action),
    }
}

fn solver_config(args: &SolverArgs) -> SolverConfig {
    SolverConfig { rel_tol: args.rel_tol, abs_tol: args.abs_tol, max_step: args.max_step, ..SolverConfig::default() }
}

fn backend(run: &RunArgs) -> ClockBackend {
    match run.clock {
        Clock::Ideal => ClockBackend::Ideal { phase_duration: run.phase_duration },
        Clock::Oscillator => ClockBackend::Oscillator,
    }
}

fn compile_config(args: &ProgramArgs) -> CompileConfig {
    CompileConfig { epsilon: args.epsilon, ..CompileConfig::default() }
}

/// Starts a manifest with the program, its bindings and compile settings.
fn program_manifest(command: &'static str, args: &ProgramArgs, src: &Source, b: &crnpp_core::Bindings) -> Result<RunManifest> {
    let mut m = RunManifest::new(command, &args.out)?;
    m.program = Some(src.origin.clone());
    m.parameters = b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    m.compile = Some(serde_json::to_value(compile_config(args))?);
    Ok(m)
}

fn cmd_compile(args: &ProgramArgs, stats: bool) -> Result<()> {
    let src = input::resolve(&args.input)?;
    let vp = input::load_program(&src)?;
    let b = input::bindings(&src, &args.params)?;
    let cp = compile(&vp, &b, &compile_config(args))?;
    let mut m = program_manifest("compile", args, &src, &b)?;
    let json = serde_json::to_string_pretty(&cp.to_json())? + "\n";
    let path = m.write(&format!("{}.crn.json", src.stem), &json)?;
    m.finish()?;
    if stats {
        let size = cp.size_breakdown();
        println!("species   {}", size.species);
        println!("reactions {}", size.reactions);
        for (ns, n) in &size.species_by_namespace {
            println!("  {ns:<6} species {n}");
        }
        println!("  program reactions {}, oscillator reactions {}", size.program_reactions, size.oscillator_reactions);
        if let Some((s, r)) = src.bundled.and_then(|p| p.reference_size) {
            println!("reference: {s} species, {r} reactions");
        }
    } else {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_simulate(args: &ProgramArgs, run: &RunArgs, time: f64, plot: &[String], every: usize) -> Result<()> {
    let cfg = solver_config(&run.solver);
    let (trace, stem, mut m) = if input::is_compiled_network(&args.input) {
        let text = std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input))?;
        let crn = Crn::from_json_str(&text)?;
        let trace = simulate_crn(&crn, time, &cfg)?;
        let mut m = RunManifest::new("simulate", &args.out)?;
        m.program = Some(std::fs::canonicalize(&args.input)?.display().to_string());
        m.set("time", time);
        let stem = args.input.rsplit('/').next().unwrap_or("network").split('.').next().unwrap_or("network").to_string();
        (trace, stem, m)
    } else {
        let src = input::resolve(&args.input)?;
        let vp = input::load_program(&src)?;
        let b = input::bindings(&src, &args.params)?;
        let cp = compile(&vp, &b, &compile_config(args))?;
        let backend = backend(run);
        let trace = simulate(&cp, backend, RunLength::Cycles(run.cycles), &cfg)?;
        let mut m = program_manifest("simulate", args, &src, &b)?;
        m.backend = Some(serde_json::to_value(backend)?);
        m.set("cycles", run.cycles);
        (trace, src.stem, m)
    };
    m.solver = Some(serde_json::to_value(cfg)?);
    m.set("every", every);
    m.write(&format!("{stem}.trace.csv"), &trace_csv(&trace.downsample(every)))?;
    let shown = plotted_species(&trace, plot)?;
    if !plot.is_empty() {
        m.set("plot", plot);
        m.write(&format!("{stem}.svg"), &trace_svg(&trace, &shown, &stem))?;
    }
    m.finish()?;
    for s in &shown {
        println!("{s} {}", format_g17(trace.final_value(s).unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// The requested species, or every user species when none are requested.
fn plotted_species(trace: &Trace, plot: &[String]) -> Result<Vec<SpeciesName>> {
    if plot.is_empty() {
        return Ok(trace.species.iter().filter(|s| s.namespace() == Namespace::User).cloned().collect());
    }
    plot.iter()
        .map(|name| {
            let s: SpeciesName = name.parse().map_err(|e| anyhow!("species `{name}`: {e}"))?;
            trace.index_of(&s).map(|_| s).ok_or_else(|| anyhow!("species `{name}` does not occur in the network"))
        })
        .collect()
}

fn cmd_interpret(args: &ProgramArgs, cycles: usize) -> Result<()> {
    let src = input::resolve(&args.input)?;
    let vp = input::load_program(&src)?;
    let b = input::bindings(&src, &args.params)?;
    let timeline = interpret_with(&vp, &b, cycles, args.epsilon, TiePolicy::Annotate)?;
    for w in &timeline.warnings {
        eprintln!("warning: {w}");
    }
    let mut m = program_manifest("interpret", args, &src, &b)?;
    m.set("cycles", cycles);
    m.write(&format!("{}.timeline.csv", src.stem), &timeline_csv(&timeline))?;
    m.finish()?;
    if let Some(last) = timeline.entries.last() {
        for (name, value) in &last.env {
            println!("{name} {value}");
        }
    }
    Ok(())
}

fn cmd_check_error(args: &ProgramArgs, run: &RunArgs, track: &[String], max_error: Option<f64>) -> Result<()> {
    let src = input::resolve(&args.input)?;
    let vp = input::load_program(&src)?;
    let b = input::bindings(&src, &args.params)?;
    let tracked: Vec<String> = if track.is_empty() {
        match src.bundled {
            Some(p) => p.tracked.iter().map(|s| s.to_string()).collect(),
            None => bail!("--track is required for programs outside the bundled corpus"),
        }
    } else {
        track.to_vec()
    };
    let cfg = ErrorConfig { compile: compile_config(args), backend: backend(run), cycles: run.cycles, solver: solver_config(&run.solver) };
    let report = evaluate_error(&vp, &b, &tracked, &cfg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut m = program_manifest("check-error", args, &src, &b)?;
    m.backend = Some(serde_json::to_value(cfg.backend)?);
    m.solver = Some(serde_json::to_value(cfg.solver)?);
    m.set("cycles", run.cycles);
    m.set("track", &tracked);
    m.set("max_error", max_error);
    m.write(&format!("{}.error.csv", src.stem), &error_report_csv(&report))?;
    m.write(&format!("{}.error.svg", src.stem), &error_svg(&report, &src.stem))?;
    m.finish()?;
    let mut out = String::new();
    for s in &report.tracked {
        let _ = writeln!(out, "{} max {} final {} growth {}", s.species, format_g17(s.max_error), format_g17(s.final_error), format_g17(s.growth_rate));
    }
    print!("{out}");
    match max_error {
        Some(bound) if report.max_error() > bound => Err(ThresholdExceeded { actual: report.max_error(), bound }.into()),
        _ => Ok(()),
    }
}

fn cmd_sweep(module: SweepModule, grid: GridSpec, duration: f64, solver: &SolverArgs, out: &std::path::Path) -> Result<()> {
    let kind = match module {
        SweepModule::Add => ModuleKind::Add,
        SweepModule::Sub => ModuleKind::Sub,
        SweepModule::Mul => ModuleKind::Mul,
        SweepModule::Div => ModuleKind::Div,
    };
    let cfg = SweepConfig { duration, solver: solver_config(solver) };
    let surface = sweep_module_error(kind, &grid, &cfg)?;
    let mut m = RunManifest::new("sweep", out)?;
    m.solver = Some(serde_json::to_value(cfg.solver)?);
    m.set("module", kind.name());
    m.set("grid", BTreeMap::from([("min", grid.min), ("max", grid.max), ("step", grid.step)]));
    m.set("duration", duration);
    m.write(&format!("{kind}.surface.csv"), &surface_csv(&surface))?;
    m.write(&format!("{kind}.surface.svg"), &surface_svg(&surface))?;
    m.finish()?;
    let (i, j, e) = surface.max_cell();
    println!("max error {} at a={} b={}", format_g17(e), surface.values[i], surface.values[j]);
    Ok(())
}

fn cmd_corpus(action: CorpusAction) -> Result<()> {
    match action {
        CorpusAction::List => {
            for p in PROGRAMS {
                let params: Vec<String> = p.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<16} params [{}] tracks [{}]", p.name, params.join(", "), p.tracked.join(", "));
            }
        }
        CorpusAction::Export { dir } => {
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for p in PROGRAMS {
                let path = dir.join(format!("{}.crnpp", p.name));
                std::fs::write(&path, p.source).with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}
