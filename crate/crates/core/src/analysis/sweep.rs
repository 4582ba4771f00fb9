use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::compiler::{expand_module, ExpansionContext};
use crate::frontend::{ModuleCall, ModuleKind, Span};
use crate::ir::{Crn, SpeciesName};
use crate::simulator::{simulate_crn, SolverConfig};

/// Operand values `min, min + step, …` up to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { min: 0.5, max: 10.0, step: 0.5 }
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, AnalysisError> {
        let ok = self.min.is_finite() && self.max.is_finite() && self.step.is_finite();
        if !ok || self.min < 0.0 || self.max < self.min || self.step <= 0.0 {
            return Err(AnalysisError::BadGrid(format!(
                "need 0 <= min <= max and step > 0, got min={} max={} step={}",
                self.min, self.max, self.step
            )));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.min + i as f64 * self.step).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    /// How long the module runs, i.e. the length of one phase.
    pub duration: f64,
    pub solver: SolverConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { duration: 10.0, solver: SolverConfig::default() }
    }
}

/// `errors[i][j]` is the module's output error for operands
/// `(values[i], values[j])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorSurface {
    pub module: String,
    pub duration: f64,
    pub values: Vec<f64>,
    pub errors: Vec<Vec<f64>>,
}

impl ErrorSurface {
    /// Indices and value of the largest error (first in row-major order on ties).
    pub fn max_cell(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (i, row) in self.errors.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e > best.2 {
                    best = (i, j, e);
                }
            }
        }
        best
    }
}

fn exact(kind: ModuleKind, a: f64, b: f64) -> f64 {
    match kind {
        ModuleKind::Add => a + b,
        ModuleKind::Sub => (a - b).max(0.0),
        ModuleKind::Mul => a * b,
        ModuleKind::Div => a / b,
        _ => unreachable!("checked by the caller"),
    }
}

/// Runs the bare module network from `A = a, B = b, C = 0` for one phase
/// (the gate held at 1) and returns `|[C] − exact|`.
pub fn module_error(kind: ModuleKind, a: f64, b: f64, cfg: &SweepConfig) -> Result<f64, AnalysisError> {
    let call = ModuleCall { kind, args: vec!["A".into(), "B".into(), "C".into()], span: Span::new(0, 0) };
    let mut crn = Crn::new();
    crn.extend(expand_module(&call, &ExpansionContext { step: 0, index: 0 }));
    crn.set_initial(SpeciesName::user("A"), a).map_err(|e| AnalysisError::BadInput(e.to_string()))?;
    crn.set_initial(SpeciesName::user("B"), b).map_err(|e| AnalysisError::BadInput(e.to_string()))?;
    crn.set_initial(SpeciesName::user("C"), 0.0).map_err(|e| AnalysisError::BadInput(e.to_string()))?;
    let trace = simulate_crn(&crn, cfg.duration, &cfg.solver)?;
    let c = trace.final_value(&SpeciesName::user("C")).expect("C is in the network");
    Ok((c - exact(kind, a, b)).abs())
}

/// Error surface of `add`, `sub`, `mul` or `div` over a square grid,
/// evaluated in parallel and assembled in grid order.
pub fn sweep_module_error(kind: ModuleKind, grid: &GridSpec, cfg: &SweepConfig) -> Result<ErrorSurface, AnalysisError> {
    if !matches!(kind, ModuleKind::Add | ModuleKind::Sub | ModuleKind::Mul | ModuleKind::Div) {
        return Err(AnalysisError::BadInput(format!("sweeps support add, sub, mul and div, not {kind}")));
    }
    let values = grid.values()?;
    if kind == ModuleKind::Div && values[0] == 0.0 {
        return Err(AnalysisError::BadGrid("div needs a divisor grid that excludes 0".into()));
    }
    let n = values.len();
    let cells: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| module_error(kind, values[k / n], values[k % n], cfg))
        .collect::<Result<_, _>>()?;
    let errors = cells.chunks(n).map(<[f64]>::to_vec).collect();
    Ok(ErrorSurface { module: kind.name().to_string(), duration: cfg.duration, values, errors })
}
