//! Error of simulated programs against the oracle, and error surfaces of
//! individual arithmetic modules.

mod report;
mod subtraction;
mod sweep;

use thiserror::Error;

pub use report::{evaluate_error, report_from_runs, ErrorConfig, ErrorCurve, ErrorReport, ErrorRow, SpeciesError};
pub use subtraction::{compare_subtraction_strategies, SubtractionComparison};
pub use sweep::{sweep_module_error, ErrorSurface, GridSpec, SweepConfig};

use crate::compiler::CompileError;
use crate::oracle::OracleError;
use crate::simulator::SimError;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("{0}")]
    BadInput(String),
}

/// Least-squares slope of `ys` against `xs`; 0 for fewer than two points.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return 0.0;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 0..n {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        assert!((fit_slope(&xs, &ys) - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&[1.0], &[5.0]), 0.0);
        assert_eq!(fit_slope(&[1.0, 1.0], &[5.0, 6.0]), 0.0);
    }
}
