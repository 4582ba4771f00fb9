use serde::Serialize;

use super::{evaluate_error, fit_slope, AnalysisError, ErrorConfig, ErrorReport};
use crate::corpus;
use crate::frontend::{parse, validate};
use crate::number::{Bindings, Number};

const SINGLE_SUB: &str = "crn = { conc[a,a0], conc[b,b0], step[{ sub[a,b,c] }] }";

/// Subtracting with the `sub` module versus decrementing both operands
/// until the subtrahend reaches zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubtractionComparison {
    pub a0: f64,
    pub b0: f64,
    pub exact: f64,
    pub module_value: f64,
    /// `|module_value − exact|`.
    pub module_error: f64,
    pub alternative_value: f64,
    /// `|alternative_value − exact|`.
    pub alternative_error: f64,
    /// Error of `a` against the oracle at the end of each decrement.
    pub alternative_iteration_errors: Vec<f64>,
    pub alternative_slope: f64,
    pub module_report: ErrorReport,
    pub alternative_report: ErrorReport,
}

pub fn compare_subtraction_strategies(a0: f64, b0: f64, cfg: &ErrorConfig) -> Result<SubtractionComparison, AnalysisError> {
    if !(b0.is_finite() && a0.is_finite() && a0 >= b0 && b0 >= 0.0) {
        return Err(AnalysisError::BadInput(format!("need a0 >= b0 >= 0, got a0={a0} b0={b0}")));
    }
    let number = |x: f64| Number::from_f64(x).expect("finite");
    let bindings: Bindings = [("a0".to_string(), number(a0)), ("b0".to_string(), number(b0))].into_iter().collect();
    let exact = a0 - b0;

    let single = validate(&parse(SINGLE_SUB).expect("fixed program parses")).expect("fixed program validates");
    let module_report = evaluate_error(&single, &bindings, &["c".to_string()], &ErrorConfig { cycles: 1, ..*cfg })?;
    let first = &module_report.tracked[0].rows[0];
    let module_value = first.simulated;

    let program = corpus::find("sub_alternative").expect("bundled");
    let alt = validate(&parse(program.source).expect("bundled program parses")).expect("bundled program validates");
    let cycles = b0.ceil() as usize + 2;
    let alternative_report = evaluate_error(&alt, &bindings, &["a".to_string()], &ErrorConfig { cycles, ..*cfg })?;
    let rows = &alternative_report.tracked[0].rows;
    let last_phase = rows.iter().map(|r| r.phase).max().unwrap_or(0);
    let iteration: Vec<&super::ErrorRow> = rows.iter().filter(|r| r.phase == last_phase).collect();
    let alternative_iteration_errors: Vec<f64> = iteration.iter().map(|r| r.error).collect();
    let xs: Vec<f64> = iteration.iter().map(|r| r.cycle as f64).collect();
    let alternative_value = rows.last().map_or(a0, |r| r.simulated);

    Ok(SubtractionComparison {
        a0,
        b0,
        exact,
        module_value,
        module_error: (module_value - exact).abs(),
        alternative_value,
        alternative_error: (alternative_value - exact).abs(),
        alternative_slope: fit_slope(&xs, &alternative_iteration_errors),
        alternative_iteration_errors,
        module_report,
        alternative_report,
    })
}
