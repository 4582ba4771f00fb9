mod common;

use common::*;
use crnpp_core::analysis::*;
use crnpp_core::frontend::ModuleKind;
use crnpp_core::simulator::SolverConfig;
use crnpp_core::ClockBackend;

fn tracked(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn gcd_error_stays_below_half() {
    let p = corpus("gcd");
    let vp = validated(p.source);
    for backend in [ClockBackend::ideal(), ClockBackend::Oscillator] {
        let cfg = ErrorConfig { backend, ..ErrorConfig::default() };
        let report = evaluate_error(&vp, &p.default_bindings(), &tracked(&["a"]), &cfg).unwrap();
        let a = report.species("a").unwrap();
        assert!(a.max_error < 0.5, "{backend:?}: {}", a.max_error);
        assert_eq!(a.rows.len(), 6 * 3);
    }
}

/// The continuous curve peaks inside the phases that subtract from `a`.
#[test]
fn gcd_error_spikes_during_subtraction() {
    let p = corpus("gcd");
    let vp = validated(p.source);
    let report = evaluate_error(&vp, &p.default_bindings(), &tracked(&["a"]), &ErrorConfig::default()).unwrap();
    let curve = &report.curve;
    let (k, _) = curve.errors[0].iter().enumerate().fold((0, 0.0), |best, (k, &e)| if e > best.1 { (k, e) } else { best });
    let t = curve.times[k];
    let phase = ((t / ClockBackend::DEFAULT_PHASE_DURATION).ceil() as usize + 2) % 3;
    assert_eq!(phase, 2, "largest error at t={t}");
}

#[test]
fn rows_are_self_consistent() {
    let p = corpus("factorial");
    let vp = validated(p.source);
    let report = evaluate_error(&vp, &p.default_bindings(), &tracked(&["f", "i"]), &ErrorConfig::default()).unwrap();
    for s in &report.tracked {
        for r in &s.rows {
            assert_eq!(r.error, (r.simulated - r.expected).abs());
        }
        assert_eq!(s.max_error, s.rows.iter().map(|r| r.error).fold(0.0, f64::max));
        assert_eq!(s.final_error, s.rows.last().unwrap().error);
    }
}

#[test]
fn conc_only_program_has_zero_error() {
    let vp = validated("crn = { conc[a,2], conc[b,5], step[{ ld[a,c] }] }");
    let report = evaluate_error(&vp, &Default::default(), &tracked(&["b"]), &ErrorConfig::default()).unwrap();
    let b = report.species("b").unwrap();
    assert!(b.rows.iter().all(|r| r.error == 0.0));
    assert!(report.curve.errors[0].iter().all(|e| *e == 0.0));
}

#[test]
fn unknown_species_is_rejected() {
    let p = corpus("gcd");
    let vp = validated(p.source);
    let err = evaluate_error(&vp, &p.default_bindings(), &tracked(&["zz"]), &ErrorConfig::default()).unwrap_err();
    assert_eq!(err, AnalysisError::UnknownSpecies("zz".into()));
}

#[test]
fn euler_converges() {
    let p = corpus("euler");
    let vp = validated(p.source);
    let report = evaluate_error(&vp, &Default::default(), &tracked(&["e"]), &ErrorConfig { cycles: 9, ..ErrorConfig::default() }).unwrap();
    let last = report.species("e").unwrap().rows.last().unwrap();
    assert!((last.simulated - std::f64::consts::E).abs() <= 1e-3, "{}", last.simulated);
}

/// Tightening the solver tenfold changes the measured error by less than
/// 10%: what is measured is the chemistry, not the integrator.
#[test]
fn error_is_insensitive_to_solver_tolerance() {
    let p = corpus("counter");
    let vp = validated(p.source);
    let base = ErrorConfig::default();
    let tight = ErrorConfig { solver: SolverConfig { rel_tol: 1e-9, abs_tol: 1e-11, ..SolverConfig::default() }, ..base };
    let a = evaluate_error(&vp, &p.default_bindings(), &tracked(&["c"]), &base).unwrap().max_error();
    let b = evaluate_error(&vp, &p.default_bindings(), &tracked(&["c"]), &tight).unwrap().max_error();
    assert!(b <= 1.1 * a, "{a} -> {b}");
}

fn surface(kind: ModuleKind) -> ErrorSurface {
    sweep_module_error(kind, &GridSpec::default(), &SweepConfig::default()).unwrap()
}

#[test]
fn sub_error_peaks_on_the_diagonal() {
    let s = surface(ModuleKind::Sub);
    let (i, j, _) = s.max_cell();
    assert!(i.abs_diff(j) <= 1, "max at ({}, {})", s.values[i], s.values[j]);
}

#[test]
fn add_and_mul_are_symmetric() {
    for kind in [ModuleKind::Add, ModuleKind::Mul] {
        let s = surface(kind);
        for i in 0..s.values.len() {
            for j in 0..s.values.len() {
                assert!((s.errors[i][j] - s.errors[j][i]).abs() <= 1e-6, "{kind} ({i},{j})");
            }
        }
    }
}

#[test]
fn add_and_mul_error_grows_with_the_result() {
    for kind in [ModuleKind::Add, ModuleKind::Mul] {
        let s = surface(kind);
        let diag: Vec<f64> = (0..s.values.len()).map(|i| s.errors[i][i]).collect();
        assert!(diag.windows(2).all(|w| w[1] >= w[0]), "{kind}: {diag:?}");
        for row in &s.errors {
            assert!(row.windows(2).all(|w| w[1] >= w[0]), "{kind} row not increasing");
        }
    }
}

#[test]
fn sweeps_are_deterministic() {
    let grid = GridSpec { min: 1.0, max: 4.0, step: 1.0 };
    let a = sweep_module_error(ModuleKind::Div, &grid, &SweepConfig::default()).unwrap();
    let b = sweep_module_error(ModuleKind::Div, &grid, &SweepConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_cell_grid() {
    let s = sweep_module_error(ModuleKind::Add, &GridSpec { min: 2.0, max: 2.0, step: 0.5 }, &SweepConfig::default()).unwrap();
    assert_eq!(s.values, vec![2.0]);
    assert_eq!(s.errors.len(), 1);
}

#[test]
fn decrementing_beats_sub_on_equal_operands() {
    let c = compare_subtraction_strategies(10.0, 10.0, &ErrorConfig::default()).unwrap();
    assert!(c.alternative_error < c.module_error, "{} vs {}", c.alternative_error, c.module_error);
}

#[test]
fn zero_subtrahend_is_exact_both_ways() {
    let c = compare_subtraction_strategies(5.0, 0.0, &ErrorConfig::default()).unwrap();
    assert!(c.module_error < 1e-6 && c.alternative_error < 1e-6, "{c:?}");
}

/// Each decrement of a large operand is essentially exact, so the error
/// does not accumulate over the iterations; only the last decrement, which
/// subtracts equal values, contributes.
#[test]
fn decrementing_error_does_not_accumulate() {
    let c = compare_subtraction_strategies(10.0, 10.0, &ErrorConfig::default()).unwrap();
    let errs = &c.alternative_iteration_errors;
    let before_last = &errs[..9];
    assert!(before_last.iter().all(|e| *e < 1e-6), "{errs:?}");
    assert!(c.alternative_slope.abs() < 0.1 * c.module_error, "{}", c.alternative_slope);
}

#[test]
fn pi_errs_more_than_euler() {
    let cfg = ErrorConfig { cycles: 8, ..ErrorConfig::default() };
    let e = evaluate_error(&validated(corpus("euler").source), &Default::default(), &tracked(&["e"]), &cfg).unwrap();
    let p = evaluate_error(&validated(corpus("pi").source), &Default::default(), &tracked(&["pi"]), &cfg).unwrap();
    assert!(p.max_error() > e.max_error());
}
