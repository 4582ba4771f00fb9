use std::collections::BTreeSet;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use crnpp_bench::{compiled, program};
use crnpp_core::analysis::{sweep_module_error, GridSpec, SweepConfig};
use crnpp_core::corpus;
use crnpp_core::frontend::ModuleKind;
use crnpp_core::{compile, simulate, ClockBackend, CompileConfig, OdeSystem, RunLength, SolverConfig};

fn compilation(c: &mut Criterion) {
    for name in ["gcd", "int_division", "pi"] {
        let vp = program(name);
        let b = corpus::find(name).unwrap().default_bindings();
        c.bench_function(&format!("compile/{name}"), |bench| bench.iter(|| compile(black_box(&vp), &b, &CompileConfig::default()).unwrap()));
    }
}

fn derivative(c: &mut Criterion) {
    let cp = compiled("int_division");
    let ode = OdeSystem::with_exogenous(&cp.crn, &BTreeSet::new());
    let state = ode.initial_state(&cp.crn);
    let mut out = vec![0.0; ode.dimension()];
    c.bench_function("derivative/int_division", |bench| bench.iter(|| ode.derivative(black_box(&state), &mut out)));
}

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    let cfg = SolverConfig::default();
    let gcd = compiled("gcd");
    group.bench_function("gcd/ideal/2-cycles", |bench| bench.iter(|| simulate(&gcd, ClockBackend::ideal(), RunLength::Cycles(2), &cfg).unwrap()));
    let euler = compiled("euler");
    group.bench_function("euler/oscillator/2-cycles", |bench| {
        bench.iter(|| simulate(&euler, ClockBackend::Oscillator, RunLength::Cycles(2), &cfg).unwrap())
    });
    group.bench_function("sweep/sub/4x4", |bench| {
        let grid = GridSpec { min: 1.0, max: 4.0, step: 1.0 };
        bench.iter(|| sweep_module_error(ModuleKind::Sub, &grid, &SweepConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, compilation, derivative, simulation);
criterion_main!(benches);
