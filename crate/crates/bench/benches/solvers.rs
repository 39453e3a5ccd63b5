use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use heliosense_core::dynamics::ground_block_propagator;
use heliosense_core::echo::{
    monte_carlo_echo, run_echo_analytic, EchoSchedule, NoiseModel, NoiseSource, SpinFrequencies,
};
use heliosense_core::hydrogen1d::{scan_point, ScanSettings};
use heliosense_core::pipeline::model_from_hydrogen;
use heliosense_core::quantum::{build_h_int, HilbertSpec};
use heliosense_core::trap::{
    fit_trap, solve_laplace, ElectrodeGeometry, GridSpec, RelaxationSettings,
};
use heliosense_core::{ParameterSet, PhysicalConstants};

fn hydrogen(c: &mut Criterion) {
    let k = PhysicalConstants::default();
    let s = ScanSettings::new(&k);
    c.bench_function("hydrogen_spectrum_default_field", |b| {
        b.iter(|| scan_point(&k, &s, black_box(5690.0)).unwrap())
    });
}

fn quantum(c: &mut Criterion) {
    let k = PhysicalConstants::default();
    let (_, p) = model_from_hydrogen(&k, &ParameterSet::default()).unwrap();
    let spec = HilbertSpec::new(8);
    c.bench_function("h_int_build_nfock8", |b| {
        b.iter(|| build_h_int(&spec, &p, black_box(1e-3)))
    });
    c.bench_function("ground_block_nfock8", |b| {
        b.iter(|| ground_block_propagator(&spec, &p, black_box(1e-3)).unwrap())
    });
}

fn echo(c: &mut Criterion) {
    let f = SpinFrequencies::new(3.5e9, 0.002, 5e4);
    let s = EchoSchedule::new(3.5e9, 10.0, 1.0).unwrap();
    let noise = NoiseModel {
        current: NoiseSource::quasi_static(0.5e-6),
        ripplon: NoiseSource::quasi_static(4e-6),
        seed: 7,
    };
    c.bench_function("echo_analytic", |b| {
        b.iter(|| run_echo_analytic(&s, &f, black_box(1.0)).unwrap())
    });
    c.bench_function("echo_monte_carlo_1000", |b| {
        b.iter(|| monte_carlo_echo(&s, &f, 1.0, &noise, black_box(1000)).unwrap())
    });
}

fn trap(c: &mut Criterion) {
    let geom = ElectrodeGeometry::standard(5e-6, 20e-6, 1e-6, 1.0);
    let grid = GridSpec {
        fine: 0.5e-6,
        growth: 1.8,
        max_spacing: 20e-6,
    };
    let mut g = c.benchmark_group("trap");
    g.sample_size(10);
    g.bench_function("coarse_cell_solve_and_fit", |b| {
        b.iter(|| {
            let map = solve_laplace(&geom, &grid, 3e-6, &RelaxationSettings::default()).unwrap();
            fit_trap(&map, 3e-6).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, hydrogen, quantum, echo, trap);
criterion_main!(benches);
