//! Hot-path timings: eigenpair construction, the two loop integrators,
//! the summed lattice connection, and the phase-diagram sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use vortexel::rice_mele::RM_FD_STEP;
use vortexel::{
    berry_phase_line_integral, berry_phase_wilson, biorth_pair, el_curves, total_connection,
    ClosedPath, PauliParams, PauliSpace, RmParams,
};

fn bench_eigenpair(c: &mut Criterion) {
    let p = PauliParams::new(0.7, -0.4, 1.1);
    c.bench_function("biorth_pair", |b| {
        b.iter(|| biorth_pair(black_box(&p)).unwrap())
    });
}

fn bench_quadrature(c: &mut Criterion) {
    let path = ClosedPath::circle([0.0, 1.0, 1.0], [0.0, 0.0, 1.0], 0.5, 4096, 1).unwrap();
    c.bench_function("quadrature_circle_4096", |b| {
        b.iter(|| berry_phase_line_integral(&PauliSpace, black_box(&path)).unwrap())
    });
}

fn bench_wilson(c: &mut Criterion) {
    // Encloses one EL, so this times the double-traversal branch.
    let path = ClosedPath::circle([0.0, 1.0, 1.0], [0.0, 0.0, 1.0], 0.5, 4096, 1).unwrap();
    c.bench_function("wilson_circle_4096", |b| {
        b.iter(|| berry_phase_wilson(&PauliSpace, black_box(&path)).unwrap())
    });
}

fn bench_total_connection(c: &mut Criterion) {
    let p = RmParams::new(1.0, 0.5, 0.1, 0.2, 8).unwrap();
    c.bench_function("total_connection_n8", |b| {
        b.iter(|| total_connection(black_box(&p), RM_FD_STEP).unwrap())
    });
}

fn bench_el_curves(c: &mut Criterion) {
    let p = RmParams::new(1.0, 0.0, 0.0, 0.0, 24).unwrap();
    c.bench_function("el_curves_n24", |b| b.iter(|| el_curves(black_box(&p))));
}

criterion_group!(
    benches,
    bench_eigenpair,
    bench_quadrature,
    bench_wilson,
    bench_total_connection,
    bench_el_curves
);
criterion_main!(benches);
