//! Criterion benchmarks for the three pipeline stages: operator assembly,
//! spectrum extraction, and the transmission solve with its flux check.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use npspec::{
    assemble_adj_double_layer, assemble_single_layer, flux_residual, np_spectrum,
    solve_transmission, symmetrized_spectrum, IncidentField,
};
use npspec_bench::{disk_mesh, ellipse_mesh, square_mesh};

fn bench_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    for n in [128usize, 256, 512] {
        let mesh = ellipse_mesh(n);
        group.bench_with_input(BenchmarkId::new("ellipse-adj-double-layer", n), &n, |b, _| {
            b.iter(|| assemble_adj_double_layer(black_box(&mesh)))
        });
    }
    let square = square_mesh(240);
    group.bench_function("square-adj-double-layer-240", |b| {
        b.iter(|| assemble_adj_double_layer(black_box(&square)))
    });
    group.bench_function("square-single-layer-240", |b| {
        b.iter(|| assemble_single_layer(black_box(&square)))
    });
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(20);
    for n in [128usize, 256] {
        let mesh = ellipse_mesh(n);
        let kp = assemble_adj_double_layer(&mesh);
        group.bench_with_input(BenchmarkId::new("ellipse-raw", n), &n, |b, _| {
            b.iter(|| np_spectrum(black_box(&kp)).expect("spectrum"))
        });
    }
    let mesh = ellipse_mesh(128);
    let kp = assemble_adj_double_layer(&mesh);
    let s = assemble_single_layer(&mesh);
    group.bench_function("ellipse-symmetrized-128", |b| {
        b.iter(|| symmetrized_spectrum(black_box(&s), black_box(&kp)).expect("spectrum"))
    });
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(20);
    let disk = disk_mesh(128);
    group.bench_function("disk-mu2-128", |b| {
        b.iter(|| solve_transmission(black_box(&disk), 2.0, IncidentField::Linear).expect("solve"))
    });
    let square = square_mesh(240);
    group.bench_function("square-mu-neg10-240", |b| {
        b.iter(|| {
            solve_transmission(black_box(&square), -10.0, IncidentField::Linear).expect("solve")
        })
    });
    let solution = solve_transmission(&disk, 2.0, IncidentField::Linear).expect("solve");
    group.bench_function("disk-flux-residual-128", |b| {
        b.iter(|| flux_residual(black_box(&solution)).expect("flux"))
    });
    group.finish();
}

criterion_group!(benches, bench_assembly, bench_spectrum, bench_solve);
criterion_main!(benches);
