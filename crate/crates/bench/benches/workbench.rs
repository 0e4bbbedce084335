//! Benchmarks for the hot paths: the set-cover table that everything
//! downstream reads, structure classification, ring generation, and the
//! geometric decomposition sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qsr_bench::{semiring_instance, venn_instance};
use qsr_core::geom::arc::wraparound_pair;
use qsr_core::geom::rect::square_overlap_pair;
use qsr_core::geom::{
    arc_difference, arc_intersect, rect_difference, rect_intersect, verify_arc_decompositions,
    verify_rect_decompositions,
};
use qsr_core::{generate_ring, is_quasi_semi_ring, outer_measure_table};
use std::hint::black_box;

fn bench_outer_measure_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("outer_measure_table");
    for n in [6usize, 8, 10] {
        let instance = venn_instance(n, 17);
        group.bench_with_input(BenchmarkId::from_parameter(n), &instance, |b, inst| {
            b.iter(|| outer_measure_table(black_box(inst)).unwrap());
        });
    }
    group.finish();
}

fn bench_classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_quasi_semi_ring");
    for n in [8usize, 12] {
        let instance = venn_instance(n, 29);
        group.bench_with_input(BenchmarkId::from_parameter(n), &instance, |b, inst| {
            b.iter(|| is_quasi_semi_ring(black_box(inst.class())));
        });
    }
    group.finish();
}

fn bench_ring_generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_ring");
    for (label, instance) in [
        ("venn8", venn_instance(8, 5)),
        ("semiring10", semiring_instance(10, 5)),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &instance, |b, inst| {
            b.iter(|| generate_ring(black_box(inst.class())));
        });
    }
    group.finish();
}

fn bench_geometry(c: &mut Criterion) {
    let (a1, a2) = wraparound_pair();
    c.bench_function("arc_pair_ops", |b| {
        b.iter(|| {
            let i = arc_intersect(black_box(&a1), black_box(&a2));
            let d = arc_difference(black_box(&a1), black_box(&a2));
            (i, d)
        });
    });

    let (r1, r2) = square_overlap_pair();
    c.bench_function("rect_pair_ops", |b| {
        b.iter(|| {
            let i = rect_intersect(black_box(&r1), black_box(&r2));
            let d = rect_difference(black_box(&r1), black_box(&r2));
            (i, d)
        });
    });

    c.bench_function("arc_sweep_100", |b| {
        b.iter(|| verify_arc_decompositions(100, 8, black_box(3)));
    });
    c.bench_function("rect_sweep_100", |b| {
        b.iter(|| verify_rect_decompositions(100, 8, black_box(3)));
    });
}

criterion_group!(
    benches,
    bench_outer_measure_table,
    bench_classification,
    bench_ring_generation,
    bench_geometry
);
criterion_main!(benches);
