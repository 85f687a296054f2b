use std::hint::black_box;

use central_curve::arrangement::enumerate_regions;
use central_curve::centralpath::{trace_region, TraceOptions};
use central_curve::curvature::curvature_report;
use central_curve::generate::random_generic;
use central_curve::matroid::{invariant_report, mobius_number, Matroid};
use central_curve::polynomial::{curve_ideal_generators, planar_curve_poly, PlanarTerms, Side};
use central_curve_bench::named;
use criterion::{criterion_group, criterion_main, Criterion};

fn exact(c: &mut Criterion) {
    let km = named("klee-minty");
    c.bench_function("invariants/klee-minty", |b| b.iter(|| invariant_report(black_box(&km)).unwrap()));
    let u = Matroid::uniform(4, 9);
    c.bench_function("mobius/uniform-4-9", |b| b.iter(|| mobius_number(black_box(&u)).unwrap()));
    let hex = named("hexagon");
    c.bench_function("generators/hexagon", |b| b.iter(|| curve_ideal_generators(black_box(&hex), Side::Primal).unwrap()));
    let snake = named("dtz-snake");
    c.bench_function("planar-poly/snake", |b| {
        b.iter(|| planar_curve_poly(snake.a(), snake.b(), snake.c(), PlanarTerms::All).unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let inst = random_generic(3, 7, 1);
    c.bench_function("regions/random-3x7", |b| b.iter(|| enumerate_regions(black_box(&inst)).unwrap()));
    let hex = named("hexagon");
    c.bench_function("trace/hexagon", |b| {
        b.iter(|| trace_region(black_box(&hex), &[1; 6], 1, TraceOptions::default()).unwrap())
    });
}

fn curvature(c: &mut Criterion) {
    let mut g = c.benchmark_group("curvature");
    g.sample_size(10);
    let km = named("klee-minty");
    g.bench_function("report/klee-minty", |b| b.iter(|| curvature_report(black_box(&km), &TraceOptions::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, exact, geometry, curvature);
criterion_main!(benches);
