use std::collections::BTreeSet;

use super::*;
use crate::arrangement::{enumerate_regions, vertices, LpInstance};
use crate::catalog::{builtin, parse_signs};
use crate::exactlin::{rat, to_f64, RationalMatrix};
use crate::generate::{random_generic, rng};
use crate::polynomial::{curve_ideal_generators, Side};
use rand::Rng;

fn named(name: &str) -> LpInstance {
    builtin(name).unwrap().to_instance().unwrap()
}

fn data_norm(inst: &LpInstance) -> f64 {
    let a = inst.a().max_abs();
    let b = inst.b().iter().map(|v| to_f64(v).abs()).fold(0.0, f64::max);
    let c = inst.c().iter().map(|v| to_f64(v).abs()).fold(0.0, f64::max);
    to_f64(&a).max(b).max(c)
}

fn check_point_invariants(inst: &LpInstance, p: &PathPoint) {
    let tol = 1e-10 * (1.0 + data_norm(inst));
    assert!(p.residual <= tol, "residual {} at lambda {}", p.residual, p.lambda);
    let n = p.n() as f64;
    assert!((p.duality_gap() - n * p.lambda).abs() <= 1e-8 * n * p.lambda.abs());
    let prods: Vec<f64> = p.x.iter().zip(&p.s).map(|(a, b)| a * b).collect();
    let (lo, hi) = prods.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
    assert!(hi - lo <= 1e-8 * p.lambda.abs());
    let tn: f64 = p.tangent.iter().map(|v| v * v).sum();
    assert!((tn - 1.0).abs() < 1e-9);
}

#[test]
fn two_variable_path_matches_quadratic_root() {
    let inst = LpInstance::new(RationalMatrix::from_i64(&[&[1, 1]]), vec![rat(2)], vec![rat(0), rat(1)]).unwrap();
    let tracer = Tracer::new(&inst, TraceOptions::default());
    let mut prev: Option<PathPoint> = None;
    for lambda in [10.0, 3.0, 1.0, 0.25, 0.01] {
        let p = tracer.solve_at_lambda(&[1, 1], lambda, prev.as_ref()).unwrap();
        // s = (y, y - 1), x_i s_i = lambda, x1 + x2 = 2 gives 2y^2 - 2(1 + lambda)y + lambda = 0
        let y = ((1.0 + lambda) + (1.0 + lambda * lambda).sqrt()) / 2.0;
        assert!((p.y[0] - y).abs() < 1e-10 * y);
        assert!((p.x[0] - lambda / y).abs() < 1e-10);
        assert!((p.x[1] - lambda / (y - 1.0)).abs() < 1e-10);
        check_point_invariants(&inst, &p);
        prev = Some(p);
    }
    let cold = tracer.solve_at_lambda(&[1, 1], 0.5, None).unwrap();
    let warm = tracer.solve_at_lambda(&[1, 1], 0.5, prev.as_ref()).unwrap();
    assert!((cold.x[0] - warm.x[0]).abs() < 1e-12);
    assert!(tracer.solve_at_lambda(&[1, 1], 0.0, None).is_err());
}

#[test]
fn hexagon_point_satisfies_the_system() {
    let inst = named("hexagon");
    let p = solve_at_lambda(&inst, &[1; 6], 1.0, None).unwrap();
    check_point_invariants(&inst, &p);
    for i in 0..inst.d() {
        let v: f64 = (0..6).map(|j| to_f64(inst.a().get(i, j)) * p.x[j]).sum();
        assert!((v - to_f64(&inst.b()[i])).abs() < 1e-10);
    }
}

#[test]
fn hexagon_positive_trace_ends_at_the_optimal_transport_plan() {
    let inst = named("hexagon");
    let tr = trace_region(&inst, &[1; 6], 1, TraceOptions::default()).unwrap();
    assert!(matches!(tr.endpoint_start, Endpoint::AnalyticCenter { .. }));
    assert_eq!(tr.endpoint_end.vertex_basis(), Some(&[0, 1, 4, 5][..]));
    let x = &tr.last().x;
    for (a, b) in x.iter().zip([2.0, 1.0, 0.0, 0.0, 1.0, 2.0]) {
        assert!((a - b).abs() < 1e-6);
    }
    for p in &tr.points {
        check_point_invariants(&inst, p);
    }
    // the quintic generator vanishes along the trace, and the center is all ones
    let gens = curve_ideal_generators(&inst, Side::Primal).unwrap();
    assert!(tr.points.iter().all(|p| residual_on_generators(&p.x, &gens) <= 1e-9));
    assert!(tr.first().x.iter().all(|v| (v - 1.0).abs() < 1e-6));
}

#[test]
fn lambda_decreases_and_cost_is_monotone() {
    let inst = named("klee-minty");
    let c: Vec<f64> = inst.c().iter().map(to_f64).collect();
    let tracer = Tracer::new(&inst, TraceOptions::default());
    for ls in [1i8, -1] {
        let tr = tracer.trace_region(&[1; 6], ls).unwrap();
        assert!(tr.points.windows(2).all(|w| w[1].lambda.abs() < w[0].lambda.abs()));
        assert!(tr.points.iter().all(|p| p.lambda.signum() == ls as f64));
        let cost: Vec<f64> = tr.points.iter().map(|p| p.x.iter().zip(&c).map(|(a, b)| a * b).sum()).collect();
        // max path climbs toward the optimum, min path descends
        assert!(cost.windows(2).all(|w| (w[1] - w[0]) * ls as f64 > -1e-12));
        assert!(matches!(tr.endpoint_end, Endpoint::Vertex { .. }));
    }
}

#[test]
fn single_point_trace_when_lambda_range_is_empty() {
    let inst = named("hexagon");
    let opts = TraceOptions { lambda_max: Some(1.0), lambda_min: Some(1.0), ..Default::default() };
    let tr = trace_region(&inst, &[1; 6], 1, opts).unwrap();
    assert_eq!(tr.points.len(), 1);
    assert_eq!(tr.first().lambda, 1.0);
}

#[test]
fn snake_dual_path_runs_from_center_to_optimum() {
    let primal = named("dtz-snake");
    let dual = primal.dual().unwrap();
    let tr = trace_region(&dual, &[1; 6], 1, TraceOptions::default()).unwrap();
    let ymap = Tracer::new(&primal, TraceOptions::default()).y_map().clone();
    let c: Vec<f64> = primal.c().iter().map(to_f64).collect();
    let to_y = |s: &[f64]| {
        let v = nalgebra::DVector::from_iterator(6, s.iter().zip(&c).map(|(a, b)| a + b));
        let y = &ymap * v;
        (y[0], y[1])
    };
    let (y1, y2) = to_y(&tr.first().x);
    assert!((y1 + 0.027978).abs() < 1e-5 && (y2 - 0.778637).abs() < 1e-5, "center {y1} {y2}");
    let (e1, e2) = to_y(&tr.last().x);
    assert!((e1 + 599700011.0 / 1800660000.0).abs() < 1e-6);
    assert!((e2 + 519989.0 / 600220000.0).abs() < 1e-6);
    assert!(matches!(tr.endpoint_end, Endpoint::Vertex { .. }));
    for p in &tr.points {
        check_point_invariants(&dual, p);
    }
}

#[test]
fn simplex_has_two_traces_ending_at_unit_vertices() {
    let inst = named("simplex");
    let outs = trace_all_regions(&inst, TraceOptions::default()).unwrap();
    assert_eq!(outs.len(), 2);
    let ends: Vec<Vec<usize>> = outs
        .iter()
        .map(|o| o.result.as_ref().unwrap().endpoint_end.vertex_basis().unwrap().to_vec())
        .collect();
    assert_eq!(ends, vec![vec![2], vec![0]]);
}

fn endpoint_correspondence(inst: &LpInstance) {
    let outs = trace_all_regions(inst, TraceOptions::default()).unwrap();
    let bounded = enumerate_regions(inst).unwrap().iter().filter(|r| r.bounded).count();
    assert_eq!(outs.len(), 2 * bounded);
    for o in &outs {
        let tr = o.result.as_ref().unwrap();
        let basis = tr.endpoint_end.vertex_basis().expect("bounded traces end at vertices").to_vec();
        let dual = tr.dual_end.as_ref().unwrap().vertex_basis().expect("slack part ends at a dual vertex").to_vec();
        let complement: Vec<usize> = (0..inst.n()).filter(|i| !basis.contains(i)).collect();
        assert_eq!(dual, complement);
    }
}

/// Bounded-region traces reach only the vertices optimal for c or -c on some bounded
/// region; the arcs through unbounded regions reach the rest.
fn every_vertex_is_an_endpoint(inst: &LpInstance) {
    let opts = TraceOptions { include_unbounded: true, ..Default::default() };
    let outs = trace_all_regions(inst, opts).unwrap();
    let ends: BTreeSet<Vec<usize>> = outs
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .filter_map(|t| t.endpoint_end.vertex_basis().map(|b| b.to_vec()))
        .collect();
    let all: BTreeSet<Vec<usize>> = vertices(inst).into_keys().collect();
    assert_eq!(ends, all);
}

#[test]
fn endpoints_are_complementary_vertices() {
    endpoint_correspondence(&random_generic(2, 5, 1));
    endpoint_correspondence(&random_generic(3, 6, 2));
}

#[test]
fn arcs_through_all_regions_reach_every_vertex() {
    every_vertex_is_an_endpoint(&random_generic(2, 5, 1));
    every_vertex_is_an_endpoint(&random_generic(3, 6, 2));
    every_vertex_is_an_endpoint(&named("hexagon"));
}

#[test]
fn generic_three_by_six_endpoints_cover_all_vertices() {
    let inst = random_generic(3, 6, 7);
    let outs = trace_all_regions(&inst, TraceOptions::default()).unwrap();
    assert_eq!(outs.len(), 20);
    let ends: BTreeSet<Vec<usize>> = outs
        .iter()
        .map(|o| o.result.as_ref().unwrap().endpoint_end.vertex_basis().unwrap().to_vec())
        .collect();
    let verts = vertices(&inst);
    assert!(ends.iter().all(|b| verts.contains_key(b)));
    // every optimal vertex of a region for c is the minimizer of -c elsewhere or lies on the boundary
    assert!(ends.len() >= 10);
}

#[test]
fn generator_residual_separates_curve_from_random_points() {
    let inst = named("hexagon");
    let gens = curve_ideal_generators(&inst, Side::Primal).unwrap();
    let circuit_only = &gens[..1];
    for (_, v) in vertices(&inst) {
        let x: Vec<f64> = v.iter().map(to_f64).collect();
        assert!(residual_on_generators(&x, &gens) <= 1e-9);
    }
    let mut r = rng(3);
    let mut min = f64::INFINITY;
    for _ in 0..100 {
        let x: Vec<f64> = (0..6).map(|_| r.gen_range(-3.0..3.0)).collect();
        min = min.min(residual_on_generators(&x, circuit_only));
    }
    assert!(min > 1e-6, "smallest off-curve residual {min}");
}

#[test]
fn level_sets_meet_the_curve_degree_times() {
    for seed in [4u64, 5] {
        let inst = random_generic(2, 5, seed);
        let degree = crate::matroid::invariant_report(&inst).unwrap().degree_primal;
        let opts = TraceOptions { include_unbounded: true, ..Default::default() };
        let outs = trace_all_regions(&inst, opts).unwrap();
        let c: Vec<f64> = inst.c().iter().map(to_f64).collect();
        let costs: Vec<Vec<f64>> = outs
            .iter()
            .filter_map(|o| o.result.as_ref().ok())
            .map(|t| t.points.iter().map(|p| p.x.iter().zip(&c).map(|(a, b)| a * b).sum()).collect())
            .collect();
        let vals: Vec<f64> = vertices(&inst).values().map(|v| v.iter().zip(&c).map(|(a, b)| to_f64(a) * b).sum()).collect();
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
        let mut r = rng(seed);
        for _ in 0..5 {
            let c0 = r.gen_range(lo..hi);
            let crossings: usize = costs
                .iter()
                .map(|cs| cs.windows(2).filter(|w| (w[0] - c0) * (w[1] - c0) < 0.0).count())
                .sum();
            assert_eq!(crossings as u64, degree, "level {c0}");
        }
    }
}

#[test]
fn region_signs_parse_for_traces() {
    let inst = named("hexagon");
    let sign = parse_signs("++++++", 6).unwrap();
    let tr = trace_region(&inst, &sign, -1, TraceOptions::default()).unwrap();
    assert_eq!(tr.label(), "++++++");
    assert!(matches!(tr.endpoint_end, Endpoint::Vertex { .. }));
}
