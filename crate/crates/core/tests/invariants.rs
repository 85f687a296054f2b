use central_curve::catalog::builtin;
use central_curve::exactlin::{ratio, Rational};
use central_curve::generate::{random_generic, rng, random_instance};
use central_curve::matroid::{
    binomial, circuits, h_vector, invariant_report, matroid_from_matrix, mobius_number, Matroid,
};
use central_curve::LpInstance;

fn named(name: &str) -> LpInstance {
    builtin(name).unwrap().to_instance().unwrap()
}

#[test]
fn klee_minty_report() {
    let inst = named("klee-minty");
    let stacked = matroid_from_matrix(&inst.stacked_cost()).unwrap();
    assert_eq!(stacked.bases().len(), 14);
    assert!(!stacked.is_basis(0b111100));
    let r = invariant_report(&inst).unwrap();
    assert_eq!(r.h_vector, vec![1, 2, 3, 3]);
    assert_eq!(r.degree_primal, 9);
    assert_eq!(r.gauss_bound_primal, 34);
    assert_eq!(r.mobius_a, 5);
    assert_eq!(matroid_from_matrix(inst.a()).unwrap().bases().len(), 14);
    assert_eq!(r.avg_curvature_bound_primal.unwrap().0, ratio(34, 5));
    assert!(!r.generic_flags.primal_uniform);
}

#[test]
fn generic_three_by_six_report() {
    let r = invariant_report(&random_generic(3, 6, 17)).unwrap();
    assert_eq!(r.h_vector, vec![1, 2, 3, 4]);
    assert_eq!((r.degree_primal, r.genus_primal, r.gauss_bound_primal), (10, 11, 40));
    assert_eq!(r.gauss_bound_primal as i64, 2 * r.degree_primal as i64 + 2 * r.genus_primal - 2);
    assert_eq!(r.generic_bounds.degree_primal, 10);
    assert_eq!(r.generic_bounds.gauss_primal, 40);
    assert_eq!(r.gauss_bound_dual, Some(r.generic_bounds.gauss_dual));
    assert!(r.generic_flags.primal_uniform && r.generic_flags.dual_uniform);
}

#[test]
fn moment_curve_report() {
    let r = invariant_report(&named("moment-curve-2x5")).unwrap();
    assert_eq!(r.h_vector, vec![1, 2, 3]);
    assert_eq!(r.gauss_bound_primal, 16);
    assert_eq!(r.degree_primal, 6);
}

#[test]
fn snake_dual_side() {
    let r = invariant_report(&named("dtz-snake")).unwrap();
    assert_eq!(r.h_vector_dual, Some(vec![1, 1, 1, 1, 0]));
    assert_eq!(r.degree_dual, Some(4));
    assert_eq!(r.gauss_bound_dual, Some(12));
    assert_eq!(r.mobius_b, Some(10));
    assert_eq!(r.avg_curvature_bound_dual.unwrap().0, ratio(6, 5));
}

#[test]
fn hexagon_degree_five() {
    let r = invariant_report(&named("hexagon")).unwrap();
    assert_eq!(r.degree_primal, 5);
    assert_eq!(r.mobius_a, 7);
}

#[test]
fn degenerate_cost_warns() {
    let inst = named("hexagon");
    let c: Vec<Rational> = inst.a().row(0).to_vec();
    let r = invariant_report(&inst.with_cost(c).unwrap()).unwrap();
    assert!(r.degenerate_cost);
    assert_eq!(r.warnings.len(), 1);
    assert_eq!(r.h_vector.len(), 4);
}

#[test]
fn identity_instance_is_a_point() {
    let r = invariant_report(&named("identity2")).unwrap();
    assert!(r.degree_primal <= 1);
    assert!(r.degree_dual.is_none());
}

#[test]
fn report_json_shape() {
    let r = invariant_report(&named("klee-minty")).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["avg_curvature_bound_primal"]["coeff"], "34/5");
    assert_eq!(v["avg_curvature_bound_primal"]["unit"], "pi");
    assert_eq!(v["degree_primal"], 9);
}

#[test]
fn uniform_mobius_closed_form_on_random_matrices() {
    let mut r = rng(3);
    for n in 3..=8usize {
        for rank in 2..n {
            let m = loop {
                let inst = random_instance(rank, n, &mut r);
                let m = matroid_from_matrix(inst.a()).unwrap();
                if m.is_uniform() {
                    break m;
                }
            };
            assert_eq!(mobius_number(&m).unwrap(), binomial(n as u64 - 1, rank as u64 - 1));
            assert!(circuits(&m).iter().all(|c| c.len() == rank + 1));
        }
    }
}

#[test]
fn uniform_h_vector_formula() {
    for (d, n) in [(1usize, 4usize), (2, 5), (3, 6), (2, 7)] {
        let h = h_vector(&Matroid::uniform(d + 1, n)).unwrap();
        let expected: Vec<u64> = (0..=d as u64).map(|i| binomial(n as u64 - d as u64 + i - 2, i)).collect();
        assert_eq!(h, expected);
    }
}
