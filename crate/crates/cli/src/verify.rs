//! The five-step cross-check of exact predictions against numerics.

use std::fmt::Write as _;

use central_curve::arrangement::{analytic_centers, enumerate_regions_with, vertices, RegionOptions};
use central_curve::centralpath::{residual_on_generators, Endpoint, Tracer};
use central_curve::curvature::curvature_report;
use central_curve::matroid::invariant_report;
use central_curve::polynomial::{curve_ideal_generators, Side};
use num_traits::Zero;

use crate::{load_instance, write_output, CliResult, Common, EXIT_OK, EXIT_VERIFY};

/// Normalized generator residual allowed at an analytic center.
pub const CENTER_TOL: f64 = 1e-9;
/// Normalized generator residual allowed at any traced point.
pub const TRACE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Check {
    name: &'static str,
    status: Status,
    detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        Check { name, status: if ok { Status::Pass } else { Status::Fail }, detail }
    }

    fn skip(name: &'static str, detail: &str) -> Self {
        Check { name, status: Status::Skip, detail: detail.to_string() }
    }
}

pub fn verify(c: &Common) -> CliResult<i32> {
    let (file, inst) = load_instance(&c.instance)?;
    c.check_limit(&inst)?;
    let report = invariant_report(&inst)?;
    let mut checks = Vec::new();

    let mut regions = enumerate_regions_with(&inst, RegionOptions { limit_n: c.limit_n, full_scan: false })?;
    let bounded = regions.iter().filter(|r| r.bounded).count() as u64;
    let simple = vertices(&inst).values().all(|x| x.iter().filter(|v| !v.is_zero()).count() == inst.d());
    checks.push(if simple {
        Check::new("mobius", bounded == report.mobius_a, format!("{bounded} bounded regions, |mu(A)| = {}", report.mobius_a))
    } else {
        Check::new(
            "mobius",
            bounded <= report.mobius_a,
            format!("b is not generic: {bounded} bounded regions <= |mu(A)| = {}", report.mobius_a),
        )
    });

    if inst.cost_is_degenerate() {
        let why = "cost lies in the row space of A; the central path is a point";
        for name in ["centers", "endpoints", "residuals", "curvature"] {
            checks.push(Check::skip(name, why));
        }
    } else {
        let gens = curve_ideal_generators(&inst, Side::Primal)?;
        let results = analytic_centers(&inst, &mut regions);
        let mut worst = 0.0f64;
        let mut failed = Vec::new();
        for (r, res) in regions.iter().zip(&results).filter(|(r, _)| r.bounded) {
            match res {
                Ok(center) => {
                    let e = residual_on_generators(&center.x, &gens);
                    worst = worst.max(e);
                    if e > CENTER_TOL {
                        failed.push(r.label());
                    }
                }
                Err(e) => failed.push(format!("{} ({e})", r.label())),
            }
        }
        checks.push(Check::new(
            "centers",
            failed.is_empty(),
            if failed.is_empty() {
                format!("{bounded} centers, worst generator residual {worst:.2e}")
            } else {
                format!("failing regions: {}", failed.join(" "))
            },
        ));

        let tracer = Tracer::new(&inst, c.trace_options());
        let outcomes = tracer.trace_all_regions()?;
        let mut bad_ends = Vec::new();
        let mut worst = 0.0f64;
        let mut bad_points = Vec::new();
        for o in &outcomes {
            let label = format!("{}{}", central_curve::catalog::format_signs(&o.region_sign), if o.lambda_sign > 0 { "/max" } else { "/min" });
            let trace = match &o.result {
                Ok(t) => t,
                Err(e) => {
                    bad_ends.push(format!("{label} ({e})"));
                    continue;
                }
            };
            let ends_ok = matches!(trace.endpoint_start, Endpoint::AnalyticCenter { .. })
                && matches!(trace.endpoint_end, Endpoint::Vertex { .. });
            if !ends_ok {
                bad_ends.push(label.clone());
            }
            let e = trace
                .points
                .iter()
                .map(|p| residual_on_generators(&p.x, &gens))
                .fold(0.0, f64::max);
            worst = worst.max(e);
            if e > TRACE_TOL {
                bad_points.push(label);
            }
        }
        checks.push(Check::new(
            "endpoints",
            bad_ends.is_empty(),
            if bad_ends.is_empty() {
                format!("{} traces from a center to a vertex", outcomes.len())
            } else {
                format!("failing traces: {}", bad_ends.join(" "))
            },
        ));
        checks.push(Check::new(
            "residuals",
            bad_points.is_empty(),
            if bad_points.is_empty() {
                format!("worst generator residual on traces {worst:.2e}")
            } else {
                format!("traces off the curve: {}", bad_points.join(" "))
            },
        ));

        let curv = curvature_report(&inst, &c.trace_options())?;
        let mut detail = Vec::new();
        for side in [&curv.primal, &curv.dual].into_iter().flatten() {
            let bad: Vec<&str> = side.regions.iter().filter(|r| !r.ok).map(|r| r.sign_vector.as_str()).collect();
            let mut s = format!("{}: average {:.4} vs bound {}", side.side, side.average, side.average_bound.as_ref().map_or("none".into(), |b| format!("{:.4}", b.value())));
            if !bad.is_empty() {
                write!(s, ", over the bound in {}", bad.join(" ")).unwrap();
            }
            if !side.failed_regions.is_empty() {
                write!(s, ", {} regions failed to trace", side.failed_regions.len()).unwrap();
            }
            detail.push(s);
        }
        checks.push(Check::new("curvature", curv.all_ok, detail.join("; ")));
    }

    let mut out = String::new();
    writeln!(out, "instance {} (n = {}, d = {})", file.name, inst.n(), inst.d()).unwrap();
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    for ch in &checks {
        let status = match ch.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        writeln!(out, "{:<10} {status}  {}", ch.name, ch.detail).unwrap();
    }
    let ok = checks.iter().all(|c| c.status != Status::Fail);
    writeln!(out, "{}", if ok { "all checks passed" } else { "verification failed" }).unwrap();
    write_output(c.out.as_deref(), &out)?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}
