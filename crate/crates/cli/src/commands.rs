use std::fmt::Write as _;
use std::path::Path;

use central_curve::arrangement::{analytic_centers, enumerate_regions_with, feasibility, RegionOptions};
use central_curve::catalog::{builtin, parse_signs, BUILTIN_NAMES};
use central_curve::centralpath::{CurveTrace, Tracer};
use central_curve::curvature::curvature_report;
use central_curve::matroid::invariant_report;

use crate::{load_instance, write_output, CliResult, Common, Direction, Failure, SideArg, EXIT_OK};

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn invariants(c: &Common) -> CliResult<i32> {
    let (_, inst) = load_instance(&c.instance)?;
    let report = invariant_report(&inst)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_output(c.out.as_deref(), &json(&report))?;
    Ok(EXIT_OK)
}

fn csv_header(n: usize, d: usize) -> String {
    let mut cols = vec!["lambda".to_string()];
    cols.extend((1..=n).map(|i| format!("x_{i}")));
    cols.extend((1..=d).map(|i| format!("y_{i}")));
    cols.extend((1..=n).map(|i| format!("s_{i}")));
    cols.push("residual".into());
    cols.push("turn_angle".into());
    cols.join(",")
}

pub fn trace_csv(trace: &CurveTrace) -> String {
    let p0 = trace.first();
    let mut out = csv_header(p0.n(), p0.y.len());
    out.push('\n');
    for p in &trace.points {
        write!(out, "{:.16e}", p.lambda).unwrap();
        for v in p.x.iter().chain(&p.y).chain(&p.s) {
            write!(out, ",{v:e}").unwrap();
        }
        writeln!(out, ",{:e},{:e}", p.residual, p.turn_angle).unwrap();
    }
    out
}

/// With `--side dual` the traced program is the dual one, so the x columns
/// hold the slacks s of the original instance.
pub fn trace(c: &Common, dir: Direction) -> CliResult<i32> {
    let (_, inst) = load_instance(&c.instance)?;
    let inst = c.sided(&inst)?;
    let region = c.region.as_deref().ok_or_else(|| Failure::parse("trace needs --region"))?;
    let sign = parse_signs(region, inst.n()).map_err(|e| Failure::parse(e.to_string()))?;
    if !feasibility::nonempty(&inst, &sign) {
        return Err(Failure::parse(format!("region {region} is empty")));
    }
    let tracer = Tracer::new(&inst, c.trace_options());
    let trace = tracer.trace_region(&sign, dir.lambda_sign())?;
    eprintln!(
        "{} points; start {}; end {}",
        trace.points.len(),
        serde_json::to_string(&trace.endpoint_start).unwrap(),
        serde_json::to_string(&trace.endpoint_end).unwrap()
    );
    write_output(c.out.as_deref(), &trace_csv(&trace))?;
    Ok(EXIT_OK)
}

pub fn curvature(c: &Common) -> CliResult<i32> {
    let (_, inst) = load_instance(&c.instance)?;
    c.check_limit(&inst)?;
    let mut report = curvature_report(&inst, &c.trace_options())?;
    match c.side {
        Some(SideArg::Primal) => report.dual = None,
        Some(SideArg::Dual) => report.primal = None,
        None => {}
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_output(c.out.as_deref(), &json(&report))?;
    Ok(EXIT_OK)
}

pub fn centers(c: &Common) -> CliResult<i32> {
    let (_, inst) = load_instance(&c.instance)?;
    let inst = c.sided(&inst)?;
    let mut regions = enumerate_regions_with(&inst, RegionOptions { limit_n: c.limit_n, full_scan: false })?;
    let results = analytic_centers(&inst, &mut regions);
    let n = inst.n();
    let mut cols = vec!["sign_vector".to_string(), "bounded".to_string()];
    cols.extend((1..=n).map(|i| format!("x_{i}")));
    cols.push("kkt_residual".into());
    let mut out = cols.join(",");
    out.push('\n');
    for (r, res) in regions.iter().zip(&results) {
        write!(out, "{},{}", r.label(), r.bounded).unwrap();
        match res {
            Ok(center) => {
                for v in &center.x {
                    write!(out, ",{v:e}").unwrap();
                }
                writeln!(out, ",{:e}", center.kkt_residual).unwrap();
            }
            Err(e) => {
                if r.bounded {
                    eprintln!("warning: region {}: {e}", r.label());
                }
                out.push_str(&",".repeat(n + 1));
                out.push('\n');
            }
        }
    }
    write_output(c.out.as_deref(), &out)?;
    Ok(EXIT_OK)
}

pub fn example(name: Option<&str>, out: Option<&Path>) -> CliResult<i32> {
    let Some(name) = name else {
        write_output(out, &(BUILTIN_NAMES.join("\n") + "\n"))?;
        return Ok(EXIT_OK);
    };
    let file = builtin(name).ok_or_else(|| {
        Failure::parse(format!("unknown example {name:?}; known examples: {}", BUILTIN_NAMES.join(", ")))
    })?;
    write_output(out, &file.to_json())?;
    Ok(EXIT_OK)
}
