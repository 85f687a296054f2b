//! Total curvature of traced central paths and planar inflection counts.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{enumerate_regions, LpInstance};
use crate::catalog::format_signs;
use crate::centralpath::{CurveTrace, PathPoint, TraceOptions, Tracer};
use crate::error::{Error, Result};
use crate::matroid::{invariant_report, PiMultiple};

/// Cross products below this (for unit tangents) are treated as zero.
pub const INFLECTION_NOISE: f64 = 1e-14;
/// Multiple of the estimated tangent error below which a turn is not trusted.
pub const NOISE_SAFETY: f64 = 10.0;
/// Refinement stops once two levels agree to this many radians.
pub const REFINE_TOL: f64 = 1e-4;
pub const MIN_LEVELS: usize = 3;
pub const MAX_LEVELS: usize = 6;
/// Slack allowed on curvature-versus-bound comparisons.
pub const BOUND_SLACK: f64 = 1e-3;

/// Which coordinates of a trace the curve is measured in.
#[derive(Clone, Debug, PartialEq)]
pub enum Projection {
    X,
    Y,
    S,
    /// M times the x-tangent, e.g. y-coordinates for a trace of the dual program
    LinearX(DMatrix<f64>),
}

impl Projection {
    pub fn dim(&self, trace: &CurveTrace) -> usize {
        let p = trace.first();
        match self {
            Projection::X | Projection::S => p.x.len(),
            Projection::Y => p.y.len(),
            Projection::LinearX(m) => m.nrows(),
        }
    }
}

pub fn projected_tangents(trace: &CurveTrace, proj: &Projection) -> Vec<Vec<f64>> {
    trace.points.iter().map(|p| project(proj, &p.tangent, p)).collect()
}

fn project(proj: &Projection, v: &[f64], p: &PathPoint) -> Vec<f64> {
    let (n, d) = (p.n(), p.y.len());
    match proj {
        Projection::X => v[..n].to_vec(),
        Projection::Y => v[n..n + d].to_vec(),
        Projection::S => v[n + d..].to_vec(),
        Projection::LinearX(m) => (m * DVector::from_column_slice(&v[..n])).as_slice().to_vec(),
    }
}

/// Angular error of each projected tangent, from the tracer's componentwise estimate.
pub fn projected_tangent_errors(trace: &CurveTrace, proj: &Projection) -> Vec<f64> {
    trace
        .points
        .iter()
        .map(|p| {
            let t = project(proj, &p.tangent, p);
            let e = match proj {
                Projection::LinearX(m) => (m.abs() * DVector::from_column_slice(&p.tangent_error[..p.n()])).as_slice().to_vec(),
                _ => project(proj, &p.tangent_error, p),
            };
            let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
            norm(&e) / norm(&t)
        })
        .collect()
}

/// Sum of angles between consecutive tangent directions.
pub fn turning_of_tangents(tangents: &[Vec<f64>]) -> f64 {
    tangents
        .windows(2)
        .map(|w| crate::centralpath::angle_between(&w[0], &w[1]))
        .filter(|a| a.is_finite())
        .sum()
}

/// Polygonal length of the Gauss image at the trace's current sampling.
pub fn total_curvature(trace: &CurveTrace, proj: &Projection) -> f64 {
    turning_of_tangents(&projected_tangents(trace, proj))
}

fn normalized(v: &[f64]) -> [f64; 2] {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    [v[0] / n, v[1] / n]
}

/// Sign changes of the cross product of consecutive planar tangents.
pub fn inflections_of_tangents(tangents: &[Vec<f64>]) -> Result<usize> {
    inflections_above_noise(tangents, &vec![0.0; tangents.len()])
}

/// Sign changes of the turning direction, ignoring turns that the tangent
/// errors `noise` (radians, one per tangent) could produce on their own.
pub fn inflections_above_noise(tangents: &[Vec<f64>], noise: &[f64]) -> Result<usize> {
    if let Some(t) = tangents.iter().find(|t| t.len() != 2) {
        return Err(Error::AmbientNot2D(t.len()));
    }
    let mut last = 0.0f64;
    let mut count = 0;
    for (w, e) in tangents.windows(2).zip(noise.windows(2)) {
        let (a, b) = (normalized(&w[0]), normalized(&w[1]));
        let cross = a[0] * b[1] - a[1] * b[0];
        let floor = INFLECTION_NOISE.max(NOISE_SAFETY * (e[0] + e[1]));
        if !cross.is_finite() || cross.abs() < floor {
            continue;
        }
        if last != 0.0 && cross.signum() != last.signum() {
            count += 1;
        }
        last = cross;
    }
    Ok(count)
}

pub fn inflection_count(trace: &CurveTrace, proj: &Projection) -> Result<usize> {
    inflections_above_noise(&projected_tangents(trace, proj), &projected_tangent_errors(trace, proj))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureEstimate {
    /// value at the finest level
    pub value: f64,
    /// one value per refinement level, turn limit halved each time
    pub levels: Vec<f64>,
    pub converged: bool,
    pub points: usize,
    /// planar projections only; count at the finest level
    pub inflections: Option<usize>,
    pub inflections_stable: Option<bool>,
}

/// Re-traces with halved turn limits until consecutive totals agree to `REFINE_TOL`.
pub fn converged_curvature(tracer: &Tracer, sign: &[i8], lam_sign: i8, proj: &Projection) -> Result<(CurvatureEstimate, CurveTrace)> {
    let (mut est, trace) = converged_curvatures(tracer, sign, lam_sign, std::slice::from_ref(proj))?;
    Ok((est.remove(0), trace))
}

/// As `converged_curvature` for several projections of the same traces; refinement
/// continues until every projection has settled.
pub fn converged_curvatures(
    tracer: &Tracer,
    sign: &[i8],
    lam_sign: i8,
    projs: &[Projection],
) -> Result<(Vec<CurvatureEstimate>, CurveTrace)> {
    let base = tracer.options().turn_limit;
    let mut levels: Vec<Vec<f64>> = vec![Vec::new(); projs.len()];
    let mut infl: Vec<Vec<usize>> = vec![Vec::new(); projs.len()];
    let mut last_trace = None;
    let settled = |l: &Vec<f64>| l.len() >= 2 && (l[l.len() - 1] - l[l.len() - 2]).abs() < REFINE_TOL;
    for k in 0..MAX_LEVELS {
        let mut tr = tracer.trace_region_with(sign, lam_sign, base / f64::powi(2.0, k as i32))?;
        for (i, proj) in projs.iter().enumerate() {
            let tangents = projected_tangents(&tr, proj);
            levels[i].push(turning_of_tangents(&tangents));
            if tangents.first().is_some_and(|t| t.len() == 2) {
                infl[i].push(inflections_above_noise(&tangents, &projected_tangent_errors(&tr, proj))?);
            }
        }
        tr.total_turning = levels[0].last().copied();
        last_trace = Some(tr);
        if k + 1 >= MIN_LEVELS && levels.iter().all(settled) {
            break;
        }
    }
    let trace = last_trace.expect("at least one level");
    let est = levels
        .into_iter()
        .zip(infl)
        .map(|(l, inf)| CurvatureEstimate {
            value: *l.last().unwrap(),
            points: trace.points.len(),
            converged: settled(&l),
            inflections: inf.last().copied(),
            inflections_stable: (inf.len() >= 2).then(|| inf[inf.len() - 1] == inf[inf.len() - 2]),
            levels: l,
        })
        .collect();
    Ok((est, trace))
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionCurvature {
    pub sign_vector: String,
    /// the path of the region's own objective (max c^T x), center to vertex
    pub curvature: f64,
    /// the path toward the minimizing vertex
    pub curvature_opposite: f64,
    pub levels: Vec<f64>,
    pub converged: bool,
    pub bound_pi_multiple: u64,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planar: Option<PlanarRegion>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanarRegion {
    /// curvature of the y-space path
    pub curvature: f64,
    pub inflections: usize,
    pub inflections_opposite: usize,
    pub inflections_stable: bool,
    /// curvature <= pi (inflections + 1)
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideCurvature {
    pub side: &'static str,
    pub gauss_bound: u64,
    pub bounded_regions: usize,
    pub regions: Vec<RegionCurvature>,
    pub failed_regions: Vec<(String, String)>,
    pub sum: f64,
    pub average: f64,
    pub average_with_opposite: f64,
    pub average_bound: Option<PiMultiple>,
    pub average_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planar: Option<PlanarSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanarSummary {
    pub average: f64,
    /// the planar average is at most 2 pi
    pub average_ok: bool,
    pub inflections_total: usize,
    pub degree: u64,
    /// D (D - 2) with D the degree of the planar curve
    pub klein_bound: u64,
    pub klein_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub primal: Option<SideCurvature>,
    pub dual: Option<SideCurvature>,
    pub warnings: Vec<String>,
    pub all_ok: bool,
}

fn side_report(
    traced: &LpInstance,
    side: &'static str,
    gauss: u64,
    avg_bound: Option<PiMultiple>,
    planar_map: Option<(DMatrix<f64>, u64)>,
    opts: &TraceOptions,
) -> Result<SideCurvature> {
    let tracer = Tracer::new(traced, opts.clone());
    let regions: Vec<Vec<i8>> = enumerate_regions(traced)?.into_iter().filter(|r| r.bounded).map(|r| r.sign_vector).collect();
    let results: Vec<(Vec<i8>, Result<RegionCurvature>)> = regions
        .par_iter()
        .map(|sign| {
            let run = || -> Result<RegionCurvature> {
                let mut projs = vec![Projection::X];
                if let Some((m, _)) = &planar_map {
                    projs.push(Projection::LinearX(m.clone()));
                }
                let (mut own, _) = converged_curvatures(&tracer, sign, 1, &projs)?;
                let (mut opp, _) = converged_curvatures(&tracer, sign, -1, &projs)?;
                let planar = (projs.len() == 2).then(|| {
                    let (py, pyo) = (own.pop().unwrap(), opp.pop().unwrap());
                    let inflections = py.inflections.unwrap_or(0);
                    PlanarRegion {
                        curvature: py.value,
                        inflections,
                        inflections_opposite: pyo.inflections.unwrap_or(0),
                        inflections_stable: py.inflections_stable.unwrap_or(false),
                        ok: py.value <= PI * (inflections as f64 + 1.0) + BOUND_SLACK,
                    }
                });
                let (own, opp) = (own.remove(0), opp.remove(0));
                Ok(RegionCurvature {
                    sign_vector: format_signs(sign),
                    ok: own.value <= PI * gauss as f64 + BOUND_SLACK && opp.value <= PI * gauss as f64 + BOUND_SLACK,
                    curvature: own.value,
                    curvature_opposite: opp.value,
                    levels: own.levels,
                    converged: own.converged,
                    bound_pi_multiple: gauss,
                    planar,
                })
            };
            (sign.clone(), run())
        })
        .collect();
    let mut ok_regions = Vec::new();
    let mut failed = Vec::new();
    for (sign, r) in results {
        match r {
            Ok(v) => ok_regions.push(v),
            Err(e) => failed.push((format_signs(&sign), e.to_string())),
        }
    }
    let count = ok_regions.len().max(1) as f64;
    let sum: f64 = ok_regions.iter().map(|r| r.curvature).sum();
    let average = sum / count;
    let average_with_opposite = ok_regions.iter().map(|r| r.curvature + r.curvature_opposite).sum::<f64>() / count;
    let average_ok = avg_bound.as_ref().is_none_or(|b| average <= b.value() + BOUND_SLACK);
    let planar = planar_map.map(|(_, degree)| {
        let avg = ok_regions.iter().filter_map(|r| r.planar.as_ref().map(|p| p.curvature)).sum::<f64>() / count;
        let total: usize = ok_regions
            .iter()
            .filter_map(|r| r.planar.as_ref().map(|p| p.inflections + p.inflections_opposite))
            .sum();
        let klein = degree * degree.saturating_sub(2);
        PlanarSummary {
            average: avg,
            average_ok: avg <= 2.0 * PI + BOUND_SLACK,
            inflections_total: total,
            degree,
            klein_bound: klein,
            klein_ok: total as u64 <= klein,
        }
    });
    Ok(SideCurvature {
        side,
        gauss_bound: gauss,
        bounded_regions: regions.len(),
        regions: ok_regions,
        failed_regions: failed,
        sum,
        average,
        average_with_opposite,
        average_bound: avg_bound,
        average_ok,
        planar,
    })
}

impl SideCurvature {
    pub fn all_ok(&self) -> bool {
        self.failed_regions.is_empty()
            && self.average_ok
            && self.regions.iter().all(|r| r.ok && r.planar.as_ref().is_none_or(|p| p.ok))
            && self.planar.as_ref().is_none_or(|p| p.average_ok && p.klein_ok)
    }
}

/// Measures every bounded region on both sides and compares with the combinatorial bounds.
/// The dual side is traced as the program in the slack variables; when d = 2 it is also
/// measured in y-coordinates for the planar checks.
pub fn curvature_report(inst: &LpInstance, opts: &TraceOptions) -> Result<CurvatureReport> {
    let inv = invariant_report(inst)?;
    let mut warnings = inv.warnings.clone();
    let primal = if inst.cost_is_degenerate() {
        None
    } else {
        Some(side_report(inst, "primal", inv.gauss_bound_primal, inv.avg_curvature_bound_primal.clone(), None, opts)?)
    };
    let dual = match (inst.dual(), inv.gauss_bound_dual) {
        (Ok(dual_inst), Some(gauss)) if !dual_inst.cost_is_degenerate() => {
            let planar = (inst.d() == 2).then(|| (Tracer::new(inst, opts.clone()).y_map().clone(), inv.degree_dual.unwrap_or(0)));
            Some(side_report(&dual_inst, "dual", gauss, inv.avg_curvature_bound_dual.clone(), planar, opts)?)
        }
        _ => {
            warnings.push("dual side skipped: no dual curve for this instance".into());
            None
        }
    };
    let all_ok = primal.as_ref().is_none_or(|s| s.all_ok()) && dual.as_ref().is_none_or(|s| s.all_ok());
    Ok(CurvatureReport { primal, dual, warnings, all_ok })
}
