//! Numerical continuation of the primal-dual central path inside a region of the arrangement.

mod system;
mod trace;

use serde::Serialize;

pub use trace::{angle_between, solve_at_lambda, trace_all_regions, trace_region, TraceOptions, TraceOutcome, Tracer};

use crate::polynomial::SparsePolynomial;

/// One accepted point of a trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathPoint {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    /// unit vector along d(x, y, s)/du with u = -log|lambda|, i.e. pointing toward the vertex end
    pub tangent: Vec<f64>,
    /// estimated componentwise error of `tangent`
    #[serde(skip)]
    pub tangent_error: Vec<f64>,
    pub residual: f64,
    /// angle between the x-tangents of this point and the previous one
    pub turn_angle: f64,
}

impl PathPoint {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn tangent_x(&self) -> &[f64] {
        &self.tangent[..self.n()]
    }

    pub fn tangent_y(&self) -> &[f64] {
        &self.tangent[self.n()..self.n() + self.y.len()]
    }

    pub fn tangent_s(&self) -> &[f64] {
        &self.tangent[self.n() + self.y.len()..]
    }

    /// x^T s, which equals n * lambda on the path.
    pub fn duality_gap(&self) -> f64 {
        system::csum(self.x.iter().zip(&self.s).map(|(a, b)| a * b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Endpoint {
    AnalyticCenter { region: String, distance: f64 },
    Vertex { basis: Vec<usize>, distance: f64 },
    /// the trace left every bounded box, as it must in an unbounded region
    Unbounded,
    Unclassified { nearest: Option<Vec<usize>>, distance: f64 },
}

impl Endpoint {
    pub fn vertex_basis(&self) -> Option<&[usize]> {
        match self {
            Endpoint::Vertex { basis, .. } => Some(basis),
            _ => None,
        }
    }
}

/// A traced piece of the central curve, ordered by decreasing |lambda|.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveTrace {
    #[serde(serialize_with = "crate::arrangement::serialize_signs")]
    pub region_sign: Vec<i8>,
    /// +1 follows the path of max c^T x over the region, -1 that of min c^T x
    pub lambda_sign: i8,
    pub points: Vec<PathPoint>,
    pub endpoint_start: Endpoint,
    pub endpoint_end: Endpoint,
    /// where the slack part s ends, among the vertices of the dual arrangement
    pub dual_end: Option<Endpoint>,
    pub total_turning: Option<f64>,
}

impl CurveTrace {
    pub fn first(&self) -> &PathPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &PathPoint {
        self.points.last().expect("trace has points")
    }

    pub fn label(&self) -> String {
        crate::catalog::format_signs(&self.region_sign)
    }
}

/// Largest normalized generator value |g(v)| / (|g|_1 max(1, |v|_inf)^deg g).
pub fn residual_on_generators(point: &[f64], generators: &[SparsePolynomial]) -> f64 {
    let scale = point.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    generators
        .iter()
        .map(|g| {
            let fp = g.to_float();
            if fp.norm1 == 0.0 {
                return 0.0;
            }
            fp.eval(point).abs() / (fp.norm1 * scale.powi(fp.degree as i32))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests;
