use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{feasibility, LpInstance, Region};
use crate::catalog::format_signs;
use crate::error::{Error, Result};
use crate::exactlin::{to_f64, Rational};

const MAX_ITER: usize = 200;
const DECREMENT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CenterResult {
    pub x: Vec<f64>,
    pub kkt_residual: f64,
    pub iterations: usize,
}

/// Relative distance of (1/x_i) from the row space of A.
pub fn kkt_residual(a: &DMatrix<f64>, x: &[f64]) -> f64 {
    let u = DVector::from_iterator(x.len(), x.iter().map(|v| 1.0 / v));
    let aat = a * a.transpose();
    let Some(w) = aat.lu().solve(&(a * &u)) else {
        return f64::INFINITY;
    };
    let p = a.transpose() * w;
    (&u - p).norm() / u.norm()
}

/// Damped Newton for max sum log(sign_i x_i) over {Ax = b}, from a strictly interior start.
pub fn analytic_center(inst: &LpInstance, sign: &[i8], start: &[Rational]) -> Result<CenterResult> {
    let a = inst.a().to_f64();
    let b = DVector::from_iterator(inst.d(), inst.b().iter().map(to_f64));
    let n = inst.n();
    let mut x = DVector::from_iterator(n, start.iter().map(to_f64));
    let fail = || Error::NewtonDivergence { sign: format_signs(sign), lambda: f64::INFINITY };
    let mut history: Vec<f64> = Vec::new();
    for it in 0..MAX_ITER {
        let d = x.map(|v| v * v);
        let mut adat = DMatrix::zeros(inst.d(), inst.d());
        for i in 0..inst.d() {
            for j in 0..inst.d() {
                adat[(i, j)] = (0..n).map(|k| a[(i, k)] * d[k] * a[(j, k)]).sum();
            }
        }
        let r = &b - &a * &x;
        let rhs = &a * &x - &r;
        let nu = adat.lu().solve(&rhs).ok_or_else(fail)?;
        let at_nu = a.transpose() * nu;
        let dx = DVector::from_iterator(n, (0..n).map(|i| x[i] - d[i] * at_nu[i]));
        let dec = (0..n).map(|i| (dx[i] / x[i]).powi(2)).sum::<f64>().sqrt();
        if !dec.is_finite() {
            return Err(fail());
        }
        history.push(dec);
        let stalled = history.len() > 4 && dec < 1e-9 && dec > 0.5 * history[history.len() - 4];
        if dec <= DECREMENT_TOL || stalled {
            return Ok(CenterResult {
                kkt_residual: kkt_residual(&a, x.as_slice()),
                x: x.as_slice().to_vec(),
                iterations: it,
            });
        }
        let mut t = if dec > 0.25 { 1.0 / (1.0 + dec) } else { 1.0 };
        loop {
            let trial = &x + &dx * t;
            if (0..n).all(|i| trial[i] * sign[i] as f64 > 0.0) {
                x = trial;
                break;
            }
            t *= 0.5;
            if t < 1e-16 {
                return Err(fail());
            }
        }
    }
    Err(fail())
}

/// Fills `analytic_center` of every bounded region; returns the per-region results in order.
pub fn analytic_centers(inst: &LpInstance, regions: &mut [Region]) -> Vec<Result<CenterResult>> {
    let results: Vec<Result<CenterResult>> = regions
        .par_iter()
        .map(|r| {
            if !r.bounded {
                return Err(Error::InvalidInstance(format!("region {} is unbounded", r.label())));
            }
            let start = feasibility::interior_point(inst, &r.sign_vector)
                .ok_or_else(|| Error::EmptyRegion(r.label()))?;
            analytic_center(inst, &r.sign_vector, &start)
        })
        .collect();
    for (r, res) in regions.iter_mut().zip(&results) {
        r.analytic_center = res.as_ref().ok().map(|c| c.x.clone());
    }
    results
}
