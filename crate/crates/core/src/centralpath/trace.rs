use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::system::{CorrectFail, Mode, System};
use super::{CurveTrace, Endpoint, PathPoint};
use crate::arrangement::{analytic_center, enumerate_regions, feasibility, vertices, Basis, LpInstance};
use crate::catalog::format_signs;
use crate::error::{Error, Result};
use crate::exactlin::to_f64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceOptions {
    /// default 1e8 * scale, where scale = 1 + |c|_inf |g|_inf
    pub lambda_max: Option<f64>,
    /// default 1e-10 * scale
    pub lambda_min: Option<f64>,
    /// largest accepted angle between consecutive tangents, radians
    pub turn_limit: f64,
    /// relative distance for endpoint classification
    pub endpoint_tol: f64,
    pub residual_tol: f64,
    pub max_points: usize,
    /// also trace unbounded regions, best effort
    pub include_unbounded: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            lambda_max: None,
            lambda_min: None,
            turn_limit: 0.05,
            endpoint_tol: 1e-6,
            residual_tol: 1e-10,
            max_points: 200_000,
            include_unbounded: false,
        }
    }
}

const H_INIT: f64 = 0.1;
const H_MAX: f64 = 1.0;
const H_MIN: f64 = 1e-10;
const CORRECTOR_ITERS: usize = 15;
/// growth of |x| that counts as leaving toward infinity
const FAR: f64 = 1e6;

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|a| a / n).collect()
    }
}

/// Angle between two nonzero vectors, accurate for small angles.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let (ua, ub) = (unit(a), unit(b));
    let diff = ua.iter().zip(&ub).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let sum = ua.iter().zip(&ub).map(|(p, q)| (p + q) * (p + q)).sum::<f64>().sqrt();
    2.0 * diff.atan2(sum)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, a| m.max(a.abs()))
}

/// Shared, read-only data for tracing every region of one instance.
pub struct Tracer {
    inst: LpInstance,
    sys: System,
    opts: TraceOptions,
    scale: f64,
    y_map: DMatrix<f64>,
    kernel: DMatrix<f64>,
    vertices: Vec<(Basis, Vec<f64>)>,
    dual_vertices: Vec<(Basis, Vec<f64>)>,
}

struct Leg {
    points: Vec<PathPoint>,
    last: DVector<f64>,
    went_far: bool,
}

impl Tracer {
    pub fn new(inst: &LpInstance, opts: TraceOptions) -> Tracer {
        let floats = |m: &std::collections::BTreeMap<Basis, Vec<crate::Rational>>| {
            m.iter().map(|(k, v)| (k.clone(), v.iter().map(to_f64).collect())).collect()
        };
        let dual_vertices = match inst.dual() {
            Ok(dual) => floats(&vertices(&dual)),
            Err(_) => Vec::new(),
        };
        let cinf = inf_norm(&inst.c().iter().map(to_f64).collect::<Vec<_>>());
        let ginf = inf_norm(&inst.g().iter().map(to_f64).collect::<Vec<_>>());
        Tracer {
            sys: System {
                n: inst.n(),
                d: inst.d(),
                a: inst.a().to_f64(),
                b: inst.b().iter().map(to_f64).collect(),
                c: inst.c().iter().map(to_f64).collect(),
            },
            scale: 1.0 + cinf * ginf,
            y_map: inst.y_map().to_f64(),
            kernel: inst.kernel().to_f64(),
            vertices: floats(&vertices(inst)),
            dual_vertices,
            inst: inst.clone(),
            opts,
        }
    }

    pub fn instance(&self) -> &LpInstance {
        &self.inst
    }

    pub fn options(&self) -> &TraceOptions {
        &self.opts
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn lambda_max(&self) -> f64 {
        self.opts.lambda_max.unwrap_or(1e8 * self.scale)
    }

    pub fn lambda_min(&self) -> f64 {
        self.opts.lambda_min.unwrap_or(1e-10 * self.scale)
    }

    /// The matrix taking s + c to y.
    pub fn y_map(&self) -> &DMatrix<f64> {
        &self.y_map
    }

    fn vsign(sign: &[f64], mode: Mode, lam_sign: f64) -> Vec<f64> {
        match mode {
            Mode::Lambda => sign.iter().map(|s| s * lam_sign).collect(),
            Mode::Nu => sign.to_vec(),
        }
    }

    fn param(mode: Mode, u: f64, lam_sign: f64) -> f64 {
        match mode {
            Mode::Lambda => lam_sign * (-u).exp(),
            Mode::Nu => lam_sign * u.exp(),
        }
    }

    /// Physical (x, y, s) and the unit tangent d(x, y, s)/du.
    fn point(&self, z: &DVector<f64>, mode: Mode, p: f64, residual: f64) -> Option<PathPoint> {
        let (n, d) = (self.sys.n, self.sys.d);
        let (dz, mut err) = self.sys.dz_du_with_error(z, mode, p, residual.max(f64::EPSILON))?;
        let (lambda, y, s, tangent) = match mode {
            Mode::Lambda => (p, z.rows(n, d).iter().copied().collect(), z.rows(n + d, n).iter().copied().collect(), dz.as_slice().to_vec()),
            Mode::Nu => {
                let mut t = dz.as_slice().to_vec();
                for k in n..2 * n + d {
                    t[k] = (dz[k] - z[k]) / p;
                    err[k] /= p.abs();
                }
                (
                    1.0 / p,
                    z.rows(n, d).iter().map(|v| v / p).collect(),
                    z.rows(n + d, n).iter().map(|v| v / p).collect(),
                    t,
                )
            }
        };
        let norm = tangent.iter().map(|a| a * a).sum::<f64>().sqrt();
        Some(PathPoint {
            lambda,
            x: z.rows(0, n).iter().copied().collect(),
            y,
            s,
            tangent: unit(&tangent),
            tangent_error: err.iter().map(|e| e / norm).collect(),
            residual,
            turn_angle: 0.0,
        })
    }

    fn divergence(sign: &[i8], lambda: f64) -> Error {
        Error::NewtonDivergence { sign: format_signs(sign), lambda }
    }

    fn to_lambda_state(&self, z: &DVector<f64>, nu: f64) -> DVector<f64> {
        let n = self.sys.n;
        let mut w = z.clone();
        for k in n..w.len() {
            w[k] /= nu;
        }
        w
    }

    /// State (x, y, s) with s = lambda / x and y fitted to s + c.
    fn lambda_state(&self, x: &[f64], lambda: f64) -> DVector<f64> {
        let (n, d) = (self.sys.n, self.sys.d);
        let s: Vec<f64> = x.iter().map(|v| lambda / v).collect();
        let sc = DVector::from_iterator(n, s.iter().zip(&self.sys.c).map(|(a, b)| a + b));
        let y = &self.y_map * sc;
        let mut z = DVector::zeros(2 * n + d);
        for i in 0..n {
            z[i] = x[i];
            z[n + d + i] = s[i];
        }
        for i in 0..d {
            z[n + i] = y[i];
        }
        z
    }

    /// Damped Newton on c^T x / lambda + sum log|x_i| over {Ax = b} in kernel coordinates.
    fn barrier_point(&self, sign: &[i8], lambda: f64, x0: &[f64]) -> Result<Vec<f64>> {
        let n = self.sys.n;
        let k = self.kernel.nrows();
        let mut x = DVector::from_column_slice(x0);
        if k == 0 {
            return Ok(x0.to_vec());
        }
        let bound = 1e12 * (1.0 + inf_norm(x0));
        for _ in 0..2000 {
            let grad = DVector::from_iterator(n, (0..n).map(|i| self.sys.c[i] / lambda + 1.0 / x[i]));
            let g = &self.kernel * grad;
            let mut h = DMatrix::zeros(k, k);
            for p in 0..k {
                for q in 0..k {
                    h[(p, q)] = (0..n).map(|i| self.kernel[(p, i)] * self.kernel[(q, i)] / (x[i] * x[i])).sum();
                }
            }
            let dzk = h.lu().solve(&g).ok_or_else(|| Self::divergence(sign, lambda))?;
            let dec = g.dot(&dzk).max(0.0).sqrt();
            if dec < 1e-10 {
                return Ok(x.as_slice().to_vec());
            }
            let dx = self.kernel.transpose() * dzk;
            let mut t = if dec > 0.25 { 1.0 / (1.0 + dec) } else { 1.0 };
            loop {
                let trial = &x + &dx * t;
                if (0..n).all(|i| trial[i] * sign[i] as f64 > 0.0) {
                    x = trial;
                    break;
                }
                t *= 0.5;
                if t < 1e-16 {
                    return Err(Self::divergence(sign, lambda));
                }
            }
            if inf_norm(x.as_slice()) > bound {
                return Err(Self::divergence(sign, lambda));
            }
        }
        Err(Self::divergence(sign, lambda))
    }

    fn interior_start(&self, sign: &[i8]) -> Result<Vec<f64>> {
        feasibility::interior_point(&self.inst, sign)
            .map(|x| x.iter().map(to_f64).collect())
            .ok_or_else(|| Error::EmptyRegion(format_signs(sign)))
    }

    /// The path point at `lambda` in the region `sign`, warm-started from `start` when given.
    pub fn solve_at_lambda(&self, sign: &[i8], lambda: f64, start: Option<&PathPoint>) -> Result<PathPoint> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidInstance(format!("lambda must be finite and nonzero, got {lambda}")));
        }
        let fsign: Vec<f64> = sign.iter().map(|&s| s as f64).collect();
        let vsign = Self::vsign(&fsign, Mode::Lambda, lambda.signum());
        let z0 = match start {
            Some(pt) => {
                let mut z = DVector::zeros(self.sys.dim());
                let (n, d) = (self.sys.n, self.sys.d);
                for i in 0..n {
                    z[i] = pt.x[i];
                    z[n + d + i] = pt.s[i] * lambda / pt.lambda;
                }
                for i in 0..d {
                    z[n + i] = pt.y[i];
                }
                z
            }
            None => {
                let x0 = self.interior_start(sign)?;
                let x = self.barrier_point(sign, lambda, &x0)?;
                self.lambda_state(&x, lambda)
            }
        };
        if !self.sys.interior(&z0, &fsign, &vsign) {
            return Err(Error::LeftRegion { sign: format_signs(sign), lambda });
        }
        let (z, res, _) = self
            .sys
            .correct(&z0, Mode::Lambda, lambda, 60, self.opts.residual_tol)
            .map_err(|e| match e {
                CorrectFail::Boundary => Error::LeftRegion { sign: format_signs(sign), lambda },
                CorrectFail::Diverged => Self::divergence(sign, lambda),
            })?;
        self.point(&z, Mode::Lambda, lambda, res).ok_or_else(|| Self::divergence(sign, lambda))
    }

    /// Continues from state `z` at parameter u_from to u_to (either direction).
    #[allow(clippy::too_many_arguments)]
    fn follow(
        &self,
        sign: &[i8],
        lam_sign: f64,
        mode: Mode,
        z: DVector<f64>,
        u_from: f64,
        u_to: f64,
        turn_limit: f64,
        stop_far: bool,
    ) -> Result<Leg> {
        let fsign: Vec<f64> = sign.iter().map(|&s| s as f64).collect();
        let vsign = Self::vsign(&fsign, mode, lam_sign);
        let dir = if u_to >= u_from { 1.0 } else { -1.0 };
        let n = self.sys.n;
        let far = FAR * (1.0 + inf_norm(&z.as_slice()[..n]));
        let mut leg = Leg { points: Vec::new(), last: z, went_far: false };
        let mut u = u_from;
        let p0 = Self::param(mode, u, lam_sign);
        let mut prev = self
            .point(&leg.last, mode, p0, 0.0)
            .ok_or_else(|| Self::divergence(sign, lam_sign / p0.abs().max(f64::MIN_POSITIVE)))?;
        let mut h = H_INIT;
        let lambda_of = |p: f64| if mode == Mode::Nu { 1.0 / p } else { p };
        while (u_to - u) * dir > 1e-12 {
            if leg.points.len() >= self.opts.max_points {
                return Err(Error::LimitExceeded { n: leg.points.len(), limit: self.opts.max_points });
            }
            if h < H_MIN {
                return Err(Error::LeftRegion { sign: format_signs(sign), lambda: lambda_of(Self::param(mode, u, lam_sign)) });
            }
            let step = h.min((u_to - u).abs()) * dir;
            let p_here = Self::param(mode, u, lam_sign);
            let p_next = Self::param(mode, u + step, lam_sign);
            let Some(dz) = self.sys.dz_du(&leg.last, mode, p_here) else {
                return Err(Self::divergence(sign, lambda_of(p_here)));
            };
            let pred = &leg.last + dz * step;
            if !self.sys.interior(&pred, &fsign, &vsign) {
                h *= 0.5;
                continue;
            }
            let Ok((znew, res, iters)) = self.sys.correct(&pred, mode, p_next, CORRECTOR_ITERS, self.opts.residual_tol) else {
                h *= 0.5;
                continue;
            };
            let Some(pt) = self.point(&znew, mode, p_next, res) else {
                h *= 0.5;
                continue;
            };
            let turn = [
                angle_between(prev.tangent_x(), pt.tangent_x()),
                angle_between(prev.tangent_y(), pt.tangent_y()),
                angle_between(prev.tangent_s(), pt.tangent_s()),
            ]
            .into_iter()
            .filter(|a| a.is_finite())
            .fold(0.0, f64::max);
            if turn > turn_limit {
                h *= 0.5;
                continue;
            }
            u += step;
            leg.last = znew;
            prev = pt.clone();
            leg.points.push(pt);
            if iters <= 4 && turn < 0.5 * turn_limit {
                h = (h * 1.5).min(H_MAX);
            }
            if stop_far && inf_norm(&leg.last.as_slice()[..n]) > far {
                leg.went_far = true;
                break;
            }
        }
        Ok(leg)
    }

    fn nearest(&self, v: &[f64], list: &[(Basis, Vec<f64>)]) -> Endpoint {
        let mut best: Option<(&Basis, f64)> = None;
        for (basis, w) in list {
            let dist = v.iter().zip(w).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / (1.0 + inf_norm(w));
            if best.is_none_or(|(_, bd)| dist < bd) {
                best = Some((basis, dist));
            }
        }
        match best {
            Some((basis, distance)) if distance <= self.opts.endpoint_tol => Endpoint::Vertex { basis: basis.clone(), distance },
            Some((basis, distance)) => Endpoint::Unclassified { nearest: Some(basis.clone()), distance },
            None => Endpoint::Unclassified { nearest: None, distance: f64::INFINITY },
        }
    }

    /// Traces the path of region `sign` for max c^T x (`lam_sign` = 1) or min c^T x (-1).
    pub fn trace_region(&self, sign: &[i8], lam_sign: i8) -> Result<CurveTrace> {
        self.trace_region_with(sign, lam_sign, self.opts.turn_limit)
    }

    pub fn trace_region_with(&self, sign: &[i8], lam_sign: i8, turn_limit: f64) -> Result<CurveTrace> {
        if sign.len() != self.sys.n {
            return Err(Error::MismatchedShape { rows: sign.len(), cols: self.sys.n });
        }
        let ls = if lam_sign >= 0 { 1.0 } else { -1.0 };
        let (lmax, lmin) = (self.lambda_max(), self.lambda_min());
        let x0 = self.interior_start(sign)?;
        let bounded = feasibility::bounded(&self.inst, sign);
        let mut points = Vec::new();
        let endpoint_start;
        if bounded {
            let exact_start = feasibility::interior_point(&self.inst, sign).expect("nonempty");
            let center = analytic_center(&self.inst, sign, &exact_start)?.x;
            let switch = self.scale.min(lmax).max(lmin);
            let nu0 = ls / lmax;
            let (n, d) = (self.sys.n, self.sys.d);
            let mut z = DVector::zeros(self.sys.dim());
            let v: Vec<f64> = center.iter().map(|x| 1.0 / x).collect();
            let w = &self.y_map * DVector::from_iterator(n, (0..n).map(|j| v[j] + nu0 * self.sys.c[j]));
            for i in 0..n {
                z[i] = center[i];
                z[n + d + i] = v[i];
            }
            for i in 0..d {
                z[n + i] = w[i];
            }
            let (z, res, _) = self
                .sys
                .correct(&z, Mode::Nu, nu0, 60, self.opts.residual_tol)
                .map_err(|_| Self::divergence(sign, ls * lmax))?;
            let first = self.point(&z, Mode::Nu, nu0, res).ok_or_else(|| Self::divergence(sign, ls * lmax))?;
            let dist = first.x.iter().zip(&center).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / (1.0 + inf_norm(&center));
            endpoint_start = if dist <= self.opts.endpoint_tol {
                Endpoint::AnalyticCenter { region: format_signs(sign), distance: dist }
            } else {
                Endpoint::Unclassified { nearest: None, distance: dist }
            };
            points.push(first);
            if lmax > lmin {
                let mut zl = z;
                if lmax > switch {
                    let leg = self.follow(sign, ls, Mode::Nu, zl, -lmax.ln(), -switch.ln(), turn_limit, false)?;
                    points.extend(leg.points);
                    zl = leg.last;
                }
                let zl = self.to_lambda_state(&zl, ls / switch);
                let leg = self.follow(sign, ls, Mode::Lambda, zl, -switch.ln(), -lmin.ln(), turn_limit, false)?;
                points.extend(leg.points);
            }
        } else {
            let start = ls * self.scale.min(lmax).max(lmin);
            let x = self.barrier_point(sign, start, &x0)?;
            let z = self.lambda_state(&x, start);
            let (z, res, _) = self
                .sys
                .correct(&z, Mode::Lambda, start, 60, self.opts.residual_tol)
                .map_err(|_| Self::divergence(sign, start))?;
            let first = self.point(&z, Mode::Lambda, start, res).ok_or_else(|| Self::divergence(sign, start))?;
            let u0 = -start.abs().ln();
            let back = self.follow(sign, ls, Mode::Lambda, z.clone(), u0, -lmax.ln(), turn_limit, true)?;
            let fwd = self.follow(sign, ls, Mode::Lambda, z, u0, -lmin.ln(), turn_limit, false)?;
            endpoint_start = if back.went_far {
                Endpoint::Unbounded
            } else {
                Endpoint::Unclassified { nearest: None, distance: f64::INFINITY }
            };
            points.extend(back.points.into_iter().rev());
            points.push(first);
            points.extend(fwd.points);
        }
        for k in 0..points.len() {
            points[k].turn_angle = if k == 0 { 0.0 } else { angle_between(points[k - 1].tangent_x(), points[k].tangent_x()) };
        }
        let last = points.last().expect("at least one point");
        let endpoint_end = self.nearest(&last.x, &self.vertices);
        let dual_end = (!self.dual_vertices.is_empty()).then(|| self.nearest(&last.s, &self.dual_vertices));
        Ok(CurveTrace {
            region_sign: sign.to_vec(),
            lambda_sign: if lam_sign >= 0 { 1 } else { -1 },
            points,
            endpoint_start,
            endpoint_end,
            dual_end,
            total_turning: None,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceOutcome {
    #[serde(serialize_with = "crate::arrangement::serialize_signs")]
    pub region_sign: Vec<i8>,
    pub bounded: bool,
    pub lambda_sign: i8,
    #[serde(skip)]
    pub result: Result<CurveTrace>,
}

impl Tracer {
    /// Both paths (max and min of c^T x) of every bounded region, plus on request
    /// the paths of unbounded regions that have one.
    pub fn trace_all_regions(&self) -> Result<Vec<TraceOutcome>> {
        let regions = enumerate_regions(&self.inst)?;
        let jobs: Vec<(Vec<i8>, bool, i8)> = regions
            .iter()
            .filter(|r| r.bounded || self.opts.include_unbounded)
            .flat_map(|r| [(r.sign_vector.clone(), r.bounded, 1), (r.sign_vector.clone(), r.bounded, -1)])
            .filter(|(sign, bounded, ls)| *bounded || feasibility::path_exists(&self.inst, sign, *ls))
            .collect();
        Ok(jobs
            .into_par_iter()
            .map(|(sign, bounded, ls)| TraceOutcome {
                result: self.trace_region(&sign, ls),
                region_sign: sign,
                bounded,
                lambda_sign: ls,
            })
            .collect())
    }
}

pub fn solve_at_lambda(inst: &LpInstance, sign: &[i8], lambda: f64, start: Option<&PathPoint>) -> Result<PathPoint> {
    Tracer::new(inst, TraceOptions::default()).solve_at_lambda(sign, lambda, start)
}

pub fn trace_region(inst: &LpInstance, sign: &[i8], lam_sign: i8, opts: TraceOptions) -> Result<CurveTrace> {
    Tracer::new(inst, opts).trace_region(sign, lam_sign)
}

pub fn trace_all_regions(inst: &LpInstance, opts: TraceOptions) -> Result<Vec<TraceOutcome>> {
    Tracer::new(inst, opts).trace_all_regions()
}
