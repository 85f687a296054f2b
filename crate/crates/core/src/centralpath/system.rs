//! The square system A x = b, A^T y - s = kappa c, x s = tau and its Newton machinery.
//!
//! In `Lambda` mode the parameter is lambda, with kappa = 1 and tau = lambda.
//! In `Nu` mode the parameter is nu = 1/lambda, the unknowns are (x, nu y, nu s),
//! kappa = nu and tau = 1; this keeps everything bounded near the analytic center.

use nalgebra::{DMatrix, DVector, Dyn, LU};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Lambda,
    Nu,
}

/// Neumaier summation.
pub(crate) fn csum(it: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0f64;
    let mut comp = 0.0f64;
    for v in it {
        let t = s + v;
        if s.abs() >= v.abs() {
            comp += (s - t) + v;
        } else {
            comp += (v - t) + s;
        }
        s = t;
    }
    s + comp
}

pub(crate) struct System {
    pub n: usize,
    pub d: usize,
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub(crate) enum CorrectFail {
    Diverged,
    /// the damped step collapsed against the orthant boundary
    Boundary,
}

impl System {
    pub fn kappa_tau(mode: Mode, p: f64) -> (f64, f64) {
        match mode {
            Mode::Lambda => (1.0, p),
            Mode::Nu => (p, 1.0),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.d
    }

    pub fn residual(&self, z: &DVector<f64>, mode: Mode, p: f64) -> DVector<f64> {
        let (n, d) = (self.n, self.d);
        let (kappa, tau) = Self::kappa_tau(mode, p);
        let mut f = DVector::zeros(self.dim());
        for i in 0..d {
            f[i] = csum((0..n).map(|j| self.a[(i, j)] * z[j]).chain([-self.b[i]]));
        }
        for j in 0..n {
            f[d + j] = csum((0..d).map(|i| self.a[(i, j)] * z[n + i]).chain([-z[n + d + j], -kappa * self.c[j]]));
        }
        for i in 0..n {
            f[d + n + i] = z[i] * z[n + d + i] - tau;
        }
        f
    }

    /// Largest componentwise relative residual.
    pub fn rel_residual(&self, z: &DVector<f64>, mode: Mode, p: f64) -> f64 {
        let (n, d) = (self.n, self.d);
        let (kappa, tau) = Self::kappa_tau(mode, p);
        let f = self.residual(z, mode, p);
        let mut r = 0.0f64;
        for i in 0..d {
            let scale = 1.0 + self.b[i].abs() + (0..n).map(|j| (self.a[(i, j)] * z[j]).abs()).sum::<f64>();
            r = r.max(f[i].abs() / scale);
        }
        for j in 0..n {
            let scale = 1.0
                + (0..d).map(|i| (self.a[(i, j)] * z[n + i]).abs()).sum::<f64>()
                + z[n + d + j].abs()
                + (kappa * self.c[j]).abs();
            r = r.max(f[d + j].abs() / scale);
        }
        for i in 0..n {
            r = r.max(f[d + n + i].abs() / tau.abs());
        }
        r
    }

    pub fn jacobian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let (n, d) = (self.n, self.d);
        let mut j = DMatrix::zeros(self.dim(), self.dim());
        for r in 0..d {
            for c in 0..n {
                j[(r, c)] = self.a[(r, c)];
            }
        }
        for c in 0..n {
            for r in 0..d {
                j[(d + c, n + r)] = self.a[(r, c)];
            }
            j[(d + c, n + d + c)] = -1.0;
        }
        for i in 0..n {
            j[(d + n + i, i)] = z[n + d + i];
            j[(d + n + i, n + d + i)] = z[i];
        }
        j
    }

    /// LU solve with one round of iterative refinement.
    pub fn solve(&self, jac: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        Self::refined(&jac.clone().lu(), jac, rhs)
    }

    fn refined(lu: &LU<f64, Dyn, Dyn>, jac: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut sol = lu.solve(rhs)?;
        let r = rhs - jac * &sol;
        if let Some(corr) = lu.solve(&r) {
            sol += corr;
        }
        sol.iter().all(|v| v.is_finite()).then_some(sol)
    }

    fn du_rhs(&self, mode: Mode, p: f64) -> DVector<f64> {
        let (n, d) = (self.n, self.d);
        let mut rhs = DVector::zeros(self.dim());
        match mode {
            // dF/du = (0, 0, lambda)
            Mode::Lambda => (0..n).for_each(|i| rhs[d + n + i] = -p),
            // dF/du = (0, -nu c, 0)
            Mode::Nu => (0..n).for_each(|j| rhs[d + j] = p * self.c[j]),
        }
        rhs
    }

    /// dz/du along the path, where u = -log|lambda| (u = log|nu| in `Nu` mode).
    pub fn dz_du(&self, z: &DVector<f64>, mode: Mode, p: f64) -> Option<DVector<f64>> {
        self.solve(&self.jacobian(z), &self.du_rhs(mode, p))
    }

    /// dz/du plus a componentwise size of its error. Two error sources are
    /// sampled under fixed sign patterns, each a perturbation of relative size
    /// `backward` pushed through J^{-1}: rounding in the tangent solve, and the
    /// error of the point itself, which moves J and with it the tangent.
    pub fn dz_du_with_error(&self, z: &DVector<f64>, mode: Mode, p: f64, backward: f64) -> Option<(DVector<f64>, DVector<f64>)> {
        let (n, d) = (self.n, self.d);
        let jac = self.jacobian(z);
        let rhs = self.du_rhs(mode, p);
        let lu = jac.clone().lu();
        let dz = Self::refined(&lu, &jac, &rhs)?;
        let (kappa, tau) = Self::kappa_tau(mode, p);
        let mut f_size = jac.abs() * z.abs();
        for i in 0..d {
            f_size[i] += self.b[i].abs();
        }
        for j in 0..n {
            f_size[d + j] += (kappa * self.c[j]).abs();
            f_size[d + n + j] += tau.abs();
        }
        let t_size = jac.abs() * dz.abs() + rhs.abs();
        let mut err: DVector<f64> = DVector::zeros(self.dim());
        for pattern in [0x9e37_79b9_u64, 0x85eb_ca6b] {
            let signed = |size: &DVector<f64>| {
                DVector::from_iterator(
                    size.len(),
                    size.iter().enumerate().map(|(k, v)| {
                        let h = (k as u64 + 1).wrapping_mul(pattern) >> 13;
                        if h & 1 == 0 { backward * v } else { -backward * v }
                    }),
                )
            };
            let de = lu.solve(&signed(&t_size))?;
            let dzp = lu.solve(&signed(&f_size))?;
            // change of J dz when the point moves by dzp
            let mut moved = DVector::zeros(self.dim());
            for i in 0..n {
                moved[d + n + i] = dzp[n + d + i] * dz[i] + dzp[i] * dz[n + d + i];
            }
            let dt = lu.solve(&moved)?;
            for k in 0..self.dim() {
                err[k] = err[k].max(de[k].abs() + dt[k].abs());
            }
        }
        Some((dz, err))
    }

    /// Required signs: x_i has sign[i]; the third block has vsign[i].
    pub fn interior(&self, z: &DVector<f64>, sign: &[f64], vsign: &[f64]) -> bool {
        (0..self.n).all(|i| z[i] * sign[i] > 0.0 && z[self.n + self.d + i] * vsign[i] > 0.0)
    }

    fn max_step(&self, z: &DVector<f64>, dz: &DVector<f64>) -> f64 {
        let mut t = f64::INFINITY;
        for i in (0..self.n).chain(self.n + self.d..self.dim()) {
            // signs are preserved, so z[i] + t dz[i] hits zero only when dz opposes z
            if z[i] * dz[i] < 0.0 {
                t = t.min(-z[i] / dz[i]);
            }
        }
        t
    }

    /// Damped Newton at a fixed parameter value.
    pub fn correct(
        &self,
        z0: &DVector<f64>,
        mode: Mode,
        p: f64,
        max_iter: usize,
        accept: f64,
    ) -> Result<(DVector<f64>, f64, usize), CorrectFail> {
        let mut z = z0.clone();
        let mut res = self.rel_residual(&z, mode, p);
        let mut prev = f64::INFINITY;
        for it in 0..max_iter {
            if !res.is_finite() {
                return Err(CorrectFail::Diverged);
            }
            if res <= 1e-14 || (res <= accept && res > 0.5 * prev) {
                return Ok((z, res, it));
            }
            let f = self.residual(&z, mode, p);
            let dz = self.solve(&self.jacobian(&z), &(-f)).ok_or(CorrectFail::Diverged)?;
            let t = (0.99 * self.max_step(&z, &dz)).min(1.0);
            if t < 1e-8 {
                return Err(CorrectFail::Boundary);
            }
            z += dz * t;
            prev = res;
            res = self.rel_residual(&z, mode, p);
        }
        if res <= accept {
            Ok((z, res, max_iter))
        } else {
            Err(CorrectFail::Diverged)
        }
    }
}
