//! Exact nonemptiness and boundedness tests for sign-vector regions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LpInstance;
use crate::exactlin::simplex::{minimize, LpOutcome};
use crate::exactlin::{denominator_lcm, Rational, RationalMatrix};

/// Use Fourier-Motzkin up to this many free coordinates.
pub const FM_MAX_DIM: usize = 4;
const FM_MAX_ROWS: usize = 4000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ineq {
    coeffs: Vec<BigInt>,
    constant: BigInt,
    strict: bool,
}

impl Ineq {
    /// coeffs . z + constant (> or >=) 0, scaled to coprime integers.
    fn new(coeffs: &[Rational], constant: &Rational, strict: bool) -> Self {
        let l = denominator_lcm(coeffs.iter().chain(std::iter::once(constant)));
        let mut ineq = Ineq {
            coeffs: coeffs.iter().map(|c| (c * &l).to_integer()).collect(),
            constant: (constant * &l).to_integer(),
            strict,
        };
        ineq.normalize();
        ineq
    }

    fn normalize(&mut self) {
        let g = self.coeffs.iter().fold(self.constant.abs(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in self.coeffs.iter_mut() {
                *c /= &g;
            }
            self.constant /= &g;
        }
    }
}

/// Decides whether the system has a solution; `None` if it grows past the row cap.
fn fourier_motzkin(mut rows: Vec<Ineq>, dim: usize) -> Option<bool> {
    for k in 0..dim {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next: HashMap<(Vec<BigInt>, BigInt), bool> = HashMap::new();
        let keep = |next: &mut HashMap<(Vec<BigInt>, BigInt), bool>, q: Ineq| {
            let strict = q.strict;
            let e = next.entry((q.coeffs, q.constant)).or_insert(strict);
            *e |= strict;
        };
        for r in rows {
            if r.coeffs[k].is_positive() {
                pos.push(r);
            } else if r.coeffs[k].is_negative() {
                neg.push(r);
            } else {
                keep(&mut next, r);
            }
        }
        if pos.len() * neg.len() + next.len() > FM_MAX_ROWS {
            return None;
        }
        for p in &pos {
            for q in &neg {
                let fp = -&q.coeffs[k];
                let fq = p.coeffs[k].clone();
                let coeffs: Vec<BigInt> = p.coeffs.iter().zip(&q.coeffs).map(|(a, b)| a * &fp + b * &fq).collect();
                let mut r = Ineq {
                    coeffs,
                    constant: &p.constant * &fp + &q.constant * &fq,
                    strict: p.strict || q.strict,
                };
                r.normalize();
                keep(&mut next, r);
            }
        }
        rows = Vec::with_capacity(next.len());
        for ((coeffs, constant), strict) in next {
            if coeffs.iter().all(Zero::is_zero) {
                if constant.is_negative() || (strict && constant.is_zero()) {
                    return Some(false);
                }
                continue;
            }
            rows.push(Ineq { coeffs, constant, strict });
        }
    }
    Some(rows.iter().all(|r| r.constant.is_positive() || (!r.strict && r.constant.is_zero())))
}

/// x_i = g_i + (B^T z)_i expressed as coefficient rows in z.
fn coordinate_forms(inst: &LpInstance) -> Vec<Vec<Rational>> {
    let k = inst.kernel();
    (0..inst.n()).map(|i| k.column(i)).collect()
}

pub fn nonempty_fm(inst: &LpInstance, sign: &[i8]) -> Option<bool> {
    let forms = coordinate_forms(inst);
    let rows = forms
        .iter()
        .zip(sign)
        .zip(inst.g())
        .map(|((f, &s), g)| {
            let f: Vec<Rational> = f.iter().map(|v| v * Rational::from_integer(s.into())).collect();
            Ineq::new(&f, &(g * Rational::from_integer(s.into())), true)
        })
        .collect();
    fourier_motzkin(rows, inst.kernel().rows())
}

pub fn unbounded_fm(inst: &LpInstance, sign: &[i8]) -> Option<bool> {
    let forms = coordinate_forms(inst);
    let dim = inst.kernel().rows();
    let mut total = vec![Rational::zero(); dim];
    let mut rows = Vec::with_capacity(forms.len() + 1);
    for (f, &s) in forms.iter().zip(sign) {
        let f: Vec<Rational> = f.iter().map(|v| v * Rational::from_integer(s.into())).collect();
        for (t, v) in total.iter_mut().zip(&f) {
            *t += v;
        }
        rows.push(Ineq::new(&f, &Rational::zero(), false));
    }
    rows.push(Ineq::new(&total, &Rational::zero(), true));
    fourier_motzkin(rows, dim)
}

fn signed_matrix(inst: &LpInstance, sign: &[i8]) -> RationalMatrix {
    let a = inst.a();
    let mut m = a.clone();
    for r in 0..a.rows() {
        for (c, &s) in sign.iter().enumerate() {
            if s < 0 {
                m.set(r, c, -a.get(r, c));
            }
        }
    }
    m
}

/// The interior point maximizing min_i sign_i x_i (capped at 1), or `None` if the region is empty.
pub fn interior_point(inst: &LpInstance, sign: &[i8]) -> Option<Vec<Rational>> {
    let (n, d) = (inst.n(), inst.d());
    // variables: w (n), t, u (n), v
    let cols = 2 * n + 2;
    let sa = signed_matrix(inst, sign);
    let mut m = RationalMatrix::zeros(d + n + 1, cols);
    let mut rhs = Vec::with_capacity(d + n + 1);
    for r in 0..d {
        for c in 0..n {
            m.set(r, c, sa.get(r, c).clone());
        }
        rhs.push(inst.b()[r].clone());
    }
    for i in 0..n {
        m.set(d + i, i, Rational::one());
        m.set(d + i, n, -Rational::one());
        m.set(d + i, n + 1 + i, -Rational::one());
        rhs.push(Rational::zero());
    }
    m.set(d + n, n, Rational::one());
    m.set(d + n, cols - 1, Rational::one());
    rhs.push(Rational::one());
    let mut cost = vec![Rational::zero(); cols];
    cost[n] = -Rational::one();
    match minimize(&m, &rhs, &cost) {
        LpOutcome::Optimal { x, .. } if x[n].is_positive() => Some(
            (0..n)
                .map(|i| if sign[i] < 0 { -&x[i] } else { x[i].clone() })
                .collect(),
        ),
        _ => None,
    }
}

pub fn nonempty_simplex(inst: &LpInstance, sign: &[i8]) -> bool {
    interior_point(inst, sign).is_some()
}

pub fn unbounded_simplex(inst: &LpInstance, sign: &[i8]) -> bool {
    let n = inst.n();
    let sa = signed_matrix(inst, sign);
    let m = sa.push_row(&vec![Rational::one(); n]);
    let mut rhs = vec![Rational::zero(); inst.d()];
    rhs.push(Rational::one());
    matches!(minimize(&m, &rhs, &vec![Rational::zero(); n]), LpOutcome::Optimal { .. })
}

pub fn nonempty(inst: &LpInstance, sign: &[i8]) -> bool {
    if inst.kernel().rows() <= FM_MAX_DIM {
        if let Some(v) = nonempty_fm(inst, sign) {
            return v;
        }
    }
    nonempty_simplex(inst, sign)
}

pub fn bounded(inst: &LpInstance, sign: &[i8]) -> bool {
    if inst.kernel().rows() <= FM_MAX_DIM {
        if let Some(v) = unbounded_fm(inst, sign) {
            return !v;
        }
    }
    !unbounded_simplex(inst, sign)
}

/// Whether the barrier problem for max (lam_sign > 0) or min c^T x has an
/// optimum in the region, i.e. lam_sign c^T r < 0 for every recession
/// direction r. Always true for bounded regions.
pub fn path_exists(inst: &LpInstance, sign: &[i8], lam_sign: i8) -> bool {
    let n = inst.n();
    let sa = signed_matrix(inst, sign);
    let m = sa.push_row(&vec![Rational::one(); n]);
    let mut rhs = vec![Rational::zero(); inst.d()];
    rhs.push(Rational::one());
    // minimize -lam_sign c^T r over normalized recession directions
    let cost: Vec<Rational> = inst
        .c()
        .iter()
        .zip(sign)
        .map(|(c, &s)| if (s > 0) == (lam_sign > 0) { -c } else { c.clone() })
        .collect();
    match minimize(&m, &rhs, &cost) {
        LpOutcome::Infeasible => true,
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => false,
    }
}

/// Maximizes `cost . x` over the closure of the region; `None` if unbounded or empty.
pub fn region_optimum(inst: &LpInstance, sign: &[i8], cost: &[Rational]) -> Option<Vec<Rational>> {
    let sa = signed_matrix(inst, sign);
    let obj: Vec<Rational> = cost
        .iter()
        .zip(sign)
        .map(|(c, &s)| if s < 0 { c.clone() } else { -c })
        .collect();
    match minimize(&sa, inst.b(), &obj) {
        LpOutcome::Optimal { x, .. } => Some(
            x.into_iter()
                .zip(sign)
                .map(|(v, &s)| if s < 0 { -v } else { v })
                .collect(),
        ),
        _ => None,
    }
}

/// Whether sign_i x_i is bounded above over the closure, for one coordinate.
pub fn coordinate_bounded(inst: &LpInstance, sign: &[i8], i: usize) -> bool {
    let mut cost = vec![Rational::zero(); inst.n()];
    cost[i] = Rational::from_integer(sign[i].into());
    region_optimum(inst, sign, &cost).is_some()
}
