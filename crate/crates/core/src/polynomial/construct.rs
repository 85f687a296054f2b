//! Defining polynomials of central curves.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sparse::{var_names, SparsePolynomial};
use super::univariate::{count_real_roots, count_real_roots_with_multiplicity, UniPoly};
use crate::arrangement::LpInstance;
use crate::error::{Error, Result};
use crate::exactlin::{Rational, RationalMatrix};
use crate::matroid::{circuits, matroid_from_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Primal,
    Dual,
}

/// The form sum_{i in C} v_i prod_{j in C, j != i} x_j for the dependence v on C.
pub fn circuit_polynomial(l: &RationalMatrix, circuit: &[usize]) -> Result<SparsePolynomial> {
    let sub = l.select_columns(circuit);
    let ker = sub.kernel_basis();
    if ker.rows() != 1 {
        return Err(Error::NotACircuit(ker.rows()));
    }
    let v = ker.row(0);
    if v.iter().any(Zero::is_zero) {
        // a smaller dependent set sits inside C
        return Err(Error::NotACircuit(1));
    }
    let vars = var_names("x", l.cols());
    let mut p = SparsePolynomial::zero(&vars);
    for (k, &i) in circuit.iter().enumerate() {
        let mut e = vec![0u32; l.cols()];
        for &j in circuit {
            if j != i {
                e[j] = 1;
            }
        }
        p.add_term(e, v[k].clone());
    }
    Ok(p.primitive())
}

/// The same form read off a maximal minor of (L; 1/x): C is padded to a set S
/// of rank rank(L) and size rank(L)+1, and the cofactor expansion along the
/// 1/x row is cleared of denominators.
pub fn determinantal_circuit_polynomial(l: &RationalMatrix, circuit: &[usize]) -> Result<SparsePolynomial> {
    let rows = l.independent_rows();
    let l = l.select_rows(&rows);
    let r = l.rows();
    let mut s: Vec<usize> = circuit.to_vec();
    if l.select_columns(&s).rank() + 1 != s.len() {
        return Err(Error::NotACircuit(s.len() - l.select_columns(&s).rank()));
    }
    for j in 0..l.cols() {
        if s.len() == r + 1 {
            break;
        }
        if s.contains(&j) {
            continue;
        }
        let mut t = s.clone();
        t.push(j);
        if l.select_columns(&t).rank() == t.len() - 1 {
            s = t;
        }
    }
    if s.len() != r + 1 {
        return Err(Error::RankDeficient(l.select_columns(&s).rank()));
    }
    s.sort_unstable();
    let vars = var_names("x", l.cols());
    let mut p = SparsePolynomial::zero(&vars);
    for (pos, &k) in s.iter().enumerate() {
        if !circuit.contains(&k) {
            continue;
        }
        let rest: Vec<usize> = s.iter().copied().filter(|&j| j != k).collect();
        let minor = l.select_columns(&rest).det()?;
        if minor.is_zero() {
            continue;
        }
        // cofactor sign for entry (r, pos) of an (r+1)x(r+1) matrix
        let signed = if (r + pos) % 2 == 0 { minor } else { -minor };
        let mut e = vec![0u32; l.cols()];
        for &j in circuit {
            if j != k {
                e[j] = 1;
            }
        }
        p.add_term(e, signed);
    }
    Ok(p.primitive())
}

/// Circuit polynomials of (A; c) and the forms Ax - b on the primal side;
/// circuit polynomials of (B; g) and the forms Bs + Bc on the dual side.
/// Circuits come in lexicographic order, followed by the linear forms.
pub fn curve_ideal_generators(inst: &LpInstance, side: Side) -> Result<Vec<SparsePolynomial>> {
    let (stacked, lin, rhs, prefix) = match side {
        Side::Primal => {
            if inst.cost_is_degenerate() {
                return Err(Error::DegenerateCost);
            }
            (inst.stacked_cost(), inst.a().clone(), inst.b().to_vec(), "x")
        }
        Side::Dual => {
            // g is orthogonal to the rows of B, so it lies in their span only when it vanishes
            if inst.kernel().rows() == 0 || inst.g().iter().all(Zero::is_zero) {
                return Err(Error::DegenerateCost);
            }
            let b = inst.kernel().clone();
            let bc: Vec<Rational> = b.mul_vec(inst.c()).into_iter().map(|v| -v).collect();
            (inst.stacked_dual(), b, bc, "s")
        }
    };
    let m = matroid_from_matrix(&stacked)?;
    let circs = circuits(&m);
    let vars = var_names(prefix, inst.n());
    let mut out: Vec<SparsePolynomial> = circs
        .par_iter()
        .map(|c| circuit_polynomial(&stacked, c).map(|p| rename(&p, &vars)))
        .collect::<Result<_>>()?;
    for i in 0..lin.rows() {
        out.push(SparsePolynomial::linear(&vars, &lin.row(i), -rhs[i].clone()));
    }
    Ok(out)
}

/// Dual generators rewritten in y through s = A^T y - c; identically zero forms are dropped.
pub fn dual_generators_in_y(inst: &LpInstance) -> Result<Vec<SparsePolynomial>> {
    let gens = curve_ideal_generators(inst, Side::Dual)?;
    let yv = var_names("y", inst.d());
    let subs: Vec<SparsePolynomial> = (0..inst.n())
        .map(|i| SparsePolynomial::linear(&yv, &inst.a().column(i), -inst.c()[i].clone()))
        .collect();
    Ok(gens
        .iter()
        .map(|g| g.compose(&yv, &subs))
        .filter(|g| !g.is_zero())
        .map(|g| g.primitive())
        .collect())
}

fn rename(p: &SparsePolynomial, vars: &[String]) -> SparsePolynomial {
    SparsePolynomial::from_terms(vars, p.terms().map(|(e, c)| (e.clone(), c.clone())))
}

/// Which columns enter the planar sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanarTerms {
    /// only columns with b1*a2i - b2*a1i != 0; degree |I| - 1
    Nonzero,
    /// every column; picks up a linear factor for each column parallel to b
    All,
}

fn planar_index_set(a: &RationalMatrix, b: &[Rational], terms: PlanarTerms) -> Vec<usize> {
    (0..a.cols())
        .filter(|&i| terms == PlanarTerms::All || !planar_weight(a, b, i).is_zero())
        .collect()
}

fn planar_weight(a: &RationalMatrix, b: &[Rational], i: usize) -> Rational {
    &b[0] * a.get(1, i) - &b[1] * a.get(0, i)
}

fn check_planar(a: &RationalMatrix) -> Result<()> {
    if a.rows() != 2 {
        return Err(Error::AmbientNot2D(a.rows()));
    }
    let r = a.rank();
    if r != 2 {
        return Err(Error::RankDeficient(r));
    }
    Ok(())
}

/// The planar central-curve polynomial in (y1, y2):
/// sum_{i in I} (b1 a_2i - b2 a_1i) prod_{j in I, j != i} (a_1j y1 + a_2j y2 - c_j).
pub fn planar_curve_poly(
    a: &RationalMatrix,
    b: &[Rational],
    c: &[Rational],
    terms: PlanarTerms,
) -> Result<SparsePolynomial> {
    check_planar(a)?;
    let vars = var_names("y", 2);
    let idx = planar_index_set(a, b, terms);
    let lines: Vec<SparsePolynomial> = (0..a.cols())
        .map(|j| SparsePolynomial::linear(&vars, &[a.get(0, j).clone(), a.get(1, j).clone()], -c[j].clone()))
        .collect();
    let mut out = SparsePolynomial::zero(&vars);
    for &i in &idx {
        let w = planar_weight(a, b, i);
        if w.is_zero() {
            continue;
        }
        let mut t = SparsePolynomial::constant(&vars, w);
        for &j in &idx {
            if j != i {
                t = t.mul(&lines[j]);
            }
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// prod_{i in I} (a_1i y1 + a_2i y2 - c_i y0) over (y0, y1, y2), with I chosen as in the planar polynomial.
pub fn planar_line_product(
    a: &RationalMatrix,
    b: &[Rational],
    c: &[Rational],
    terms: PlanarTerms,
) -> Result<SparsePolynomial> {
    check_planar(a)?;
    let vars = vec!["y0".to_string(), "y1".to_string(), "y2".to_string()];
    let mut out = SparsePolynomial::constant(&vars, Rational::one());
    for i in planar_index_set(a, b, terms) {
        let l = SparsePolynomial::linear(&vars, &[-c[i].clone(), a.get(0, i).clone(), a.get(1, i).clone()], Rational::zero());
        out = out.mul(&l);
    }
    Ok(out)
}

/// Directional derivative sum_k e_k df/dy_k.
pub fn renegar_derivative(f: &SparsePolynomial, e: &[Rational]) -> SparsePolynomial {
    assert_eq!(e.len(), f.vars().len(), "direction dimension");
    let mut out = SparsePolynomial::zero(f.vars());
    for (k, ek) in e.iter().enumerate() {
        if !ek.is_zero() {
            out = out.add(&f.derivative(k).scale(ek));
        }
    }
    out
}

/// Replaces each named variable by an affine form in the remaining variables.
/// The forms are written over the variables of `f`; the result lives over
/// the variables that were not substituted.
pub fn eliminate_linear(f: &SparsePolynomial, subs: &BTreeMap<String, SparsePolynomial>) -> SparsePolynomial {
    let retained: Vec<String> = f.vars().iter().filter(|v| !subs.contains_key(*v)).cloned().collect();
    let keep_idx: Vec<usize> = (0..f.vars().len()).filter(|&i| !subs.contains_key(&f.vars()[i])).collect();
    let restrict = |p: &SparsePolynomial| {
        SparsePolynomial::from_terms(
            &retained,
            p.terms().map(|(e, c)| {
                for (i, name) in f.vars().iter().enumerate() {
                    assert!(e[i] == 0 || !subs.contains_key(name), "substitution uses eliminated variable {name}");
                }
                (keep_idx.iter().map(|&i| e[i]).collect(), c.clone())
            }),
        )
    };
    let images: Vec<SparsePolynomial> = f
        .vars()
        .iter()
        .map(|v| match subs.get(v) {
            Some(p) => restrict(p),
            None => SparsePolynomial::variable(&retained, retained.iter().position(|r| r == v).unwrap()),
        })
        .collect();
    f.compose(&retained, &images)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LineRoots {
    /// degree of f, which is the number of complex intersections with the line
    pub degree: usize,
    /// distinct real intersection points
    pub real_roots: usize,
    /// real intersections counted with multiplicity
    pub real_with_multiplicity: usize,
}

impl LineRoots {
    pub fn all_real(&self) -> bool {
        self.real_with_multiplicity == self.degree
    }
}

/// Intersects the projective curve f(y0, y1, y2) = 0 with the line through p and q.
/// The line is parametrized as p + t q; a drop in degree is a root at q.
pub fn line_restriction_real_roots(f: &SparsePolynomial, p: &[Rational], q: &[Rational]) -> Result<LineRoots> {
    let n = f.vars().len();
    assert!(p.len() == n && q.len() == n, "point dimension");
    let pts = RationalMatrix::from_rows(vec![p.to_vec(), q.to_vec()])?;
    if pts.rank() < 2 {
        return Err(Error::IdenticalPoints);
    }
    let tv = vec!["t".to_string()];
    let subs: Vec<SparsePolynomial> = (0..n)
        .map(|i| SparsePolynomial::linear(&tv, &[q[i].clone()], p[i].clone()))
        .collect();
    let g = f.compose(&tv, &subs);
    if g.is_zero() {
        return Err(Error::ZeroRestriction);
    }
    let deg = f.degree() as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (e, c) in g.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    let u = UniPoly::new(coeffs);
    let at_infinity = deg - u.degree().unwrap_or(0);
    Ok(LineRoots {
        degree: deg,
        real_roots: count_real_roots(&u) + usize::from(at_infinity > 0),
        real_with_multiplicity: count_real_roots_with_multiplicity(&u) + at_infinity,
    })
}

