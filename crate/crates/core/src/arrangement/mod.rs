//! The arrangement of coordinate hyperplanes inside the affine space {Ax = b}.

mod centers;
pub mod feasibility;
mod instance;
mod support;

pub use centers::{analytic_center, analytic_centers, kkt_residual, CenterResult};
pub use feasibility::region_optimum;
pub use instance::LpInstance;
pub use support::{disjoint_support_exists, DisjointSupport};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::format_signs;
use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::matroid::{elements, matroid_from_matrix};

pub const DEFAULT_LIMIT_N: usize = 16;
const FULL_SCAN_MAX_N: usize = 12;

pub type Basis = Vec<usize>;

/// One point per basis S of the column matroid of A: the solution of A_S x_S = b.
pub fn vertices(inst: &LpInstance) -> BTreeMap<Basis, Vec<Rational>> {
    let m = matroid_from_matrix(inst.a()).expect("A is nonzero");
    let rows: Vec<usize> = (0..inst.d()).collect();
    m.bases()
        .par_iter()
        .map(|&s| {
            let cols = elements(s);
            let sol = inst.a().select(&rows, &cols).solve(inst.b()).expect("basis is invertible");
            let mut x = vec![Rational::zero(); inst.n()];
            for (&c, v) in cols.iter().zip(sol) {
                x[c] = v;
            }
            (cols, x)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Region {
    #[serde(serialize_with = "serialize_signs")]
    pub sign_vector: Vec<i8>,
    pub bounded: bool,
    pub analytic_center: Option<Vec<f64>>,
    pub vertex_set: Vec<Basis>,
}

pub fn serialize_signs<S: serde::Serializer>(s: &[i8], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_signs(s))
}

impl Region {
    pub fn label(&self) -> String {
        format_signs(&self.sign_vector)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RegionOptions {
    pub limit_n: usize,
    /// Scan all 2^n sign vectors instead of vertex neighbourhoods.
    pub full_scan: bool,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions { limit_n: DEFAULT_LIMIT_N, full_scan: false }
    }
}

fn closure_contains(sign: &[i8], x: &[Rational]) -> bool {
    x.iter().zip(sign).all(|(v, &s)| v.is_zero() || (v.is_positive() == (s > 0)))
}

pub fn enumerate_regions(inst: &LpInstance) -> Result<Vec<Region>> {
    enumerate_regions_with(inst, RegionOptions::default())
}

pub fn enumerate_regions_with(inst: &LpInstance, opts: RegionOptions) -> Result<Vec<Region>> {
    let n = inst.n();
    if n > opts.limit_n {
        return Err(Error::LimitExceeded { n, limit: opts.limit_n });
    }
    let verts = vertices(inst);
    let mut candidates: BTreeSet<Vec<i8>> = BTreeSet::new();
    if opts.full_scan {
        if n > FULL_SCAN_MAX_N {
            return Err(Error::LimitExceeded { n, limit: FULL_SCAN_MAX_N });
        }
        for mask in 0u64..(1 << n) {
            candidates.insert((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
        }
    } else {
        for x in verts.values() {
            let zeros: Vec<usize> = (0..n).filter(|&i| x[i].is_zero()).collect();
            let base: Vec<i8> = x.iter().map(|v| if v.is_negative() { -1 } else { 1 }).collect();
            for mask in 0u64..(1 << zeros.len()) {
                let mut s = base.clone();
                for (k, &i) in zeros.iter().enumerate() {
                    s[i] = if mask >> k & 1 == 1 { -1 } else { 1 };
                }
                candidates.insert(s);
            }
        }
    }
    let candidates: Vec<Vec<i8>> = candidates.into_iter().collect();
    let mut regions: Vec<Region> = candidates
        .par_iter()
        .filter(|s| feasibility::nonempty(inst, s))
        .map(|s| Region {
            sign_vector: s.clone(),
            bounded: feasibility::bounded(inst, s),
            analytic_center: None,
            vertex_set: verts
                .iter()
                .filter(|(_, x)| closure_contains(s, x))
                .map(|(b, _)| b.clone())
                .collect(),
        })
        .collect();
    regions.sort_by_key(|r| r.label());
    Ok(regions)
}

/// Intersects the affine space with {form . x = value}.
pub fn slice(inst: &LpInstance, form: &[Rational], value: Rational) -> Result<LpInstance> {
    let a = inst.a().push_row(form);
    if a.rank() == inst.d() {
        return Err(Error::DegenerateCost);
    }
    let mut b = inst.b().to_vec();
    b.push(value);
    LpInstance::new(a, b, inst.c().to_vec())
}

/// The arrangement restricted to the level set {c . x = c0}.
pub fn level_slice(inst: &LpInstance, c0: Rational) -> Result<LpInstance> {
    slice(inst, &inst.c().to_vec(), c0)
}

pub fn bounded_count(inst: &LpInstance) -> Result<usize> {
    Ok(enumerate_regions(inst)?.iter().filter(|r| r.bounded).count())
}
