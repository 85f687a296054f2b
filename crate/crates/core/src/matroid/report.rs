use serde::Serialize;

use super::{binomial, broken_circuit_fvector, h_vector, matroid_from_matrix, tutte_polynomial, Matroid, TuttePolynomial};
use crate::arrangement::LpInstance;
use crate::error::Result;
use crate::exactlin::{format_rational, Rational};

/// A rational multiple of pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple(pub Rational);

impl PiMultiple {
    pub fn value(&self) -> f64 {
        crate::exactlin::to_f64(&self.0) * std::f64::consts::PI
    }
}

impl Serialize for PiMultiple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("coeff", &format_rational(&self.0))?;
        m.serialize_entry("unit", "pi")?;
        m.end()
    }
}

/// Invariants of one side: the stacked matroid (A; c) or (B; g) and its base matroid A or B.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideInvariants {
    pub rank: usize,
    pub f_vector: Vec<u64>,
    pub h_vector: Vec<u64>,
    pub degree: u64,
    pub genus: i64,
    pub gauss_bound: u64,
    pub base_mobius: u64,
    pub avg_curvature_bound: Option<PiMultiple>,
    pub uniform: bool,
    pub tutte: TuttePolynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericFlags {
    pub primal_uniform: bool,
    pub dual_uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericBounds {
    pub degree_primal: u64,
    pub degree_dual: u64,
    pub gauss_primal: u64,
    pub gauss_dual: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub d: usize,
    pub f_vector: Vec<u64>,
    pub h_vector: Vec<u64>,
    pub mobius: u64,
    pub tutte: TuttePolynomial,
    pub degree_primal: u64,
    pub degree_dual: Option<u64>,
    pub genus_primal: i64,
    pub genus_dual: Option<i64>,
    pub gauss_bound_primal: u64,
    pub gauss_bound_dual: Option<u64>,
    pub mobius_a: u64,
    pub mobius_b: Option<u64>,
    pub h_vector_dual: Option<Vec<u64>>,
    pub avg_curvature_bound_primal: Option<PiMultiple>,
    pub avg_curvature_bound_dual: Option<PiMultiple>,
    pub generic_flags: GenericFlags,
    pub generic_bounds: GenericBounds,
    pub degenerate_cost: bool,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub primal: SideInvariants,
    #[serde(skip)]
    pub dual: Option<SideInvariants>,
}

pub fn genus(h: &[u64]) -> i64 {
    1 - h.iter().enumerate().map(|(j, &hj)| (1 - j as i64) * hj as i64).sum::<i64>()
}

pub fn gauss_bound(h: &[u64]) -> u64 {
    2 * h.iter().enumerate().map(|(i, &hi)| i as u64 * hi).sum::<u64>()
}

fn side(stacked: &Matroid, base: &Matroid) -> Result<SideInvariants> {
    let h = h_vector(stacked)?;
    let degree = h.iter().sum();
    let base_mobius = super::mobius_number(base)?;
    let gauss = gauss_bound(&h);
    let avg = (base_mobius > 0)
        .then(|| PiMultiple(Rational::new((gauss as i64).into(), (base_mobius as i64).into())));
    Ok(SideInvariants {
        rank: stacked.rank(),
        f_vector: broken_circuit_fvector(stacked),
        genus: genus(&h),
        gauss_bound: gauss,
        h_vector: h,
        degree,
        base_mobius,
        avg_curvature_bound: avg,
        uniform: stacked.is_uniform(),
        tutte: tutte_polynomial(stacked),
    })
}

pub fn invariant_report(inst: &LpInstance) -> Result<InvariantReport> {
    let (n, d) = (inst.n() as u64, inst.d() as u64);
    let mut warnings = Vec::new();
    let degenerate = inst.cost_is_degenerate();
    if degenerate {
        warnings.push("DegenerateCost: c lies in the row space of A; M_{A,c} has rank d".to_string());
    }
    let primal = side(&matroid_from_matrix(&inst.stacked_cost())?, &matroid_from_matrix(inst.a())?)?;
    let dual = if inst.kernel().rows() > 0 {
        let stacked = matroid_from_matrix(&inst.stacked_dual())?;
        if stacked.rank() == inst.kernel().rows() {
            warnings.push("g lies in the row space of B; M_{B,g} has rank n-d".to_string());
        }
        Some(side(&stacked, &matroid_from_matrix(inst.kernel())?)?)
    } else {
        None
    };
    let generic_bounds = GenericBounds {
        degree_primal: binomial(n - 1, d),
        degree_dual: if d >= 1 { binomial(n - 1, d - 1) } else { 0 },
        gauss_primal: 2 * (n - d).saturating_sub(1) * if d >= 1 { binomial(n - 1, d - 1) } else { 0 },
        gauss_dual: 2 * d.saturating_sub(1) * binomial(n - 1, d),
    };
    Ok(InvariantReport {
        n: inst.n(),
        d: inst.d(),
        f_vector: primal.f_vector.clone(),
        h_vector: primal.h_vector.clone(),
        mobius: primal.degree,
        tutte: primal.tutte.clone(),
        degree_primal: primal.degree,
        degree_dual: dual.as_ref().map(|s| s.degree),
        genus_primal: primal.genus,
        genus_dual: dual.as_ref().map(|s| s.genus),
        gauss_bound_primal: primal.gauss_bound,
        gauss_bound_dual: dual.as_ref().map(|s| s.gauss_bound),
        mobius_a: primal.base_mobius,
        mobius_b: dual.as_ref().map(|s| s.base_mobius),
        h_vector_dual: dual.as_ref().map(|s| s.h_vector.clone()),
        avg_curvature_bound_primal: primal.avg_curvature_bound.clone(),
        avg_curvature_bound_dual: dual.as_ref().and_then(|s| s.avg_curvature_bound.clone()),
        generic_flags: GenericFlags {
            primal_uniform: primal.uniform,
            dual_uniform: dual.as_ref().is_some_and(|s| s.uniform),
        },
        generic_bounds,
        degenerate_cost: degenerate,
        warnings,
        primal,
        dual,
    })
}
