//! Sparse polynomials over the rationals and the defining equations of central curves.

mod construct;
mod sparse;
mod text;
pub mod univariate;

pub use construct::{
    circuit_polynomial, curve_ideal_generators, determinantal_circuit_polynomial, dual_generators_in_y,
    eliminate_linear, line_restriction_real_roots, planar_curve_poly, planar_line_product, renegar_derivative,
    LineRoots, PlanarTerms, Side,
};
pub use sparse::{grlex_cmp, var_names, Exponents, FloatPolynomial, SparsePolynomial};
