//! Central curves of linear programs: exact matroid invariants, defining
//! polynomials, region geometry and numerically traced central paths.

pub mod arrangement;
pub mod catalog;
pub mod centralpath;
pub mod curvature;
pub mod error;
pub mod exactlin;
pub mod generate;
pub mod matroid;
pub mod polynomial;

pub use arrangement::{LpInstance, Region};
pub use error::{Error, Result};
pub use exactlin::{Rational, RationalMatrix};
pub use matroid::{InvariantReport, Matroid};
pub use polynomial::SparsePolynomial;
