use num_traits::Zero;

use super::LpInstance;
use crate::exactlin::{Rational, RationalMatrix};
use crate::matroid::{circuits, dual, matroid_from_matrix};

/// A kernel vector and a row-space vector of A with disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointSupport {
    pub kernel_support: Vec<usize>,
    pub kernel_vector: Vec<Rational>,
    pub row_support: Vec<usize>,
    pub row_vector: Vec<Rational>,
}

/// The vector spanning the kernel of the columns of `m` on `support`, padded with zeros.
fn supported_kernel_vector(m: &RationalMatrix, support: &[usize]) -> Vec<Rational> {
    let k = m.select_columns(support).kernel_basis();
    debug_assert_eq!(k.rows(), 1);
    let prim = crate::exactlin::primitive_integer_vector(k.row(0));
    let mut v = vec![Rational::zero(); m.cols()];
    for (&i, p) in support.iter().zip(prim) {
        v[i] = Rational::from_integer(p);
    }
    v
}

/// Searches circuits of M_A against circuits of its dual for a disjoint pair.
pub fn disjoint_support_exists(inst: &LpInstance) -> Option<DisjointSupport> {
    if inst.kernel().rows() == 0 {
        return None;
    }
    let m = matroid_from_matrix(inst.a()).expect("A is nonzero");
    let kernel_circuits = circuits(&m);
    let row_circuits = circuits(&dual(&m));
    for rc in &row_circuits {
        for kc in &kernel_circuits {
            if rc.iter().any(|e| kc.contains(e)) {
                continue;
            }
            return Some(DisjointSupport {
                kernel_vector: supported_kernel_vector(inst.a(), kc),
                kernel_support: kc.clone(),
                row_vector: supported_kernel_vector(inst.kernel(), rc),
                row_support: rc.clone(),
            });
        }
    }
    None
}
