use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{dot, Rational, RationalMatrix};

/// The triple (A, b, c) with A reduced to full row rank, plus the kernel
/// basis B and the minimum-norm solution g of Ag = b.
#[derive(Clone, Debug, PartialEq)]
pub struct LpInstance {
    a: RationalMatrix,
    b: Vec<Rational>,
    c: Vec<Rational>,
    kernel: RationalMatrix,
    g: Vec<Rational>,
}

impl LpInstance {
    pub fn new(a: RationalMatrix, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::InvalidInstance(format!(
                "A has {} rows but b has {} entries",
                a.rows(),
                b.len()
            )));
        }
        if a.cols() != c.len() {
            return Err(Error::InvalidInstance(format!(
                "A has {} columns but c has {} entries",
                a.cols(),
                c.len()
            )));
        }
        if a.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        let n = a.cols();
        if n > 63 {
            return Err(Error::LimitExceeded { n, limit: 63 });
        }
        // consistency of the full system before dropping rows
        let aug = RationalMatrix::from_rows_with_cols(
            (0..a.rows())
                .map(|r| {
                    let mut row = a.row(r).to_vec();
                    row.push(b[r].clone());
                    row
                })
                .collect(),
            n + 1,
        )?;
        let keep = a.independent_rows();
        if aug.rank() != keep.len() {
            return Err(Error::Inconsistent);
        }
        let a = a.select_rows(&keep);
        let b: Vec<Rational> = keep.iter().map(|&r| b[r].clone()).collect();
        let kernel = a.kernel_basis();
        let aat = a.mul(&a.transpose());
        let w = aat.solve(&b).ok_or_else(|| Error::InternalInconsistency("AA^T singular".into()))?;
        let g = a.transpose().mul_vec(&w);
        Ok(LpInstance { a, b, c, kernel, g })
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn d(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    /// Rows span the kernel of A.
    pub fn kernel(&self) -> &RationalMatrix {
        &self.kernel
    }

    pub fn g(&self) -> &[Rational] {
        &self.g
    }

    pub fn with_cost(&self, c: Vec<Rational>) -> Result<Self> {
        LpInstance::new(self.a.clone(), self.b.clone(), c)
    }

    /// (A; c^T), whose matroid governs the primal curve.
    pub fn stacked_cost(&self) -> RationalMatrix {
        self.a.push_row(&self.c)
    }

    /// (B; g^T), whose matroid governs the dual curve.
    pub fn stacked_dual(&self) -> RationalMatrix {
        self.kernel.push_row(&self.g)
    }

    /// True when c lies in the row space of A.
    pub fn cost_is_degenerate(&self) -> bool {
        self.kernel.mul_vec(&self.c).iter().all(Zero::is_zero)
    }

    /// The instance whose primal variables are the slacks s = A^T y - c:
    /// constraint matrix B, right-hand side -Bc and cost -g. Its slack
    /// variables are the original x, and lambda is unchanged.
    pub fn dual(&self) -> Result<Self> {
        if self.kernel.rows() == 0 {
            return Err(Error::InvalidInstance("A is square; the dual space is a point".into()));
        }
        let rhs: Vec<Rational> = self.kernel.mul_vec(&self.c).into_iter().map(|v| -v).collect();
        let cost: Vec<Rational> = self.g.iter().map(|v| -v).collect();
        LpInstance::new(self.kernel.clone(), rhs, cost)
    }

    /// The matrix (AA^T)^{-1} A, mapping s + c to y.
    pub fn y_map(&self) -> RationalMatrix {
        let aat = self.a.mul(&self.a.transpose());
        let d = self.d();
        let mut inv_cols = Vec::with_capacity(d);
        for k in 0..d {
            let e: Vec<Rational> = (0..d).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect();
            inv_cols.push(aat.solve(&e).expect("AA^T is nonsingular"));
        }
        let inv = RationalMatrix::from_rows(inv_cols).expect("square").transpose();
        inv.mul(&self.a)
    }

    pub fn cost_value(&self, x: &[Rational]) -> Rational {
        dot(&self.c, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn hexagon() -> LpInstance {
        let a = RationalMatrix::from_i64(&[
            &[1, 1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 1, 1],
            &[1, 0, 0, 1, 0, 0],
            &[0, 1, 0, 0, 1, 0],
            &[0, 0, 1, 0, 0, 1],
        ]);
        let b = [3, 3, 2, 2, 2].map(rat).to_vec();
        let c = [0, 0, 0, 0, 1, 3].map(rat).to_vec();
        LpInstance::new(a, b, c).unwrap()
    }

    #[test]
    fn redundant_row_is_dropped() {
        let inst = hexagon();
        assert_eq!(inst.d(), 4);
        assert_eq!(inst.kernel().rows(), 2);
        assert_eq!(inst.a().mul_vec(inst.g()), inst.b());
        assert!(inst.a().mul(&inst.kernel().transpose()).is_zero());
    }

    #[test]
    fn inconsistent_rows_rejected() {
        let a = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let r = LpInstance::new(a, vec![rat(1), rat(3)], vec![rat(0), rat(1)]);
        assert_eq!(r, Err(Error::Inconsistent));
    }

    #[test]
    fn dual_swaps_roles() {
        let inst = hexagon();
        let dual = inst.dual().unwrap();
        assert_eq!(dual.d(), 2);
        assert_eq!(dual.n(), 6);
        // dual of the dual spans the original row space
        assert_eq!(dual.kernel().vstack(inst.a()).rank(), 4);
        assert!(!inst.cost_is_degenerate());
        let y = inst.y_map();
        assert_eq!(y.mul(&inst.a().transpose()), RationalMatrix::identity(4));
    }

    #[test]
    fn degenerate_cost_detected() {
        let inst = hexagon();
        let c = inst.a().row(0).to_vec();
        assert!(inst.with_cost(c).unwrap().cost_is_degenerate());
    }
}
