use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{denominator_lcm, format_rational, parse_rational, to_f64, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInstance(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds from rows; every row must have the same length. An empty list gives a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInstance("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RationalMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| super::rat(x)).collect())
            .collect();
        Self::from_rows(v).expect("ragged literal")
    }

    /// Rows with an explicit column count, so that zero-row matrices keep their width.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInstance("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RationalMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows).map(|r| super::dot(self.row(r), v)).collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "dimension mismatch in stack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn push_row(&self, row: &[Rational]) -> Self {
        assert_eq!(self.cols, row.len(), "dimension mismatch in stack");
        let mut data = self.data.clone();
        data.extend(row.iter().cloned());
        RationalMatrix { rows: self.rows + 1, cols: self.cols, data }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        RationalMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let (r, p, _) = self.rref_impl(false);
        (r, p)
    }

    /// Like [`rref`](Self::rref) but also returns `E` with `E * self = R`.
    pub fn rref_with_transform(&self) -> (Self, Vec<usize>, Self) {
        let (r, p, e) = self.rref_impl(true);
        (r, p, e.expect("transform requested"))
    }

    fn rref_impl(&self, track: bool) -> (Self, Vec<usize>, Option<Self>) {
        let mut m = self.clone();
        let mut e = track.then(|| Self::identity(self.rows));
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead);
            if let Some(e) = e.as_mut() {
                e.swap_rows(p, lead);
            }
            let inv = m.get(lead, col).recip();
            m.scale_row(lead, &inv);
            if let Some(e) = e.as_mut() {
                e.scale_row(lead, &inv);
            }
            for r in 0..m.rows {
                if r != lead && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    m.add_row_multiple(r, lead, &f);
                    if let Some(e) = e.as_mut() {
                        e.add_row_multiple(r, lead, &f);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots, e)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) * f;
            self.set(r, c, v);
        }
    }

    /// row[r] -= f * row[src]
    fn add_row_multiple(&mut self, r: usize, src: usize, f: &Rational) {
        for c in 0..self.cols {
            let s = self.get(src, c);
            if !s.is_zero() {
                let v = self.get(r, c) - f * s;
                self.set(r, c, v);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows form a basis of `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, Rational::one());
            for (i, &p) in pivots.iter().enumerate() {
                out.set(k, p, -r.get(i, f));
            }
        }
        out
    }

    /// Indices of a maximal independent set of rows, lexicographically first.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().1
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::MismatchedShape { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // clear denominators row by row
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let l = denominator_lcm(self.row(r));
            m.push(self.row(r).iter().map(|x| (x * &l).to_integer()).collect());
            scale *= l;
        }
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = !sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v.div_floor(&prev);
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut d = m[n - 1][n - 1].clone();
        if sign {
            d = -d;
        }
        Ok(Rational::new(d, scale))
    }

    pub fn submatrix_det(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        if rows.len() != cols.len() {
            return Err(Error::MismatchedShape { rows: rows.len(), cols: cols.len() });
        }
        self.select(rows, cols).det()
    }

    /// Solves a square nonsingular system; `None` if singular.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, n + 1);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n, rhs[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() != n || pivots.last() == Some(&n) {
            return None;
        }
        Some((0..n).map(|r| red.get(r, n).clone()).collect())
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |r, c| to_f64(self.get(r, c)))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect()
    }

    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RationalMatrix::from_rows(parsed).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;
    use proptest::prelude::*;

    fn k23() -> RationalMatrix {
        RationalMatrix::from_i64(&[
            &[1, 1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 1, 1],
            &[1, 0, 0, 1, 0, 0],
            &[0, 1, 0, 0, 1, 0],
            &[0, 0, 1, 0, 0, 1],
        ])
    }

    fn cofactor_det(m: &RationalMatrix) -> Rational {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = cofactor_det(&m.select(&rows, &cols));
            let term = m.get(0, j) * minor;
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(small_rational(), rows * cols)
            .prop_map(move |v| RationalMatrix::new(rows, cols, v).unwrap())
    }

    fn is_rref(r: &RationalMatrix, pivots: &[usize]) -> bool {
        for (i, &p) in pivots.iter().enumerate() {
            if !r.get(i, p).is_one() {
                return false;
            }
            if (0..r.rows()).any(|k| k != i && !r.get(k, p).is_zero()) {
                return false;
            }
            if (0..p).any(|c| !r.get(i, c).is_zero()) {
                return false;
            }
        }
        pivots.windows(2).all(|w| w[0] < w[1])
            && (pivots.len()..r.rows()).all(|i| r.row(i).iter().all(Zero::is_zero))
    }

    #[test]
    fn identity_rref() {
        let (r, p) = RationalMatrix::identity(3).rref();
        assert_eq!(r, RationalMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn k23_has_rank_four() {
        assert_eq!(k23().rank(), 4);
        assert_eq!(k23().independent_rows().len(), 4);
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let k = RationalMatrix::from_i64(&[&[1, 1, 1]]).kernel_basis();
        assert_eq!(k.rows(), 2);
        for r in 0..2 {
            assert!(k.row(r).iter().sum::<Rational>().is_zero());
        }
    }

    #[test]
    fn kernel_matches_disjoint_support_example() {
        let a = RationalMatrix::from_i64(&[&[1, -1, 0, 0], &[0, 1, 1, -1]]);
        let k = a.kernel_basis();
        let given = RationalMatrix::from_i64(&[&[1, 1, 0, 1], &[0, 0, 1, 1]]);
        assert_eq!(k.rank(), 2);
        assert_eq!(k.vstack(&given).rank(), 2);
        assert_eq!(k.push_row(&[rat(0), rat(0), rat(1), rat(1)]).rank(), 2);
        assert!(a.mul(&given.transpose()).is_zero());
    }

    #[test]
    fn k23_first_four_columns_independent() {
        let m = k23();
        let rows = m.independent_rows();
        assert!(!m.submatrix_det(&rows, &[0, 1, 2, 3]).unwrap().is_zero());
    }

    #[test]
    fn one_by_one_det_and_shape_error() {
        let m = RationalMatrix::from_i64(&[&[2, 7], &[3, 5]]);
        assert_eq!(m.submatrix_det(&[1], &[0]).unwrap(), rat(3));
        assert_eq!(
            m.submatrix_det(&[0, 1], &[0]),
            Err(Error::MismatchedShape { rows: 2, cols: 1 })
        );
    }

    proptest! {
        #[test]
        fn rref_is_transform_of_input(m in matrix(3, 5)) {
            let (r, pivots, e) = m.rref_with_transform();
            prop_assert_eq!(e.mul(&m), r.clone());
            prop_assert!(!e.det().unwrap().is_zero());
            prop_assert!(is_rref(&r, &pivots));
        }

        #[test]
        fn kernel_rows_annihilated(m in matrix(2, 5)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.rows(), 5 - m.rank());
            for r in 0..k.rows() {
                prop_assert!(m.mul_vec(k.row(r)).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn det_matches_cofactor_expansion(m in matrix(4, 4)) {
            prop_assert_eq!(m.submatrix_det(&[0, 2, 3], &[1, 2, 3]).unwrap(),
                cofactor_det(&m.select(&[0, 2, 3], &[1, 2, 3])));
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn rank_equals_transpose_rank(m in matrix(4, 6)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn det_alternates_under_column_swap(m in matrix(3, 3)) {
            let a = m.submatrix_det(&[0, 1, 2], &[0, 1, 2]).unwrap();
            let b = m.submatrix_det(&[0, 1, 2], &[1, 0, 2]).unwrap();
            prop_assert_eq!(a, -b);
        }

        #[test]
        fn permutation_invariance(m in matrix(3, 4)) {
            let rows = [2usize, 0, 1];
            let cols = [3usize, 1, 0, 2];
            let p = m.select(&rows, &cols);
            prop_assert_eq!(p.rank(), m.rank());
            let k = p.kernel_basis();
            // undo the column permutation on the kernel vectors
            let mut back = RationalMatrix::zeros(k.rows(), 4);
            for r in 0..k.rows() {
                for (j, &c) in cols.iter().enumerate() {
                    back.set(r, c, k.get(r, j).clone());
                }
            }
            let mk = m.kernel_basis();
            prop_assert_eq!(back.vstack(&mk).rank(), mk.rows());
            prop_assert_eq!(p.select(&[0, 1, 2], &[0, 1, 2]).det().unwrap().abs(),
                m.select(&[0, 1, 2], &[0, 1, 3]).det().unwrap().abs());
        }
    }
}
