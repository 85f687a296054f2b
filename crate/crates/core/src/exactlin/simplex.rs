//! Exact two-phase simplex with Bland's rule for `min c.x, Ax = b, x >= 0`.

use num_traits::{One, Signed, Zero};

use super::{RationalMatrix, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.resize(self.width + 1, Rational::zero());
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.rows[i]) {
                *o -= cb * t;
            }
        }
        self.obj = obj;
    }

    /// Runs Bland's rule over columns `< allowed`; returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let rhs = self.rhs();
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

pub fn minimize(a: &RationalMatrix, b: &[Rational], c: &[Rational]) -> LpOutcome {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = a.row(i).iter().map(|v| if flip { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        row.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, obj: Vec::new(), basis: (n..n + m).collect(), width };

    let phase1: Vec<Rational> = (0..width)
        .map(|j| if j >= n { Rational::one() } else { Rational::zero() })
        .collect();
    t.set_objective(&phase1);
    t.optimize(width);
    if !t.obj[width].is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in t.rows.iter_mut() {
        let rhs = row[width].clone();
        row.truncate(n);
        row.push(rhs);
    }
    t.width = n;
    t.set_objective(c);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rows[i][n].clone();
    }
    let value = super::dot(c, &x);
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    #[test]
    fn small_optimum() {
        // min -x1 - x2 with x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
        let a = RationalMatrix::from_i64(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let out = minimize(&a, &[rat(4), rat(6)], &[rat(-1), rat(-1), rat(0), rat(0)]);
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, ratio(-14, 5));
                assert_eq!(&x[..2], &[ratio(8, 5), ratio(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = RationalMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(minimize(&a, &[rat(-1)], &[rat(0), rat(0)]), LpOutcome::Infeasible);
        let a = RationalMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(minimize(&a, &[rat(1)], &[rat(0), rat(-1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = RationalMatrix::from_i64(&[&[1, 1, 0], &[2, 2, 0], &[0, 1, 1]]);
        let out = minimize(&a, &[rat(1), rat(2), rat(1)], &[rat(1), rat(0), rat(0)]);
        assert_eq!(out.optimal_value(), Some(&rat(0)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook largest-coefficient rule
        let a = RationalMatrix::new(
            3,
            7,
            vec![
                ratio(1, 4), rat(-8), rat(-1), rat(9), rat(1), rat(0), rat(0),
                ratio(1, 2), rat(-12), ratio(-1, 2), rat(3), rat(0), rat(1), rat(0),
                rat(0), rat(0), rat(1), rat(0), rat(0), rat(0), rat(1),
            ],
        )
        .unwrap();
        let c = [ratio(-3, 4), rat(20), ratio(-1, 2), rat(6), rat(0), rat(0), rat(0)];
        let out = minimize(&a, &[rat(0), rat(0), rat(1)], &c);
        assert_eq!(out.optimal_value(), Some(&ratio(-5, 4)));
    }
}
