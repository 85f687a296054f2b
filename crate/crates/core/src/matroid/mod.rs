//! Linear matroids over the rationals and the invariants attached to them.

mod complex;
mod report;
mod tutte;

pub use complex::{broken_circuit_fvector, h_vector, h_vector_from_f};
pub use report::{invariant_report, InvariantReport, PiMultiple, SideInvariants};
pub use tutte::{tutte_polynomial, TuttePolynomial};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::RationalMatrix;

pub type Bits = u64;

pub fn bits_of(set: &[usize]) -> Bits {
    set.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn elements(mut mask: Bits) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// All k-subsets of {0..n} as bitmasks, in lexicographic order of their sorted element lists.
pub fn k_subsets(n: usize, k: usize) -> Vec<Bits> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(bits_of(&idx));
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matroid {
    ground_size: usize,
    rank: usize,
    bases: Vec<Bits>,
}

impl Matroid {
    /// Bases must be nonempty, equicardinal and inside the ground set.
    pub fn from_bases(ground_size: usize, mut bases: Vec<Bits>) -> Result<Self> {
        bases.sort_unstable();
        bases.dedup();
        let Some(&first) = bases.first() else {
            return Err(Error::InternalInconsistency("matroid without bases".into()));
        };
        let rank = first.count_ones() as usize;
        let full: Bits = if ground_size == 64 { !0 } else { (1 << ground_size) - 1 };
        if bases.iter().any(|&b| b.count_ones() as usize != rank || b & !full != 0) {
            return Err(Error::InternalInconsistency("malformed bases".into()));
        }
        Ok(Matroid { ground_size, rank, bases })
    }

    pub fn uniform(rank: usize, n: usize) -> Self {
        Matroid::from_bases(n, k_subsets(n, rank)).expect("uniform bases")
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Bits] {
        &self.bases
    }

    pub fn is_basis(&self, set: Bits) -> bool {
        self.bases.binary_search(&set).is_ok()
    }

    pub fn rank_of(&self, set: Bits) -> usize {
        self.bases.iter().map(|b| (b & set).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn is_independent(&self, set: Bits) -> bool {
        self.bases.iter().any(|b| b & set == set)
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() as u64 == binomial(self.ground_size as u64, self.rank as u64)
    }

    pub fn loops(&self) -> Bits {
        let union = self.bases.iter().fold(0, |m, b| m | b);
        self.full_set() & !union
    }

    pub fn full_set(&self) -> Bits {
        if self.ground_size == 64 {
            !0
        } else {
            (1 << self.ground_size) - 1
        }
    }
}

/// Column matroid of `m`: bases are the column sets on which the rank is attained.
pub fn matroid_from_matrix(m: &RationalMatrix) -> Result<Matroid> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let n = m.cols();
    if n > 63 {
        return Err(Error::LimitExceeded { n, limit: 63 });
    }
    let reduced = m.select_rows(&m.independent_rows());
    let r = reduced.rows();
    let rows: Vec<usize> = (0..r).collect();
    let candidates = k_subsets(n, r);
    let bases: Vec<Bits> = candidates
        .par_iter()
        .filter(|&&s| {
            let cols = elements(s);
            !reduced.submatrix_det(&rows, &cols).expect("square").is_zero()
        })
        .copied()
        .collect();
    Matroid::from_bases(n, bases)
}

/// Minimal dependent sets, sorted lexicographically as element lists.
pub fn circuits(m: &Matroid) -> Vec<Vec<usize>> {
    let mut found: Vec<Bits> = Vec::new();
    for k in 1..=(m.rank() + 1).min(m.ground_size()) {
        for s in k_subsets(m.ground_size(), k) {
            if m.is_independent(s) {
                continue;
            }
            if found.iter().any(|&c| c & s == c) {
                continue;
            }
            found.push(s);
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().map(elements).collect();
    out.sort();
    out
}

pub fn dual(m: &Matroid) -> Matroid {
    let full = m.full_set();
    Matroid::from_bases(m.ground_size(), m.bases().iter().map(|b| full & !b).collect())
        .expect("complements of bases")
}

pub fn mobius_number(m: &Matroid) -> Result<u64> {
    Ok(h_vector(m)?.iter().sum())
}
