use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{Bits, Matroid};

/// Integer bivariate polynomial sum t_ij x^i y^j.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TuttePolynomial {
    coeffs: BTreeMap<(usize, usize), u64>,
}

#[derive(Serialize)]
struct Term {
    x: usize,
    y: usize,
    coeff: u64,
}

impl Serialize for TuttePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&(x, y), &coeff)| Term { x, y, coeff })
            .collect();
        terms.serialize(s)
    }
}

impl TuttePolynomial {
    fn one() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), 1);
        TuttePolynomial { coeffs }
    }

    fn shifted(&self, dx: usize, dy: usize) -> Self {
        TuttePolynomial {
            coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((i + dx, j + dy), c)).collect(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, &c) in &other.coeffs {
            *coeffs.entry(k).or_insert(0) += c;
        }
        TuttePolynomial { coeffs }
    }

    pub fn coefficient(&self, i: usize, j: usize) -> u64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.coeffs
            .iter()
            .map(|(&(i, j), &c)| c as i128 * x.pow(i as u32) * y.pow(j as u32))
            .sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }
}

/// Deletion-contraction on the bases, memoized on (ground set, bases).
pub fn tutte_polynomial(m: &Matroid) -> TuttePolynomial {
    let mut memo = HashMap::new();
    recurse(m.full_set(), m.bases().to_vec(), &mut memo)
}

fn recurse(
    ground: Bits,
    bases: Vec<Bits>,
    memo: &mut HashMap<(Bits, Vec<Bits>), TuttePolynomial>,
) -> TuttePolynomial {
    if ground == 0 {
        return TuttePolynomial::one();
    }
    let key = (ground, bases);
    if let Some(t) = memo.get(&key) {
        return t.clone();
    }
    let (ground, bases) = key;
    let e = 63 - ground.leading_zeros() as usize;
    let bit = 1 << e;
    let rest = ground & !bit;
    let with: Vec<Bits> = bases.iter().filter(|&&b| b & bit != 0).map(|&b| b & !bit).collect();
    let without: Vec<Bits> = bases.iter().filter(|&&b| b & bit == 0).copied().collect();
    let result = if with.is_empty() {
        recurse(rest, without, memo).shifted(0, 1)
    } else if without.is_empty() {
        recurse(rest, with, memo).shifted(1, 0)
    } else {
        let mut with = with;
        with.sort_unstable();
        recurse(rest, without, memo).add(&recurse(rest, with, memo))
    };
    memo.insert((ground, bases), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_parallel_elements() {
        // U_{1,2}: T = x + y
        let t = tutte_polynomial(&Matroid::uniform(1, 2));
        assert_eq!(t.coefficient(1, 0), 1);
        assert_eq!(t.coefficient(0, 1), 1);
        assert_eq!(t.terms().count(), 2);
    }

    #[test]
    fn u56_reversed_row_is_all_ones() {
        // z^5 T(1/z, 0) = 1 + z + ... + z^4
        let t = tutte_polynomial(&Matroid::uniform(5, 6));
        for k in 0..5 {
            assert_eq!(t.coefficient(5 - k, 0), 1);
        }
        assert_eq!(t.eval(1, 1), 6);
    }

    #[test]
    fn loops_and_coloops() {
        let m = Matroid::from_bases(2, vec![0b01]).unwrap();
        let t = tutte_polynomial(&m);
        assert_eq!(t.coefficient(1, 1), 1);
        assert_eq!(t.terms().count(), 1);
    }
}
