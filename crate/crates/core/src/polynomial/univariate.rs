//! Exact univariate arithmetic and Sturm-sequence root counting.

use num_traits::{Signed, Zero};

use crate::exactlin::{primitive_integer_vector, Rational};

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading();
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive_positive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let ints = primitive_integer_vector(&self.0);
        let mut v: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        // primitive_integer_vector fixes the sign of the first nonzero entry; keep the original sign instead
        if v.last().unwrap().is_positive() != self.leading().is_positive() {
            v.iter_mut().for_each(|c| *c = -c.clone());
        }
        Self::new(v)
    }

    pub fn monic(&self) -> Self {
        let l = self.leading();
        Self::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_positive();
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn sign_at_infinity(&self, positive: bool) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = if self.leading().is_positive() { 1 } else { -1 };
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm chain p, p', -rem, ...; each remainder is replaced by its positive
/// primitive multiple, which keeps signs and bounds coefficient growth.
pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.primitive_positive()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d.primitive_positive());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let neg = UniPoly::new(r.0.iter().map(|c| -c.clone()).collect());
        seq.push(neg.primitive_positive());
    }
    seq
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &UniPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(p);
    let lo = variations(seq.iter().map(|q| q.sign_at_infinity(false)));
    let hi = variations(seq.iter().map(|q| q.sign_at_infinity(true)));
    lo - hi
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_roots_in(p: &UniPoly, a: &Rational, b: &Rational) -> usize {
    if p.degree().unwrap_or(0) == 0 || a >= b {
        return 0;
    }
    let seq = sturm_sequence(p);
    let va = variations(seq.iter().map(|q| sign(&q.eval(a))));
    let vb = variations(seq.iter().map(|q| sign(&q.eval(b))));
    va.saturating_sub(vb)
}

/// Yun's algorithm: returns (q_1, q_2, ...) with p = const * prod q_i^i and each q_i square-free.
pub fn square_free_factors(p: &UniPoly) -> Vec<UniPoly> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).0;
    let mut c = dp.div_rem(&a0).0;
    let mut d = c_minus_bprime(&c, &b);
    loop {
        let a = b.gcd(&d);
        out.push(a.clone());
        b = b.div_rem(&a).0;
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.div_rem(&a).0;
        d = c_minus_bprime(&c, &b);
    }
    out
}

fn c_minus_bprime(c: &UniPoly, b: &UniPoly) -> UniPoly {
    let bp = b.derivative();
    let n = c.0.len().max(bp.0.len());
    UniPoly::new(
        (0..n)
            .map(|i| {
                c.0.get(i).cloned().unwrap_or_else(Rational::zero)
                    - bp.0.get(i).cloned().unwrap_or_else(Rational::zero)
            })
            .collect(),
    )
}

/// Real roots counted with multiplicity.
pub fn count_real_roots_with_multiplicity(p: &UniPoly) -> usize {
    square_free_factors(p)
        .iter()
        .enumerate()
        .map(|(i, q)| (i + 1) * count_real_roots(q))
        .sum()
}
