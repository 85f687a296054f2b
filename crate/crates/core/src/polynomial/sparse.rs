use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, primitive_integer_vector, to_f64, Rational};

pub type Exponents = Vec<u32>;

/// Graded order with x1 < x2 < ...: total degree first, then the exponent of
/// the last variable, then the one before it, and so on.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Multivariate polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl SparsePolynomial {
    pub fn zero(vars: &[String]) -> Self {
        SparsePolynomial { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn variable(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, Rational::one());
        p
    }

    /// sum_i coeffs[i] * x_i + constant
    pub fn linear(vars: &[String], coeffs: &[Rational], constant: Rational) -> Self {
        let mut p = Self::constant(vars, constant);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    /// Terms sorted from the largest monomial down.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut p = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.vars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * Rational::from_integer(BigInt::from(e[i])));
            }
        }
        p
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces variable i by `subs[i]` where given; the substitutes live over `new_vars`.
    pub fn compose(&self, new_vars: &[String], subs: &[SparsePolynomial]) -> Self {
        assert_eq!(subs.len(), self.vars.len(), "one substitute per variable");
        let mut powers: Vec<Vec<SparsePolynomial>> = subs
            .iter()
            .map(|s| vec![SparsePolynomial::constant(new_vars, Rational::one()), s.clone()])
            .collect();
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut t = SparsePolynomial::constant(new_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Integer coprime coefficients with a positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let sorted = self.sorted_terms();
        let coeffs: Vec<Rational> = sorted.iter().map(|(_, c)| (*c).clone()).collect();
        let ints = primitive_integer_vector(&coeffs);
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: sorted
                .iter()
                .zip(ints)
                .map(|((e, _), k)| ((*e).clone(), Rational::from_integer(k)))
                .collect(),
        }
    }

    pub fn equal_up_to_scalar(&self, other: &Self) -> bool {
        self.vars == other.vars && self.primitive() == other.primitive()
    }

    /// The unique k with self = k * other, if any.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        let (e, c) = other.leading_term()?;
        let k = self.coefficient(e) / c;
        (!k.is_zero() && *self == other.scale(&k)).then_some(k)
    }

    /// Adds a new first variable and homogenizes with it.
    pub fn homogenize(&self, name: &str) -> Self {
        let mut vars = vec![name.to_string()];
        vars.extend(self.vars.iter().cloned());
        let d = self.degree();
        let mut p = Self::zero(&vars);
        for (e, c) in &self.terms {
            let mut e2 = vec![d - e.iter().sum::<u32>()];
            e2.extend(e.iter().copied());
            p.add_term(e2, c.clone());
        }
        p
    }

    /// Sets the first variable to 1 and drops it.
    pub fn dehomogenize(&self) -> Self {
        let vars = self.vars[1..].to_vec();
        let mut p = Self::zero(&vars);
        for (e, c) in &self.terms {
            p.add_term(e[1..].to_vec(), c.clone());
        }
        p
    }

    pub fn coefficient_norm1(&self) -> f64 {
        self.terms.values().map(|c| to_f64(c).abs()).sum()
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), to_f64(c))).collect(),
            norm1: self.coefficient_norm1(),
            degree: self.degree(),
        }
    }

    pub fn parse(text: &str, vars: &[String]) -> Result<Self> {
        super::text::parse(text, vars)
    }
}

/// Double-precision copy for fast residual evaluation.
#[derive(Clone, Debug)]
pub struct FloatPolynomial {
    pub terms: Vec<(Exponents, f64)>,
    pub norm1: f64,
    pub degree: u32,
}

impl FloatPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        // compensated sum: generators mix terms of very different size
        let mut s = 0.0f64;
        let mut comp = 0.0f64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= v.powi(k as i32);
                }
            }
            let y = t - comp;
            let u = s + y;
            comp = (u - s) - y;
            s = u;
        }
        s
    }
}

pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn format_monomial(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mono = format_monomial(&self.vars, e);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(super) fn parse_coefficient(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|_| Error::ParsePolynomial(format!("bad coefficient {s:?}")))
}
