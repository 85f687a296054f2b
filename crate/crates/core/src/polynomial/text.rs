//! Parser for the canonical text form `p/q*x1^a*x2^b + ...`.

use num_traits::One;

use super::sparse::{parse_coefficient, SparsePolynomial};
use crate::error::{Error, Result};
use crate::exactlin::Rational;

fn parse_term(text: &str, vars: &[String]) -> Result<(Vec<u32>, Rational)> {
    let err = |m: &str| Error::ParsePolynomial(format!("{m} in term {text:?}"));
    let mut coeff = Rational::one();
    let mut e = vec![0u32; vars.len()];
    for (k, factor) in text.split('*').enumerate() {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(err("empty factor"));
        }
        if factor.as_bytes()[0].is_ascii_digit() {
            if k != 0 {
                return Err(err("coefficient must come first"));
            }
            coeff = parse_coefficient(factor)?;
            continue;
        }
        let (name, power) = match factor.split_once('^') {
            Some((n, p)) => (n.trim(), p.trim().parse::<u32>().map_err(|_| err("bad exponent"))?),
            None => (factor, 1),
        };
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| err(&format!("unknown variable {name:?}")))?;
        e[i] += power;
    }
    Ok((e, coeff))
}

pub fn parse(text: &str, vars: &[String]) -> Result<SparsePolynomial> {
    let mut p = SparsePolynomial::zero(vars);
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "0" {
        return Ok(p);
    }
    if s.is_empty() {
        return Err(Error::ParsePolynomial("empty input".into()));
    }
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut negative = false;
    if bytes[0] == b'-' || bytes[0] == b'+' {
        negative = bytes[0] == b'-';
        start = 1;
    }
    let mut i = start;
    loop {
        let at_end = i == bytes.len();
        if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^') {
            let (e, c) = parse_term(&s[start..i], vars)?;
            p.add_term(e, if negative { -c } else { c });
            if at_end {
                break;
            }
            negative = bytes[i] == b'-';
            start = i + 1;
        }
        i += 1;
    }
    Ok(p)
}
