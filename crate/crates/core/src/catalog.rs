//! Instance files and the built-in example instances.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::arrangement::LpInstance;
use crate::error::{Error, Result};
use crate::exactlin::{parse_rational, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    #[serde(rename = "A", deserialize_with = "rational_rows")]
    pub a: Vec<Vec<String>>,
    #[serde(deserialize_with = "rational_strings")]
    pub b: Vec<String>,
    #[serde(deserialize_with = "rational_strings")]
    pub c: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// Entries are checked while parsing so that errors carry a line and column.
fn rational_strings<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    for s in &v {
        parse_rational(s).map_err(D::Error::custom)?;
    }
    Ok(v)
}

fn rational_rows<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<String>>, D::Error> {
    let v = Vec::<Vec<String>>::deserialize(d)?;
    for s in v.iter().flatten() {
        parse_rational(s).map_err(D::Error::custom)?;
    }
    Ok(v)
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

impl InstanceFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn matrix(&self) -> Result<RationalMatrix> {
        let rows = self.a.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_rows(rows)
    }

    pub fn to_instance(&self) -> Result<LpInstance> {
        let a = self.matrix()?;
        if a.rows() == 0 {
            return Err(Error::InvalidInstance("A has no rows".into()));
        }
        LpInstance::new(a, parse_all(&self.b)?, parse_all(&self.c)?)
    }

    /// Sign vectors listed in the file, validated against n.
    pub fn sign_vectors(&self, n: usize) -> Result<Vec<Vec<i8>>> {
        self.signs
            .iter()
            .flatten()
            .map(|s| parse_signs(s, n))
            .collect()
    }
}

pub fn parse_signs(s: &str, n: usize) -> Result<Vec<i8>> {
    let v: Vec<i8> = s
        .chars()
        .map(|ch| match ch {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(Error::InvalidInstance(format!("bad sign character {ch:?} in {s:?}"))),
        })
        .collect::<Result<_>>()?;
    if v.len() != n {
        return Err(Error::InvalidInstance(format!("sign vector {s:?} has length {} not {n}", v.len())));
    }
    Ok(v)
}

pub fn format_signs(sign: &[i8]) -> String {
    sign.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn file(name: &str, a: &[&[&str]], b: &[&str], c: &[&str], notes: &str) -> InstanceFile {
    InstanceFile {
        name: name.to_string(),
        a: a.iter().map(|r| strs(r)).collect(),
        b: strs(b),
        c: strs(c),
        signs: None,
        notes: (!notes.is_empty()).then(|| notes.to_string()),
    }
}

const K23: [&[&str]; 5] = [
    &["1", "1", "1", "0", "0", "0"],
    &["0", "0", "0", "1", "1", "1"],
    &["1", "0", "0", "1", "0", "0"],
    &["0", "1", "0", "0", "1", "0"],
    &["0", "0", "1", "0", "0", "1"],
];

pub const BUILTIN_NAMES: [&str; 9] = [
    "dtz-snake",
    "hexagon",
    "hexagon-prime",
    "klee-minty",
    "moment-curve-2x5",
    "disjoint-support",
    "heptagon",
    "simplex",
    "identity2",
];

pub fn builtin(name: &str) -> Option<InstanceFile> {
    let f = match name {
        "dtz-snake" => file(
            name,
            &[
                &["0", "-1", "1", "-1", "1", "-1"],
                &["-1", "1/10", "1/3", "100/11", "1000/11", "10000/11"],
            ],
            &["0", "1"],
            &["-1", "-1/2", "-1/3", "-449989/990000", "-359989/792000", "-299989/660000"],
            "Six-constraint snake; the polygon {y : A^T y >= c} is the all-positive region of the slacks.",
        ),
        "hexagon" => file(
            name,
            &K23,
            &["3", "3", "2", "2", "2"],
            &["0", "0", "0", "0", "1", "3"],
            "K_{2,3} transportation problem; see hexagon-prime for the cost (0,0,0,0,1,2).",
        ),
        "hexagon-prime" => file(
            name,
            &K23,
            &["3", "3", "2", "2", "2"],
            &["0", "0", "0", "0", "1", "2"],
            "K_{2,3} transportation problem with a cost whose central path is a straight segment.",
        ),
        "klee-minty" => file(
            name,
            &[
                &["1", "1", "0", "0", "0", "0"],
                &["1/5", "0", "1", "1", "0", "0"],
                &["1/50", "0", "1/5", "0", "1", "1"],
            ],
            &["1", "1", "1"],
            &["1", "3", "7", "15", "31", "63"],
            "Klee-Minty cube in 3-space with epsilon = 1/10.",
        ),
        "moment-curve-2x5" => file(
            name,
            &[&["1", "1", "1", "1", "1"], &["0", "1", "2", "3", "4"]],
            &["5", "7"],
            &["2", "-1", "3", "1", "-2"],
            "Moment-curve matrix with n = 5, d = 2.",
        ),
        "disjoint-support" => file(
            name,
            &[&["1", "-1", "0", "0"], &["0", "1", "1", "-1"]],
            &["1", "2"],
            &["1", "2", "3", "5"],
            "Non-generic matrix whose disjoint support variety is a single point.",
        ),
        "heptagon" => file(
            name,
            &[
                &["1", "3/5", "-5/13", "-4/5", "-3/5", "5/13", "4/5"],
                &["0", "4/5", "12/13", "3/5", "-4/5", "-12/13", "-3/5"],
            ],
            &["2/7", "1"],
            &["-1", "-1", "-1", "-1", "-1", "-1", "-1"],
            "Planar dual instance whose feasible polygon is a heptagon.",
        ),
        "simplex" => file(name, &[&["1", "1", "1"]], &["1"], &["1", "2", "3"], "Standard triangle."),
        "identity2" => file(name, &[&["1", "0"], &["0", "1"]], &["1", "2"], &["1", "1"], "A single point."),
        _ => return None,
    };
    Some(f)
}
