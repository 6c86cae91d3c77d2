//! JSON form of [`Expression`] with exact rational strings.
//!
//! ```json
//! {"n": 2, "terms": [{"coeff": ["1/1", "0/1"], "x": [1, 0], "z": [0, 0],
//!   "denom": [[0, 1, 1]], "tag": {"kind": "none"}}]}
//! ```
//!
//! `zdenom` carries `(z_i - z_j)` denominators and is omitted when empty.

use num_complex::Complex;
use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

use super::expression::Expression;
use super::numbers::{format_rational, parse_rational};
use super::permutation::Permutation;
use super::term::{DiffDenominator, ExponentialTag, Monomial, Term, Var};
use super::MAX_N;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
enum TagJson {
    None,
    PlaneWave { perm: Vec<usize> },
    Gaussian { rate: String },
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: [String; 2],
    x: Vec<i32>,
    z: Vec<i32>,
    denom: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    zdenom: Vec<[u32; 3]>,
    tag: TagJson,
}

#[derive(Serialize, Deserialize)]
struct ExpressionJson {
    n: usize,
    terms: Vec<TermJson>,
}

fn pairs_json(d: &DiffDenominator, family: Var) -> Vec<[u32; 3]> {
    d.pairs(family)
        .map(|(i, j, p)| [i as u32, j as u32, p])
        .collect()
}

fn to_json(e: &Expression) -> ExpressionJson {
    let n = e.n();
    let terms = e
        .terms()
        .iter()
        .map(|t| TermJson {
            coeff: [format_rational(&t.coeff.re), format_rational(&t.coeff.im)],
            x: t.mono.x[..n].to_vec(),
            z: t.mono.z[..n].to_vec(),
            denom: pairs_json(&t.denom, Var::X),
            zdenom: pairs_json(&t.denom, Var::Z),
            tag: match t.tag {
                ExponentialTag::None => TagJson::None,
                ExponentialTag::PlaneWave(p) => TagJson::PlaneWave { perm: p.images() },
                ExponentialTag::Gaussian(c) => TagJson::Gaussian {
                    rate: format!("{}/{}", c.numer(), c.denom()),
                },
            },
        })
        .collect();
    ExpressionJson { n, terms }
}

fn parse_exps(v: &[i32], n: usize) -> Result<[i32; MAX_N]> {
    if v.len() != n {
        return Err(Error::Parse(format!(
            "exponent list has length {}, expected {n}",
            v.len()
        )));
    }
    let mut out = [0; MAX_N];
    out[..n].copy_from_slice(v);
    Ok(out)
}

fn parse_pairs(d: &mut DiffDenominator, family: Var, pairs: &[[u32; 3]], n: usize) -> Result<()> {
    for &[i, j, p] in pairs {
        let (i, j) = (i as usize, j as usize);
        if i >= j || j >= n {
            return Err(Error::Parse(format!("bad denominator pair ({i}, {j})")));
        }
        if p == 0 || d.power(family, i, j) != 0 {
            return Err(Error::Parse(format!(
                "non-canonical denominator entry ({i}, {j}, {p})"
            )));
        }
        d.set_power(family, i, j, p);
    }
    Ok(())
}

fn from_json(j: ExpressionJson) -> Result<Expression> {
    let n = j.n;
    if n > MAX_N {
        return Err(Error::TooManyParticles { n, max: MAX_N });
    }
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in j.terms {
        let re = parse_rational(&t.coeff[0])
            .ok_or_else(|| Error::Parse(format!("bad rational {}", t.coeff[0])))?;
        let im = parse_rational(&t.coeff[1])
            .ok_or_else(|| Error::Parse(format!("bad rational {}", t.coeff[1])))?;
        let mono = Monomial {
            x: parse_exps(&t.x, n)?,
            z: parse_exps(&t.z, n)?,
        };
        let mut denom = DiffDenominator::one();
        parse_pairs(&mut denom, Var::X, &t.denom, n)?;
        parse_pairs(&mut denom, Var::Z, &t.zdenom, n)?;
        let tag = match t.tag {
            TagJson::None => ExponentialTag::None,
            TagJson::PlaneWave { perm } => {
                ExponentialTag::PlaneWave(Permutation::from_images(&perm)?)
            }
            TagJson::Gaussian { rate } => {
                let q = parse_rational(&rate)
                    .ok_or_else(|| Error::Parse(format!("bad rate {rate}")))?;
                let num = i64::try_from(q.numer().clone())
                    .map_err(|_| Error::Parse("rate too large".into()))?;
                let den = i64::try_from(q.denom().clone())
                    .map_err(|_| Error::Parse("rate too large".into()))?;
                ExponentialTag::gaussian(Rational64::new(num, den))
            }
        };
        terms.push(Term {
            coeff: Complex::new(re, im),
            mono,
            denom,
            tag,
        });
    }
    Expression::from_terms(n, terms)
}

impl Serialize for Expression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ExpressionJson::deserialize(d)?;
        from_json(j).map_err(serde::de::Error::custom)
    }
}
