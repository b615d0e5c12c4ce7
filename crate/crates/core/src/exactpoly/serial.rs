//! Canonical serialization of [`VolumePolynomial`].
//!
//! JSON: `{"g":1,"n":1,"terms":[{"exps":[0],"pi_pow":2,"coeff":"1/12"},…]}`, terms
//! sorted by exponent vector then π-exponent, no whitespace, trailing newline.
//! Parsing rejects anything that would not re-serialize to the same bytes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::piscalar::{write_coeff_pi, PiScalar};
use super::poly::{Monomial, VolumePolynomial};
use super::rational::{format_pq, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDoc {
    g: u32,
    n: usize,
    terms: Vec<TermDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    exps: Vec<u32>,
    pi_pow: u32,
    coeff: String,
}

impl VolumePolynomial {
    pub fn to_canonical_json(&self) -> String {
        let terms = self
            .terms()
            .flat_map(|(m, c)| {
                c.terms().map(move |(k, q)| TermDoc {
                    exps: m.clone(),
                    pi_pow: 2 * k,
                    coeff: format_pq(q),
                })
            })
            .collect();
        let doc = PolyDoc {
            g: self.genus(),
            n: self.nvars(),
            terms,
        };
        let mut out = serde_json::to_string(&doc).expect("polynomial documents always serialize");
        out.push('\n');
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_canonical_json()).expect("canonical JSON parses")
    }

    pub fn from_canonical_json(text: &str) -> Result<Self> {
        let doc: PolyDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut terms: BTreeMap<Monomial, PiScalar> = BTreeMap::new();
        let mut previous: Option<(Vec<u32>, u32)> = None;
        for term in doc.terms {
            if term.exps.len() != doc.n {
                return Err(Error::Parse(format!(
                    "term has {} exponents, expected {}",
                    term.exps.len(),
                    doc.n
                )));
            }
            if term.pi_pow % 2 != 0 {
                return Err(Error::Parse(format!("odd π exponent {}", term.pi_pow)));
            }
            let coeff = parse_rational(&term.coeff)?;
            if coeff.is_zero() {
                return Err(Error::Parse("stored zero coefficient".into()));
            }
            let key = (term.exps.clone(), term.pi_pow);
            if previous.as_ref().is_some_and(|p| *p >= key) {
                return Err(Error::Parse("terms are not in canonical order".into()));
            }
            previous = Some(key);
            terms
                .entry(term.exps)
                .or_default()
                .add_term(&coeff, term.pi_pow / 2);
        }
        let poly = VolumePolynomial::from_terms(doc.g, doc.n, terms)?;
        if poly.to_canonical_json() != text {
            return Err(Error::Parse("input is not in canonical form".into()));
        }
        Ok(poly)
    }

    /// Human-readable form with symmetric orbits grouped, e.g.
    /// `(1/2)·(L1^2+L2^2+L3^2+L4^2) + 2·π^2`. Terms are ordered by decreasing
    /// degree in the lengths.
    pub fn render_text(&self) -> String {
        TextForm(self).to_string()
    }
}

struct TextForm<'a>(&'a VolumePolynomial);

/// A group of monomials that share a coefficient and an exponent multiset.
struct Orbit {
    coeff: Rational,
    half_exp: u32,
    monomials: Vec<Monomial>,
}

impl TextForm<'_> {
    fn orbits(&self) -> Vec<Orbit> {
        // key: (sorted exponent pattern, π half-exponent, coefficient)
        let mut groups: BTreeMap<(Vec<u32>, u32, String), Orbit> = BTreeMap::new();
        for (m, c) in self.0.terms() {
            let mut pattern = m.clone();
            pattern.sort_unstable_by(|a, b| b.cmp(a));
            for (k, q) in c.terms() {
                let key = (pattern.clone(), k, format_pq(q));
                groups
                    .entry(key)
                    .or_insert_with(|| Orbit {
                        coeff: q.clone(),
                        half_exp: k,
                        monomials: Vec::new(),
                    })
                    .monomials
                    .push(m.clone());
            }
        }
        let mut orbits: Vec<Orbit> = groups.into_values().collect();
        for o in &mut orbits {
            o.monomials.sort_by(|a, b| b.cmp(a));
        }
        orbits.sort_by(|a, b| {
            let da: u32 = a.monomials[0].iter().sum();
            let db: u32 = b.monomials[0].iter().sum();
            db.cmp(&da)
                .then(b.half_exp.cmp(&a.half_exp))
                .then(b.monomials[0].cmp(&a.monomials[0]))
        });
        orbits
    }
}

fn monomial_text(m: &[u32]) -> String {
    let factors: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(j, e)| format!("L{}^{}", j + 1, 2 * e))
        .collect();
    factors.join("·")
}

impl fmt::Display for TextForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orbits = self.orbits();
        if orbits.is_empty() {
            return write!(f, "0");
        }
        for (i, orbit) in orbits.iter().enumerate() {
            let negative = orbit.coeff.is_negative();
            if i > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let magnitude = orbit.coeff.abs();
            let is_constant = orbit.monomials[0].iter().all(|e| *e == 0);
            if is_constant {
                write_coeff_pi(f, &magnitude, orbit.half_exp)?;
                continue;
            }
            let mut body = String::new();
            if orbit.monomials.len() == 1 {
                body.push_str(&monomial_text(&orbit.monomials[0]));
            } else {
                body.push('(');
                for (j, m) in orbit.monomials.iter().enumerate() {
                    if j > 0 {
                        body.push('+');
                    }
                    let _ = write!(body, "{}", monomial_text(m));
                }
                body.push(')');
            }
            if magnitude.is_one() && orbit.half_exp == 0 {
                f.write_str(&body)?;
            } else {
                write_coeff_pi(f, &magnitude, orbit.half_exp)?;
                write!(f, "·{body}")?;
            }
        }
        Ok(())
    }
}
