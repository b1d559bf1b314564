//! Wire format for polynomials:
//! `{"m": 4, "vars": ["C1", …, "C5", "y"], "terms": [{"c": "3/1", "e": [2, 0, 0, 0, 0, 0]}]}`.
//! Exponent vectors follow the `vars` listing; terms are in descending ring order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{c_slot, Monomial};
use super::polynomial::Polynomial;
use super::rational;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct PolyJson {
    m: u32,
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: String,
    e: Vec<u32>,
}

pub fn var_names(m: u32) -> Vec<String> {
    (1..=m + 1)
        .map(|k| format!("C{k}"))
        .chain(std::iter::once("y".to_string()))
        .collect()
}

fn to_json(p: &Polynomial) -> PolyJson {
    let m = p.m();
    PolyJson {
        m,
        vars: var_names(m),
        terms: p
            .terms()
            .map(|(mono, c)| {
                let mut e: Vec<u32> = (1..=m + 1).map(|k| mono.exp_c(k)).collect();
                e.push(mono.exp_y());
                TermJson {
                    c: rational::to_wire(c),
                    e,
                }
            })
            .collect(),
    }
}

fn from_json(doc: PolyJson) -> Result<Polynomial> {
    let m = doc.m;
    if doc.vars != var_names(m) {
        return Err(Error::Parse(format!(
            "variable list does not match m = {m}"
        )));
    }
    let n = m as usize + 2;
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in doc.terms {
        if t.e.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.e.len(),
            });
        }
        let c = rational::from_wire(&t.c)?;
        if rational::is_zero(&c) {
            return Err(Error::Parse("zero coefficient stored in polynomial".into()));
        }
        let mut exps = vec![0; n];
        for k in 1..=m + 1 {
            exps[c_slot(m, k)] = t.e[k as usize - 1];
        }
        exps[n - 1] = t.e[n - 1];
        terms.push((Monomial::from_exponents(exps)?, c));
    }
    let count = terms.len();
    let p = Polynomial::from_terms(m, terms)?;
    if p.len() != count {
        return Err(Error::Parse("duplicate monomials in polynomial".into()));
    }
    Ok(p)
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        from_json(PolyJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn e1_wire_form() {
        let p = &Polynomial::c(4, 1).pow(2).unwrap().scale(&int(3))
            + &Polynomial::c(4, 3).scale(&int(3));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"m":4,"vars":["C1","C2","C3","C4","C5","y"],"terms":[{"c":"3/1","e":[0,0,1,0,0,0]},{"c":"3/1","e":[2,0,0,0,0,0]}]}"#
        );
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn rejects_malformed() {
        let dup = r#"{"m":4,"vars":["C1","C2","C3","C4","C5","y"],"terms":[{"c":"1/1","e":[1,0,0,0,0,0]},{"c":"1/1","e":[1,0,0,0,0,0]}]}"#;
        assert!(serde_json::from_str::<Polynomial>(dup).is_err());
        let zero = r#"{"m":4,"vars":["C1","C2","C3","C4","C5","y"],"terms":[{"c":"0/1","e":[1,0,0,0,0,0]}]}"#;
        assert!(serde_json::from_str::<Polynomial>(zero).is_err());
        let vars = r#"{"m":4,"vars":["C1","y"],"terms":[]}"#;
        assert!(serde_json::from_str::<Polynomial>(vars).is_err());
        let short =
            r#"{"m":4,"vars":["C1","C2","C3","C4","C5","y"],"terms":[{"c":"1/1","e":[1,0]}]}"#;
        assert!(serde_json::from_str::<Polynomial>(short).is_err());
    }
}
