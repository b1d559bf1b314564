//! Dense univariate polynomials over ℚ in the auxiliary variable `t`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::rational::{self, int, Rational};
use crate::error::{Error, Result};

/// `coeffs[i]` is the coefficient of `t^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * t + rational::to_f64(c)
            })
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Domain("division by the zero polynomial".into()));
        };
        let lc = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty") / &lc;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f / gcd(f, f')`, monic. Its degree is the number of distinct roots.
    pub fn squarefree_part(&self) -> Result<UniPoly> {
        if self.is_zero() {
            return Err(Error::Degenerate(
                "squarefree part of the zero polynomial".into(),
            ));
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_rem(&g)?.0.monic())
    }

    /// Yun's algorithm: monic squarefree, pairwise coprime `a_i` with
    /// `f = lc · Π a_i^i`. Only factors of positive degree are returned.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::Degenerate("squarefree decomposition of zero".into()));
        }
        let f = self.monic();
        let mut out = Vec::new();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a)?.0;
        let mut c = fp.div_rem(&a)?.0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a)?.0;
            c = d.div_rem(&a)?.0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if var.is_empty() {
                write!(f, "{}", rational::to_text(&abs))?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", rational::to_text(&abs))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct UniPolyJson {
    coeffs: Vec<String>,
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UniPolyJson {
            coeffs: self.coeffs.iter().map(rational::to_wire).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = UniPolyJson::deserialize(d)?;
        let coeffs = doc
            .coeffs
            .iter()
            .map(|s| rational::from_wire(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(serde::de::Error::custom("trailing zero coefficient"));
        }
        Ok(UniPoly { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn squarefree_of_square() {
        let f = p(&[1, -2, 1]);
        assert_eq!(f.squarefree_part().unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn squarefree_of_constant() {
        assert_eq!(p(&[4]).squarefree_part().unwrap(), p(&[1]));
        assert!(UniPoly::zero().squarefree_part().is_err());
    }

    #[test]
    fn linear() {
        let f = UniPoly::new(vec![rat(-5, 3), int(5)]);
        let sf = f.squarefree_part().unwrap();
        assert_eq!(sf, UniPoly::new(vec![rat(-1, 3), int(1)]));
        assert_eq!(f.to_string(), "5*t - 5/3");
    }

    #[test]
    fn yun() {
        // (t-1)^2 (t+2)^3 t
        let a = p(&[-1, 1]);
        let b = p(&[2, 1]);
        let t = p(&[0, 1]);
        let f = a.mul(&a).mul(&b).mul(&b).mul(&b).mul(&t).mul(&p(&[3]));
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(t, 1), (a, 2), (b, 3)]);
        let total: usize = dec
            .iter()
            .map(|(q, i)| q.degree().unwrap() * *i as usize)
            .sum();
        assert_eq!(total, f.degree().unwrap());
    }

    #[test]
    fn division() {
        let f = p(&[1, 0, 0, 1]);
        let (q, r) = f.div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());
        assert!(f.div_rem(&UniPoly::zero()).is_err());
    }

    #[test]
    fn json() {
        let f = UniPoly::new(vec![rat(-5, 3), int(5)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"coeffs":["-5/3","5/1"]}"#);
        assert_eq!(serde_json::from_str::<UniPoly>(&s).unwrap(), f);
    }
}
