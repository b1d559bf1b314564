//! Exact rationals.
//!
//! Values are `num_rational::BigRational`, which keeps every value reduced with a
//! positive denominator. This module adds the wire format (`"num/den"`, always with
//! an explicit denominator) and the generalized binomial coefficient.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `num/den`; the denominator is always printed.
pub fn to_wire(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer. The value must already be in lowest terms
/// with a positive denominator so that printing reproduces the input byte for byte.
pub fn from_wire(s: &str) -> Result<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if !den.is_positive() {
        return Err(Error::Parse(format!("non-positive denominator in {s:?}")));
    }
    let q = Rational::new(num.clone(), den.clone());
    if q.numer() != &num || q.denom() != &den {
        return Err(Error::Parse(format!(
            "rational {s:?} is not in lowest terms"
        )));
    }
    Ok(q)
}

/// Human-readable form: integers print without a denominator.
pub fn to_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        to_wire(q)
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Generalized binomial coefficient `q (q-1) ... (q-k+1) / k!`.
pub fn genbinom(q: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        let falling = q - int(i64::from(i));
        acc = acc * falling / int(i64::from(i) + 1);
    }
    acc
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}

/// Serde adapter for a single rational in wire format.
pub mod wire {
    use super::{from_wire, to_wire, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_wire(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        from_wire(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional rational.
pub mod wire_opt {
    use super::{from_wire, to_wire, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&to_wire(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| from_wire(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}
