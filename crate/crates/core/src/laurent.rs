//! Truncated Laurent series in `x^{-1}` with polynomial coefficients.
//!
//! A series carries an explicit truncation: every coefficient of `x^e` with
//! `e >= trunc` is exact, nothing is known below it. Products shrink the window
//! to what the factors determine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentSeries {
    m: u32,
    trunc: i64,
    coeffs: BTreeMap<i64, Polynomial>,
}

impl LaurentSeries {
    /// Builds a series from explicit coefficients; zero coefficients and
    /// exponents below `trunc` are rejected.
    pub fn new(m: u32, trunc: i64, coeffs: BTreeMap<i64, Polynomial>) -> Result<Self> {
        for (&e, p) in &coeffs {
            if p.m() != m {
                return Err(Error::RingMismatch {
                    left: m,
                    right: p.m(),
                });
            }
            if e < trunc {
                return Err(Error::Truncation {
                    exponent: e,
                    window_start: trunc,
                });
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(LaurentSeries { m, trunc, coeffs })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Smallest exponent whose coefficient is exact.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Largest exponent with a nonzero coefficient (`trunc` for the zero series).
    pub fn top_degree(&self) -> i64 {
        self.coeffs
            .keys()
            .next_back()
            .copied()
            .unwrap_or(self.trunc)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Polynomial> {
        &self.coeffs
    }

    /// Coefficient of `x^k`.
    pub fn coeff_at(&self, k: i64) -> Result<Polynomial> {
        if k < self.trunc {
            return Err(Error::Truncation {
                exponent: k,
                window_start: self.trunc,
            });
        }
        Ok(self
            .coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.m)))
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        if self.m != other.m {
            return Err(Error::RingMismatch {
                left: self.m,
                right: other.m,
            });
        }
        let trunc = (self.top_degree() + other.trunc).min(other.top_degree() + self.trunc);
        let mut coeffs: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (&ea, pa) in &self.coeffs {
            for (&eb, pb) in &other.coeffs {
                let e = ea + eb;
                if e < trunc {
                    continue;
                }
                let prod = pa.try_mul(pb)?;
                match coeffs.get_mut(&e) {
                    Some(acc) => *acc = acc.try_add(&prod)?,
                    None => {
                        coeffs.insert(e, prod);
                    }
                }
            }
        }
        coeffs.retain(|_, p| !p.is_zero());
        Ok(LaurentSeries {
            m: self.m,
            trunc,
            coeffs,
        })
    }

    /// Applies `f` to every coefficient; the window is unchanged.
    pub fn map_coeffs<F>(&self, mut f: F) -> Result<LaurentSeries>
    where
        F: FnMut(&Polynomial) -> Result<Polynomial>,
    {
        let mut coeffs = BTreeMap::new();
        for (&e, p) in &self.coeffs {
            let q = f(p)?;
            if !q.is_zero() {
                coeffs.insert(e, q);
            }
        }
        Ok(LaurentSeries {
            m: self.m,
            trunc: self.trunc,
            coeffs,
        })
    }
}

/// `x + C_{-1} x^{-1} + … + C_{-K} x^{-K}` with `K = -trunc`, exact down to `x^{trunc}`.
pub fn generic_c(m: u32, trunc: i64) -> Result<LaurentSeries> {
    if trunc > -1 {
        return Err(Error::Domain(format!(
            "truncation must be at most -1, got {trunc}"
        )));
    }
    if -trunc > i64::from(m) + 1 {
        return Err(Error::Domain(format!(
            "C_{{-{}}} is not a variable of the ring at m = {m}",
            -trunc
        )));
    }
    let mut coeffs = BTreeMap::new();
    coeffs.insert(1, Polynomial::one(m));
    for k in 1..=-trunc {
        coeffs.insert(-k, Polynomial::c(m, k as u32));
    }
    Ok(LaurentSeries { m, trunc, coeffs })
}

/// `s^n` by repeated squaring.
pub fn series_pow(s: &LaurentSeries, n: u32) -> Result<LaurentSeries> {
    if n == 0 {
        return Err(Error::Domain("series power requires n >= 1".into()));
    }
    let mut result: Option<LaurentSeries> = None;
    let mut base = s.clone();
    let mut n = n;
    loop {
        if n & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.mul(&base)?,
            });
        }
        n >>= 1;
        if n == 0 {
            break;
        }
        base = base.mul(&base)?;
    }
    Ok(result.expect("n >= 1"))
}

pub fn coeff_at(s: &LaurentSeries, k: i64) -> Result<Polynomial> {
    s.coeff_at(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn c(m: u32, k: u32) -> Polynomial {
        Polynomial::c(m, k)
    }

    #[test]
    fn smallest_generic_c() {
        let s = generic_c(4, -1).unwrap();
        assert_eq!(s.coeffs().len(), 2);
        assert_eq!(s.coeff_at(1).unwrap(), Polynomial::one(4));
        assert_eq!(s.coeff_at(-1).unwrap(), c(4, 1));
        assert!(s.coeff_at(0).unwrap().is_zero());
    }

    #[test]
    fn generic_c_full() {
        let s = generic_c(4, -5).unwrap();
        for k in 1..=5 {
            assert_eq!(s.coeff_at(-k).unwrap(), c(4, k as u32));
        }
        assert!(s.coeff_at(0).unwrap().is_zero());
        assert!(matches!(s.coeff_at(-6), Err(Error::Truncation { .. })));
    }

    #[test]
    fn generic_c_domain() {
        assert!(generic_c(4, 0).is_err());
        assert!(generic_c(4, -6).is_err());
    }

    #[test]
    fn cube_coefficients() {
        let c3 = series_pow(&generic_c(7, -8).unwrap(), 3).unwrap();
        let three = int(3);
        let six = int(6);
        // 3 C_1^2 + 3 C_3
        let e1 = &c(7, 1).pow(2).unwrap().scale(&three) + &c(7, 3).scale(&three);
        assert_eq!(c3.coeff_at(-1).unwrap(), e1);
        // 6 C_1 C_2 + 3 C_4
        let e2 = &(&c(7, 1) * &c(7, 2)).scale(&six) + &c(7, 4).scale(&three);
        assert_eq!(c3.coeff_at(-2).unwrap(), e2);
        // C_1^3 + 3 C_2^2 + 6 C_1 C_3 + 3 C_5
        let e3 = &(&(&c(7, 1).pow(3).unwrap() + &c(7, 2).pow(2).unwrap().scale(&three))
            + &(&c(7, 1) * &c(7, 3)).scale(&six))
            + &c(7, 5).scale(&three);
        assert_eq!(c3.coeff_at(-3).unwrap(), e3);
        // 3 C_1^2 C_2 + 6 C_2 C_3 + 6 C_1 C_4 + 3 C_6
        let e4 = &(&(&(&c(7, 1).pow(2).unwrap() * &c(7, 2)).scale(&three)
            + &(&c(7, 2) * &c(7, 3)).scale(&six))
            + &(&c(7, 1) * &c(7, 4)).scale(&six))
            + &c(7, 6).scale(&three);
        assert_eq!(c3.coeff_at(-4).unwrap(), e4);
        assert_eq!(c3.coeff_at(3).unwrap(), Polynomial::one(7));
        assert!(c3.coeff_at(2).unwrap().is_zero());
        assert_eq!(c3.coeff_at(1).unwrap(), c(7, 1).scale(&three));
        assert_eq!(c3.coeff_at(0).unwrap(), c(7, 2).scale(&three));
    }

    #[test]
    fn window_is_sound() {
        // C truncated at -8 determines C^3 down to x^{-6} and no further.
        let c3 = series_pow(&generic_c(7, -8).unwrap(), 3).unwrap();
        assert_eq!(c3.trunc(), -6);
        assert_eq!(c3.top_degree(), 3);
        assert!(matches!(c3.coeff_at(-7), Err(Error::Truncation { .. })));
    }

    #[test]
    fn first_power_is_identity() {
        let s = generic_c(5, -6).unwrap();
        assert_eq!(series_pow(&s, 1).unwrap(), s);
        assert!(series_pow(&s, 0).is_err());
    }

    #[test]
    fn json_shape() {
        let s = generic_c(4, -1).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["trunc"], -1);
        assert!(v["coeffs"]["-1"].is_object());
        let back: LaurentSeries = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
