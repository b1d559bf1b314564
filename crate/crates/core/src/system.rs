//! The polynomial system `E_1, …, E_{m+1}`.
//!
//! `E_k = (C^3)_{-k}` for `k < m`, `E_m = (C^m)_{-1}`, `E_{m+1} = (C^m)_{-2} + y`,
//! where `C = x + Σ C_k x^{-k}`. Equations are stored unscaled (leading coefficient 3
//! for `k < m`).

use serde::{Deserialize, Serialize};

use crate::algebra::rational::int;
use crate::algebra::{Polynomial, Weight};
use crate::error::{check_m, Error, Result};
use crate::laurent::{generic_c, series_pow};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInstance {
    pub m: u32,
    /// `equations[k-1] = E_k`.
    pub equations: Vec<Polynomial>,
    /// `weights[k-1] = w(E_k)`.
    pub weights: Vec<u64>,
}

impl SystemInstance {
    pub fn equation(&self, k: u32) -> &Polynomial {
        &self.equations[k as usize - 1]
    }

    /// Number of unknowns `C_1, …, C_{m+1}`.
    pub fn unknowns(&self) -> usize {
        self.m as usize + 1
    }
}

/// Expected weighted degree of `E_k`.
pub fn expected_weight(m: u32, k: u32) -> u64 {
    if k < m {
        u64::from(k) + 3
    } else {
        u64::from(k) + 1
    }
}

pub fn build_system(m: u32) -> Result<SystemInstance> {
    check_m(m)?;
    // C is needed down to x^{-(m+1)}: that determines C^3 down to x^{1-m} and C^m down to x^{-2}.
    let c = generic_c(m, -(i64::from(m) + 1))?;
    let cube = series_pow(&c, 3)?;
    let power = series_pow(&c, m)?;

    let mut equations = Vec::with_capacity(m as usize + 1);
    for k in 1..m {
        equations.push(cube.coeff_at(-i64::from(k))?);
    }
    equations.push(power.coeff_at(-1)?);
    equations.push(power.coeff_at(-2)?.try_add(&Polynomial::y(m))?);

    let weights: Vec<u64> = (1..=m + 1).map(|k| expected_weight(m, k)).collect();
    for (k, (e, &w)) in equations.iter().zip(&weights).enumerate() {
        if e.weight_of()? != Weight::Homogeneous(w) {
            return Err(Error::InvariantViolation(format!(
                "E_{} is not homogeneous of weight {w}",
                k + 1
            )));
        }
    }
    Ok(SystemInstance {
        m,
        equations,
        weights,
    })
}

/// Coefficient of `x^{-j}` in `C`: `j = -1` is the leading coefficient 1 of `x`,
/// `j = 0` the vanishing constant term.
fn coefficient(m: u32, j: i64) -> Polynomial {
    match j {
        -1 => Polynomial::one(m),
        0 => Polynomial::zero(m),
        _ => Polynomial::c(m, j as u32),
    }
}

/// `E_k` assembled directly from the combinatorial expansion of `(C^3)_{-k}`:
/// a repeated index paired with a third (coefficient 3), a pair with the leading `x`
/// (coefficient 6), three distinct indices (coefficient 6) and a cube when `3 | k`.
pub fn build_ek_closed_form(m: u32, k: u32) -> Result<Polynomial> {
    check_m(m)?;
    if k == 0 || k >= m {
        return Err(Error::Domain(format!(
            "closed form defined for 1 <= k <= m-1 = {}, got k = {k}",
            m - 1
        )));
    }
    let k = i64::from(k);
    let c = |j: i64| coefficient(m, j);
    let mut acc = Polynomial::zero(m);

    let mut doubled = Polynomial::zero(m);
    for i in -1..=(k + 1).div_euclid(2) {
        if 3 * i == k {
            continue;
        }
        doubled = &doubled + &(&(&c(i) * &c(i)) * &c(k - 2 * i));
    }
    acc = &acc + &doubled.scale(&int(3));

    let mut pairs = Polynomial::zero(m);
    for i in 1..=k {
        let j = k + 1 - i;
        if i < j {
            pairs = &pairs + &(&c(i) * &c(j));
        }
    }
    acc = &acc + &pairs.scale(&int(6));

    let mut triples = Polynomial::zero(m);
    for i in 1..=k {
        for j in i + 1..=k {
            let l = k - i - j;
            if l > j {
                triples = &triples + &(&(&c(i) * &c(j)) * &c(l));
            }
        }
    }
    acc = &acc + &triples.scale(&int(6));

    if k % 3 == 0 {
        acc = &acc + &c(k / 3).pow(3)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Rational};

    fn c(m: u32, k: u32) -> Polynomial {
        Polynomial::c(m, k)
    }

    #[test]
    fn first_equation() {
        let sys = build_system(4).unwrap();
        let e1 = &c(4, 1).pow(2).unwrap().scale(&int(3)) + &c(4, 3).scale(&int(3));
        assert_eq!(sys.equations[0], e1);
        assert_eq!(sys.equations.len(), 5);
        assert_eq!(sys.unknowns(), 5);
        assert_eq!(sys.weights, vec![4, 5, 6, 5, 6]);
    }

    #[test]
    fn last_equation_carries_y() {
        let sys = build_system(4).unwrap();
        let e5 = &sys.equations[4];
        assert_eq!(
            e5.coeff(&Monomial::y(4, 1)),
            Rational::from_integer(1.into())
        );
        assert_eq!(e5.weight_of().unwrap(), Weight::Homogeneous(6));
    }

    #[test]
    fn excluded_parameters() {
        assert!(matches!(build_system(6), Err(Error::Domain(_))));
        assert!(matches!(build_system(3), Err(Error::Domain(_))));
        assert!(matches!(build_system(2), Err(Error::Domain(_))));
        let msg = build_system(6).unwrap_err().to_string();
        assert!(msg.contains("3∤m>3"), "{msg}");
    }

    #[test]
    fn closed_form_small_k() {
        let e1 = &c(7, 1).pow(2).unwrap().scale(&int(3)) + &c(7, 3).scale(&int(3));
        assert_eq!(build_ek_closed_form(7, 1).unwrap(), e1);

        let e3 = build_ek_closed_form(7, 3).unwrap();
        assert_eq!(e3.coeff(&Monomial::c(7, 1, 3)), int(1));

        // 3C_1C_2^2 + 3C_1^2C_3 + 3C_3^2 + 6C_2C_4 + 6C_1C_5 + 3C_7
        let e5 = [
            (&c(7, 1) * &c(7, 2).pow(2).unwrap(), 3),
            (&c(7, 1).pow(2).unwrap() * &c(7, 3), 3),
            (c(7, 3).pow(2).unwrap(), 3),
            (&c(7, 2) * &c(7, 4), 6),
            (&c(7, 1) * &c(7, 5), 6),
            (c(7, 7), 3),
        ]
        .iter()
        .fold(Polynomial::zero(7), |acc, (p, k)| &acc + &p.scale(&int(*k)));
        assert_eq!(build_ek_closed_form(7, 5).unwrap(), e5);
    }

    #[test]
    fn closed_form_range() {
        assert!(build_ek_closed_form(7, 0).is_err());
        assert!(build_ek_closed_form(7, 7).is_err());
        assert!(build_ek_closed_form(6, 1).is_err());
    }

    #[test]
    fn generators_agree() {
        for m in [4, 5, 7, 8] {
            let sys = build_system(m).unwrap();
            for k in 1..m {
                assert_eq!(
                    &build_ek_closed_form(m, k).unwrap(),
                    sys.equation(k),
                    "m={m} k={k}"
                );
            }
        }
    }
}
