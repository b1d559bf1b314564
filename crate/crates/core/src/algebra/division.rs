//! Multivariate division with respect to an arbitrary matrix order.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `p = Σ quotients[i]·divisors[i] + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Runs the division algorithm, always reducing by the first divisor whose
/// leading term divides the current leading term.
pub fn divide(p: &Polynomial, divisors: &[Polynomial], mo: &MonomialOrder) -> Result<Division> {
    let m = p.m();
    let mut leads = Vec::with_capacity(divisors.len());
    for d in divisors {
        if d.m() != m {
            return Err(Error::RingMismatch {
                left: m,
                right: d.m(),
            });
        }
        let (lt, lc) = d
            .leading_term_in(mo)?
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        leads.push((lt.clone(), lc.clone()));
    }

    let mut work: BTreeMap<Vec<i128>, (Monomial, Rational)> = BTreeMap::new();
    for (mono, c) in p.terms() {
        work.insert(mo.key(mono)?, (mono.clone(), c.clone()));
    }
    let mut quotients: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();

    while let Some((_, (mono, c))) = work.pop_last() {
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(i, (lt, lc))| lt.quotient_of(&mono).map(|q| (i, q, lc)));
        let Some((i, q, lc)) = hit else {
            remainder.push((mono, c));
            continue;
        };
        let factor = &c / lc;
        for (dm, dc) in divisors[i].terms() {
            let tm = dm.checked_mul(&q)?;
            let key = mo.key(&tm)?;
            let delta = &factor * dc;
            match work.get_mut(&key) {
                Some(entry) => {
                    entry.1 -= delta;
                    if entry.1.is_zero() {
                        work.remove(&key);
                    }
                }
                None => {
                    // the leading term cancels exactly against the popped entry
                    if tm != mono {
                        work.insert(key, (tm, -delta));
                    }
                }
            }
        }
        quotients[i].push((q, factor));
    }

    Ok(Division {
        quotients: quotients
            .into_iter()
            .map(|terms| Polynomial::from_terms(m, terms))
            .collect::<Result<_>>()?,
        remainder: Polynomial::from_terms(m, remainder)?,
    })
}

/// Remainder of `p` on division by `divisors`.
pub fn normal_form(
    p: &Polynomial,
    divisors: &[Polynomial],
    mo: &MonomialOrder,
) -> Result<Polynomial> {
    Ok(divide(p, divisors, mo)?.remainder)
}
