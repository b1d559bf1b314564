use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::monomial::{c_slot, Monomial, MonomialOrder};
use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial over ℚ in `C_1, …, C_{m+1}, y`.
///
/// Terms are kept in a map keyed by [`Monomial`], whose ordering is the ring's
/// weighted reverse-lexicographic order; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    m: u32,
    terms: BTreeMap<Monomial, Rational>,
}

/// Result of [`Polynomial::weight_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Homogeneous(u64),
    Inhomogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Polynomial {
    pub fn zero(m: u32) -> Self {
        Polynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: u32, c: Rational) -> Self {
        Self::term(m, Monomial::one(m), c)
    }

    pub fn one(m: u32) -> Self {
        Self::constant(m, Rational::one())
    }

    pub fn term(m: u32, mono: Monomial, c: Rational) -> Self {
        assert_eq!(mono.m(), m, "monomial belongs to a different ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Polynomial { m, terms }
    }

    /// The variable `C_k`, i.e. the coefficient of `x^{-k}`.
    pub fn c(m: u32, k: u32) -> Self {
        Self::term(m, Monomial::c(m, k, 1), Rational::one())
    }

    pub fn y(m: u32) -> Self {
        Self::term(m, Monomial::y(m, 1), Rational::one())
    }

    /// Builds a polynomial from arbitrary terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(m: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (mono, c) in terms {
            if mono.m() != m {
                return Err(Error::RingMismatch {
                    left: m,
                    right: mono.m(),
                });
            }
            *acc.entry(mono).or_insert_with(Rational::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial { m, terms: acc })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn num_vars(&self) -> usize {
        self.m as usize + 2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending ring order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term under the ring order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Leading term under an arbitrary order on the same variables.
    pub fn leading_term_in(&self, mo: &MonomialOrder) -> Result<Option<(&Monomial, &Rational)>> {
        let mut best: Option<(Vec<i128>, (&Monomial, &Rational))> = None;
        for (mono, c) in &self.terms {
            let key = mo.key(mono)?;
            if best.as_ref().is_none_or(|(k, _)| key > *k) {
                best = Some((key, (mono, c)));
            }
        }
        Ok(best.map(|(_, t)| t))
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.m != other.m {
            Err(Error::RingMismatch {
                left: self.m,
                right: other.m,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            add_into(&mut terms, mono, c.clone());
        }
        Ok(Polynomial { m: self.m, terms })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            add_into(&mut terms, mono, -c);
        }
        Ok(Polynomial { m: self.m, terms })
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono = ma.checked_mul(mb)?;
                let c = ca * cb;
                match acc.get_mut(&mono) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(mono, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Polynomial { m: self.m, terms })
    }

    /// `c · mono · self`.
    pub fn mul_term(&self, mono: &Monomial, c: &Rational) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero(self.m));
        }
        let terms = self
            .terms
            .iter()
            .map(|(mm, cc)| Ok((mm.checked_mul(mono)?, cc * c)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Polynomial { m: self.m, terms })
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.m);
        }
        Polynomial {
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut result = Polynomial::one(self.m);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Common weighted degree of all terms.
    pub fn weight_of(&self) -> Result<Weight> {
        let mut weights = self.terms.keys().map(Monomial::weight);
        let Some(first) = weights.next() else {
            return Err(Error::Domain("the zero polynomial has no weight".into()));
        };
        if weights.all(|w| w == first) {
            Ok(Weight::Homogeneous(first))
        } else {
            Ok(Weight::Inhomogeneous)
        }
    }

    /// True when every term involves at most `C_1`, `C_2` (and `y` if allowed).
    pub fn only_c1_c2(&self, allow_y: bool) -> bool {
        self.terms.keys().all(|mono| mono.only_c1_c2(allow_y))
    }

    /// Largest `k` such that `C_k` occurs, if any `C` occurs at all.
    pub fn max_c_index(&self) -> Option<u32> {
        (1..=self.m + 1)
            .rev()
            .find(|&k| self.terms.keys().any(|mono| mono.exp_c(k) > 0))
    }

    /// Replaces each `C_k` listed in `subs` by the paired polynomial.
    pub fn substitute(&self, subs: &[(u32, Polynomial)]) -> Result<Polynomial> {
        for (_, p) in subs {
            self.check_ring(p)?;
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (mono, c) in &self.terms {
            let mut exps = mono.exponents().to_vec();
            let mut factor = Polynomial::constant(self.m, c.clone());
            for (idx, (k, replacement)) in subs.iter().enumerate() {
                let slot = c_slot(self.m, *k);
                let e = exps[slot];
                if e == 0 {
                    continue;
                }
                exps[slot] = 0;
                let power = match powers.get(&(idx, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = replacement.pow(e)?;
                        powers.insert((idx, e), p.clone());
                        p
                    }
                };
                factor = factor.try_mul(&power)?;
            }
            let rest = Monomial::from_exponents(exps)?;
            for (fm, fc) in factor.terms {
                let mono = fm.checked_mul(&rest)?;
                match acc.get_mut(&mono) {
                    Some(slot) => *slot += fc,
                    None => {
                        acc.insert(mono, fc);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Polynomial { m: self.m, terms })
    }

    /// Evaluates at a point given in slot order (`C_{m+1}, …, C_1, y`).
    pub fn eval_slots(&self, point: &[Complex64]) -> Result<Complex64> {
        Ok(self.eval_terms(point)?.into_iter().sum())
    }

    /// Evaluates with `values[k-1] = C_k` and the given `y`; missing trailing
    /// `C` values are treated as zero.
    pub fn eval(&self, values: &[Complex64], y: Complex64) -> Result<Complex64> {
        self.eval_slots(&self.point(values, y)?)
    }

    /// Evaluated terms `c · mono(point)` in descending ring order.
    pub fn eval_terms_at(&self, values: &[Complex64], y: Complex64) -> Result<Vec<Complex64>> {
        self.eval_terms(&self.point(values, y)?)
    }

    fn point(&self, values: &[Complex64], y: Complex64) -> Result<Vec<Complex64>> {
        if values.len() > self.m as usize + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.m as usize + 1,
                found: values.len(),
            });
        }
        let mut point = vec![Complex64::new(0.0, 0.0); self.num_vars()];
        for (i, v) in values.iter().enumerate() {
            point[c_slot(self.m, i as u32 + 1)] = *v;
        }
        point[self.m as usize + 1] = y;
        Ok(point)
    }

    fn eval_terms(&self, point: &[Complex64]) -> Result<Vec<Complex64>> {
        if point.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: point.len(),
            });
        }
        Ok(self
            .terms()
            .map(|(mono, c)| {
                mono.exponents()
                    .iter()
                    .zip(point)
                    .filter(|(&e, _)| e > 0)
                    .fold(Complex64::new(rational::to_f64(c), 0.0), |acc, (&e, z)| {
                        acc * z.powu(e)
                    })
            })
            .collect())
    }
}

fn add_into(terms: &mut BTreeMap<Monomial, Rational>, mono: &Monomial, c: Rational) {
    if let Some(slot) = terms.get_mut(mono) {
        *slot += c;
        if slot.is_zero() {
            terms.remove(mono);
        }
    } else if !c.is_zero() {
        terms.insert(mono.clone(), c);
    }
}

/// Exact `a op b` over a common ring.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms().enumerate() {
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_one() {
                write!(f, "{}", rational::to_text(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rational::to_text(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on ring mismatch; use [`Polynomial::try_add`] for a checked sum.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn c(k: u32) -> Polynomial {
        Polynomial::c(4, k)
    }

    #[test]
    fn difference_of_squares() {
        let one = Polynomial::one(4);
        let p = &(&c(1) + &one) * &(&c(1) - &one);
        let expected = &(&c(1) * &c(1)) - &one;
        assert_eq!(p, expected);
    }

    #[test]
    fn add_zero_is_identity() {
        let p = &(&c(1) * &c(3)).scale(&rat(5, 7)) + &Polynomial::y(4);
        assert_eq!(&p + &Polynomial::zero(4), p);
    }

    #[test]
    fn hand_expansion() {
        // (C_1^2)(3 C_3) + (3 C_1^2)(C_3) = 6 C_1^2 C_3
        let c1sq = &c(1) * &c(1);
        let three = int(3);
        let lhs = &(&c1sq * &c(3).scale(&three)) + &(&c1sq.scale(&three) * &c(3));
        let expected = Polynomial::term(
            4,
            Monomial::c(4, 1, 2)
                .checked_mul(&Monomial::c(4, 3, 1))
                .unwrap(),
            int(6),
        );
        assert_eq!(lhs, expected);
    }

    #[test]
    fn ring_mismatch() {
        let err = poly_arith(&Polynomial::c(4, 1), &Polynomial::c(5, 1), ArithOp::Add);
        assert_eq!(err, Err(Error::RingMismatch { left: 4, right: 5 }));
    }

    #[test]
    fn weights() {
        let e1 = &c(1).pow(2).unwrap().scale(&int(3)) + &c(3).scale(&int(3));
        assert_eq!(e1.weight_of().unwrap(), Weight::Homogeneous(4));
        assert_eq!(
            Polynomial::y(4).weight_of().unwrap(),
            Weight::Homogeneous(6)
        );
        assert_eq!((&c(1) + &c(2)).weight_of().unwrap(), Weight::Inhomogeneous);
        assert!(Polynomial::zero(4).weight_of().is_err());
    }

    #[test]
    fn display_descending() {
        let p = &(&c(5) + &c(2).pow(2).unwrap()) - &c(1).pow(3).unwrap().scale(&rat(5, 3));
        assert_eq!(p.to_string(), "C_{-5} + C_{-2}^2 - 5/3*C_{-1}^3");
        assert_eq!((-&Polynomial::one(4)).to_string(), "-1");
        assert_eq!(Polynomial::zero(4).to_string(), "0");
    }

    #[test]
    fn substitution() {
        // C_3 -> -C_1^2 in C_3^2 + C_1 C_3
        let p = &c(3).pow(2).unwrap() + &(&c(1) * &c(3));
        let q = p.substitute(&[(3, -&c(1).pow(2).unwrap())]).unwrap();
        let expected = &c(1).pow(4).unwrap() - &c(1).pow(3).unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn evaluation() {
        let p = &(&c(1) * &c(2)).scale(&int(4)) + &Polynomial::y(4);
        let v = [Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)];
        let val = p.eval(&v, Complex64::new(0.5, 0.0)).unwrap();
        assert!((val - Complex64::new(8.5, 8.0)).norm() < 1e-12);
    }
}
