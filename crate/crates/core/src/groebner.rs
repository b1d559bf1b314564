//! Groebner machinery for the system: S-polynomials, Buchberger's criterion and the
//! triangular reduction producing `~E_1, …, ~E_{m+1}`.
//!
//! For `k < m` the leading term of `E_k` is `3 C_{k+2}`, so the reduced basis of
//! `⟨E_1, …, E_{m-1}⟩` is obtained by substituting `C_{j+2} ← -R_j` for `j < k`
//! into `E_k / 3`. The same substitutions take `E_m` and `E_{m+1}` to `R_m` and
//! `y + R_{m+1}`, polynomials in `C_1`, `C_2` (and `y`) only.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::rational::{self, genbinom, int, rat, Rational};
use crate::algebra::{normal_form, Monomial, MonomialOrder, Polynomial, Weight};
use crate::error::{Error, Result};
use crate::solve::CaseTag;
use crate::system::{expected_weight, SystemInstance};

/// Coefficients `λ^{ij}` of `C_1^i C_2^j`; an absent key means zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaTable(pub BTreeMap<(u32, u32), Rational>);

impl LambdaTable {
    /// Reads the coefficients of a polynomial in `C_1`, `C_2` (any `y` term is ignored).
    pub fn from_polynomial(p: &Polynomial) -> Self {
        LambdaTable(
            p.terms()
                .filter(|(mono, _)| mono.exp_y() == 0)
                .map(|(mono, c)| ((mono.exp_c(1), mono.exp_c(2)), c.clone()))
                .collect(),
        )
    }

    pub fn get(&self, i: u32, j: u32) -> Rational {
        self.0.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }
}

#[derive(Serialize, Deserialize)]
struct LambdaEntry {
    i: u32,
    j: u32,
    #[serde(with = "rational::wire")]
    c: Rational,
}

impl Serialize for LambdaTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<LambdaEntry> = self
            .0
            .iter()
            .map(|(&(i, j), c)| LambdaEntry { i, j, c: c.clone() })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LambdaTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<LambdaEntry>::deserialize(d)?;
        Ok(LambdaTable(
            entries.into_iter().map(|e| ((e.i, e.j), e.c)).collect(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerResult {
    pub m: u32,
    /// `tilde_e[k-1] = ~E_k`.
    #[serde(rename = "tildeE")]
    pub tilde_e: Vec<Polynomial>,
    /// `R_k` for `k = 1, …, m+1`, polynomials in `C_1`, `C_2`.
    #[serde(rename = "R")]
    pub r: BTreeMap<u32, Polynomial>,
    /// Coefficients of `R_m` (weight `m+1`).
    pub lambda_m: LambdaTable,
    /// Coefficients of `R_{m+1}` (weight `m+2`).
    pub lambda_m1: LambdaTable,
}

impl GroebnerResult {
    pub fn tilde(&self, k: u32) -> &Polynomial {
        &self.tilde_e[k as usize - 1]
    }

    pub fn remainder(&self, k: u32) -> &Polynomial {
        &self.r[&k]
    }

    /// `~E_1, …, ~E_{m-1}`: the reduced Groebner basis of `⟨E_1, …, E_{m-1}⟩`.
    pub fn partial_basis(&self) -> &[Polynomial] {
        &self.tilde_e[..self.m as usize - 1]
    }

    /// Substitutions `C_{k+2} ← -R_k`, `k = 1, …, m-1`.
    pub fn substitutions(&self) -> Vec<(u32, Polynomial)> {
        (1..self.m).map(|k| (k + 2, -self.remainder(k))).collect()
    }
}

/// Triangular reduction of the system.
pub fn reduce_basis(sys: &SystemInstance) -> Result<GroebnerResult> {
    let m = sys.m;
    let mut subs: Vec<(u32, Polynomial)> = Vec::with_capacity(m as usize);
    let mut tilde_e = Vec::with_capacity(m as usize + 1);
    let mut r = BTreeMap::new();

    for k in 1..m {
        let reduced = sys.equation(k).substitute(&subs)?;
        let tilde = monic_in(&reduced, k + 2)?;
        let rest = &tilde - &Polynomial::c(m, k + 2);
        check_remainder(&rest, k, expected_weight(m, k), false)?;
        subs.push((k + 2, -&rest));
        r.insert(k, rest);
        tilde_e.push(tilde);
    }

    let rm = sys.equation(m).substitute(&subs)?;
    check_remainder(&rm, m, expected_weight(m, m), false)?;
    let em1 = sys.equation(m + 1).substitute(&subs)?;
    let rm1 = &em1 - &Polynomial::y(m);
    check_remainder(&rm1, m + 1, expected_weight(m, m + 1), false)?;

    let lambda_m = LambdaTable::from_polynomial(&rm);
    let lambda_m1 = LambdaTable::from_polynomial(&rm1);
    tilde_e.push(rm.clone());
    tilde_e.push(em1);
    r.insert(m, rm);
    r.insert(m + 1, rm1);

    Ok(GroebnerResult {
        m,
        tilde_e,
        r,
        lambda_m,
        lambda_m1,
    })
}

/// Same result as [`reduce_basis`], computed with the general division algorithm:
/// `~E_k` is the normal form of `E_k` modulo `~E_1, …, ~E_{k-1}`, made monic.
pub fn reduce_basis_by_division(
    sys: &SystemInstance,
    mo: &MonomialOrder,
) -> Result<GroebnerResult> {
    let m = sys.m;
    let mut tilde_e: Vec<Polynomial> = Vec::with_capacity(m as usize + 1);
    let mut r = BTreeMap::new();
    for k in 1..m {
        let nf = normal_form(sys.equation(k), &tilde_e, mo)?;
        let tilde = monic_in(&nf, k + 2)?;
        let rest = &tilde - &Polynomial::c(m, k + 2);
        check_remainder(&rest, k, expected_weight(m, k), false)?;
        r.insert(k, rest);
        tilde_e.push(tilde);
    }
    let rm = normal_form(sys.equation(m), &tilde_e, mo)?;
    check_remainder(&rm, m, expected_weight(m, m), false)?;
    let em1 = normal_form(sys.equation(m + 1), &tilde_e, mo)?;
    let rm1 = &em1 - &Polynomial::y(m);
    check_remainder(&rm1, m + 1, expected_weight(m, m + 1), false)?;
    let lambda_m = LambdaTable::from_polynomial(&rm);
    let lambda_m1 = LambdaTable::from_polynomial(&rm1);
    tilde_e.push(rm.clone());
    tilde_e.push(em1);
    r.insert(m, rm);
    r.insert(m + 1, rm1);
    Ok(GroebnerResult {
        m,
        tilde_e,
        r,
        lambda_m,
        lambda_m1,
    })
}

/// Divides by the coefficient of `C_lead`, which must be present.
fn monic_in(p: &Polynomial, lead: u32) -> Result<Polynomial> {
    let lc = p.coeff(&Monomial::c(p.m(), lead, 1));
    if lc.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "reduced equation has no C_{{-{lead}}} term"
        )));
    }
    Ok(p.scale(&lc.recip()))
}

fn check_remainder(rest: &Polynomial, k: u32, weight: u64, allow_y: bool) -> Result<()> {
    if !rest.only_c1_c2(allow_y) {
        return Err(Error::InvariantViolation(format!(
            "remainder R_{k} still involves C_{{-{}}}",
            rest.max_c_index().unwrap_or(0)
        )));
    }
    if !rest.is_zero() && rest.weight_of()? != Weight::Homogeneous(weight) {
        return Err(Error::InvariantViolation(format!(
            "remainder R_{k} is not homogeneous of weight {weight}"
        )));
    }
    Ok(())
}

/// `S(f, g) = (L/LT(f))·f/LC(f) - (L/LT(g))·g/LC(g)` with `L = lcm(LT(f), LT(g))`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, mo: &MonomialOrder) -> Result<Polynomial> {
    let (ltf, lcf) = f
        .leading_term_in(mo)?
        .ok_or_else(|| Error::Domain("S-polynomial of the zero polynomial".into()))?;
    let (ltg, lcg) = g
        .leading_term_in(mo)?
        .ok_or_else(|| Error::Domain("S-polynomial of the zero polynomial".into()))?;
    let l = ltf.lcm(ltg)?;
    let qf = ltf.quotient_of(&l).expect("lcm is a multiple");
    let qg = ltg.quotient_of(&l).expect("lcm is a multiple");
    f.mul_term(&qf, &lcf.recip())?
        .try_sub(&g.mul_term(&qg, &lcg.recip())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuchbergerReport {
    pub is_basis: bool,
    /// Smallest `(i, j)` in lexicographic order whose S-polynomial does not reduce to zero.
    pub failing_pair: Option<(usize, usize)>,
    pub pairs_total: usize,
    pub pairs_skipped: usize,
}

/// Buchberger's criterion. With `skip_coprime`, pairs whose leading terms are
/// coprime are not reduced (their S-polynomials always reduce to zero).
pub fn buchberger_check(
    gens: &[Polynomial],
    mo: &MonomialOrder,
    skip_coprime: bool,
) -> Result<BuchbergerReport> {
    let mut leads = Vec::with_capacity(gens.len());
    for g in gens {
        let (lt, _) = g
            .leading_term_in(mo)?
            .ok_or_else(|| Error::Domain("zero generator".into()))?;
        leads.push(lt.clone());
    }
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (i + 1..gens.len()).map(move |j| (i, j)))
        .collect();
    let pairs_total = pairs.len();
    let (skipped, pending): (Vec<_>, Vec<_>) = pairs
        .into_iter()
        .partition(|&(i, j)| skip_coprime && leads[i].is_coprime(&leads[j]));

    let outcomes: Vec<Result<bool>> = pending
        .par_iter()
        .map(|&(i, j)| {
            let s = s_polynomial(&gens[i], &gens[j], mo)?;
            Ok(normal_form(&s, gens, mo)?.is_zero())
        })
        .collect();
    let mut failing_pair = None;
    for (pair, ok) in pending.iter().zip(outcomes) {
        if !ok? {
            failing_pair = Some(*pair);
            break;
        }
    }
    Ok(BuchbergerReport {
        is_basis: failing_pair.is_none(),
        failing_pair,
        pairs_total,
        pairs_skipped: skipped.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCheck {
    pub case: CaseTag,
    pub i: u32,
    pub j: u32,
    #[serde(with = "rational::wire")]
    pub extracted: Rational,
    #[serde(with = "rational::wire")]
    pub expected: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub m: u32,
    pub checks: Vec<LambdaCheck>,
}

impl LambdaReport {
    pub fn applicable(&self) -> bool {
        !self.checks.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Compares the pivotal coefficients of `R_{m+1}` with the binomial-series values
/// `binom(m/3, j)·3^j` (when `3 | m+2`) and `binom(m/3, i)·3^i` (when `2 | m`).
/// A check passes only if the values agree and are nonzero.
pub fn lambda_closed_form_check(gr: &GroebnerResult) -> LambdaReport {
    let m = gr.m;
    let third = rat(i64::from(m), 3);
    let mut checks = Vec::new();
    let mut push = |case, i: u32, j: u32, exp: u32| {
        let extracted = gr.lambda_m1.get(i, j);
        let expected = genbinom(&third, exp) * rational::pow(&int(3), exp);
        let pass = extracted == expected && !expected.is_zero();
        checks.push(LambdaCheck {
            case,
            i,
            j,
            extracted,
            expected,
            pass,
        });
    };
    if (m + 2).is_multiple_of(3) {
        let j = m.div_ceil(3);
        push(CaseTag::C1Zero, 0, j, j);
    }
    if m.is_multiple_of(2) {
        let i = (m + 2) / 2;
        push(CaseTag::C2Zero, i, 0, i);
    }
    LambdaReport { m, checks }
}

/// True when no monomial of any element is divisible by another element's leading term.
pub fn is_reduced(basis: &[Polynomial], mo: &MonomialOrder) -> Result<bool> {
    let mut leads = Vec::with_capacity(basis.len());
    for b in basis {
        let (lt, lc) = b
            .leading_term_in(mo)?
            .ok_or_else(|| Error::Domain("zero basis element".into()))?;
        if !lc.is_one() {
            return Ok(false);
        }
        leads.push(lt.clone());
    }
    for (i, b) in basis.iter().enumerate() {
        for (j, lt) in leads.iter().enumerate() {
            if i != j && b.terms().any(|(mono, _)| lt.divides(mono)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::build_system;

    fn c(m: u32, k: u32) -> Polynomial {
        Polynomial::c(m, k)
    }

    #[test]
    fn s_polynomial_of_itself_is_zero() {
        let mo = MonomialOrder::weighted_revlex(5);
        let f = &c(5, 3) + &c(5, 1).pow(2).unwrap();
        assert!(s_polynomial(&f, &f, &mo).unwrap().is_zero());
        assert!(s_polynomial(&f, &Polynomial::zero(5), &mo).is_err());
    }

    #[test]
    fn s_polynomial_coprime_leads() {
        let mo = MonomialOrder::weighted_revlex(5);
        let f = &c(5, 3) + &c(5, 1).pow(2).unwrap();
        let g = &c(5, 4) + &(&c(5, 1) * &c(5, 2)).scale(&int(2));
        let expected = &(&c(5, 4) * &c(5, 1).pow(2).unwrap())
            - &(&c(5, 3) * &(&c(5, 1) * &c(5, 2)).scale(&int(2)));
        assert_eq!(s_polynomial(&f, &g, &mo).unwrap(), expected);
    }

    #[test]
    fn first_two_equations_s_pair_reduces() {
        let sys = build_system(5).unwrap();
        let mo = MonomialOrder::weighted_revlex(5);
        let third = rat(1, 3);
        let gens: Vec<Polynomial> = sys.equations[..4].iter().map(|e| e.scale(&third)).collect();
        let s = s_polynomial(&gens[0], &gens[1], &mo).unwrap();
        assert!(normal_form(&s, &gens, &mo).unwrap().is_zero());
    }

    #[test]
    fn single_generator_is_basis() {
        let mo = MonomialOrder::weighted_revlex(4);
        let report = buchberger_check(&[c(4, 1).pow(2).unwrap()], &mo, true).unwrap();
        assert!(report.is_basis);
        assert_eq!(report.pairs_total, 0);
    }

    #[test]
    fn classic_non_basis() {
        let mo = MonomialOrder::weighted_revlex(4);
        let one = Polynomial::one(4);
        let f = &(&c(4, 1) * &c(4, 2)) - &one;
        let g = &c(4, 1).pow(2).unwrap() - &c(4, 2);
        // S = C_2^2 - C_1, which no leading term divides
        let s = s_polynomial(&f, &g, &mo).unwrap();
        assert_eq!(s, &c(4, 2).pow(2).unwrap() - &c(4, 1));
        let report = buchberger_check(&[f, g], &mo, true).unwrap();
        assert!(!report.is_basis);
        assert_eq!(report.failing_pair, Some((0, 1)));
    }

    #[test]
    fn partial_system_is_basis() {
        for m in [4, 5, 7, 8] {
            let sys = build_system(m).unwrap();
            let mo = MonomialOrder::weighted_revlex(m);
            let gens = &sys.equations[..m as usize - 1];
            let report = buchberger_check(gens, &mo, false).unwrap();
            assert!(report.is_basis, "m = {m}");
            assert_eq!(report.pairs_skipped, 0);
            let fast = buchberger_check(gens, &mo, true).unwrap();
            assert!(fast.is_basis);
            assert_eq!(fast.pairs_skipped, fast.pairs_total);
        }
    }

    #[test]
    fn table_entries() {
        let gr = reduce_basis(&build_system(7).unwrap()).unwrap();
        let m = 7;
        let c1 = c(m, 1);
        let c2 = c(m, 2);
        let expected = [
            &c(m, 3) + &c1.pow(2).unwrap(),
            &c(m, 4) + &(&c1 * &c2).scale(&int(2)),
            &(&c(m, 5) + &c2.pow(2).unwrap()) - &c1.pow(3).unwrap().scale(&rat(5, 3)),
            &c(m, 6) - &(&c1.pow(2).unwrap() * &c2).scale(&int(5)),
            &(&c(m, 7) + &c1.pow(4).unwrap().scale(&rat(10, 3)))
                - &(&c1 * &c2.pow(2).unwrap()).scale(&int(5)),
        ];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(&gr.tilde_e[k], e, "~E_{}", k + 1);
        }
    }

    #[test]
    fn m4_remainders() {
        let gr = reduce_basis(&build_system(4).unwrap()).unwrap();
        let c1 = c(4, 1);
        let c2 = c(4, 2);
        assert_eq!(gr.remainder(4), &(&c1 * &c2).scale(&int(4)));
        let r5 = &c2.pow(2).unwrap().scale(&int(2)) - &c1.pow(3).unwrap().scale(&rat(4, 3));
        assert_eq!(gr.remainder(5), &r5);
        assert_eq!(gr.tilde(5), &(&Polynomial::y(4) + &r5));
        assert_eq!(gr.lambda_m.get(1, 1), int(4));
        assert_eq!(gr.lambda_m1.get(0, 2), int(2));
        assert_eq!(gr.lambda_m1.get(3, 0), rat(-4, 3));
    }

    #[test]
    fn m5_remainders() {
        let gr = reduce_basis(&build_system(5).unwrap()).unwrap();
        let c1 = c(5, 1);
        let c2 = c(5, 2);
        let r5 = &c2.pow(2).unwrap().scale(&int(5)) - &c1.pow(3).unwrap().scale(&rat(5, 3));
        assert_eq!(gr.remainder(5), &r5);
        assert_eq!(
            gr.remainder(6),
            &(&c1.pow(2).unwrap() * &c2).scale(&int(-5))
        );
    }

    #[test]
    fn substitution_and_division_agree() {
        for m in [4, 5, 7, 8, 10] {
            let sys = build_system(m).unwrap();
            let mo = MonomialOrder::weighted_revlex(m);
            assert_eq!(
                reduce_basis(&sys).unwrap(),
                reduce_basis_by_division(&sys, &mo).unwrap(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn lambda_checks() {
        let gr4 = reduce_basis(&build_system(4).unwrap()).unwrap();
        let report = lambda_closed_form_check(&gr4);
        assert_eq!(report.checks.len(), 2);
        assert!(report.all_pass());
        assert_eq!(report.checks[0].expected, int(2));
        assert_eq!(report.checks[1].expected, rat(-4, 3));

        let gr5 = reduce_basis(&build_system(5).unwrap()).unwrap();
        assert!(!lambda_closed_form_check(&gr5).applicable());
    }

    #[test]
    fn partial_basis_is_reduced() {
        let gr = reduce_basis(&build_system(8).unwrap()).unwrap();
        let mo = MonomialOrder::weighted_revlex(8);
        assert!(is_reduced(gr.partial_basis(), &mo).unwrap());
        let sys = build_system(8).unwrap();
        assert!(!is_reduced(&sys.equations[..7], &mo).unwrap());
    }

    #[test]
    fn lambda_table_json() {
        let gr = reduce_basis(&build_system(4).unwrap()).unwrap();
        let v = serde_json::to_value(&gr.lambda_m1).unwrap();
        assert_eq!(
            v,
            serde_json::json!([{"i": 0, "j": 2, "c": "2/1"}, {"i": 3, "j": 0, "c": "-4/3"}])
        );
    }
}
