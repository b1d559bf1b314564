//! Case analysis of the solution set.
//!
//! After the triangular reduction only `R_m(C_1, C_2) = 0` and
//! `y + R_{m+1}(C_1, C_2) = 0` remain. Solutions split by which of `C_1`, `C_2`
//! vanish; when both are nonzero the substitution `C_2^2 = t C_1^3` turns `R_m`
//! into `C_1^a C_2^b f(t)` and `R_{m+1}` into an expression in `g(t)`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{self, rat, Rational};
use crate::error::{check_m, Error, Result};
use crate::groebner::GroebnerResult;
use crate::roots::{find_roots, RootDatum};
use crate::univariate::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `C_1 = 0`, `C_2 ≠ 0`.
    C1Zero,
    /// `C_1 ≠ 0`, `C_2 = 0`.
    C2Zero,
    BothNonzeroEven,
    BothNonzeroOdd,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::C1Zero => "c1_zero",
            CaseTag::C2Zero => "c2_zero",
            CaseTag::BothNonzeroEven => "both_nonzero_even",
            CaseTag::BothNonzeroOdd => "both_nonzero_odd",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Cases that can carry solutions for this `m`.
pub fn applicable_cases(m: u32) -> Result<Vec<CaseTag>> {
    check_m(m)?;
    let mut cases = Vec::new();
    if (m + 2).is_multiple_of(3) {
        cases.push(CaseTag::C1Zero);
    }
    if m.is_multiple_of(2) {
        cases.push(CaseTag::C2Zero);
        cases.push(CaseTag::BothNonzeroEven);
    } else {
        cases.push(CaseTag::BothNonzeroOdd);
    }
    Ok(cases)
}

/// `f` and `g` for the case with both `C_1`, `C_2` nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CasePolynomials {
    pub case_tag: CaseTag,
    pub f: UniPoly,
    pub g: UniPoly,
}

/// `(i, j)` exponent pair of `C_1^i C_2^j`.
type Key = (u32, u32);

pub fn build_case_polynomials(gr: &GroebnerResult) -> Result<CasePolynomials> {
    let m = gr.m;
    let (case_tag, f_keys, g_keys): (CaseTag, Vec<Key>, Vec<Key>) = if m.is_multiple_of(2) {
        // a_r = λ_m^{(m-2-6r)/2, 2r+1},  b_r = λ_{m+1}^{(m+2-6r)/2, 2r}
        let f = (0..=(m - 2) / 6)
            .map(|r| ((m - 2 - 6 * r) / 2, 2 * r + 1))
            .collect();
        let g = (0..=(m + 2) / 6)
            .map(|r| ((m + 2 - 6 * r) / 2, 2 * r))
            .collect();
        (CaseTag::BothNonzeroEven, f, g)
    } else {
        // a_r = λ_m^{(m+1-6r)/2, 2r},  b_r = λ_{m+1}^{(m-1-6r)/2, 2r+1}
        let f = (0..=(m + 1) / 6)
            .map(|r| ((m + 1 - 6 * r) / 2, 2 * r))
            .collect();
        let g = (0..=(m - 1) / 6)
            .map(|r| ((m - 1 - 6 * r) / 2, 2 * r + 1))
            .collect();
        (CaseTag::BothNonzeroOdd, f, g)
    };
    for (table, keys, name) in [
        (&gr.lambda_m, &f_keys, "R_m"),
        (&gr.lambda_m1, &g_keys, "R_{m+1}"),
    ] {
        if let Some(stray) = table.0.keys().find(|k| !keys.contains(k)) {
            return Err(Error::InvariantViolation(format!(
                "{name} has a term C_1^{} C_2^{} outside the t-substitution pattern",
                stray.0, stray.1
            )));
        }
    }
    let f = UniPoly::new(f_keys.iter().map(|&(i, j)| gr.lambda_m.get(i, j)).collect());
    let g = UniPoly::new(
        g_keys
            .iter()
            .map(|&(i, j)| gr.lambda_m1.get(i, j))
            .collect(),
    );
    Ok(CasePolynomials { case_tag, f, g })
}

/// Number of distinct roots of `f` and its squarefree part.
pub fn roots_exact_count(f: &UniPoly) -> Result<(usize, UniPoly)> {
    if f.is_zero() {
        return Err(Error::Degenerate(
            "f(t) vanishes identically: the t-parametrized solutions form a continuum".into(),
        ));
    }
    let sf = f.squarefree_part()?;
    Ok((sf.degree().unwrap_or(0), sf))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionBranch {
    pub index: usize,
    pub case_tag: CaseTag,
    pub t_root: Option<RootDatum>,
    /// Sign of the chosen square root of `t_l` (odd case).
    pub sqrt_choice: Option<Sign>,
    /// Sign in `C_2 = ±(t_l C_1^3)^{1/2}` (even case).
    pub c2_sign: Option<Sign>,
    /// Root-of-unity index of the fractional power, in `0..unity_count`.
    pub unity_index: u32,
    pub unity_count: u32,
    /// Coefficient dividing `-y` in the case-1/2 closed forms.
    #[serde(with = "rational::wire_opt")]
    pub pivot: Option<Rational>,
    pub closed_form: String,
    /// `C_1` is proportional to `y` raised to this power (`None` when `C_1 = 0`).
    #[serde(with = "rational::wire_opt")]
    pub c1_exponent: Option<Rational>,
    #[serde(with = "rational::wire_opt")]
    pub c2_exponent: Option<Rational>,
    /// Set when the closed form divides by zero.
    pub degenerate: Option<String>,
}

/// Bound on the number of solutions in one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBound {
    pub case_tag: CaseTag,
    pub candidates: usize,
    pub bound: usize,
    /// Cases 1 and 2 have exactly `bound` solutions; cases 3 and 4 at most `bound`.
    pub exact: bool,
}

pub fn case_bound(case: CaseTag, m: u32, s: usize) -> (usize, bool) {
    let m = m as usize;
    match case {
        CaseTag::C1Zero => (m.div_ceil(3), true),
        CaseTag::C2Zero => ((m + 2) / 2, true),
        CaseTag::BothNonzeroEven => (s * (m + 2), false),
        CaseTag::BothNonzeroOdd => (2 * s * (m + 2), false),
    }
}

/// Lists every closed-form branch, case by case in [`applicable_cases`] order.
pub fn enumerate_branches(
    gr: &GroebnerResult,
    cp: &CasePolynomials,
    roots: &[RootDatum],
) -> Result<Vec<SolutionBranch>> {
    let m = gr.m;
    let c1_exp = rat(2, i64::from(m) + 2);
    let c2_exp = rat(3, i64::from(m) + 2);
    let mut out = Vec::new();
    let blank = |case_tag| SolutionBranch {
        index: 0,
        case_tag,
        t_root: None,
        sqrt_choice: None,
        c2_sign: None,
        unity_index: 0,
        unity_count: 1,
        pivot: None,
        closed_form: String::new(),
        c1_exponent: Some(c1_exp.clone()),
        c2_exponent: Some(c2_exp.clone()),
        degenerate: None,
    };

    for case in applicable_cases(m)? {
        match case {
            CaseTag::C1Zero => {
                let j = m.div_ceil(3);
                let lambda = pivot(gr, 0, j)?;
                for k in 0..j {
                    out.push(SolutionBranch {
                        unity_index: k,
                        unity_count: j,
                        closed_form: format!(
                            "C_{{-1}} = 0, C_{{-2}} = zeta_{j}^{k} * (-y/({}))^(1/{j})",
                            rational::to_text(&lambda)
                        ),
                        pivot: Some(lambda.clone()),
                        c1_exponent: None,
                        ..blank(case)
                    });
                }
            }
            CaseTag::C2Zero => {
                let i = (m + 2) / 2;
                let lambda = pivot(gr, i, 0)?;
                for k in 0..i {
                    out.push(SolutionBranch {
                        unity_index: k,
                        unity_count: i,
                        closed_form: format!(
                            "C_{{-1}} = zeta_{i}^{k} * (-y/({}))^(1/{i}), C_{{-2}} = 0",
                            rational::to_text(&lambda)
                        ),
                        pivot: Some(lambda.clone()),
                        c2_exponent: None,
                        ..blank(case)
                    });
                }
            }
            CaseTag::BothNonzeroEven => {
                let h = (m + 2) / 2;
                for root in roots {
                    let degenerate = degeneracy(root, &cp.g);
                    for k in 0..h {
                        for sign in [Sign::Plus, Sign::Minus] {
                            out.push(SolutionBranch {
                                t_root: Some(root.clone()),
                                c2_sign: Some(sign),
                                unity_index: k,
                                unity_count: h,
                                closed_form: format!(
                                    "C_{{-1}} = zeta_{h}^{k} * (-y/g(t_{l}))^(2/{mp2}), C_{{-2}} = {s}(t_{l}*C_{{-1}}^3)^(1/2)",
                                    l = root.index,
                                    mp2 = m + 2,
                                    s = sign.symbol(),
                                ),
                                degenerate: degenerate.clone(),
                                ..blank(case)
                            });
                        }
                    }
                }
            }
            CaseTag::BothNonzeroOdd => {
                let n = m + 2;
                for root in roots {
                    let degenerate = degeneracy(root, &cp.g);
                    for sigma in [Sign::Plus, Sign::Minus] {
                        for k in 0..n {
                            out.push(SolutionBranch {
                                t_root: Some(root.clone()),
                                sqrt_choice: Some(sigma),
                                unity_index: k,
                                unity_count: n,
                                closed_form: format!(
                                    "C_{{-1}} = mu^2, C_{{-2}} = {s}sqrt(t_{l})*mu^3, mu = zeta_{n}^{k} * (-y/({s}sqrt(t_{l})*g(t_{l})))^(1/{n})",
                                    l = root.index,
                                    s = sigma.symbol(),
                                ),
                                degenerate: degenerate.clone(),
                                ..blank(case)
                            });
                        }
                    }
                }
            }
        }
    }
    for (i, b) in out.iter_mut().enumerate() {
        b.index = i;
    }
    Ok(out)
}

fn pivot(gr: &GroebnerResult, i: u32, j: u32) -> Result<Rational> {
    let lambda = gr.lambda_m1.get(i, j);
    if lambda.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "pivotal coefficient λ_{{m+1}}^{{{i},{j}}} vanishes"
        )));
    }
    Ok(lambda)
}

/// Exact test for `t_l = 0` or `g(t_l) = 0`: the root must be a root of
/// `gcd(defining polynomial, t)` or `gcd(defining polynomial, g)`.
fn degeneracy(root: &RootDatum, g: &UniPoly) -> Option<String> {
    let t = UniPoly::new(vec![Rational::zero(), Rational::from_integer(1.into())]);
    if shares_root(&root.defining_polynomial, &t, root) {
        return Some("degenerate: division by zero in closed form (t_l = 0)".into());
    }
    if g.is_zero() || shares_root(&root.defining_polynomial, g, root) {
        return Some("degenerate: division by zero in closed form (g(t_l) = 0)".into());
    }
    None
}

fn shares_root(defining: &UniPoly, other: &UniPoly, root: &RootDatum) -> bool {
    let common = defining.gcd(other);
    match common.degree() {
        None | Some(0) => false,
        Some(_) => {
            if common == *defining {
                return true;
            }
            let z = root.approximation;
            let scale: f64 = common
                .to_f64_coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * z.norm() + c.abs());
            common.eval_complex(z).norm() <= 1e-8 * scale.max(1.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Finitely many branches enumerated.
    Finite,
    /// `f ≡ 0`: every `t` satisfies `R_m = 0` in the both-nonzero case.
    Continuum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub m: u32,
    pub cases: Vec<CaseTag>,
    pub case_polynomials: CasePolynomials,
    pub outcome: Outcome,
    /// Distinct roots of `f`.
    pub s: Option<usize>,
    pub squarefree_f: Option<UniPoly>,
    pub roots: Vec<RootDatum>,
    pub branches: Vec<SolutionBranch>,
    pub bounds: Vec<CaseBound>,
}

/// Runs the full case analysis on a reduced basis.
pub fn analyze(gr: &GroebnerResult, tol: f64, seed: u64) -> Result<Analysis> {
    let m = gr.m;
    let cases = applicable_cases(m)?;
    let cp = build_case_polynomials(gr)?;
    let (outcome, s, squarefree_f, roots) = match roots_exact_count(&cp.f) {
        Ok((s, sf)) => {
            let roots = find_roots(&cp.f, tol, seed)?;
            if roots.len() != s {
                return Err(Error::Numeric(format!(
                    "found {} numeric roots for {s} distinct exact roots",
                    roots.len()
                )));
            }
            (Outcome::Finite, Some(s), Some(sf), roots)
        }
        Err(Error::Degenerate(_)) => (Outcome::Continuum, None, None, Vec::new()),
        Err(e) => return Err(e),
    };
    let branches = enumerate_branches(gr, &cp, &roots)?;
    let bounds = cases
        .iter()
        .map(|&case| {
            let (bound, exact) = case_bound(case, m, s.unwrap_or(0));
            CaseBound {
                case_tag: case,
                candidates: branches.iter().filter(|b| b.case_tag == case).count(),
                bound,
                exact,
            }
        })
        .collect();
    Ok(Analysis {
        m,
        cases,
        case_polynomials: cp,
        outcome,
        s,
        squarefree_f,
        roots,
        branches,
        bounds,
    })
}
