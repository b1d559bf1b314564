//! Numeric verification of solution branches and the independent series oracles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational;
use crate::algebra::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::GroebnerResult;
use crate::laurent::{generic_c, LaurentSeries};
use crate::solve::{case_bound, Analysis, CaseTag, SolutionBranch};
use crate::system::SystemInstance;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative distance under which two verified branches count as the same solution.
const DEDUP_REL: f64 = 1e-6;

pub fn default_y_samples() -> Vec<Complex64> {
    vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 1.0),
        Complex64::new(-5.0, 0.0),
    ]
}

fn principal_root(w: Complex64, n: u32) -> Complex64 {
    // fold -0.0 into +0.0 so the negative real axis keeps argument +π
    let w = Complex64::new(w.re + 0.0, w.im + 0.0);
    Complex64::from_polar(w.norm().powf(1.0 / f64::from(n)), w.arg() / f64::from(n))
}

fn unity(n: u32, k: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * f64::from(k) / f64::from(n))
}

/// Values of `C_1, …, C_{m+1}` on a branch at the given `y`.
pub fn evaluate_branch(
    branch: &SolutionBranch,
    gr: &GroebnerResult,
    y: Complex64,
) -> Result<Vec<Complex64>> {
    if y.norm() == 0.0 {
        return Err(Error::Domain("branches are evaluated at y != 0".into()));
    }
    if let Some(reason) = &branch.degenerate {
        return Err(Error::Degenerate(reason.clone()));
    }
    let m = gr.m;
    let k = branch.unity_index;
    let n = branch.unity_count;
    let pivot = || -> Result<f64> {
        branch
            .pivot
            .as_ref()
            .map(rational::to_f64)
            .ok_or_else(|| Error::InvariantViolation("branch without pivot".into()))
    };
    let t_and_g = || -> Result<(Complex64, Complex64)> {
        let root = branch
            .t_root
            .as_ref()
            .ok_or_else(|| Error::InvariantViolation("branch without t root".into()))?;
        let t = root.approximation;
        let g = crate::solve::build_case_polynomials(gr)?.g.eval_complex(t);
        Ok((t, g))
    };

    let (c1, c2) = match branch.case_tag {
        CaseTag::C1Zero => {
            let w = -y / pivot()?;
            (Complex64::new(0.0, 0.0), principal_root(w, n) * unity(n, k))
        }
        CaseTag::C2Zero => {
            let w = -y / pivot()?;
            (principal_root(w, n) * unity(n, k), Complex64::new(0.0, 0.0))
        }
        CaseTag::BothNonzeroEven => {
            let (t, g) = t_and_g()?;
            let c1 = principal_root(-y / g, n) * unity(n, k);
            let sign = branch.c2_sign.map_or(1.0, |s| s.value());
            (c1, (t * c1.powu(3)).sqrt() * sign)
        }
        CaseTag::BothNonzeroOdd => {
            let (t, g) = t_and_g()?;
            let sqrt_t = t.sqrt() * branch.sqrt_choice.map_or(1.0, |s| s.value());
            let mu = principal_root(-y / (sqrt_t * g), n) * unity(n, k);
            (mu * mu, sqrt_t * mu.powu(3))
        }
    };

    let mut values = vec![Complex64::new(0.0, 0.0); m as usize + 1];
    values[0] = c1;
    values[1] = c2;
    for idx in 3..=m + 1 {
        values[idx as usize - 1] = -gr.remainder(idx - 2).eval(&values[..2], y)?;
    }
    Ok(values)
}

/// `|E_k| / max_term |term|` for each equation, evaluated in double precision.
pub fn residuals(values: &[Complex64], sys: &SystemInstance, y: Complex64) -> Result<Vec<f64>> {
    if values.len() != sys.unknowns() {
        return Err(Error::DimensionMismatch {
            expected: sys.unknowns(),
            found: values.len(),
        });
    }
    sys.equations
        .iter()
        .map(|e| {
            let terms = e.eval_terms_at(values, y)?;
            let total: Complex64 = terms.iter().sum();
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            Ok(if scale == 0.0 {
                0.0
            } else {
                total.norm() / scale
            })
        })
        .collect()
}

/// Largest scaled coefficient of `x^{-1}, …, x^{-(m-1)}` in `C^3`, computed by
/// numeric convolution of `C = x + Σ C_k x^{-k}` rather than from the stored equations.
pub fn cube_tail_residual(values: &[Complex64], m: u32) -> f64 {
    // index i holds the coefficient of x^{1-i}
    let mut series = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    series.extend_from_slice(values);
    let len = series.len();
    let convolve = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, x) in a.iter().enumerate() {
            for (j, z) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * z;
            }
        }
        out
    };
    let abs: Vec<Complex64> = series
        .iter()
        .map(|z| Complex64::new(z.norm(), 0.0))
        .collect();
    let sq = convolve(&series, &series);
    let cube = convolve(&sq, &series);
    let abs_cube = convolve(&convolve(&abs, &abs), &abs);
    // C^3 index i is x^{3-i}; x^{-k} sits at i = k + 3
    (1..m as usize)
        .map(|k| {
            let scale = abs_cube[k + 3].re;
            if scale == 0.0 {
                0.0
            } else {
                cube[k + 3].norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Spurious,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchVerification {
    pub index: usize,
    pub case_tag: CaseTag,
    pub verdict: Verdict,
    /// `residuals[s][k-1]` is the scaled `|E_k|` at the `s`-th sample.
    pub residuals: Vec<Vec<f64>>,
    pub max_residual: f64,
    /// 1-based index of the equation attaining `max_residual`.
    pub worst_equation: Option<usize>,
    /// See [`cube_tail_residual`]; informational, not part of the verdict.
    pub cube_tail_residual: f64,
    /// Values of `C_1, …, C_{m+1}` at the first sample.
    pub values: Vec<Complex64>,
    /// Earlier verified branch with the same values at the first sample.
    pub duplicate_of: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case_tag: CaseTag,
    pub candidates: usize,
    pub verified: usize,
    /// Distinct verified solutions (largest count over the samples).
    pub distinct_verified: usize,
    pub spurious: usize,
    pub degenerate: usize,
    pub bound: usize,
    pub exact: bool,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub m: u32,
    pub y_samples: Vec<Complex64>,
    pub tol: f64,
    pub branches: Vec<BranchVerification>,
    pub summary: Vec<CaseSummary>,
    pub bounds_ok: bool,
}

struct Evaluated {
    values: Vec<Vec<Complex64>>,
    report: BranchVerification,
}

fn check_branch(
    branch: &SolutionBranch,
    sys: &SystemInstance,
    gr: &GroebnerResult,
    ys: &[Complex64],
    tol: f64,
) -> Result<Evaluated> {
    let mut report = BranchVerification {
        index: branch.index,
        case_tag: branch.case_tag,
        verdict: Verdict::Degenerate,
        residuals: Vec::new(),
        max_residual: 0.0,
        worst_equation: None,
        cube_tail_residual: 0.0,
        values: Vec::new(),
        duplicate_of: None,
        note: branch.degenerate.clone(),
    };
    if branch.degenerate.is_some() {
        return Ok(Evaluated {
            values: Vec::new(),
            report,
        });
    }
    let mut all_values = Vec::with_capacity(ys.len());
    let mut worst = (0.0f64, None);
    for &y in ys {
        let values = evaluate_branch(branch, gr, y)?;
        let res = residuals(&values, sys, y)?;
        for (k, &r) in res.iter().enumerate() {
            if r > worst.0 || r.is_nan() {
                worst = (r, Some(k + 1));
            }
        }
        report.cube_tail_residual = report
            .cube_tail_residual
            .max(cube_tail_residual(&values, sys.m));
        report.residuals.push(res);
        all_values.push(values);
    }
    report.max_residual = worst.0;
    report.worst_equation = worst.1;
    report.verdict = if worst.0 < tol {
        Verdict::Verified
    } else {
        Verdict::Spurious
    };
    report.values = all_values[0].clone();
    Ok(Evaluated {
        values: all_values,
        report,
    })
}

fn same_point(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, z)| (x - z).norm() <= DEDUP_REL * x.norm().max(z.norm()).max(1.0))
}

/// Checks every enumerated branch at each `y` sample. Branch order in the report
/// follows enumeration order regardless of how the work is scheduled.
pub fn verify(
    sys: &SystemInstance,
    gr: &GroebnerResult,
    analysis: &Analysis,
    ys: &[Complex64],
    tol: f64,
) -> Result<VerificationReport> {
    if ys.is_empty() {
        return Err(Error::Domain("at least one y sample is required".into()));
    }
    if ys.iter().any(|y| y.norm() == 0.0) {
        return Err(Error::Domain("y samples must be nonzero".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut evaluated = analysis
        .branches
        .par_iter()
        .map(|b| check_branch(b, sys, gr, ys, tol))
        .collect::<Result<Vec<_>>>()?;

    for i in 0..evaluated.len() {
        if evaluated[i].report.verdict != Verdict::Verified {
            continue;
        }
        let dup = (0..i).find(|&j| {
            evaluated[j].report.verdict == Verdict::Verified
                && evaluated[j].report.duplicate_of.is_none()
                && same_point(&evaluated[j].values[0], &evaluated[i].values[0])
        });
        evaluated[i].report.duplicate_of = dup;
    }

    let mut summary = Vec::new();
    for &case in &analysis.cases {
        let in_case: Vec<&Evaluated> = evaluated
            .iter()
            .filter(|e| e.report.case_tag == case)
            .collect();
        let count = |v: Verdict| in_case.iter().filter(|e| e.report.verdict == v).count();
        let verified: Vec<&Evaluated> = in_case
            .iter()
            .copied()
            .filter(|e| e.report.verdict == Verdict::Verified)
            .collect();
        let distinct_verified = (0..ys.len())
            .map(|s| {
                let mut reps: Vec<&[Complex64]> = Vec::new();
                for e in &verified {
                    if !reps.iter().any(|r| same_point(r, &e.values[s])) {
                        reps.push(&e.values[s]);
                    }
                }
                reps.len()
            })
            .max()
            .unwrap_or(0);
        let (bound, exact) = case_bound(case, sys.m, analysis.s.unwrap_or(0));
        let within_bound = if exact {
            distinct_verified == bound
        } else {
            distinct_verified <= bound && in_case.len() <= bound
        };
        summary.push(CaseSummary {
            case_tag: case,
            candidates: in_case.len(),
            verified: verified.len(),
            distinct_verified,
            spurious: count(Verdict::Spurious),
            degenerate: count(Verdict::Degenerate),
            bound,
            exact,
            within_bound,
        });
    }
    let bounds_ok = summary.iter().all(|s| s.within_bound);
    Ok(VerificationReport {
        m: sys.m,
        y_samples: ys.to_vec(),
        tol,
        branches: evaluated.into_iter().map(|e| e.report).collect(),
        summary,
        bounds_ok,
    })
}

/// `C^m` by `m - 1` plain multiplications by `C`. With `relations`, the
/// substitutions `C_k ← p` are applied to every coefficient after each step.
pub fn oracle_power_expand(
    m: u32,
    relations: Option<&[(u32, Polynomial)]>,
) -> Result<LaurentSeries> {
    if m == 0 {
        return Err(Error::Domain("oracle power requires m >= 1".into()));
    }
    let c = generic_c(m, -(i64::from(m) + 1))?;
    let reduce = |s: LaurentSeries| -> Result<LaurentSeries> {
        match relations {
            Some(rel) => s.map_coeffs(|p| p.substitute(rel)),
            None => Ok(s),
        }
    };
    let mut acc = reduce(c.clone())?;
    for _ in 1..m {
        acc = reduce(acc.mul(&c)?)?;
    }
    Ok(acc)
}

/// Triangular relations `C_{k+2} ← -R_k` (`k < m`) derived from a plainly
/// multiplied `C^3`, independently of the Groebner engine.
pub fn oracle_relations(m: u32) -> Result<Vec<(u32, Polynomial)>> {
    let c = generic_c(m, -(i64::from(m) + 1))?;
    let cube = c.mul(&c)?.mul(&c)?;
    let mut rels: Vec<(u32, Polynomial)> = Vec::new();
    for k in 1..m {
        let p = cube.coeff_at(-i64::from(k))?.substitute(&rels)?;
        let lead = Monomial::c(m, k + 2, 1);
        let lc = p.coeff(&lead);
        if lc == rational::int(0) {
            return Err(Error::InvariantViolation(format!(
                "(C^3)_{{-{k}}} lacks C_{{-{}}}",
                k + 2
            )));
        }
        let rest = &p - &Polynomial::term(m, lead, lc.clone());
        rels.push((k + 2, rest.scale(&(-lc.recip()))));
    }
    Ok(rels)
}

/// `(R_m, R_{m+1})` re-derived by the oracle route.
pub fn oracle_remainders(m: u32) -> Result<(Polynomial, Polynomial)> {
    let rels = oracle_relations(m)?;
    let power = oracle_power_expand(m, Some(&rels))?;
    Ok((power.coeff_at(-1)?, power.coeff_at(-2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::groebner::reduce_basis;
    use crate::laurent::series_pow;
    use crate::roots::DEFAULT_SEED;
    use crate::solve::analyze;
    use crate::system::build_system;

    fn pipeline(m: u32) -> (SystemInstance, GroebnerResult, Analysis) {
        let sys = build_system(m).unwrap();
        let gr = reduce_basis(&sys).unwrap();
        let an = analyze(&gr, DEFAULT_TOL, DEFAULT_SEED).unwrap();
        (sys, gr, an)
    }

    #[test]
    fn oracle_m4() {
        let (r4, r5) = oracle_remainders(4).unwrap();
        let c1 = Polynomial::c(4, 1);
        let c2 = Polynomial::c(4, 2);
        assert_eq!(r4, (&c1 * &c2).scale(&int(4)));
        assert_eq!(
            r5,
            &c2.pow(2).unwrap().scale(&int(2)) - &c1.pow(3).unwrap().scale(&rat(4, 3))
        );
    }

    #[test]
    fn oracle_m5() {
        let (_, r6) = oracle_remainders(5).unwrap();
        let c1 = Polynomial::c(5, 1);
        let c2 = Polynomial::c(5, 2);
        assert_eq!(r6, (&c1.pow(2).unwrap() * &c2).scale(&int(-5)));
    }

    #[test]
    fn oracle_without_relations_matches_fast_power() {
        let c = generic_c(3, -4).unwrap();
        assert_eq!(
            oracle_power_expand(3, None).unwrap(),
            series_pow(&c, 3).unwrap()
        );
    }

    #[test]
    fn case1_principal_branch_m4() {
        let (_, gr, an) = pipeline(4);
        let b = &an.branches[0];
        assert_eq!(b.case_tag, CaseTag::C1Zero);
        let v = evaluate_branch(b, &gr, Complex64::new(1.0, 0.0)).unwrap();
        let c2 = Complex64::new(-0.5, 0.0).sqrt();
        assert!(v[0].norm() < 1e-15);
        assert!((v[1] - c2).norm() < 1e-15);
        assert!(v[2].norm() < 1e-15);
        assert!(v[3].norm() < 1e-15);
        assert!((v[4] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn c3_is_minus_c1_squared() {
        let (_, gr, an) = pipeline(7);
        for b in &an.branches {
            let v = evaluate_branch(b, &gr, Complex64::new(2.0, 1.0)).unwrap();
            assert!((v[2] + v[0] * v[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_y_is_rejected() {
        let (_, gr, an) = pipeline(4);
        assert!(matches!(
            evaluate_branch(&an.branches[0], &gr, Complex64::new(0.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zero_is_a_solution_of_the_cubic_part() {
        let sys = build_system(5).unwrap();
        let zeros = vec![Complex64::new(0.0, 0.0); 6];
        let res = residuals(&zeros, &sys, Complex64::new(0.0, 0.0)).unwrap();
        assert!(res[..4].iter().all(|&r| r == 0.0));
        assert!(residuals(&zeros[..3], &sys, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn perturbation_is_detected() {
        let (sys, gr, an) = pipeline(4);
        let y = Complex64::new(1.0, 0.0);
        for b in &an.branches {
            let mut v = evaluate_branch(b, &gr, y).unwrap();
            assert!(residuals(&v, &sys, y).unwrap().iter().all(|&r| r < 1e-10));
            v[0] += 1e-3;
            assert!(residuals(&v, &sys, y).unwrap().iter().any(|&r| r > 1e-6));
        }
    }

    #[test]
    fn m4_report() {
        let (sys, gr, an) = pipeline(4);
        let report = verify(&sys, &gr, &an, &default_y_samples(), DEFAULT_TOL).unwrap();
        assert!(report.bounds_ok);
        assert!(report
            .branches
            .iter()
            .all(|b| b.verdict == Verdict::Verified));
        let counts: Vec<_> = report.summary.iter().map(|s| s.distinct_verified).collect();
        assert_eq!(counts, vec![2, 3, 0]);
    }
}
