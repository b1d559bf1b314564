//! Numeric roots of squarefree rational polynomials (Aberth–Ehrlich iteration).

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::univariate::UniPoly;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
const MAX_ITERATIONS: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootDatum {
    /// Squarefree rational polynomial vanishing at the root.
    pub defining_polynomial: UniPoly,
    pub approximation: Complex64,
    /// Multiplicity as a root of the polynomial the search started from.
    pub multiplicity: u32,
    /// Position in the canonical (real part, then imaginary part) ordering.
    pub index: usize,
    /// `|p(r)| / Σ |a_i| |r|^i` for the monic defining polynomial.
    pub residual: f64,
}

/// All roots of `f` with multiplicities, via its squarefree decomposition.
/// Constant `f` has no roots; `f = 0` is reported as degenerate.
pub fn find_roots(f: &UniPoly, tol: f64, seed: u64) -> Result<Vec<RootDatum>> {
    let mut roots = Vec::new();
    for (factor, mult) in f.squarefree_decomposition()? {
        for mut r in roots_numeric(&factor, tol, seed)? {
            r.multiplicity = mult;
            roots.push(r);
        }
    }
    sort_roots(&mut roots);
    Ok(roots)
}

/// Roots of a squarefree, nonconstant polynomial.
pub fn roots_numeric(squarefree: &UniPoly, tol: f64, seed: u64) -> Result<Vec<RootDatum>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let degree = match squarefree.degree() {
        None | Some(0) => {
            return Err(Error::Domain(
                "root finding requires a nonconstant polynomial".into(),
            ))
        }
        Some(d) => d,
    };
    let monic = squarefree.monic();
    let coeffs = monic.to_f64_coeffs();

    let mut zs = if degree == 1 {
        vec![Complex64::new(-coeffs[0], 0.0)]
    } else {
        aberth(&coeffs, seed)?
    };
    for z in zs.iter_mut() {
        *z = polish(&coeffs, *z);
    }
    pair_conjugates(&mut zs);

    let mut roots = Vec::with_capacity(degree);
    for z in zs {
        let residual = relative_residual(&coeffs, z);
        if residual.is_nan() || residual >= tol {
            return Err(Error::Numeric(format!(
                "root {z} of {squarefree} has relative residual {residual:e} >= {tol:e}"
            )));
        }
        roots.push(RootDatum {
            defining_polynomial: monic.clone(),
            approximation: z,
            multiplicity: 1,
            index: 0,
            residual,
        });
    }
    sort_roots(&mut roots);
    Ok(roots)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn relative_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let scale: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    if scale == 0.0 {
        p.norm()
    } else {
        p.norm() / scale
    }
}

fn aberth(coeffs: &[f64], seed: u64) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    // Cauchy bound on the root moduli of a monic polynomial
    let bound = 1.0 + coeffs[..degree].iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let radius = 0.5 * bound;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase: f64 = rng.gen::<f64>() * 2.0 * PI;
    let mut zs: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, phase + 2.0 * PI * k as f64 / degree as f64))
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        let prev = zs.clone();
        for i in 0..degree {
            let (p, dp) = horner(coeffs, prev[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (prev[i] - prev[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                zs[i] = prev[i] - step;
                max_step = max_step.max(step.norm() / prev[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            return Ok(zs);
        }
    }
    let worst = zs
        .iter()
        .map(|&z| relative_residual(coeffs, z))
        .fold(0.0f64, f64::max);
    if worst < 1e-12 {
        return Ok(zs);
    }
    Err(Error::Numeric(format!(
        "Aberth iteration did not converge after {MAX_ITERATIONS} sweeps (worst relative residual {worst:e})"
    )))
}

fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if !next.is_finite() || relative_residual(coeffs, next) > relative_residual(coeffs, z) {
            break;
        }
        z = next;
    }
    z
}

/// Real coefficients: snap near-real roots onto the axis and make conjugate pairs exact.
fn pair_conjugates(zs: &mut [Complex64]) {
    for z in zs.iter_mut() {
        if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
            z.im = 0.0;
        }
    }
    let n = zs.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || zs[i].im <= 0.0 {
            continue;
        }
        let target = zs[i].conj();
        let partner = (0..n)
            .filter(|&j| !used[j] && j != i && zs[j].im < 0.0)
            .min_by(|&a, &b| (zs[a] - target).norm().total_cmp(&(zs[b] - target).norm()));
        if let Some(j) = partner {
            let avg = (zs[i] + zs[j].conj()) * 0.5;
            zs[i] = avg;
            zs[j] = avg.conj();
            used[i] = true;
            used[j] = true;
        }
    }
}

fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn sort_roots(roots: &mut [RootDatum]) {
    roots.sort_by(|a, b| canonical_cmp(&a.approximation, &b.approximation));
    for (i, r) in roots.iter_mut().enumerate() {
        r.index = i;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn linear_root() {
        let f = UniPoly::new(vec![rat(-1, 3), int(1)]);
        let roots = roots_numeric(&f, 1e-12, DEFAULT_SEED).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].approximation - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn imaginary_pair_in_canonical_order() {
        let f = UniPoly::new(vec![int(1), int(0), int(1)]);
        let roots = roots_numeric(&f, 1e-12, DEFAULT_SEED).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].approximation - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((roots[1].approximation - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(roots[0].index, 0);
        assert_eq!(roots[1].index, 1);
    }

    #[test]
    fn constant_is_rejected() {
        let f = UniPoly::constant(int(4));
        assert!(matches!(roots_numeric(&f, 1e-9, 1), Err(Error::Domain(_))));
        assert!(find_roots(&f, 1e-9, 1).unwrap().is_empty());
        assert!(matches!(
            find_roots(&UniPoly::zero(), 1e-9, 1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn multiplicities_sum_to_degree() {
        // (t - 1)^2 (t^2 + 2)
        let sq = UniPoly::new(vec![int(1), int(-2), int(1)]);
        let f = sq.mul(&UniPoly::new(vec![int(2), int(0), int(1)]));
        let roots = find_roots(&f, 1e-10, DEFAULT_SEED).unwrap();
        assert_eq!(roots.len(), 3);
        let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total as usize, f.degree().unwrap());
        let one = roots.iter().find(|r| r.multiplicity == 2).unwrap();
        assert!((one.approximation - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn seed_does_not_change_the_answer() {
        let f = UniPoly::new(vec![int(-6), int(11), int(-6), int(1)]);
        let a = roots_numeric(&f, 1e-10, 1).unwrap();
        let b = roots_numeric(&f, 1e-10, 99).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.approximation - y.approximation).norm() < 1e-12);
        }
        assert!((a[2].approximation.re - 3.0).abs() < 1e-12);
    }
}
