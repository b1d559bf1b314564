use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector over the variables `C_{m+1}, C_m, …, C_1, y` (slot order).
///
/// `C_k` stands for the coefficient of `x^{-k}`. The ring parameter `m` is implied
/// by the length (`m + 2` slots), so the weight of each slot is known to the
/// monomial itself and [`Ord`] is the weighted reverse-lexicographic order of
/// [`MonomialOrder::weighted_revlex`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(m: u32) -> Self {
        Monomial {
            exps: vec![0; m as usize + 2],
        }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Result<Self> {
        if exps.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: exps.len(),
            });
        }
        Ok(Monomial { exps })
    }

    /// `C_k^e` in the ring at parameter `m`.
    pub fn c(m: u32, k: u32, e: u32) -> Self {
        let mut mono = Self::one(m);
        mono.exps[c_slot(m, k)] = e;
        mono
    }

    pub fn y(m: u32, e: u32) -> Self {
        let mut mono = Self::one(m);
        mono.exps[m as usize + 1] = e;
        mono
    }

    /// `C_1^i C_2^j`.
    pub fn c1_c2(m: u32, i: u32, j: u32) -> Self {
        let mut mono = Self::one(m);
        mono.exps[c_slot(m, 1)] = i;
        mono.exps[c_slot(m, 2)] = j;
        mono
    }

    pub fn m(&self) -> u32 {
        (self.exps.len() - 2) as u32
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp_c(&self, k: u32) -> u32 {
        self.exps[c_slot(self.m(), k)]
    }

    pub fn exp_y(&self) -> u32 {
        self.exps[self.exps.len() - 1]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    /// Weighted degree with `w(C_k) = k + 1` and `w(y) = m + 2`.
    pub fn weight(&self) -> u64 {
        let m = u64::from(self.m());
        self.exps
            .iter()
            .enumerate()
            .map(|(slot, &e)| slot_weight(m, slot) * u64::from(e))
            .sum()
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        self.same_shape(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    pub fn checked_pow(&self, e: u32) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .map(|a| a.checked_mul(e).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.same_shape(other)?;
        Ok(Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        })
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// True when only `C_1`, `C_2` (and optionally `y`) occur.
    pub fn only_c1_c2(&self, allow_y: bool) -> bool {
        let m = self.m() as usize;
        self.exps[..m - 1].iter().all(|&e| e == 0) && (allow_y || self.exps[m + 1] == 0)
    }

    fn same_shape(&self, other: &Monomial) -> Result<()> {
        if self.exps.len() != other.exps.len() {
            Err(Error::RingMismatch {
                left: self.m(),
                right: other.m(),
            })
        } else {
            Ok(())
        }
    }
}

/// Slot of `C_k` in a ring at parameter `m`.
pub fn c_slot(m: u32, k: u32) -> usize {
    assert!(k >= 1 && k <= m + 1, "C_{k} is not a variable when m = {m}");
    (m + 1 - k) as usize
}

fn slot_weight(m: u64, slot: usize) -> u64 {
    if slot as u64 == m + 1 {
        m + 2
    } else {
        m + 2 - slot as u64
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps
            .len()
            .cmp(&other.exps.len())
            .then_with(|| self.weight().cmp(&other.weight()))
            .then_with(|| {
                // Ties: the monomial with the smaller exponent in y, then C_1, C_2, … wins.
                for (a, b) in self.exps.iter().rev().zip(other.exps.iter().rev()) {
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// Rendering in `C_{-k}` notation: `C_{-1}^2*C_{-3}*y`, `1` for the unit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m();
        let mut factors = Vec::new();
        for k in 1..=m + 1 {
            let e = self.exp_c(k);
            match e {
                0 => {}
                1 => factors.push(format!("C_{{-{k}}}")),
                _ => factors.push(format!("C_{{-{k}}}^{e}")),
            }
        }
        match self.exp_y() {
            0 => {}
            1 => factors.push("y".to_string()),
            e => factors.push(format!("y^{e}")),
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// A monomial order given by an integer matrix: `u < v` iff `M·u <_lex M·v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    matrix: Vec<Vec<i64>>,
}

impl MonomialOrder {
    /// Validates that the first row is strictly positive and the matrix has full column rank.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let cols = matrix.first().map_or(0, Vec::len);
        if cols == 0 {
            return Err(Error::Domain("empty order matrix".into()));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: row.len(),
            });
        }
        if matrix[0].iter().any(|&w| w <= 0) {
            return Err(Error::Domain(
                "first row of an order matrix must be strictly positive".into(),
            ));
        }
        if rank(&matrix) < cols {
            return Err(Error::Domain(
                "order matrix is not of full column rank".into(),
            ));
        }
        Ok(MonomialOrder { matrix })
    }

    /// The weighted degree-reverse-lexicographic order on `C_{m+1}, …, C_1, y`:
    /// a weight row, then `-1` rows on `y`, `C_1`, `C_2`, …, `C_m` in that order.
    pub fn weighted_revlex(m: u32) -> Self {
        let n = m as usize + 2;
        let mut matrix = Vec::with_capacity(n);
        let weights: Vec<i64> = (0..n)
            .map(|s| slot_weight(u64::from(m), s) as i64)
            .collect();
        matrix.push(weights);
        for slot in (1..n).rev() {
            let mut row = vec![0; n];
            row[slot] = -1;
            matrix.push(row);
        }
        MonomialOrder { matrix }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn num_vars(&self) -> usize {
        self.matrix[0].len()
    }

    /// `M·u`; comparing these keys lexicographically is comparing monomials.
    pub fn key(&self, u: &Monomial) -> Result<Vec<i128>> {
        if u.exps.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: u.exps.len(),
            });
        }
        Ok(self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&u.exps)
                    .map(|(&a, &e)| i128::from(a) * i128::from(e))
                    .sum()
            })
            .collect())
    }

    pub fn compare(&self, u: &Monomial, v: &Monomial) -> Result<Ordering> {
        Ok(self.key(u)?.cmp(&self.key(v)?))
    }
}

fn rank(matrix: &[Vec<i64>]) -> usize {
    use super::rational::{int, Rational};
    use num_traits::Zero;

    let mut rows: Vec<Vec<Rational>> = matrix
        .iter()
        .map(|r| r.iter().map(|&a| int(a)).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}
