//! Permanent engines.
//!
//! * [`perm_naive`]: the defining sum over all `n!` permutations (oracle).
//! * [`perm_ryser`]: Ryser inclusion-exclusion over column subsets, visited
//!   in Gray-code order so each step updates the row sums by one column.
//! * [`perm_rank2_structured`]: `perm(1 + u vᵀ) = sum_k k!(n-k)! e_k(u) e_k(v)`.
//! * [`perm_rank2_determinantal`]: for rank at most 2,
//!   `perm(X) = (n!)² det(X∘n) / (nⁿ det(X∘(n-1)))` where `X∘p` is the
//!   entrywise power.
//! * [`perm_auto`]: tries the determinantal route, then falls back to an
//!   oracle engine.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, int_pow, Rational};
use crate::linalg::Matrix;
use crate::symfunc::elementary_symmetric_all;

pub const NAIVE_MAX_N: usize = 10;
pub const RYSER_MAX_N: usize = 30;

/// Environment variable that overrides the exponential engines' size limit.
pub const MAX_N_ENV: &str = "PERMIDENT_MAX_N";

/// Size limits for the exponential-time engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub naive_max: usize,
    pub ryser_max: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            naive_max: NAIVE_MAX_N,
            ryser_max: RYSER_MAX_N,
        }
    }
}

impl Guards {
    /// Applies `PERMIDENT_MAX_N` if set: it becomes the Ryser limit and caps
    /// the naive limit.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_N_ENV) {
            Ok(raw) => {
                let max: usize = raw.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "{MAX_N_ENV}={raw:?} is not a nonnegative integer"
                    ))
                })?;
                Ok(Guards::with_max_n(max))
            }
            Err(_) => Ok(Guards::default()),
        }
    }

    pub fn with_max_n(max: usize) -> Self {
        Guards {
            naive_max: NAIVE_MAX_N.min(max),
            ryser_max: max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PermanentMethod {
    Naive,
    Ryser,
    Structured,
    Determinantal,
}

impl fmt::Display for PermanentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermanentMethod::Naive => "naive",
            PermanentMethod::Ryser => "ryser",
            PermanentMethod::Structured => "structured",
            PermanentMethod::Determinantal => "determinantal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermanentResult {
    pub value: Rational,
    pub method: PermanentMethod,
    pub fallback_reason: Option<String>,
}

fn check_guard(engine: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge { engine, n, limit })
    } else {
        Ok(())
    }
}

pub fn perm_naive(m: &Matrix) -> Result<Rational> {
    perm_naive_bounded(m, NAIVE_MAX_N)
}

pub fn perm_naive_bounded(m: &Matrix, max_n: usize) -> Result<Rational> {
    let n = m.order()?;
    check_guard("naive", n, max_n)?;

    // Depth-first over rows; each level picks an unused column and carries the
    // partial product down.
    fn expand(m: &Matrix, row: usize, used: &mut [bool], partial: &Rational, acc: &mut Rational) {
        let n = used.len();
        if row == n {
            *acc += partial;
            return;
        }
        for col in 0..n {
            if used[col] || m.get(row, col).is_zero() {
                continue;
            }
            used[col] = true;
            let next = partial * m.get(row, col);
            expand(m, row + 1, used, &next, acc);
            used[col] = false;
        }
    }

    let mut acc = Rational::zero();
    expand(m, 0, &mut vec![false; n], &Rational::one(), &mut acc);
    Ok(acc)
}

pub fn perm_ryser(m: &Matrix) -> Result<Rational> {
    perm_ryser_bounded(m, RYSER_MAX_N)
}

pub fn perm_ryser_bounded(m: &Matrix, max_n: usize) -> Result<Rational> {
    let n = m.order()?;
    check_guard("ryser", n, max_n)?;

    // perm is linear in each row, so clear denominators row by row and divide
    // the product of the scale factors back out at the end.
    let (rows, factors) = m.scaled_integer_rows();
    let scale: BigInt = factors.iter().product();

    let total = if fits_small(&rows) {
        let small: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().expect("checked by fits_small"))
                    .collect()
            })
            .collect();
        ryser_small(&small, n)
    } else {
        ryser_big(&rows, n)
    };
    Rational::new(total, scale)
}

/// True when every partial row sum fits comfortably in an `i64`.
fn fits_small(rows: &[Vec<BigInt>]) -> bool {
    let limit = BigInt::from(i64::MAX >> 1);
    rows.iter()
        .all(|r| r.iter().map(|x| x.abs()).sum::<BigInt>() < limit)
}

/// Gray-code walk over nonempty column subsets: step `k` flips column
/// `trailing_zeros(k)`, and the subset is `k ^ (k >> 1)`.
fn ryser_small(a: &[Vec<i64>], n: usize) -> BigInt {
    let mut sums = vec![0i64; n];
    let mut total = BigInt::zero();
    let mut prod = BigInt::zero();
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        if gray >> j & 1 == 1 {
            sums.iter_mut().zip(a).for_each(|(s, row)| *s += row[j]);
        } else {
            sums.iter_mut().zip(a).for_each(|(s, row)| *s -= row[j]);
        }
        if sums.contains(&0) {
            continue;
        }
        prod.set_one();
        for &s in &sums {
            prod *= s;
        }
        if gray.count_ones() % 2 == 1 {
            total -= &prod;
        } else {
            total += &prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

fn ryser_big(a: &[Vec<BigInt>], n: usize) -> BigInt {
    let mut sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let add = gray >> j & 1 == 1;
        for (s, row) in sums.iter_mut().zip(a) {
            if add {
                *s += &row[j];
            } else {
                *s -= &row[j];
            }
        }
        let prod: BigInt = sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// `perm(A)` for `A(i, j) = 1 + u_i v_j`, in `O(n²)`.
pub fn perm_rank2_structured(u: &[Rational], v: &[Rational]) -> Result<Rational> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let n = u.len() as u64;
    if n == 0 {
        return Err(Error::InvalidArgument("vectors must be nonempty".into()));
    }
    let eu = elementary_symmetric_all(u);
    let ev = elementary_symmetric_all(v);
    Ok((0..=n)
        .map(|k| {
            let weight = Rational::from_integer(factorial(k) * factorial(n - k));
            weight * &eu[k as usize] * &ev[k as usize]
        })
        .sum())
}

/// Permanent of a rank ≤ 2 matrix from two determinants of entrywise powers.
pub fn perm_rank2_determinantal(x: &Matrix) -> Result<Rational> {
    let n = x.order()?;
    let rank = x.rank();
    if rank > 2 {
        return Err(Error::RankTooHigh { rank });
    }
    determinantal_quotient(x, n)
}

/// `(n!)² det(X∘n) / (nⁿ det(X∘(n-1)))`, without the rank check.
fn determinantal_quotient(x: &Matrix, n: usize) -> Result<Rational> {
    let denom_det = x.hadamard_power(n as i64 - 1)?.determinant()?;
    if denom_det.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let numer_det = x.hadamard_power(n as i64)?.determinant()?;
    let f = factorial(n as u64);
    let numer = Rational::from_integer(&f * &f) * numer_det;
    let denom = Rational::from_integer(int_pow(n as u64, n as u64)) * denom_det;
    Ok(numer / denom)
}

pub fn perm_auto(m: &Matrix) -> Result<PermanentResult> {
    perm_auto_with(m, &Guards::default())
}

/// Determinantal when the matrix has rank ≤ 2 and a nonzero denominator;
/// otherwise naive within its guard, then Ryser.
pub fn perm_auto_with(m: &Matrix, guards: &Guards) -> Result<PermanentResult> {
    let n = m.order()?;
    let rank = m.rank();
    let fallback_reason = if rank > 2 {
        format!("rank {rank}")
    } else {
        match determinantal_quotient(m, n) {
            Ok(value) => {
                return Ok(PermanentResult {
                    value,
                    method: PermanentMethod::Determinantal,
                    fallback_reason: None,
                })
            }
            Err(Error::DegenerateDenominator) => "degenerate denominator".to_string(),
            Err(e) => return Err(e),
        }
    };
    let (value, method) = if n <= guards.naive_max {
        (
            perm_naive_bounded(m, guards.naive_max)?,
            PermanentMethod::Naive,
        )
    } else {
        (
            perm_ryser_bounded(m, guards.ryser_max)?,
            PermanentMethod::Ryser,
        )
    };
    Ok(PermanentResult {
        value,
        method,
        fallback_reason: Some(fallback_reason),
    })
}
