//! Randomized search for counterexamples to the block-permanent bound
//! `perm([[T, T], [T, T]]) <= C(2n, n) perm(T)²` over rank ≤ 2 matrices `T`.
//!
//! All-positive `T` are known to satisfy the bound, so a violation there is
//! a bug. For mixed-sign `T` the bound is open and a violation is a finding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, Rational};
use crate::identities::{random_rank2_from, trial_rng, SampleMode};
use crate::linalg::Matrix;
use crate::permanent::{perm_ryser_bounded, Guards};

/// Largest `n` the hunter accepts (the block matrix is `2n x 2n`).
pub const HUNT_MAX_N: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    /// `T` in the matrix text format.
    #[serde(rename = "T", serialize_with = "serialize_matrix")]
    pub t: Matrix,
    pub n: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    /// `lhs / rhs`, absent when `rhs = 0`.
    pub ratio: Option<Rational>,
    pub holds: bool,
    pub seed: u64,
    /// Trial index within the hunt; `(seed, trial)` regenerates `T`.
    pub trial: u64,
}

fn serialize_matrix<S: serde::Serializer>(
    m: &Matrix,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&m.to_text())
}

/// `[[T, T], [T, T]]`.
pub fn block_double(t: &Matrix) -> Result<Matrix> {
    let n = t.order()?;
    Ok(Matrix::from_fn(2 * n, 2 * n, |i, j| {
        t.get(i % n, j % n).clone()
    }))
}

pub fn check_conjecture(t: &Matrix) -> Result<ConjectureReport> {
    check_conjecture_with(t, &Guards::default(), 0, 0)
}

pub fn check_conjecture_with(
    t: &Matrix,
    guards: &Guards,
    seed: u64,
    trial: u64,
) -> Result<ConjectureReport> {
    let n = t.order()?;
    let rank = t.rank();
    if rank > 2 {
        return Err(Error::RankTooHigh { rank });
    }
    let block = block_double(t)?;
    let lhs = perm_ryser_bounded(&block, guards.ryser_max)?;
    let perm = perm_ryser_bounded(t, guards.ryser_max)?;
    let rhs = Rational::from_integer(binomial(2 * n as u64, n as i64)) * &perm * &perm;
    let ratio = if rhs.is_zero() {
        None
    } else {
        Some(&lhs / &rhs)
    };
    let holds = lhs <= rhs;
    Ok(ConjectureReport {
        t: t.clone(),
        n,
        lhs,
        rhs,
        ratio,
        holds,
        seed,
        trial,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HuntMode {
    Positive,
    Mixed,
}

/// Checks `trials` random rank ≤ 2 matrices; violations come first, each
/// group in trial order.
pub fn hunt(
    n: usize,
    trials: usize,
    entry_bound: i64,
    mode: HuntMode,
    seed: u64,
    guards: &Guards,
) -> Result<Vec<ConjectureReport>> {
    if n > HUNT_MAX_N {
        return Err(Error::TooLarge {
            engine: "hunt",
            n,
            limit: HUNT_MAX_N,
        });
    }
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "hunt needs n >= 1 and trials >= 1".into(),
        ));
    }
    let sample_mode = match mode {
        HuntMode::Positive => SampleMode::Positive,
        HuntMode::Mixed => SampleMode::General,
    };
    let mut reports = (0..trials as u64)
        .map(|trial| {
            let t = random_rank2_from(&mut trial_rng(seed, trial), n, entry_bound, sample_mode)?;
            check_conjecture_with(&t, guards, seed, trial)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| (r.holds, r.trial));
    Ok(reports)
}
