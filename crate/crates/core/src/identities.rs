//! Exact checkers for the rank-2 permanent/determinant identities and their
//! companion lemmas, plus seeded generators for randomized sweeps.
//!
//! Every checker returns an [`IdentityReport`] carrying both sides verbatim.
//! A report with `holds == false` is only a violation when the identity's
//! hypothesis was met (see [`IdentityReport::is_violation`]); the main
//! identity deliberately accepts rank > 2 input as a negative control.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, binomial_product, factorial, int_pow, Rational};
use crate::linalg::Matrix;
use crate::permanent::{perm_auto_with, perm_rank2_structured, perm_ryser_bounded, Guards};
use crate::symfunc::{
    elementary_symmetric, elementary_symmetric_all, q_matrix, vandermonde, RationalVector,
};

/// Retry budget for constrained sampling modes.
pub const RESAMPLE_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub n: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    pub notes: String,
    /// Whether the identity's hypothesis applies, i.e. whether `holds` must be true.
    #[serde(skip)]
    pub hypothesis_met: bool,
}

impl IdentityReport {
    fn new(name: &str, n: usize, lhs: Rational, rhs: Rational, notes: impl Into<String>) -> Self {
        let holds = lhs == rhs;
        IdentityReport {
            identity_name: name.to_string(),
            n,
            lhs,
            rhs,
            holds,
            notes: notes.into(),
            hypothesis_met: true,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.hypothesis_met && !self.holds
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} lhs={} rhs={} {}",
            self.identity_name,
            self.n,
            self.lhs,
            self.rhs,
            if self.holds { "holds" } else { "FAILS" }
        )?;
        if !self.notes.is_empty() {
            write!(f, " ({})", self.notes)?;
        }
        Ok(())
    }
}

fn int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

fn same_length(u: &[Rational], v: &[Rational]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.is_empty() {
        return Err(Error::InvalidArgument("vectors must be nonempty".into()));
    }
    Ok(u.len())
}

/// `(n!)² det(X∘n)` against `nⁿ det(X∘(n-1)) perm(X)`, permanent by Ryser.
pub fn check_main_identity(x: &Matrix) -> Result<IdentityReport> {
    check_main_identity_with(x, &Guards::default())
}

pub fn check_main_identity_with(x: &Matrix, guards: &Guards) -> Result<IdentityReport> {
    let n = x.order()?;
    let perm = perm_ryser_bounded(x, guards.ryser_max)?;
    let nn = n as u64;
    let f = factorial(nn);
    let lhs = int(&f * &f) * x.hadamard_power(n as i64)?.determinant()?;
    let rhs = int(int_pow(nn, nn)) * x.hadamard_power(n as i64 - 1)?.determinant()? * perm;
    let rank = x.rank();
    let mut report = IdentityReport::new("main", n, lhs, rhs, format!("rank={rank}"));
    report.hypothesis_met = rank <= 2;
    Ok(report)
}

/// `det(M∘-2) = det(M∘-1) perm(M∘-1)` for rank ≤ 2 without zero entries.
pub fn check_carlitz_levine(m: &Matrix) -> Result<IdentityReport> {
    check_carlitz_levine_with(m, &Guards::default())
}

pub fn check_carlitz_levine_with(m: &Matrix, guards: &Guards) -> Result<IdentityReport> {
    let n = m.order()?;
    let inv = m.hadamard_power(-1)?;
    let rank = m.rank();
    if rank > 2 {
        return Err(Error::RankTooHigh { rank });
    }
    let lhs = m.hadamard_power(-2)?.determinant()?;
    let rhs = inv.determinant()? * perm_ryser_bounded(&inv, guards.ryser_max)?;
    Ok(IdentityReport::new(
        "carlitz-levine",
        n,
        lhs,
        rhs,
        format!("rank={rank}"),
    ))
}

/// Ordered `k`-subsets of `0..n`, lexicographic.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `minor(AB, I, J) = sum_K minor(A, I, K) minor(B, K, J)`; index sets are 1-based.
pub fn check_cauchy_binet(
    a: &Matrix,
    b: &Matrix,
    rows: &[usize],
    cols: &[usize],
) -> Result<IdentityReport> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{} but B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let k = rows.len();
    let inner = a.cols();
    if k != cols.len() {
        return Err(Error::BadIndexSet(format!(
            "|I| = {k} but |J| = {}",
            cols.len()
        )));
    }
    if k == 0 || k > a.rows().min(inner).min(b.cols()) {
        return Err(Error::BadIndexSet(format!(
            "k = {k} must lie in 1..=min({}, {inner}, {})",
            a.rows(),
            b.cols()
        )));
    }
    let lhs = a.mul(b)?.minor(rows, cols)?;
    let mut rhs = Rational::zero();
    for set in k_subsets(inner, k) {
        let set: Vec<usize> = set.into_iter().map(|i| i + 1).collect();
        rhs += a.minor(rows, &set)? * b.minor(&set, cols)?;
    }
    Ok(IdentityReport::new(
        "cauchy-binet",
        inner,
        lhs,
        rhs,
        format!(
            "A {}x{}, B {}x{}, k={k}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ),
    ))
}

/// `(1 + u_i v_j)^p` entrywise.
fn shifted_outer_power(u: &[Rational], v: &[Rational], p: i64) -> Matrix {
    Matrix::from_fn(u.len(), v.len(), |i, j| {
        (Rational::one() + &u[i] * &v[j])
            .pow(p)
            .expect("nonnegative exponent")
    })
}

/// `det((1 + u_i v_j)^(n-1)) = Δ(u) Δ(v) prod_{j<n} C(n-1, j)`.
pub fn check_corollary_fn1(u: &[Rational], v: &[Rational]) -> Result<IdentityReport> {
    let n = same_length(u, v)?;
    let lhs = shifted_outer_power(u, v, n as i64 - 1).determinant()?;
    let rhs = vandermonde(u) * vandermonde(v) * int(binomial_product(n as u64 - 1));
    Ok(IdentityReport::new("corollary-fn1", n, lhs, rhs, ""))
}

/// `det((1 + u_i v_j)^n) = Δ(u) Δ(v) prod_j C(n, j) sum_k e_k(u) e_k(v) / C(n, k)`.
pub fn check_corollary_fn(u: &[Rational], v: &[Rational]) -> Result<IdentityReport> {
    let n = same_length(u, v)?;
    let lhs = shifted_outer_power(u, v, n as i64).determinant()?;
    let eu = elementary_symmetric_all(u);
    let ev = elementary_symmetric_all(v);
    let series: Rational = (0..=n)
        .map(|k| &eu[k] * &ev[k] / int(binomial(n as u64, k as i64)))
        .sum();
    let rhs = vandermonde(u) * vandermonde(v) * int(binomial_product(n as u64)) * series;
    Ok(IdentityReport::new("corollary-fn", n, lhs, rhs, ""))
}

/// `det(Q_x^k) = e_{n-k}(x) Δ(x)`.
pub fn check_lemma_q(x: &[Rational], k: i64) -> Result<IdentityReport> {
    let n = x.len();
    let lhs = q_matrix(x, k)?.determinant()?;
    let rhs = elementary_symmetric(x, n as i64 - k) * vandermonde(x);
    Ok(IdentityReport::new(
        "lemma-q",
        n,
        lhs,
        rhs,
        format!("k={k}"),
    ))
}

/// `perm(1 + u vᵀ)` by Ryser against the elementary-symmetric expansion.
pub fn check_lemma_perm(u: &[Rational], v: &[Rational]) -> Result<IdentityReport> {
    let n = same_length(u, v)?;
    let a = shifted_outer_power(u, v, 1);
    let lhs = perm_ryser_bounded(&a, Guards::default().ryser_max)?;
    let rhs = perm_rank2_structured(u, v)?;
    Ok(IdentityReport::new("lemma-perm", n, lhs, rhs, ""))
}

/// Closed form of `E_Q det(xI - A - QᵀBQ)` over Haar-random orthogonal `Q`:
/// `perm(x - a_i - b_j) / n!`.
pub fn expected_charpoly(
    eigs_a: &[Rational],
    eigs_b: &[Rational],
    x: &Rational,
) -> Result<Rational> {
    expected_charpoly_with(eigs_a, eigs_b, x, &Guards::default())
}

pub fn expected_charpoly_with(
    eigs_a: &[Rational],
    eigs_b: &[Rational],
    x: &Rational,
    guards: &Guards,
) -> Result<Rational> {
    let n = same_length(eigs_a, eigs_b)?;
    let m = Matrix::from_fn(n, n, |i, j| x - &eigs_a[i] - &eigs_b[j]);
    let perm = perm_auto_with(&m, guards)?.value;
    Ok(perm / int(factorial(n as u64)))
}

/// Constraint on the entries produced by [`random_rank2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Vectors in `[-bound, bound]`.
    General,
    /// As `General`, resampled until no entry of the matrix is zero.
    NoZero,
    /// Vectors in `[1, bound]`, so every entry is positive.
    Positive,
}

impl SampleMode {
    fn name(self) -> &'static str {
        match self {
            SampleMode::General => "general",
            SampleMode::NoZero => "no_zero",
            SampleMode::Positive => "positive",
        }
    }
}

/// Generator for trial `trial` of a sweep seeded with `seed`. Each trial gets
/// its own ChaCha stream, so trials are independent of execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_int_vector(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> RationalVector {
    RationalVector::new(
        (0..n)
            .map(|_| Rational::from(rng.gen_range(lo..=hi)))
            .collect(),
    )
    .expect("n >= 1")
}

/// `u vᵀ + w xᵀ` with integer vectors drawn from `rng`.
pub fn random_rank2_from(
    rng: &mut impl Rng,
    n: usize,
    entry_bound: i64,
    mode: SampleMode,
) -> Result<Matrix> {
    if n == 0 || entry_bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "random_rank2 needs n >= 1 and entry_bound >= 1, got n={n}, bound={entry_bound}"
        )));
    }
    let (lo, hi) = match mode {
        SampleMode::Positive => (1, entry_bound),
        SampleMode::General | SampleMode::NoZero => (-entry_bound, entry_bound),
    };
    for _ in 0..RESAMPLE_BUDGET {
        let u = random_int_vector(rng, n, lo, hi);
        let v = random_int_vector(rng, n, lo, hi);
        let w = random_int_vector(rng, n, lo, hi);
        let x = random_int_vector(rng, n, lo, hi);
        let m = Matrix::outer(&u, &v).add(&Matrix::outer(&w, &x))?;
        let ok = match mode {
            SampleMode::General => true,
            SampleMode::NoZero => m.entries().iter().all(|e| !e.is_zero()),
            SampleMode::Positive => m.entries().iter().all(|e| !e.is_negative() && !e.is_zero()),
        };
        if ok {
            return Ok(m);
        }
    }
    Err(Error::ExhaustedResampling {
        mode: mode.name(),
        attempts: RESAMPLE_BUDGET,
    })
}

pub fn random_rank2(n: usize, entry_bound: i64, seed: u64, mode: SampleMode) -> Result<Matrix> {
    random_rank2_from(&mut trial_rng(seed, 0), n, entry_bound, mode)
}

/// The identities that can be swept on random input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityKind {
    Main,
    CarlitzLevine,
    CauchyBinet,
    CorollaryFn1,
    CorollaryFn,
    LemmaQ,
    LemmaPerm,
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "main" => IdentityKind::Main,
            "cl" => IdentityKind::CarlitzLevine,
            "cb" => IdentityKind::CauchyBinet,
            "fn1" => IdentityKind::CorollaryFn1,
            "fn" => IdentityKind::CorollaryFn,
            "lemq" => IdentityKind::LemmaQ,
            "lemperm" => IdentityKind::LemmaPerm,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown identity {other:?}"
                )))
            }
        })
    }
}

fn random_index_set(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut set: Vec<usize> = index::sample(rng, n, k)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    set.sort_unstable();
    set
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        Rational::from(rng.gen_range(-bound..=bound))
    })
}

/// Runs `trials` randomized checks of one identity at size `n`. Trial `t`
/// draws from `trial_rng(seed, t)`; `LemmaQ` emits one report per `k` in
/// `0..=n`. For `CauchyBinet`, `n` bounds all three dimensions.
pub fn random_sweep(
    kind: IdentityKind,
    n: usize,
    trials: usize,
    entry_bound: i64,
    seed: u64,
    guards: &Guards,
) -> Result<Vec<IdentityReport>> {
    if n == 0 || entry_bound < 1 {
        return Err(Error::InvalidArgument(
            "sweeps need n >= 1 and bound >= 1".into(),
        ));
    }
    let mut reports = Vec::with_capacity(trials);
    for t in 0..trials {
        let rng = &mut trial_rng(seed, t as u64);
        match kind {
            IdentityKind::Main => {
                let x = random_rank2_from(rng, n, entry_bound, SampleMode::General)?;
                reports.push(check_main_identity_with(&x, guards)?);
            }
            IdentityKind::CarlitzLevine => {
                let m = random_rank2_from(rng, n, entry_bound, SampleMode::NoZero)?;
                reports.push(check_carlitz_levine_with(&m, guards)?);
            }
            IdentityKind::CauchyBinet => {
                let (m, inner, p) = (
                    rng.gen_range(1..=n),
                    rng.gen_range(1..=n),
                    rng.gen_range(1..=n),
                );
                let k = rng.gen_range(1..=m.min(inner).min(p));
                let a = random_matrix(rng, m, inner, entry_bound);
                let b = random_matrix(rng, inner, p, entry_bound);
                let rows = random_index_set(rng, m, k);
                let cols = random_index_set(rng, p, k);
                reports.push(check_cauchy_binet(&a, &b, &rows, &cols)?);
            }
            IdentityKind::CorollaryFn1 | IdentityKind::CorollaryFn | IdentityKind::LemmaPerm => {
                let u = random_int_vector(rng, n, -entry_bound, entry_bound);
                let v = random_int_vector(rng, n, -entry_bound, entry_bound);
                reports.push(match kind {
                    IdentityKind::CorollaryFn1 => check_corollary_fn1(&u, &v)?,
                    IdentityKind::CorollaryFn => check_corollary_fn(&u, &v)?,
                    _ => check_lemma_perm(&u, &v)?,
                });
            }
            IdentityKind::LemmaQ => {
                let x = random_int_vector(rng, n, -entry_bound, entry_bound);
                for k in 0..=n as i64 {
                    reports.push(check_lemma_q(&x, k)?);
                }
            }
        }
    }
    Ok(reports)
}
