//! Symmetric-function primitives over exact rationals.

use std::fmt;
use std::ops::{Deref, Index};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::Matrix;

/// A nonempty vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument(
                "vector must have at least one entry".into(),
            ));
        }
        Ok(RationalVector(entries))
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        RationalVector::new(entries.iter().map(|&x| Rational::from(x)).collect())
            .expect("nonempty literal")
    }

    pub fn zeros(n: usize) -> Self {
        RationalVector::new(vec![Rational::zero(); n]).expect("n >= 1")
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalVector(self.0.iter().map(|x| x * c).collect())
    }

    /// Entries reordered as `x[perm[0]], x[perm[1]], ...`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        RationalVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl serde::Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl Deref for RationalVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// Comma-separated rationals, e.g. `1,2,-3/4`.
impl FromStr for RationalVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|tok| tok.trim().parse())
            .collect::<Result<Vec<Rational>>>()?;
        RationalVector::new(entries)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// All of `e_0(x), ..., e_n(x)` as the coefficients of `prod_i (1 + x_i t)`.
pub fn elementary_symmetric_all(x: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); x.len() + 1];
    e[0] = Rational::one();
    for (i, xi) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let t = &e[k - 1] * xi;
            e[k] += t;
        }
    }
    e
}

/// `e_k(x)`: 1 for `k = 0`, zero outside `0..=n`.
pub fn elementary_symmetric(x: &[Rational], k: i64) -> Rational {
    if k < 0 || k as usize > x.len() {
        return Rational::zero();
    }
    elementary_symmetric_all(x).swap_remove(k as usize)
}

/// `p_k(x) = sum_i x_i^k` for `k >= 1`.
pub fn power_sum(x: &[Rational], k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("power sum needs k >= 1".into()));
    }
    Ok(x.iter()
        .map(|xi| xi.pow(i64::from(k)).expect("k > 0"))
        .sum())
}

/// `prod_{i<j} (x_j - x_i)`; the empty product for one variable is 1.
pub fn vandermonde(x: &[Rational]) -> Rational {
    let mut acc = Rational::one();
    for j in 1..x.len() {
        for i in 0..j {
            acc *= &x[j] - &x[i];
            if acc.is_zero() {
                return acc;
            }
        }
    }
    acc
}

/// The `n x n` matrix whose row `i` (1-based) holds `x_j^i` when `i > k`
/// and `x_j^(i-1)` otherwise: the powers `0..n` with `k` skipped.
pub fn q_matrix(x: &[Rational], k: i64) -> Result<Matrix> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty vector".into()));
    }
    if k < 0 || k as usize > n {
        return Err(Error::BadK { k, n });
    }
    let k = k as usize;
    Ok(Matrix::from_fn(n, n, |i, j| {
        let row = i + 1;
        let exp = if row > k { row } else { row - 1 };
        x[j].pow(exp as i64).expect("nonnegative exponent")
    }))
}
