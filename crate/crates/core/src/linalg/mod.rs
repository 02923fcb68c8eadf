//! Dense exact matrices.
//!
//! Everything here is exact: determinants use fraction-free (Bareiss)
//! elimination on integer input and rational Gaussian elimination otherwise,
//! rank comes from exact row reduction, and [`Matrix::rank2_decompose`]
//! returns a certificate `X = u vᵀ + w xᵀ` whose reconstruction is checked
//! entrywise.

mod decompose;
mod elimination;
mod text;

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::exact::Rational;

pub use decompose::Rank2Decomposition;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    /// Row-major constructor.
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Matrix::from_fn(rows.len(), cols, |i, j| Rational::from(rows[i].as_ref()[j]))
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::one())
    }

    /// `u vᵀ` for equal-length vectors.
    pub fn outer(u: &[Rational], v: &[Rational]) -> Self {
        Matrix::from_fn(u.len(), v.len(), |i, j| &u[i] * &v[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_integer(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x * c)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        }))
    }

    /// Rows then columns swapped according to the given permutations (0-based).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(row_perm[i], col_perm[j]).clone()
        })
    }

    /// Submatrix on 0-based row and column lists, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Entrywise `p`-th power. `p = 0` gives the all-ones matrix even where
    /// entries vanish.
    pub fn hadamard_power(&self, p: i64) -> Result<Matrix> {
        if p < 0 {
            if let Some(pos) = self.entries.iter().position(Rational::is_zero) {
                return Err(Error::ZeroEntry {
                    row: pos / self.cols,
                    col: pos % self.cols,
                });
            }
        }
        Ok(self.map(|x| x.pow(p).expect("zero entries rejected above")))
    }

    /// Exact determinant.
    pub fn determinant(&self) -> Result<Rational> {
        let n = self.order()?;
        Ok(if self.is_integer() {
            elimination::bareiss_determinant(self.integer_rows(), n)
        } else {
            elimination::rational_determinant(self.clone_rows(), n)
        })
    }

    /// `det M(I, J)` with 1-based index sets; indices are sorted first.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        let r = normalize_index_set(rows, self.rows, "row")?;
        let c = normalize_index_set(cols, self.cols, "column")?;
        if r.len() != c.len() {
            return Err(Error::BadIndexSet(format!(
                "|I| = {} but |J| = {}",
                r.len(),
                c.len()
            )));
        }
        self.submatrix(&r, &c).determinant()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        elimination::rank(self.scaled_integer_rows().0)
    }

    pub fn rank2_decompose(&self) -> Result<Rank2Decomposition> {
        decompose::rank2_decompose(self)
    }

    fn clone_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn integer_rows(&self) -> Vec<Vec<num_bigint::BigInt>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.numer().clone()).collect())
            .collect()
    }

    /// Each row multiplied by the lcm of its denominators, with those lcms.
    /// Row scaling by nonzero constants preserves rank, and determinant and
    /// permanent both pick up the product of the factors.
    pub(crate) fn scaled_integer_rows(
        &self,
    ) -> (Vec<Vec<num_bigint::BigInt>>, Vec<num_bigint::BigInt>) {
        use num_integer::Integer;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row
                    .iter()
                    .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
                let scaled = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
                (scaled, lcm)
            })
            .unzip()
    }
}

/// Validates a 1-based index set and returns it sorted and 0-based.
fn normalize_index_set(set: &[usize], bound: usize, what: &str) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::BadIndexSet(format!("empty {what} index set")));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadIndexSet(format!(
            "repeated {what} index in {set:?}"
        )));
    }
    if sorted[0] == 0 || *sorted.last().unwrap() > bound {
        return Err(Error::BadIndexSet(format!(
            "{what} indices {set:?} outside 1..={bound}"
        )));
    }
    Ok(sorted.into_iter().map(|i| i - 1).collect())
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
