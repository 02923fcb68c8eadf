use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::symfunc::RationalVector;

/// Certificate that a square matrix equals `u vᵀ + w xᵀ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank2Decomposition {
    pub u: RationalVector,
    pub v: RationalVector,
    pub w: RationalVector,
    pub x: RationalVector,
}

impl Rank2Decomposition {
    pub fn new(
        u: RationalVector,
        v: RationalVector,
        w: RationalVector,
        x: RationalVector,
    ) -> Result<Self> {
        let n = u.len();
        for other in [&v, &w, &x] {
            if other.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: other.len(),
                });
            }
        }
        Ok(Rank2Decomposition { u, v, w, x })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry `(i, j)` is `u_i v_j + w_i x_j`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| {
            &self.u[i] * &self.v[j] + &self.w[i] * &self.x[j]
        })
    }
}

/// Column-row factorization `M = C R`: `R` holds the nonzero rows of the
/// reduced row echelon form and `C` the pivot columns of `M`. With at most
/// two pivots this is exactly `u vᵀ + w xᵀ`.
pub(super) fn rank2_decompose(m: &Matrix) -> Result<Rank2Decomposition> {
    let n = m.order()?;
    let (basis, pivots) =
        reduced_row_basis(m, 2).ok_or_else(|| Error::RankTooHigh { rank: m.rank() })?;

    let zeros = || RationalVector::zeros(n);
    let mut parts = basis.into_iter().zip(&pivots).map(|(row, &c)| {
        (
            RationalVector::new(m.column(c)).expect("n >= 1"),
            RationalVector::new(row).expect("n >= 1"),
        )
    });
    let (u, v) = parts.next().unwrap_or_else(|| (zeros(), zeros()));
    let (w, x) = parts.next().unwrap_or_else(|| (zeros(), zeros()));
    let dec = Rank2Decomposition { u, v, w, x };
    debug_assert_eq!(&dec.reconstruct(), m);
    Ok(dec)
}

/// Gauss-Jordan on the rows of `m`; returns the nonzero RREF rows and their
/// pivot columns, or `None` once more than `max_rank` pivots appear.
fn reduced_row_basis(m: &Matrix, max_rank: usize) -> Option<(Vec<Vec<Rational>>, Vec<usize>)> {
    let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let rows = a.len();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if r == max_rank {
            return None;
        }
        a.swap(p, r);
        let inv = a[r][c].recip().expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Some((a, pivots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_example() {
        let m = Matrix::from_i64_rows(&[[2, 4], [3, 6]]);
        let d = m.rank2_decompose().unwrap();
        assert_eq!(d.u, RationalVector::from_i64(&[2, 3]));
        assert_eq!(d.v, RationalVector::from_i64(&[1, 2]));
        assert_eq!(d.w, RationalVector::zeros(2));
        assert_eq!(d.x, RationalVector::zeros(2));
        assert_eq!(d.reconstruct(), m);
    }

    #[test]
    fn zero_matrix() {
        let d = Matrix::zeros(2, 2).rank2_decompose().unwrap();
        for part in [&d.u, &d.v, &d.w, &d.x] {
            assert_eq!(part, &RationalVector::zeros(2));
        }
    }

    #[test]
    fn rank_two_reconstructs() {
        let m = Matrix::from_i64_rows(&[[2, 3, 4], [3, 5, 7], [4, 7, 10]]);
        let d = m.rank2_decompose().unwrap();
        assert_eq!(d.reconstruct(), m);
        let leading_zero = Matrix::from_i64_rows(&[[0, 0, 0], [0, 1, 2], [0, 3, 1]]);
        assert_eq!(
            leading_zero.rank2_decompose().unwrap().reconstruct(),
            leading_zero
        );
    }

    #[test]
    fn rejects_high_rank() {
        assert_eq!(
            Matrix::identity(3).rank2_decompose(),
            Err(Error::RankTooHigh { rank: 3 })
        );
        assert!(matches!(
            Matrix::from_i64_rows(&[[1, 2, 3]]).rank2_decompose(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn length_checked() {
        let a = RationalVector::from_i64(&[1, 2]);
        let b = RationalVector::from_i64(&[1]);
        assert!(Rank2Decomposition::new(a.clone(), a.clone(), a, b).is_err());
    }
}
