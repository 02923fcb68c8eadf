use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::Rational;

/// Bareiss fraction-free elimination. Every division is exact because each
/// intermediate entry is a minor of the input. Pivot: first row at or below
/// the diagonal with a nonzero entry in the current column.
pub(super) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>, n: usize) -> Rational {
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                let t = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = t / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Rational::from_integer(if negate { -det } else { det })
}

/// Gaussian elimination over the rationals with the same pivot rule.
pub(super) fn rational_determinant(mut a: Vec<Vec<Rational>>, n: usize) -> Rational {
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let inv = pivot_row[k].recip().expect("pivot is nonzero");
        for row in tail.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = &row[k] * &inv;
            for j in k + 1..n {
                let t = &factor * &pivot_row[j];
                row[j] -= t;
            }
            row[k] = Rational::zero();
        }
        det *= &pivot_row[k];
    }
    det
}

/// Integer row echelon reduction; each updated row is divided by the gcd of
/// its entries to keep them small.
pub(super) fn rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                row[j] = &row[j] * &pivot_row[c] - &factor * &pivot_row[j];
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        r += 1;
    }
    r
}
