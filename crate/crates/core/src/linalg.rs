//! Exact dense linear algebra over ℚ: row reduction, rank, null space,
//! products and inverses.

use num_traits::{One, Zero};

use crate::error::{QError, Result};
use crate::qnum::QValue;

/// Dense row-major matrix.
pub type Matrix = Vec<Vec<QValue>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = QValue::one() / &m[r][c];
        for v in m[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// A basis of `{v : m·v = 0}`, one vector per free column.
pub fn null_space(m: &Matrix, cols: usize) -> Vec<Vec<QValue>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![QValue::zero(); cols];
            v[f] = QValue::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != inner) {
        return Err(QError::DimensionMismatch("matrix product".into()));
    }
    Ok(a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = QValue::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        QValue::one()
                    } else {
                        QValue::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss–Jordan on `[m | I]`.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(QError::DimensionMismatch(
            "inverse of a non-square matrix".into(),
        ));
    }
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(QError::ZeroDenominator("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{int, rat};

    #[test]
    fn null_space_of_small_matrix() {
        let m = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        assert_eq!(rank(&m), 1);
        let ns = null_space(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s: QValue = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![rat(1, 2), int(1)], vec![int(3), rat(-1, 3)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv).unwrap(), identity(2));
        assert!(inverse(&vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_err());
    }
}
