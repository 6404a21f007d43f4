//! Gaussian elimination over `Q_p` on row-major matrices.
//!
//! Pivots are chosen of largest absolute value in their column, which keeps
//! every multiplier of norm at most 1.

use crate::error::{Error, Result};
use crate::scalar::PadicScalar;

pub type Matrix = Vec<Vec<PadicScalar>>;

/// Prime and the largest precision among the entries.
fn field_of(m: &Matrix) -> (u32, u32) {
    let first = &m[0][0];
    let prec = m
        .iter()
        .flatten()
        .map(PadicScalar::precision)
        .max()
        .unwrap_or(first.precision());
    (first.prime(), prec)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(best) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).then(j.cmp(&i)))
        else {
            continue;
        };
        a.swap(r, best);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = *x * inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                let pivot_row = a[r].clone();
                for (x, &y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = *x - f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : M x = 0}`, one vector per free column.
pub fn nullspace(m: &Matrix) -> Vec<Vec<PadicScalar>> {
    let Some(row) = m.first() else {
        return Vec::new();
    };
    let cols = row.len();
    let (p, prec) = field_of(m);
    let zero = PadicScalar::zero(p, prec).expect("valid field");
    let one = PadicScalar::one(p, prec).expect("valid field");
    let (r, pivots) = rref(m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![zero; cols];
            v[free] = one;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[k][free];
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (p, prec) = field_of(m);
    let zero = PadicScalar::zero(p, prec)?;
    let one = PadicScalar::one(p, prec)?;
    let augmented: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one } else { zero }));
            r
        })
        .collect();
    let (r, pivots) = rref(&augmented);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::InvalidInput("matrix is singular".into()));
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}
