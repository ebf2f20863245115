//! Small exact linear algebra helpers: ranks, solves and inverses over the
//! rationals, for matrices no larger than desk scale.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank over Q of a list of integer row vectors, by fraction-free elimination.
#[allow(clippy::needless_range_loop)] // in-place row elimination
pub fn rank_int_rows(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let a = m[rank][col].clone();
            let b = m[r][col].clone();
            for c in col..ncols {
                let v = &a * &m[r][c] - &b * &m[rank][c];
                m[r][c] = v;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

pub fn rank_i64_rows(rows: &[Vec<i64>]) -> usize {
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    rank_int_rows(&big)
}

/// Solve `A x = b` for a consistent system with full column rank, exactly.
///
/// `a` is given row-wise with `nrows x ncols`, `ncols <= nrows`. Returns
/// `None` when the system is inconsistent.
#[allow(clippy::needless_range_loop)] // in-place row elimination
pub fn solve_full_column_rank(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    assert_eq!(nrows, b.len());
    if nrows == 0 {
        return Some(Vec::new());
    }
    let ncols = a[0].len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..=ncols {
            let v = &m[row][c] / &inv;
            m[row][c] = v;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=ncols {
                    let v = &m[r][c] - &factor * &m[row][c];
                    m[r][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if pivots.len() != ncols {
        return None; // columns not independent
    }
    // Any leftover row must have reduced to zero for consistency.
    for r in row..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination; `None`
/// when singular.
#[allow(clippy::needless_range_loop)] // in-place row elimination
pub fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].clone();
        for c in col..2 * n {
            let v = &a[col][c] / &inv;
            a[col][c] = v;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..2 * n {
                    let v = &a[r][c] - &factor * &a[col][c];
                    a[r][c] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Divide an integer vector by the gcd of its entries, leaving direction intact.
pub fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = num_integer::gcd(g, x.abs());
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_mul(*y).expect("dot product overflow"))
        .fold(0i64, |acc, v| acc.checked_add(v).expect("dot product overflow"))
}
