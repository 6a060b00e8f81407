//! Exact linear algebra: integer lattice kernels via Hermite reduction and
//! Gaussian elimination over arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Echelon-reduces `mat` in place by unimodular row operations, considering
/// only the first `ncols` columns for pivoting. Returns the list of pivot
/// columns. When `full` is set, entries above each pivot are reduced modulo
/// the pivot as well (Hermite normal form of the leading block).
fn integer_row_reduce(mat: &mut [Vec<BigInt>], ncols: usize, full: bool) -> Vec<usize> {
    let nrows = mat.len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        // euclidean elimination below row r in column c
        loop {
            let pivot_row = (r..nrows)
                .filter(|&k| !mat[k][c].is_zero())
                .min_by_key(|&k| mat[k][c].abs());
            let Some(p) = pivot_row else { break };
            mat.swap(r, p);
            let mut any_left = false;
            for k in r + 1..nrows {
                if mat[k][c].is_zero() {
                    continue;
                }
                let q = div_rounded(&mat[k][c], &mat[r][c]);
                if !q.is_zero() {
                    row_sub_mul(mat, k, r, &q);
                }
                if !mat[k][c].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if mat[r][c].is_zero() {
            continue;
        }
        if mat[r][c].is_negative() {
            for x in &mut mat[r] {
                *x = -std::mem::take(x);
            }
        }
        if full {
            for k in 0..r {
                if mat[k][c].is_zero() {
                    continue;
                }
                let q = div_floor(&mat[k][c], &mat[r][c]);
                if !q.is_zero() {
                    row_sub_mul(mat, k, r, &q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn row_sub_mul(mat: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (a, b) = if dst < src {
        let (lo, hi) = mat.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = mat.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

fn div_rounded(a: &BigInt, b: &BigInt) -> BigInt {
    // round a/b to the nearest integer, ties toward zero
    let two = BigInt::from(2);
    let half = b.abs() / &two;
    let adjusted = if (a.is_negative()) == (b.is_negative()) {
        a + half
    } else {
        a - half
    };
    adjusted / b
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    if (a % b).is_zero() || (a.is_negative()) == (b.is_negative()) {
        q
    } else {
        q - 1
    }
}

/// Basis of the integer kernel lattice `{x : M x = 0}` of the `nrows x ncols`
/// matrix `m`, in Hermite normal form with pivot columns ascending. The
/// result is deterministic and each vector is primitive up to the HNF shape.
pub(crate) fn integer_kernel(m: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let nrows = m.len();
    // rows of [Mᵀ | I]; reducing the left block tracks the transform on the right
    let mut work: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..nrows).map(|j| m[j][i].clone()).collect();
            row.extend((0..ncols).map(|j| BigInt::from((j == i) as i64)));
            row
        })
        .collect();
    let pivots = integer_row_reduce(&mut work, nrows, false);
    let rank = pivots.len();
    let mut kernel: Vec<Vec<BigInt>> = work[rank..]
        .iter()
        .map(|row| row[nrows..].to_vec())
        .collect();
    integer_row_reduce(&mut kernel, ncols, true);
    kernel
}

/// One solution of `A x = b` over the rationals with free variables set to
/// zero, or `None` when the system is inconsistent. `a` is consumed as the
/// working matrix.
pub(crate) fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&k| !a[k][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        for k in 0..nrows {
            if k == r || a[k][c].is_zero() {
                continue;
            }
            let factor = &a[k][c] / &a[r][c];
            let src = a[r].clone();
            for (x, y) in a[k].iter_mut().zip(src.iter()) {
                *x -= &factor * y;
            }
            let by = b[r].clone();
            b[k] -= factor * by;
        }
        pivot_of_row.push(c);
        r += 1;
    }
    // inconsistency: a zero row with nonzero right-hand side
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &c) in pivot_of_row.iter().enumerate() {
        x[c] = &b[row] / &a[row][c];
    }
    Some(x)
}
