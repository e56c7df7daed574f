//! Multiplicative and additive compound matrices.
//!
//! Rows and columns of a k-th compound of an `n x m` matrix are addressed by
//! the lexicographically ordered k-subsets of the row and column indices (see
//! [`crate::indexsets`]). The multiplicative compound collects all k x k minors;
//! the additive compound is the derivative at zero of `eps -> (I + eps A)^(k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexsets::{checked_count, combinations, rank_zero_based};
use crate::linalg::lu_det_in_place;
use crate::matrix::Matrix;
use crate::scalar::Real;

/// A k-th compound together with the shape of the matrix it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundMatrix<T: Real> {
    pub base_rows: usize,
    pub base_cols: usize,
    pub order: usize,
    pub body: Matrix<T>,
}

impl<T: Real> CompoundMatrix<T> {
    pub fn body(&self) -> &Matrix<T> {
        &self.body
    }

    pub fn into_body(self) -> Matrix<T> {
        self.body
    }
}

fn check_order(rows: usize, cols: usize, k: usize) -> Result<(usize, usize)> {
    let lim = rows.min(cols);
    if k < 1 || k > lim {
        return Err(Error::InvalidDimension { k, n: lim });
    }
    Ok((checked_count(rows, k)?, checked_count(cols, k)?))
}

/// Determinant of `a[rows, cols]`; `rows.len() == cols.len()`.
fn minor<T: Real>(a: &Matrix<T>, rows: &[usize], cols: &[usize], scratch: &mut Vec<T>) -> T {
    let k = rows.len();
    let e = |i: usize, j: usize| a[(rows[i], cols[j])];
    match k {
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        3 => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => {
            scratch.clear();
            for i in 0..k {
                for j in 0..k {
                    scratch.push(e(i, j));
                }
            }
            lu_det_in_place(std::mem::take(scratch), k)
        }
    }
}

/// k-th multiplicative compound: the matrix of all order-k minors.
///
/// Entry `(rank(rows), rank(cols))` is `det(A[rows, cols])`. `k = min(n, m)`
/// on a square matrix gives the 1x1 matrix `[det(A)]`.
pub fn multiplicative_compound<T: Real>(a: &Matrix<T>, k: usize) -> Result<CompoundMatrix<T>> {
    let (r, c) = check_order(a.rows(), a.cols(), k)?;
    let row_sets = combinations(k, a.rows());
    let col_sets = combinations(k, a.cols());
    let mut body = Matrix::zeros(r, c);
    let mut scratch = Vec::with_capacity(k * k);
    for (i, rs) in row_sets.iter().enumerate() {
        for (j, cs) in col_sets.iter().enumerate() {
            body[(i, j)] = minor(a, rs, cs, &mut scratch);
        }
    }
    Ok(CompoundMatrix { base_rows: a.rows(), base_cols: a.cols(), order: k, body })
}

/// k-th additive compound, evaluated by its closed combinatorial form.
///
/// For index sets `kappa`, `lambda`:
/// * `kappa == lambda`: the sum of `a_ii` over `i in kappa`;
/// * they differ in one slot, `kappa[s]` replaced by `lambda[t]`:
///   `(-1)^(s+t) * a[kappa[s], lambda[t]]`;
/// * otherwise zero.
pub fn additive_compound<T: Real>(a: &Matrix<T>, k: usize) -> Result<CompoundMatrix<T>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("additive compound of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let (r, _) = check_order(n, n, k)?;
    let sets = combinations(k, n);
    let mut body = Matrix::zeros(r, r);
    let mut member = vec![false; n];
    let mut lambda = Vec::with_capacity(k);
    for (i, kappa) in sets.iter().enumerate() {
        body[(i, i)] = kappa.iter().map(|&p| a[(p, p)]).sum();
        member.iter_mut().for_each(|m| *m = false);
        kappa.iter().for_each(|&p| member[p] = true);
        for (s, &out) in kappa.iter().enumerate() {
            for j in (0..n).filter(|&j| !member[j]) {
                let v = a[(out, j)];
                if v == T::zero() {
                    continue;
                }
                lambda.clear();
                lambda.extend(kappa.iter().copied().filter(|&p| p != out));
                let t = lambda.partition_point(|&p| p < j);
                lambda.insert(t, j);
                let col = rank_zero_based(&lambda, n);
                body[(i, col)] = if (s + t) % 2 == 0 { v } else { -v };
            }
        }
    }
    Ok(CompoundMatrix { base_rows: n, base_cols: n, order: k, body })
}

/// Central-difference approximation of the additive compound,
/// `[(I + eps A)^(k) - (I - eps A)^(k)] / (2 eps)`.
///
/// Testing oracle for [`additive_compound`]; independent of its closed form.
pub fn finite_diff_additive<T: Real>(a: &Matrix<T>, k: usize, eps: T) -> Result<CompoundMatrix<T>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("additive compound of {}x{} matrix", a.rows(), a.cols())));
    }
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter(format!("finite-difference step must be positive, got {eps}")));
    }
    let n = a.rows();
    let id = Matrix::identity(n);
    let plus = multiplicative_compound(&id.try_add(&a.scale(eps))?, k)?;
    let minus = multiplicative_compound(&id.try_sub(&a.scale(eps))?, k)?;
    let body = plus.body.try_sub(&minus.body)?.scale(T::one() / (eps + eps));
    Ok(CompoundMatrix { base_rows: n, base_cols: n, order: k, body })
}

/// k-volume of the parallelotope spanned by the columns of `x` (`n x k`):
/// the Euclidean norm of the column vector `x^(k)`.
pub fn volume_parallelotope<T: Real>(x: &Matrix<T>) -> Result<T> {
    let (n, k) = x.shape();
    if k < 1 || k > n {
        return Err(Error::Shape(format!("parallelotope of {k} vectors in R^{n}")));
    }
    let c = multiplicative_compound(x, k)?;
    Ok(c.body.frobenius_norm())
}
