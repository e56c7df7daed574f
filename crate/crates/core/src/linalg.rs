//! Dense kernels: LU determinant and inverse, cyclic Jacobi for symmetric
//! eigenproblems, and one-sided (Hestenes) Jacobi SVD.
//!
//! Jacobi methods are slower than QR-based routines but compute small
//! eigenvalues and singular values to high relative accuracy, which matters
//! for certificate margins close to zero.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Determinant by LU factorization with partial pivoting.
pub fn determinant<T: Real>(a: &Matrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::Shape(format!("determinant of {}x{} matrix", a.rows(), a.cols())));
    }
    Ok(lu_det_in_place(a.as_slice().to_vec(), a.rows()))
}

/// Determinant of the row-major `n x n` block in `m`, destroying it.
pub(crate) fn lu_det_in_place<T: Real>(mut m: Vec<T>, n: usize) -> T {
    let mut det = T::one();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col * n + col].abs();
        for r in col + 1..n {
            let v = m[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == T::zero() {
            return T::zero();
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for r in col + 1..n {
            let factor = m[r * n + col] / d;
            if factor == T::zero() {
                continue;
            }
            for j in col + 1..n {
                let v = m[col * n + j];
                m[r * n + j] -= factor * v;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("inverse of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut inv = Matrix::identity(n);
    let scale = a.max_abs();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[(r, col)].abs() > m[(piv, col)].abs() {
                piv = r;
            }
        }
        if m[(piv, col)].abs() <= T::epsilon() * scale * T::from_count(n) || scale == T::zero() {
            return Err(Error::Singular);
        }
        if piv != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(piv, j)];
                inv[(piv, j)] = t;
            }
        }
        let d = m[(col, col)];
        for j in 0..n {
            m[(col, j)] /= d;
            inv[(col, j)] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m[(r, col)];
            if factor == T::zero() {
                continue;
            }
            for j in 0..n {
                let mv = m[(col, j)];
                let iv = inv[(col, j)];
                m[(r, j)] -= factor * mv;
                inv[(r, j)] -= factor * iv;
            }
        }
    }
    Ok(inv)
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T: Real> {
    /// Eigenvalues in decreasing order.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: Matrix<T>,
}

/// Cyclic Jacobi eigensolver. Only the symmetric part of `a` is used.
pub fn symmetric_eigen<T: Real>(a: &Matrix<T>) -> Result<SymmetricEigen<T>> {
    jacobi_eigen(a, true)
}

/// Eigenvalues of the symmetric part of `a`, in decreasing order.
pub fn symmetric_eigenvalues<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    jacobi_eigen(a, false).map(|e| e.values)
}

fn jacobi_eigen<T: Real>(a: &Matrix<T>, want_vectors: bool) -> Result<SymmetricEigen<T>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("eigenvalues of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut m = a.symmetric_part();
    let mut v = if want_vectors { Matrix::identity(n) } else { Matrix::zeros(0, 0) };
    let total = m.frobenius_norm();
    let tiny = T::min_positive_value();
    let threshold = T::epsilon() * T::epsilon() * total * total;

    let mut converged = n < 2 || total == T::zero();
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(format!("Jacobi eigensolver, n = {n}")));
        }
        sweep += 1;
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off <= threshold {
            converged = true;
            continue;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= tiny {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // Skip rotations that cannot change the diagonal in working precision.
                let g = T::lit(100.0) * apq.abs();
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[(p, q)] = T::zero();
                    m[(q, p)] = T::zero();
                    continue;
                }
                let theta = (aqq - app) / (apq + apq);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for r in 0..n {
                    let mrp = m[(r, p)];
                    let mrq = m[(r, q)];
                    m[(r, p)] = c * mrp - s * mrq;
                    m[(r, q)] = s * mrp + c * mrq;
                }
                for r in 0..n {
                    let mpr = m[(p, r)];
                    let mqr = m[(q, r)];
                    m[(p, r)] = c * mpr - s * mqr;
                    m[(q, r)] = s * mpr + c * mqr;
                }
                m[(p, q)] = T::zero();
                m[(q, p)] = T::zero();
                if want_vectors {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = c * vrp - s * vrq;
                        v[(r, q)] = s * vrp + c * vrq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = if want_vectors { Matrix::from_fn(n, n, |r, c| v[(r, order[c])]) } else { Matrix::zeros(0, 0) };
    Ok(SymmetricEigen { values, vectors })
}

/// Singular values in decreasing order, via one-sided Jacobi.
pub fn singular_values<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    // Work on the orientation with at least as many rows as columns.
    let work = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
    let (m, n) = work.shape();
    // Column-major copy so column operations are contiguous.
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| work.column_vec(j)).collect();
    let eps = T::epsilon();
    // Columns below this squared norm are roundoff and are left alone.
    let floor = {
        let f = eps * work.frobenius_norm();
        f * f
    };

    let mut sweep = 0;
    loop {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(format!("one-sided Jacobi SVD, {m}x{n}")));
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = T::zero();
                    for i in 0..m {
                        alpha += cp[i] * cp[i];
                        beta += cq[i] * cq[i];
                        gamma += cp[i] * cq[i];
                    }
                    (alpha, beta, gamma)
                };
                if gamma == T::zero() || alpha <= floor || beta <= floor || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                for i in 0..m {
                    let x = cp[i];
                    let y = cq[i];
                    cp[i] = c * x - s * y;
                    cq[i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = cols.iter().map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}

/// Induced 2-norm (largest singular value).
pub fn spectral_norm<T: Real>(a: &Matrix<T>) -> Result<T> {
    Ok(singular_values(a)?.first().copied().unwrap_or_else(T::zero))
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number<T: Real>(a: &Matrix<T>) -> Result<T> {
    let sv = singular_values(a)?;
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(T::infinity()),
        _ => Ok(T::one()),
    }
}
