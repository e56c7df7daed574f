//! Matrix measures induced by the Euclidean and scaled Euclidean norms,
//! symmetric square roots, and top-k eigenvalue / singular-value sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{condition_number, inverse, singular_values, symmetric_eigen, symmetric_eigenvalues};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Relative asymmetry tolerated before symmetrizing.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Largest condition number accepted for a scaling matrix.
pub const MAX_SCALING_CONDITION: f64 = 1e12;
/// Smallest ratio `lambda_min / lambda_max` accepted as positive definite.
pub const MIN_PD_RATIO: f64 = 1e-12;

fn require_square<T: Real>(a: &Matrix<T>, what: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{what} needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(())
}

/// `||A - Aᵀ||_F / ||A||_F` (zero for the zero matrix).
pub fn relative_asymmetry<T: Real>(a: &Matrix<T>) -> T {
    let scale = a.frobenius_norm();
    if scale == T::zero() {
        return T::zero();
    }
    a.try_sub(&a.transpose()).map(|d| d.frobenius_norm() / scale).unwrap_or_else(|_| T::infinity())
}

/// Symmetric part of `s`, rejecting inputs whose asymmetry exceeds `tol`.
pub fn symmetrize_checked<T: Real>(s: &Matrix<T>, tol: T) -> Result<Matrix<T>> {
    require_square(s, "symmetrization")?;
    let asym = relative_asymmetry(s);
    if asym > tol {
        return Err(Error::NotSymmetric { asymmetry: asym.as_f64() });
    }
    Ok(s.symmetric_part())
}

/// Largest eigenvalue of the symmetric part of `s`.
pub fn lambda_max_sym<T: Real>(s: &Matrix<T>) -> Result<T> {
    require_square(s, "lambda_max")?;
    Ok(symmetric_eigenvalues(s)?.first().copied().unwrap_or_else(T::zero))
}

/// Smallest eigenvalue of the symmetric part of `s`.
pub fn lambda_min_sym<T: Real>(s: &Matrix<T>) -> Result<T> {
    require_square(s, "lambda_min")?;
    Ok(symmetric_eigenvalues(s)?.last().copied().unwrap_or_else(T::zero))
}

/// Matrix measure induced by the Euclidean norm: `lambda_max((A + Aᵀ)/2)`.
pub fn mu2<T: Real>(a: &Matrix<T>) -> Result<T> {
    require_square(a, "mu2")?;
    lambda_max_sym(a)
}

/// Measure induced by `|x|_{2,H} = |Hx|_2`, i.e. `mu2(H A H⁻¹)`.
pub fn mu2_scaled<T: Real>(a: &Matrix<T>, h: &Matrix<T>) -> Result<T> {
    require_square(a, "mu2_scaled")?;
    require_square(h, "scaling")?;
    if a.rows() != h.rows() {
        return Err(Error::Shape(format!("scaling is {}x{}, matrix is {}x{}", h.rows(), h.cols(), a.rows(), a.cols())));
    }
    let cond = condition_number(h)?;
    if !(cond <= T::lit(MAX_SCALING_CONDITION)) {
        return Err(Error::SingularScaling { condition: cond.as_f64() });
    }
    let h_inv = inverse(h).map_err(|_| Error::SingularScaling { condition: f64::INFINITY })?;
    mu2_similar(a, h, &h_inv)
}

/// `mu2(H A H⁻¹)` with a precomputed inverse; no conditioning checks.
pub(crate) fn mu2_similar<T: Real>(a: &Matrix<T>, h: &Matrix<T>, h_inv: &Matrix<T>) -> Result<T> {
    mu2(&h.matmul(a)?.matmul(h_inv)?)
}

/// A symmetric positive-definite scaling `Q` together with `P = QQ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingQ<T: Real> {
    #[serde(rename = "Q")]
    q: Matrix<T>,
    #[serde(rename = "P")]
    p: Matrix<T>,
}

impl<T: Real> ScalingQ<T> {
    pub fn identity(n: usize) -> Self {
        Self { q: Matrix::identity(n), p: Matrix::identity(n) }
    }

    /// `P = p I_n`, `Q = sqrt(p) I_n`.
    pub fn scalar(n: usize, p: T) -> Result<Self> {
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::NotPositiveDefinite(format!("scalar scaling p = {p}")));
        }
        Ok(Self { q: Matrix::scalar(n, p.sqrt()), p: Matrix::scalar(n, p) })
    }

    pub fn q(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn p(&self) -> &Matrix<T> {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn q_inverse(&self) -> Result<Matrix<T>> {
        inverse(&self.q)
    }
}

/// Unique symmetric positive-definite square root of an SPD matrix.
pub fn symmetric_sqrt<T: Real>(p: &Matrix<T>) -> Result<ScalingQ<T>> {
    let sym = symmetrize_checked(p, T::lit(SYMMETRY_TOL))?;
    let eig = symmetric_eigen(&sym)?;
    let hi = eig.values.first().copied().unwrap_or_else(T::zero);
    let lo = eig.values.last().copied().unwrap_or_else(T::zero);
    if !(hi > T::zero()) || !(lo > T::lit(MIN_PD_RATIO) * hi) {
        return Err(Error::NotPositiveDefinite(format!("eigenvalues span [{:e}, {:e}]", lo.as_f64(), hi.as_f64())));
    }
    let roots: Vec<T> = eig.values.iter().map(|v| v.sqrt()).collect();
    let v = &eig.vectors;
    let q = (&(v * &Matrix::diag(&roots)) * &v.transpose()).symmetric_part();
    Ok(ScalingQ { q, p: sym })
}

/// Sum of the `k` largest eigenvalues of a symmetric matrix.
pub fn top_k_eig_sum<T: Real>(s: &Matrix<T>, k: usize) -> Result<T> {
    let sym = symmetrize_checked(s, T::lit(SYMMETRY_TOL))?;
    let n = sym.rows();
    if k < 1 || k > n {
        return Err(Error::InvalidDimension { k, n });
    }
    Ok(symmetric_eigenvalues(&sym)?.into_iter().take(k).sum())
}

/// `sum_{i<=k} sigma_i(A)^2`, singular values in decreasing order.
pub fn top_k_singular_sq_sum<T: Real>(a: &Matrix<T>, k: usize) -> Result<T> {
    let lim = a.rows().min(a.cols());
    if k < 1 || k > lim {
        return Err(Error::InvalidDimension { k, n: lim });
    }
    Ok(singular_values(a)?.into_iter().take(k).map(|s| s * s).sum())
}
