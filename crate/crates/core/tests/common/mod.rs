//! Shared helpers: seeded random matrices and nalgebra oracles.
#![allow(dead_code)]

use kcontract::Matrix;
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(lo..hi))
}

/// `shift * I + E` with `E` uniform in `[-1, 1]`; invertible for `shift > n`.
pub fn well_conditioned(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Matrix<f64> {
    let e = random_matrix(rng, n, n, -1.0, 1.0);
    &Matrix::scalar(n, shift) + &e
}

/// `B Bᵀ + c I` with `B` uniform in `[-1, 1]`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize, c: f64) -> Matrix<f64> {
    let b = random_matrix(rng, n, n, -1.0, 1.0);
    (&(&b * &b.transpose()) + &Matrix::scalar(n, c)).symmetric_part()
}

pub fn to_na(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn na_singular_values(m: &Matrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn na_sym_eigenvalues(m: &Matrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = to_na(&m.symmetric_part()).symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    e
}

pub fn na_complex_eigenvalues(m: &Matrix<f64>) -> Vec<Complex<f64>> {
    to_na(m).complex_eigenvalues().iter().copied().collect()
}

pub fn na_det(m: &Matrix<f64>) -> f64 {
    to_na(m).determinant()
}

pub fn na_spectral_norm(m: &Matrix<f64>) -> f64 {
    na_singular_values(m).first().copied().unwrap_or(0.0)
}

/// Greedy nearest matching of two equally sized complex multisets; returns
/// the largest matched distance.
pub fn multiset_distance(expected: &[Complex<f64>], got: &[Complex<f64>]) -> f64 {
    assert_eq!(expected.len(), got.len());
    let mut used = vec![false; got.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (idx, d) = got
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, g)| (i, (g - e).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

/// All `k`-subsets of `0..n` in lexicographic order, generated independently
/// of the library.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rel_err(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.try_sub(b).unwrap().frobenius_norm() / (1.0 + b.frobenius_norm())
}
