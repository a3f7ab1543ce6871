//! Seeded samplers for matrices, directions and orthogonal frames.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{norm, Matrix, SymMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Uniform direction on the unit sphere `S^{n-1}`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, n);
        let r = norm(&v);
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Symmetrized Gaussian matrix (GOE-like).
pub fn gaussian_sym<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymMatrix {
    let entries = gaussian_vec(rng, n * n);
    SymMatrix::from_row_major(n, &entries).expect("gaussian entries are finite")
}

/// Random positive semidefinite matrix `GᵀG` with a Gaussian `G`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymMatrix {
    let g = Matrix::from_row_major(n, n, gaussian_vec(rng, n * n)).expect("finite");
    let gtg = g.transpose().matmul(&g);
    SymMatrix::from_fn(n, |i, j| gtg.get(i, j)).expect("finite")
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt QR of a Gaussian matrix,
/// which yields an `R` factor with positive diagonal.
pub fn haar_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut degenerate = false;
        for _ in 0..n {
            let mut v = gaussian_vec(rng, n);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for c in &cols {
                    let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    for (x, y) in v.iter_mut().zip(c) {
                        *x -= d * y;
                    }
                }
            }
            let r = norm(&v);
            if r < 1e-10 {
                degenerate = true;
                break;
            }
            cols.push(v.into_iter().map(|x| x / r).collect());
        }
        if !degenerate {
            return Matrix::from_columns(&cols);
        }
    }
}

/// Uniform in `[lo, hi)`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
