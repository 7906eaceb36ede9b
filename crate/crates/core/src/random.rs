//! Seeded generators for random test instances.
//!
//! All randomness in the crate flows through [`Rng`], a ChaCha20 stream keyed
//! by a `u64` seed (`ChaCha20Rng::seed_from_u64`). The same seed always yields
//! the same sequence on every platform.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, closest_unitary, spectral_norm, vector_norm, ComplexMatrix, ComplexVector};

pub type Rng = ChaCha20Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn unit_vector(rng: &mut Rng, dim: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = vector_norm(&v);
    v / c(n, 0.0)
}

pub fn real_unit_vector(rng: &mut Rng, dim: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(dim, |_, _| c(rng.sample(StandardNormal), 0.0));
    let n = vector_norm(&v);
    v / c(n, 0.0)
}

/// Haar-ish random unitary (polar factor of a complex Gaussian matrix).
pub fn unitary(rng: &mut Rng, dim: usize) -> ComplexMatrix {
    closest_unitary(&gaussian_matrix(rng, dim, dim))
}

/// Random matrix rescaled so its spectral norm equals `target_norm`.
pub fn matrix_with_norm(rng: &mut Rng, dim: usize, target_norm: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    let s = spectral_norm(&g).expect("finite gaussian matrix");
    g * c(target_norm / s, 0.0)
}

/// Random contraction with spectral norm drawn uniformly from `[0.05, 1)`.
pub fn contraction(rng: &mut Rng, dim: usize) -> ComplexMatrix {
    let target = rng.random_range(0.05..1.0);
    matrix_with_norm(rng, dim, target)
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
