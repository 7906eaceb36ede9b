//! Reference computations written independently of the library.
#![allow(dead_code)]

use qaffine_core::linalg::{c, c64, ComplexMatrix, ComplexVector};
use qaffine_core::pipeline::{AffineSequence, AffineStep, Translation};
use qaffine_core::random::{self, Rng};

pub type Step = (ComplexMatrix, Option<ComplexVector>);

/// Affine recurrence evaluated entry by entry.
pub fn affine_oracle(psi: &ComplexVector, steps: &[Step]) -> ComplexVector {
    let mut x: Vec<c64> = psi.iter().copied().collect();
    for (a, b) in steps {
        let mut next = vec![c(0.0, 0.0); x.len()];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                *out += a[(i, j)] * xj;
            }
            if let Some(b) = b {
                *out += b[i];
            }
        }
        x = next;
    }
    ComplexVector::from_vec(x)
}

/// Mix of strict contractions, unitaries and norm-one matrices, with roughly
/// one translation in five set to zero.
pub fn random_problem(rng: &mut Rng, n: usize, k: usize) -> (ComplexVector, Vec<Step>) {
    let dim = 1 << n;
    let psi = random::unit_vector(rng, dim);
    let steps = (0..k)
        .map(|j| {
            let a = match j % 3 {
                0 => random::contraction(rng, dim),
                1 => random::unitary(rng, dim),
                _ => random::matrix_with_norm(rng, dim, 1.0),
            };
            let b = (random::uniform(rng, 0.0, 1.0) > 0.2).then(|| random::unit_vector(rng, dim));
            (a, b)
        })
        .collect();
    (psi, steps)
}

pub fn sequence(psi: &ComplexVector, steps: &[Step]) -> AffineSequence {
    let steps = steps
        .iter()
        .map(|(a, b)| {
            let t = b.clone().map_or(Translation::Zero, Translation::Vector);
            AffineStep::new(a.clone(), t).unwrap()
        })
        .collect();
    AffineSequence::new(psi.clone(), steps).unwrap()
}

/// `Σ_j x_j e^{sign·2πi·jk/M} / √M`.
pub fn naive_dft(x: &ComplexVector, sign: f64) -> ComplexVector {
    let m = x.len();
    ComplexVector::from_fn(m, |k, _| {
        let mut acc = c(0.0, 0.0);
        for (j, xj) in x.iter().enumerate() {
            let angle = sign * 2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64;
            acc += xj * c64::from_polar(1.0, angle);
        }
        acc / (m as f64).sqrt()
    })
}
