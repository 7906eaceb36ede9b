//! Single-step comparator: homogeneous coordinates plus one dilation.
//!
//! `Ψ̃ = [Ψ; 0; …; 0; 1]/√2` and
//!
//! ```text
//! Ã = [ A   0 … 0  B ]
//!     [ 0       I    ]
//! ```
//!
//! so that `Ã Ψ̃ = [AΨ + B; 0; …; 1]/√2`. `Ã` is generally not a contraction,
//! so its dilation carries `α > 1` and the de-scaling factor is `√2 · α`.

use crate::addsub::{preparation_gate, register_targets};
use crate::blockenc::{block_encode, encoded_apply, BlockEncoding};
use crate::circuit::{Gate, GateList};
use crate::error::{Error, Result};
use crate::linalg::{c, check_matrix, check_vector, ComplexMatrix, ComplexVector};
use crate::simulator::{qubits_for_dim, QuantumState};

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedAffine {
    pub a_tilde: ComplexMatrix,
    pub psi_tilde: ComplexVector,
    pub enc: BlockEncoding,
}

impl AugmentedAffine {
    /// `N`, the dimension of the original problem.
    pub fn dim(&self) -> usize {
        self.psi_tilde.len() / 2
    }

    /// Qubits of the augmented data register (`n + 1`).
    pub fn data_qubits(&self) -> usize {
        self.psi_tilde.len().trailing_zeros() as usize
    }

    /// Prepare `Ψ̃`, then apply `U(Ã)` with its ancilla on top.
    pub fn circuit(&self) -> Result<GateList> {
        let m = self.data_qubits();
        let mut g = GateList::new(m + 1);
        g.push(preparation_gate(&self.psi_tilde)?)?;
        let mut targets = vec![m];
        targets.extend(register_targets(m));
        g.push(Gate::block(self.enc.unitary.clone(), targets))?;
        Ok(g)
    }

    /// Factor mapping the measured amplitudes back to `AΨ + B`.
    pub fn descale(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.enc.alpha
    }
}

pub fn build_augmented(a: &ComplexMatrix, b: &ComplexVector, psi: &ComplexVector) -> Result<AugmentedAffine> {
    check_matrix(a)?;
    check_vector(b)?;
    check_vector(psi)?;
    let n_dim = a.nrows();
    if !a.is_square() || b.len() != n_dim || psi.len() != n_dim {
        return Err(Error::Shape(format!(
            "need A square and B, Ψ of matching length (A {}x{}, B {}, Ψ {})",
            a.nrows(),
            a.ncols(),
            b.len(),
            psi.len()
        )));
    }
    if qubits_for_dim(n_dim).is_none_or(|n| n == 0) {
        return Err(Error::Shape(format!("dimension {n_dim} is not a power of two ≥ 2")));
    }
    let dim = 2 * n_dim;
    let mut a_tilde = ComplexMatrix::zeros(dim, dim);
    a_tilde.view_mut((0, 0), (n_dim, n_dim)).copy_from(a);
    a_tilde.view_mut((0, dim - 1), (n_dim, 1)).copy_from(b);
    for i in n_dim..dim {
        a_tilde[(i, i)] = c(1.0, 0.0);
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi_tilde = ComplexVector::zeros(dim);
    for (i, z) in psi.iter().enumerate() {
        psi_tilde[i] = z * s;
    }
    psi_tilde[dim - 1] = c(s, 0.0);

    let enc = block_encode(&a_tilde)?;
    Ok(AugmentedAffine {
        a_tilde,
        psi_tilde,
        enc,
    })
}

/// Simulate the augmented method and return the de-scaled `AΨ + B`.
pub fn run_augmented(aug: &AugmentedAffine) -> Result<ComplexVector> {
    let mut state = QuantumState::from_amplitudes(&aug.psi_tilde)?;
    let m = state.num_qubits();
    let ancilla = state.prepend_qubit()?;
    let mut targets = vec![ancilla];
    targets.extend(register_targets(m));
    encoded_apply(&mut state, &aug.enc, &targets)?;
    let idx: Vec<usize> = (0..aug.dim()).collect();
    Ok(state.get_amplitudes(&idx)? * c(aug.descale(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff_vec, real_vector};

    #[test]
    fn zero_translation_layout() {
        let aug = build_augmented(&identity(2), &real_vector(&[0.0, 0.0]), &real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(aug.a_tilde, identity(4));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(aug.psi_tilde, real_vector(&[s, 0.0, 0.0, s]));
        assert_eq!(aug.enc.unitary.nrows(), 8);
    }

    #[test]
    fn translation_column() {
        let aug = build_augmented(&identity(2), &real_vector(&[1.0, 0.0]), &real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(aug.a_tilde[(0, 3)], c(1.0, 0.0));
        assert_eq!(aug.a_tilde[(1, 3)], c(0.0, 0.0));
    }

    #[test]
    fn run_examples() {
        let aug = build_augmented(&identity(2), &real_vector(&[0.0, 0.0]), &real_vector(&[1.0, 0.0])).unwrap();
        assert!(max_abs_diff_vec(&run_augmented(&aug).unwrap(), &real_vector(&[1.0, 0.0])) < 1e-12);
        let aug = build_augmented(&identity(2), &real_vector(&[1.0, 0.0]), &real_vector(&[1.0, 0.0])).unwrap();
        assert!(max_abs_diff_vec(&run_augmented(&aug).unwrap(), &real_vector(&[2.0, 0.0])) < 1e-9);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            build_augmented(&identity(2), &real_vector(&[1.0]), &real_vector(&[1.0, 0.0])),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            build_augmented(
                &identity(3),
                &real_vector(&[1.0, 0.0, 0.0]),
                &real_vector(&[1.0, 0.0, 0.0])
            ),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn circuit_reproduces_simulation() {
        let aug = build_augmented(&identity(2), &real_vector(&[0.6, 0.8]), &real_vector(&[0.8, 0.6])).unwrap();
        let s = aug.circuit().unwrap().run_from_zero().unwrap();
        let direct = run_augmented(&aug).unwrap();
        let via_circuit = ComplexVector::from_iterator(2, s.amplitudes()[..2].iter().map(|z| z * aug.descale()));
        assert!(max_abs_diff_vec(&direct, &via_circuit) < 1e-12);
    }
}
