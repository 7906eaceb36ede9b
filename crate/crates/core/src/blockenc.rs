//! Unitary dilation of a (sub)normalized square matrix.
//!
//! For a contraction `A` the dilation is
//!
//! ```text
//! U(A) = [ A               √(I − A A†) ]
//!        [ √(I − A† A)     −A†          ]
//! ```
//!
//! Both defect square roots are evaluated from one singular value
//! decomposition `A = W Σ V†`, i.e. `√(I − A A†) = W √(I − Σ²) W†` and
//! `√(I − A† A) = V √(I − Σ²) V†`. Sharing the singular vectors keeps the
//! off-diagonal blocks of `U†U` at rounding level even when singular values
//! sit at 1, where two independent eigensolves would disagree by `O(√ε)`.

use crate::error::{Error, Result};
use crate::linalg::{c, check_matrix, spectral_norm, svd, ComplexMatrix};
use crate::simulator::QuantumState;

/// Relative inflation applied to `alpha` when `σ_max(A) > 1`.
pub const ALPHA_GUARD: f64 = 1e-12;
/// Spectral norms up to `1 + UNIT_NORM_SLACK` count as contractions; this
/// absorbs SVD rounding on exactly unitary inputs.
pub const UNIT_NORM_SLACK: f64 = 1e-12;
/// Amplitude allowed on the ancilla's `|1⟩` half before [`encoded_apply`].
pub const ANCILLA_LEAKAGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockEncoding {
    /// The `2M × 2M` dilation.
    pub unitary: ComplexMatrix,
    /// Normalization factor: the top-left block equals `A / alpha`.
    pub alpha: f64,
    /// `M`, the dimension of the encoded matrix.
    pub block_dim: usize,
}

impl BlockEncoding {
    /// Top-left `M × M` block of the dilation.
    pub fn block(&self) -> ComplexMatrix {
        self.unitary.view((0, 0), (self.block_dim, self.block_dim)).into_owned()
    }
}

pub fn block_encode(a: &ComplexMatrix) -> Result<BlockEncoding> {
    check_matrix(a)?;
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "block encoding needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let m = a.nrows();
    let sigma = spectral_norm(a)?;
    let alpha = if sigma <= 1.0 + UNIT_NORM_SLACK {
        1.0
    } else {
        sigma * (1.0 + ALPHA_GUARD)
    };
    let scaled = a / c(alpha, 0.0);

    let svd = svd(&scaled)?;
    let w = svd.u;
    let v = svd.v_t.adjoint();
    let mut defect = Vec::with_capacity(m);
    for &s in svd.singular_values.iter() {
        let d = 1.0 - s * s;
        if d < -1e-10 {
            return Err(Error::Encoding(format!(
                "singular value {s} exceeds 1 after normalization"
            )));
        }
        // (1 - s)(1 + s) keeps relative accuracy near s = 1
        defect.push(((1.0 - s) * (1.0 + s)).max(0.0).sqrt());
    }
    let weighted = |basis: &ComplexMatrix| {
        let mut b = basis.clone();
        for (j, d) in defect.iter().enumerate() {
            b.column_mut(j).scale_mut(*d);
        }
        &b * basis.adjoint()
    };
    let left_defect = weighted(&w);
    let right_defect = weighted(&v);

    let mut u = ComplexMatrix::zeros(2 * m, 2 * m);
    u.view_mut((0, 0), (m, m)).copy_from(&scaled);
    u.view_mut((0, m), (m, m)).copy_from(&left_defect);
    u.view_mut((m, 0), (m, m)).copy_from(&right_defect);
    u.view_mut((m, m), (m, m)).copy_from(&(-scaled.adjoint()));
    Ok(BlockEncoding {
        unitary: u,
        alpha,
        block_dim: m,
    })
}

/// Apply a dilation whose ancilla is `targets[0]`; the remaining targets carry
/// the encoded block. On the ancilla-`|0⟩` half the state transforms by
/// `A / alpha`.
pub fn encoded_apply(state: &mut QuantumState, enc: &BlockEncoding, targets: &[usize]) -> Result<()> {
    if targets.is_empty() || enc.block_dim != 1 << (targets.len() - 1) {
        return Err(Error::Shape(format!(
            "encoding of block dim {} cannot act on {} target qubits",
            enc.block_dim,
            targets.len()
        )));
    }
    let ancilla = targets[0];
    if ancilla >= state.num_qubits() {
        return Err(Error::Index(format!("ancilla qubit {ancilla} out of range")));
    }
    let leakage = state.excited_weight(ancilla).sqrt();
    if leakage > ANCILLA_LEAKAGE_TOL {
        return Err(Error::Precondition(format!(
            "dilation ancilla {ancilla} is not in |0⟩ (leakage {leakage:e})"
        )));
    }
    state.apply_unitary(&enc.unitary, targets)
}
