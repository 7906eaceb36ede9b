//! The sequential affine transformation engine.
//!
//! Register layout for a run with `n` data qubits and `k` steps:
//!
//! ```text
//! qubit:   n+2k-1   n+2k-2  ...  n+1      n        n-1 ... 0
//! role:    AS_k     BE_k    ...  AS_1     BE_1     data register
//! ```
//!
//! Step `j` prepends a dilation ancilla `BE_j` (qubit `n+2j-2`) and applies
//! `U(A_j)` to it together with the data register, then prepends an add/sub
//! ancilla `AS_j` (qubit `n+2j-1`) that interferes the register with the
//! rescaled translation `B̃_j`. Earlier ancillas are never touched, so the
//! sector where every ancilla reads 0 (basis indices `0..N`) evolves exactly
//! as the classical recurrence, scaled by `1/2` per step.

use std::ops::Range;

use crate::addsub::{hadamard_addsub_inplace, inplace_stage_gates, preparation_gate, AddSubMode};
use crate::blockenc::{block_encode, encoded_apply, UNIT_NORM_SLACK};
use crate::circuit::{Gate, GateList};
use crate::error::{Error, Result};
use crate::linalg::{c, check_matrix, check_vector, spectral_norm, vector_norm, ComplexMatrix, ComplexVector};
use crate::simulator::{qubits_for_dim, QuantumState, INPUT_NORM_TOL, MAX_QUBITS};

/// Largest spectral norm accepted for a step's linear part.
pub const CONTRACTION_TOL: f64 = 1e-10;

/// Translation of one affine step.
#[derive(Debug, Clone, PartialEq)]
pub enum Translation {
    /// No translation; realized as a pure-garbage `B̃`.
    Zero,
    /// Translation vector with `‖B‖ ≤ 1` (unit norm unless built through
    /// [`AffineStep::with_partial_translation`]).
    Vector(ComplexVector),
}

impl Translation {
    pub fn norm(&self) -> f64 {
        match self {
            Translation::Zero => 0.0,
            Translation::Vector(v) => vector_norm(v),
        }
    }

    /// Dense vector of length `dim` (zeros for [`Translation::Zero`]).
    pub fn to_dense(&self, dim: usize) -> ComplexVector {
        match self {
            Translation::Zero => ComplexVector::zeros(dim),
            Translation::Vector(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineStep {
    pub a: ComplexMatrix,
    pub b: Translation,
}

impl AffineStep {
    /// A step whose translation is either unit norm or [`Translation::Zero`].
    pub fn new(a: ComplexMatrix, b: Translation) -> Result<Self> {
        let step = Self::checked(a, b)?;
        if let Translation::Vector(v) = &step.b {
            let norm = vector_norm(v);
            if (norm - 1.0).abs() > INPUT_NORM_TOL {
                return Err(Error::Normalization {
                    norm,
                    tol: INPUT_NORM_TOL,
                });
            }
        }
        Ok(step)
    }

    /// A step whose translation may be sub-normalized (`‖B‖ ≤ 1`); the missing
    /// weight goes to the garbage index of `B̃`.
    pub fn with_partial_translation(a: ComplexMatrix, b: ComplexVector) -> Result<Self> {
        let step = Self::checked(a, Translation::Vector(b))?;
        let norm = step.b.norm();
        if norm > 1.0 + INPUT_NORM_TOL {
            return Err(Error::Normalization {
                norm,
                tol: INPUT_NORM_TOL,
            });
        }
        Ok(step)
    }

    fn checked(a: ComplexMatrix, b: Translation) -> Result<Self> {
        check_matrix(&a)?;
        if !a.is_square() {
            return Err(Error::Shape(format!(
                "linear part must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if let Translation::Vector(v) = &b {
            check_vector(v)?;
            if v.len() != a.nrows() {
                return Err(Error::Shape(format!(
                    "translation has length {} but the matrix is {}x{}",
                    v.len(),
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineSequence {
    n: usize,
    psi0: ComplexVector,
    steps: Vec<AffineStep>,
}

impl AffineSequence {
    pub fn new(psi0: ComplexVector, steps: Vec<AffineStep>) -> Result<Self> {
        check_vector(&psi0)?;
        let n = qubits_for_dim(psi0.len())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Shape(format!("input length {} is not a power of two ≥ 2", psi0.len())))?;
        let norm = vector_norm(&psi0);
        if (norm - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::Normalization {
                norm,
                tol: INPUT_NORM_TOL,
            });
        }
        if steps.is_empty() {
            return Err(Error::InvalidInput("an affine sequence needs at least one step".into()));
        }
        for (j, s) in steps.iter().enumerate() {
            if s.dim() != psi0.len() {
                return Err(Error::Shape(format!(
                    "step {} acts on dimension {} but the input has {}",
                    j + 1,
                    s.dim(),
                    psi0.len()
                )));
            }
        }
        Ok(Self { n, psi0, steps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.psi0.len()
    }

    pub fn k(&self) -> usize {
        self.steps.len()
    }

    pub fn psi0(&self) -> &ComplexVector {
        &self.psi0
    }

    pub fn steps(&self) -> &[AffineStep] {
        &self.steps
    }

    /// Total qubits used by [`run_pipeline`]: `n + 2k`.
    pub fn total_qubits(&self) -> usize {
        self.n + 2 * self.k()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescaledTranslation {
    pub b_tilde: ComplexVector,
    pub step_index: usize,
    pub garbage_index: usize,
}

/// Build `B̃_j` for the add/sub stage of step `j` (1-based) on a register of
/// `target_dim = 2^(n+2j-1)` amplitudes.
///
/// Entries `0..N` carry `β_i / 2^(j-1)`, matching the `1/2^(j-1)` scale the
/// measured block has accumulated; all residual norm goes to the last index.
pub fn rescale_translation(b: &Translation, j: usize, n_dim: usize, target_dim: usize) -> Result<RescaledTranslation> {
    if j == 0 {
        return Err(Error::InvalidInput("step index is 1-based".into()));
    }
    if !target_dim.is_power_of_two() || target_dim < 2 * n_dim {
        return Err(Error::Shape(format!(
            "target dimension {target_dim} cannot hold a padded translation of length {n_dim}"
        )));
    }
    let scale = 0.5f64.powi(j as i32 - 1);
    let garbage_index = target_dim - 1;
    let mut b_tilde = ComplexVector::zeros(target_dim);
    let mut weight = 0.0;
    if let Translation::Vector(beta) = b {
        if beta.len() != n_dim {
            return Err(Error::Shape(format!(
                "translation has length {} but N = {n_dim}",
                beta.len()
            )));
        }
        for (i, z) in beta.iter().enumerate() {
            b_tilde[i] = z * scale;
            weight += (z * scale).norm_sqr();
        }
    }
    assert!(
        weight <= 1.0 + 1e-12,
        "translation weight {weight} exceeds 1 after rescaling"
    );
    b_tilde[garbage_index] = c((1.0 - weight).max(0.0).sqrt(), 0.0);
    Ok(RescaledTranslation {
        b_tilde,
        step_index: j,
        garbage_index,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    pub state: QuantumState,
    pub n: usize,
    pub k: usize,
    /// Exact de-scaling factor `2^k`.
    pub scale: u64,
    pub mode: AddSubMode,
    /// Full gate program (physical mode only).
    pub circuit: Option<GateList>,
}

impl PipelineResult {
    /// Basis indices of the all-ancillas-zero block.
    pub fn result_indices(&self) -> Range<usize> {
        0..1 << self.n
    }

    /// Add/sub ancilla of step `j` (1-based).
    pub fn addsub_ancilla(&self, j: usize) -> usize {
        self.n + 2 * j - 1
    }

    /// Dilation ancilla of step `j` (1-based).
    pub fn dilation_ancilla(&self, j: usize) -> usize {
        self.n + 2 * j - 2
    }

    /// Indices of the branch `(b_1, …, b_k)` with all dilation ancillas at 0.
    pub fn branch_indices(&self, bits: &[bool]) -> Result<Range<usize>> {
        if bits.len() != self.k {
            return Err(Error::Shape(format!(
                "branch label has {} bits, expected {}",
                bits.len(),
                self.k
            )));
        }
        let offset: usize = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| 1usize << self.addsub_ancilla(j + 1))
            .sum();
        Ok(offset..offset + (1 << self.n))
    }
}

/// Run every step of `seq`. Each `A_j` must be a contraction: a dilation
/// factor `α > 1` would rescale `A_j Ψ` but not `B_j`.
pub fn run_pipeline(seq: &AffineSequence, mode: AddSubMode) -> Result<PipelineResult> {
    let n = seq.n();
    let total = seq.total_qubits();
    if total > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "n + 2k = {total} exceeds the {MAX_QUBITS}-qubit limit"
        )));
    }
    let mut encodings = Vec::with_capacity(seq.k());
    for (j, step) in seq.steps().iter().enumerate() {
        let norm = spectral_norm(&step.a)?;
        if norm > 1.0 + CONTRACTION_TOL {
            return Err(Error::Contraction { step: j + 1, norm });
        }
        let enc = block_encode(&step.a)?;
        debug_assert!(enc.alpha <= 1.0 + UNIT_NORM_SLACK);
        encodings.push(enc);
    }

    let mut state = QuantumState::from_amplitudes(seq.psi0())?;
    let mut circuit = match mode {
        AddSubMode::Physical => {
            let mut g = GateList::new(n);
            g.push(preparation_gate(seq.psi0())?)?;
            Some(g)
        }
        AddSubMode::Abstract => None,
    };

    let data: Vec<usize> = (0..n).rev().collect();
    for (idx, (step, enc)) in seq.steps().iter().zip(&encodings).enumerate() {
        let j = idx + 1;
        let ancilla = state.prepend_qubit()?;
        let mut targets = vec![ancilla];
        targets.extend(&data);
        encoded_apply(&mut state, enc, &targets)?;
        if let Some(g) = circuit.as_mut() {
            g.grow_to(ancilla + 1);
            g.push(Gate::block(enc.unitary.clone(), targets.clone()))?;
        }

        let rescaled = rescale_translation(&step.b, j, seq.dim(), state.dim())?;
        hadamard_addsub_inplace(&mut state, &rescaled.b_tilde, mode, circuit.as_ref())?;
        if let Some(g) = circuit.as_mut() {
            let stage = inplace_stage_gates(g, &rescaled.b_tilde)?;
            g.extend(&stage)?;
        }
    }

    Ok(PipelineResult {
        state,
        n,
        k: seq.k(),
        scale: 1u64 << seq.k(),
        mode,
        circuit,
    })
}

/// De-scaled result `2^k · amplitudes[0..N]`.
pub fn extract_result(res: &PipelineResult) -> ComplexVector {
    let idx: Vec<usize> = res.result_indices().collect();
    let amps = res
        .state
        .get_amplitudes(&idx)
        .expect("result indices lie inside the register");
    amps * c(res.scale as f64, 0.0)
}

/// Direct evaluation of `A_k(…(A_1 Ψ + B_1)…) + B_k`.
pub fn classical_affine_compose(seq: &AffineSequence) -> ComplexVector {
    let mut x = seq.psi0().clone();
    for step in seq.steps() {
        x = &step.a * x + step.b.to_dense(seq.dim());
    }
    x
}
