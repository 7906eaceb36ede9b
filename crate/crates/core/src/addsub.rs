//! Hadamard-supported element-wise addition and subtraction.
//!
//! An ancilla in `(|0⟩ + |1⟩)/√2` selects which vector is loaded into the data
//! register (`|0⟩ → a`, `|1⟩ → b`); a second Hadamard on the ancilla then
//! leaves `(a + b)/2` on the ancilla-`|0⟩` half and `(a − b)/2` on the
//! ancilla-`|1⟩` half. The ancilla is always the new most significant qubit,
//! so the sum half occupies the low basis indices.

use crate::circuit::{hadamard, Gate, GateList};
use crate::error::{Error, Result};
use crate::linalg::{c, c64, check_vector, complete_to_unitary, vector_norm, ComplexVector};
use crate::simulator::{qubits_for_dim, QuantumState, INPUT_NORM_TOL};

/// Max-entry deviation tolerated between the witness circuit's output and the
/// state it claims to prepare.
pub const WITNESS_TOL: f64 = 1e-9;

/// How the evolved register is loaded into the ancilla-`|0⟩` branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AddSubMode {
    /// The engine writes the branch superposition directly.
    #[default]
    Abstract,
    /// Uncompute the recorded preparation circuit under control of the
    /// ancilla and prepare the translation vector instead.
    Physical,
}

impl std::str::FromStr for AddSubMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abstract" => Ok(AddSubMode::Abstract),
            "physical" => Ok(AddSubMode::Physical),
            other => Err(Error::InvalidInput(format!(
                "unknown mode `{other}` (expected abstract or physical)"
            ))),
        }
    }
}

impl std::fmt::Display for AddSubMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AddSubMode::Abstract => "abstract",
            AddSubMode::Physical => "physical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AddSubResult {
    pub state: QuantumState,
    pub sum_indices: Vec<usize>,
    pub diff_indices: Vec<usize>,
}

fn check_normalized(v: &ComplexVector) -> Result<()> {
    check_vector(v)?;
    let norm = vector_norm(v);
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::Normalization {
            norm,
            tol: INPUT_NORM_TOL,
        });
    }
    Ok(())
}

/// Data qubits listed most significant first, as expected by a dense block.
pub fn register_targets(num_qubits: usize) -> Vec<usize> {
    (0..num_qubits).rev().collect()
}

/// State-preparation block mapping `|0…0⟩` to `v` on qubits `0..n`.
pub fn preparation_gate(v: &ComplexVector) -> Result<Gate> {
    let n = qubits_for_dim(v.len())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Shape(format!("vector length {} is not a power of two", v.len())))?;
    Ok(Gate::block(complete_to_unitary(v)?, register_targets(n)))
}

/// Two fresh registers: prepare `psi_a` on the ancilla-`|0⟩` branch and
/// `psi_b` on the ancilla-`|1⟩` branch, then interfere them.
pub fn hadamard_addsub_fresh(psi_a: &ComplexVector, psi_b: &ComplexVector) -> Result<AddSubResult> {
    if psi_a.len() != psi_b.len() {
        return Err(Error::Shape(format!(
            "operands have different lengths {} and {}",
            psi_a.len(),
            psi_b.len()
        )));
    }
    check_normalized(psi_a)?;
    check_normalized(psi_b)?;
    let circuit = fresh_circuit(psi_a, psi_b)?;
    let state = circuit.run_from_zero()?;
    let half = psi_a.len();
    Ok(AddSubResult {
        state,
        sum_indices: (0..half).collect(),
        diff_indices: (half..2 * half).collect(),
    })
}

/// The gate program of the fresh-register variant.
pub fn fresh_circuit(psi_a: &ComplexVector, psi_b: &ComplexVector) -> Result<GateList> {
    let n = qubits_for_dim(psi_a.len())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Shape(format!("length {} is not a power of two", psi_a.len())))?;
    let ancilla = n;
    let mut g = GateList::new(n + 1);
    g.push(Gate::Single {
        matrix: hadamard(),
        target: ancilla,
    })?;
    g.push(preparation_gate(psi_a)?.with_control(ancilla, false))?;
    g.push(preparation_gate(psi_b)?.with_control(ancilla, true))?;
    g.push(Gate::Single {
        matrix: hadamard(),
        target: ancilla,
    })?;
    Ok(g)
}

/// Gates appended by one in-pipeline add/sub stage, given the program that
/// prepared the current register. The ancilla is qubit `witness.qubit_count()`.
pub fn inplace_stage_gates(witness: &GateList, b_tilde: &ComplexVector) -> Result<GateList> {
    let q = witness.qubit_count();
    if b_tilde.len() != 1 << q {
        return Err(Error::Shape(format!(
            "translation has length {} but the register has {} amplitudes",
            b_tilde.len(),
            1usize << q
        )));
    }
    let ancilla = q;
    let mut branch = witness.inverse();
    branch.push(preparation_gate(b_tilde)?)?;
    let mut g = GateList::new(q + 1);
    g.push(Gate::Single {
        matrix: hadamard(),
        target: ancilla,
    })?;
    g.extend(&branch.controlled_by(ancilla, true)?)?;
    g.push(Gate::Single {
        matrix: hadamard(),
        target: ancilla,
    })?;
    Ok(g)
}

/// Add/subtract `b_tilde` to the current register, prepending one ancilla.
///
/// Afterwards the ancilla-`|0⟩` half holds `(φ + b̃)/2` and the ancilla-`|1⟩`
/// half `(φ − b̃)/2`, where `φ` are the amplitudes on entry.
pub fn hadamard_addsub_inplace(
    state: &mut QuantumState,
    b_tilde: &ComplexVector,
    mode: AddSubMode,
    circuit_so_far: Option<&GateList>,
) -> Result<()> {
    if b_tilde.len() != state.dim() {
        return Err(Error::Shape(format!(
            "translation has length {} but the state has {} amplitudes",
            b_tilde.len(),
            state.dim()
        )));
    }
    check_normalized(b_tilde)?;
    match mode {
        AddSubMode::Abstract => {
            let q = state.num_qubits();
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut amps: Vec<c64> = Vec::with_capacity(2 * state.dim());
            amps.extend(state.amplitudes().iter().map(|z| z * s));
            amps.extend(b_tilde.iter().map(|z| z * s));
            let mut next = QuantumState::from_raw(q + 1, amps);
            next.apply_unitary(&hadamard(), &[q])?;
            *state = next;
            Ok(())
        }
        AddSubMode::Physical => {
            let witness = circuit_so_far.ok_or(Error::MissingWitness)?;
            if witness.qubit_count() != state.num_qubits() {
                return Err(Error::Shape(format!(
                    "witness circuit has {} qubits, state has {}",
                    witness.qubit_count(),
                    state.num_qubits()
                )));
            }
            let rebuilt = witness.run_from_zero()?;
            let deviation = rebuilt
                .amplitudes()
                .iter()
                .zip(state.amplitudes())
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm()));
            if deviation > WITNESS_TOL {
                return Err(Error::Precondition(format!(
                    "witness circuit does not reproduce the current state (deviation {deviation:e})"
                )));
            }
            let stage = inplace_stage_gates(witness, b_tilde)?;
            state.prepend_qubit()?;
            stage.apply_to(state)
        }
    }
}

/// Project onto `ancilla == value` and renormalize the remaining register.
pub fn project_branch(state: &QuantumState, ancilla: usize, value: bool) -> Result<ComplexVector> {
    if ancilla >= state.num_qubits() {
        return Err(Error::Index(format!("ancilla {ancilla} out of range")));
    }
    let bit = 1usize << ancilla;
    let low = bit - 1;
    let half = state.dim() / 2;
    let mut out = ComplexVector::zeros(half);
    for (k, slot) in out.iter_mut().enumerate() {
        // insert the ancilla bit into position `ancilla`
        let idx = ((k & !low) << 1) | (k & low) | if value { bit } else { 0 };
        *slot = state.amplitudes()[idx];
    }
    let norm = vector_norm(&out);
    if norm == 0.0 {
        return Err(Error::Precondition("projected branch has zero weight".into()));
    }
    Ok(out / c(norm, 0.0))
}
