//! Gate-level circuit programs.
//!
//! A [`GateList`] mixes elementary gates (single-qubit unitaries, CNOT) with
//! dense, optionally controlled, blocks. Blocks are what the pipeline records
//! while it runs; [`crate::synthesis::lower`] rewrites them into elementary
//! gates.

use crate::error::{Error, Result};
use crate::linalg::{c, is_unitary, unitarity_defect, ComplexMatrix};
use crate::simulator::QuantumState;

pub const SINGLE_QUBIT_UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Single {
        matrix: ComplexMatrix,
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Dense unitary on `targets` (first = most significant local bit),
    /// applied where each control reads its value.
    Block {
        matrix: ComplexMatrix,
        targets: Vec<usize>,
        controls: Vec<usize>,
        control_values: Vec<bool>,
    },
}

impl Gate {
    pub fn block(matrix: ComplexMatrix, targets: Vec<usize>) -> Self {
        Gate::Block {
            matrix,
            targets,
            controls: Vec::new(),
            control_values: Vec::new(),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Single { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Block { targets, controls, .. } => controls.iter().chain(targets).copied().collect(),
        }
    }

    pub fn is_elementary(&self) -> bool {
        !matches!(self, Gate::Block { .. })
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Single { matrix, target } => Gate::Single {
                matrix: matrix.adjoint(),
                target: *target,
            },
            Gate::Cnot { .. } => self.clone(),
            Gate::Block {
                matrix,
                targets,
                controls,
                control_values,
            } => Gate::Block {
                matrix: matrix.adjoint(),
                targets: targets.clone(),
                controls: controls.clone(),
                control_values: control_values.clone(),
            },
        }
    }

    /// The same gate with one more control.
    pub fn with_control(&self, qubit: usize, value: bool) -> Gate {
        match self {
            Gate::Single { matrix, target } => Gate::Block {
                matrix: matrix.clone(),
                targets: vec![*target],
                controls: vec![qubit],
                control_values: vec![value],
            },
            Gate::Cnot { control, target } => Gate::Block {
                matrix: pauli_x(),
                targets: vec![*target],
                controls: vec![qubit, *control],
                control_values: vec![value, true],
            },
            Gate::Block {
                matrix,
                targets,
                controls,
                control_values,
            } => {
                let mut cs = vec![qubit];
                cs.extend(controls);
                let mut vs = vec![value];
                vs.extend(control_values);
                Gate::Block {
                    matrix: matrix.clone(),
                    targets: targets.clone(),
                    controls: cs,
                    control_values: vs,
                }
            }
        }
    }

    pub fn apply(&self, state: &mut QuantumState) -> Result<()> {
        match self {
            Gate::Single { matrix, target } => state.apply_unitary(matrix, &[*target]),
            Gate::Cnot { control, target } => state.apply_controlled(&pauli_x(), &[*target], &[*control], &[true]),
            Gate::Block {
                matrix,
                targets,
                controls,
                control_values,
            } => state.apply_controlled(matrix, targets, controls, control_values),
        }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

/// Ordered gate program on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateList {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(qubit_count: usize) -> Self {
        Self {
            qubit_count,
            gates: Vec::new(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Widen the register; existing indices are unchanged.
    pub fn grow_to(&mut self, qubit_count: usize) {
        self.qubit_count = self.qubit_count.max(qubit_count);
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= self.qubit_count {
                return Err(Error::Index(format!(
                    "gate touches qubit {q} in a {}-qubit circuit",
                    self.qubit_count
                )));
            }
            if qubits[..k].contains(&q) {
                return Err(Error::Index(format!("gate uses qubit {q} twice")));
            }
        }
        match &gate {
            Gate::Single { matrix, .. } => {
                if matrix.shape() != (2, 2) {
                    return Err(Error::Shape("single-qubit gate must be 2x2".into()));
                }
                if !is_unitary(matrix, SINGLE_QUBIT_UNITARY_TOL) {
                    return Err(Error::Unitarity(unitarity_defect(matrix)));
                }
            }
            Gate::Block {
                matrix,
                targets,
                controls,
                control_values,
            } => {
                let d = 1usize << targets.len();
                if matrix.shape() != (d, d) || controls.len() != control_values.len() {
                    return Err(Error::Shape("block gate shape does not match its qubits".into()));
                }
            }
            Gate::Cnot { .. } => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &GateList) -> Result<()> {
        self.grow_to(other.qubit_count);
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    /// Reverse order, adjoint of every gate.
    pub fn inverse(&self) -> GateList {
        GateList {
            qubit_count: self.qubit_count,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Every gate conditioned on `qubit == value`.
    pub fn controlled_by(&self, qubit: usize, value: bool) -> Result<GateList> {
        let mut out = GateList::new(self.qubit_count.max(qubit + 1));
        for g in &self.gates {
            out.push(g.with_control(qubit, value))?;
        }
        Ok(out)
    }

    /// Relabel qubit `i` as `map[i]` inside a register of `qubit_count`.
    pub fn remap(&self, map: &[usize], qubit_count: usize) -> Result<GateList> {
        let m = |q: usize| map[q];
        let mut out = GateList::new(qubit_count);
        for g in &self.gates {
            let mapped = match g {
                Gate::Single { matrix, target } => Gate::Single {
                    matrix: matrix.clone(),
                    target: m(*target),
                },
                Gate::Cnot { control, target } => Gate::Cnot {
                    control: m(*control),
                    target: m(*target),
                },
                Gate::Block {
                    matrix,
                    targets,
                    controls,
                    control_values,
                } => Gate::Block {
                    matrix: matrix.clone(),
                    targets: targets.iter().map(|&q| m(q)).collect(),
                    controls: controls.iter().map(|&q| m(q)).collect(),
                    control_values: control_values.clone(),
                },
            };
            out.push(mapped)?;
        }
        Ok(out)
    }

    pub fn apply_to(&self, state: &mut QuantumState) -> Result<()> {
        if state.num_qubits() < self.qubit_count {
            return Err(Error::Shape(format!(
                "circuit on {} qubits cannot run on a {}-qubit state",
                self.qubit_count,
                state.num_qubits()
            )));
        }
        for g in &self.gates {
            g.apply(state)?;
        }
        Ok(())
    }

    /// State produced from `|0…0⟩`.
    pub fn run_from_zero(&self) -> Result<QuantumState> {
        let mut s = QuantumState::basis(self.qubit_count)?;
        self.apply_to(&mut s)?;
        Ok(s)
    }

    /// Dense `2^q × 2^q` unitary of the whole program, built column by column.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.qubit_count;
        let mut out = ComplexMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut amps = vec![c(0.0, 0.0); dim];
            amps[col] = c(1.0, 0.0);
            let mut s = QuantumState::from_raw(self.qubit_count, amps);
            self.apply_to(&mut s)?;
            for (row, z) in s.amplitudes().iter().enumerate() {
                out[(row, col)] = *z;
            }
        }
        Ok(out)
    }
}
