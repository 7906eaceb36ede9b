//! Dense statevector engine.
//!
//! Qubit `q - 1` is the most significant bit of a basis index. Gates act on an
//! ordered list of target qubits; the first target is the most significant bit
//! of the gate's local index space. Targets need not be adjacent: amplitudes
//! are gathered and scattered through precomputed index offsets.

use std::collections::BTreeMap;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::linalg::{c, c64, check_vector, is_unitary, unitarity_defect, vector_norm, ComplexMatrix, ComplexVector};
use crate::random;

/// Largest register the engine will allocate (2^24 amplitudes).
pub const MAX_QUBITS: usize = 24;
/// Tolerance on the input norm accepted by [`QuantumState::from_amplitudes`].
pub const INPUT_NORM_TOL: f64 = 1e-8;
/// Tolerance used when a gate matrix is checked for unitarity.
pub const GATE_UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<c64>,
}

/// Measurement outcomes keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl ShotHistogram {
    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.count(index) as f64 / self.shots as f64
    }
}

fn check_capacity(q: usize) -> Result<()> {
    if q == 0 || q > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "register of {q} qubits is outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Number of qubits `n` with `2^n == dim`, if `dim` is a power of two.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim >= 1 && dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

impl QuantumState {
    /// All-zeros register `|0…0⟩`.
    pub fn basis(q: usize) -> Result<Self> {
        check_capacity(q)?;
        let mut amps = vec![c(0.0, 0.0); 1 << q];
        amps[0] = c(1.0, 0.0);
        Ok(Self { num_qubits: q, amps })
    }

    /// Amplitude-encode a normalized vector; the result is renormalized to
    /// machine precision.
    pub fn from_amplitudes(x: &ComplexVector) -> Result<Self> {
        check_vector(x)?;
        let q = qubits_for_dim(x.len())
            .ok_or_else(|| Error::Shape(format!("amplitude vector length {} is not a power of two", x.len())))?;
        if q == 0 {
            return Err(Error::Shape("a register needs at least one qubit".into()));
        }
        check_capacity(q)?;
        let norm = vector_norm(x);
        if (norm - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::Normalization {
                norm,
                tol: INPUT_NORM_TOL,
            });
        }
        let amps = x.iter().map(|z| z / norm).collect();
        Ok(Self { num_qubits: q, amps })
    }

    /// Wrap raw amplitudes without renormalizing. Callers guarantee the
    /// norm invariant.
    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<c64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amps
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::from_column_slice(&self.amps)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Selected amplitudes, verbatim.
    pub fn get_amplitudes(&self, indices: &[usize]) -> Result<ComplexVector> {
        let mut out = ComplexVector::zeros(indices.len());
        for (k, &i) in indices.iter().enumerate() {
            out[k] = *self
                .amps
                .get(i)
                .ok_or_else(|| Error::Index(format!("basis index {i} out of range for dim {}", self.dim())))?;
        }
        Ok(out)
    }

    /// Add a fresh `|0⟩` qubit as the new most significant bit.
    pub fn prepend_qubit(&mut self) -> Result<usize> {
        check_capacity(self.num_qubits + 1)?;
        self.amps.resize(self.amps.len() * 2, c(0.0, 0.0));
        self.num_qubits += 1;
        Ok(self.num_qubits - 1)
    }

    /// Total probability carried by basis states where `qubit` reads 1.
    pub fn excited_weight(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    fn check_targets(&self, targets: &[usize], controls: &[usize]) -> Result<()> {
        if targets.is_empty() {
            return Err(Error::Index("target list is empty".into()));
        }
        let mut seen = 0usize;
        for &t in targets.iter().chain(controls) {
            if t >= self.num_qubits {
                return Err(Error::Index(format!(
                    "qubit {t} out of range for a {}-qubit register",
                    self.num_qubits
                )));
            }
            if seen & (1 << t) != 0 {
                return Err(Error::Index(format!(
                    "qubit {t} appears more than once among targets/controls"
                )));
            }
            seen |= 1 << t;
        }
        Ok(())
    }

    /// Apply `u` to `targets` (first target = most significant local bit).
    pub fn apply_unitary(&mut self, u: &ComplexMatrix, targets: &[usize]) -> Result<()> {
        self.apply_controlled(u, targets, &[], &[])
    }

    /// Apply `u` to `targets` on the subspace where every control qubit reads
    /// its control value. `control_values` may be empty, meaning all ones.
    pub fn apply_controlled(
        &mut self,
        u: &ComplexMatrix,
        targets: &[usize],
        controls: &[usize],
        control_values: &[bool],
    ) -> Result<()> {
        self.check_targets(targets, controls)?;
        let local_dim = 1usize << targets.len();
        if u.shape() != (local_dim, local_dim) {
            return Err(Error::Shape(format!(
                "gate is {}x{} but acts on {} qubits",
                u.nrows(),
                u.ncols(),
                targets.len()
            )));
        }
        if !is_unitary(u, GATE_UNITARY_TOL) {
            return Err(Error::Unitarity(unitarity_defect(u)));
        }
        if !control_values.is_empty() && control_values.len() != controls.len() {
            return Err(Error::Shape("control_values must match controls".into()));
        }
        self.apply_unchecked(u, targets, controls, control_values);
        Ok(())
    }

    pub(crate) fn apply_unchecked(
        &mut self,
        u: &ComplexMatrix,
        targets: &[usize],
        controls: &[usize],
        control_values: &[bool],
    ) {
        let t = targets.len();
        let local_dim = 1usize << t;
        let offsets: Vec<usize> = (0..local_dim)
            .map(|l| {
                (0..t)
                    .filter(|&p| l >> (t - 1 - p) & 1 == 1)
                    .map(|p| 1usize << targets[p])
                    .sum()
            })
            .collect();
        let target_mask: usize = targets.iter().map(|&q| 1usize << q).sum();
        let control_mask: usize = controls.iter().map(|&q| 1usize << q).sum();
        let control_pattern: usize = controls
            .iter()
            .enumerate()
            .filter(|(k, _)| control_values.get(*k).copied().unwrap_or(true))
            .map(|(_, &q)| 1usize << q)
            .sum();

        // row-major copy for the inner product loop
        let rows: Vec<c64> = (0..local_dim)
            .flat_map(|r| (0..local_dim).map(move |col| (r, col)))
            .map(|(r, col)| u[(r, col)])
            .collect();
        let mut gathered = vec![c(0.0, 0.0); local_dim];
        for base in 0..self.amps.len() {
            if base & target_mask != 0 || base & control_mask != control_pattern {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                gathered[l] = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let row = &rows[r * local_dim..(r + 1) * local_dim];
                self.amps[base + off] = row.iter().zip(&gathered).fold(c(0.0, 0.0), |acc, (a, b)| acc + a * b);
            }
        }
    }

    /// Multinomial sampling in the computational basis via inverse CDF.
    ///
    /// Each shot consumes one `f64` from a ChaCha20 stream seeded with `seed`.
    pub fn sample(&self, shots: u64, seed: u64) -> ShotHistogram {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for z in &self.amps {
            acc += z.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = random::rng(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&p| p <= u).min(cdf.len() - 1);
            *counts.entry(idx).or_insert(0) += 1;
        }
        ShotHistogram { shots, counts }
    }
}
