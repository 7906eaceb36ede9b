//! Exact synthesis of small unitaries into single-qubit gates and CNOTs.
//!
//! The decomposition is the recursive cosine–sine (quantum Shannon) scheme:
//!
//! ```text
//! U = (L0 ⊕ L1) · [[C, −S], [S, C]] · (R0 ⊕ R1)
//! ```
//!
//! on the most significant qubit. The middle factor is a uniformly controlled
//! `Ry`; each block-diagonal factor is demultiplexed into `V (D ⊕ D†) W`, a
//! uniformly controlled `Rz` between two unitaries on one fewer qubit.
//! Uniformly controlled rotations expand into `2^k` rotations and `2^k` CNOTs
//! along a Gray code. No step drops a phase, so the product of the emitted
//! gates equals the input exactly (up to rounding).

use crate::addsub::AddSubMode;
use crate::baseline::build_augmented;
use crate::circuit::{pauli_x, Gate, GateList};
use crate::error::{Error, Result};
use crate::linalg::{
    c, c64, closest_unitary, identity, is_unitary, max_abs_diff, max_abs_diff_vec, normal_eigen,
    orthonormalize_against, svd, unitarity_defect, vector_norm, ComplexMatrix, ComplexVector,
};
use crate::pipeline::{classical_affine_compose, run_pipeline, AffineSequence, AffineStep, Translation};
use crate::simulator::qubits_for_dim;

/// Widest unitary accepted by [`synthesize`].
pub const MAX_SYNTHESIS_QUBITS: usize = 5;
pub const SYNTHESIS_UNITARY_TOL: f64 = 1e-9;
/// Reconstruction and cross-method agreement tolerance of [`compare_methods`].
pub const COMPARISON_TOL: f64 = 1e-8;

/// Gate tallies. Every multi-qubit gate is a CNOT once a list is lowered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCountReport {
    pub single_qubit: usize,
    pub multi_qubit: usize,
    pub total: usize,
}

#[derive(Clone, Copy)]
enum Axis {
    Y,
    Z,
}

fn rotation(axis: Axis, theta: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    match axis {
        Axis::Y => ComplexMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]),
        Axis::Z => ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                c64::from_polar(1.0, -theta / 2.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c64::from_polar(1.0, theta / 2.0),
            ],
        ),
    }
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Rotation on `target` whose angle is `angles[j]` when the controls read `j`
/// (control `p` is bit `p` of `j`).
fn uniformly_controlled_rotation(axis: Axis, angles: &[f64], target: usize, controls: &[usize]) -> Vec<Gate> {
    let k = controls.len();
    let count = 1usize << k;
    debug_assert_eq!(angles.len(), count);
    if k == 0 {
        return vec![Gate::Single {
            matrix: rotation(axis, angles[0]),
            target,
        }];
    }
    let mut gates = Vec::with_capacity(2 * count);
    for i in 0..count {
        let g = gray(i);
        let theta = angles
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if (j & g).count_ones().is_multiple_of(2) {
                    *a
                } else {
                    -*a
                }
            })
            .sum::<f64>()
            / count as f64;
        gates.push(Gate::Single {
            matrix: rotation(axis, theta),
            target,
        });
        let flip = if i + 1 == count {
            k - 1
        } else {
            (i + 1).trailing_zeros() as usize
        };
        gates.push(Gate::Cnot {
            control: controls[flip],
            target,
        });
    }
    gates
}

struct CosineSine {
    l0: ComplexMatrix,
    l1: ComplexMatrix,
    /// `θ_j` with `C = cos θ`, `S = sin θ`.
    theta: Vec<f64>,
    r0: ComplexMatrix,
    r1: ComplexMatrix,
}

/// `U = (L0 ⊕ L1) [[C, −S], [S, C]] (R0 ⊕ R1)` for a `2m × 2m` unitary.
fn cosine_sine(u: &ComplexMatrix) -> CosineSine {
    let m = u.nrows() / 2;
    let u00 = u.view((0, 0), (m, m)).into_owned();
    let u01 = u.view((0, m), (m, m)).into_owned();
    let u10 = u.view((m, 0), (m, m)).into_owned();
    let u11 = u.view((m, m), (m, m)).into_owned();

    let svd = svd(&u00).expect("blocks of a checked unitary are finite");
    let l0 = svd.u;
    let r0 = svd.v_t;

    // Columns of U10 R0† are orthogonal with norms sin θ_j. Reading the sines
    // off those norms keeps them accurate where cos θ_j ≈ 1 and √(1 − c²)
    // would lose half the digits.
    let z = &u10 * r0.adjoint();
    let theta: Vec<f64> = (0..m)
        .map(|j| vector_norm(&z.column(j).into_owned()).atan2(svd.singular_values[j]))
        .collect();
    let (sin, cos): (Vec<f64>, Vec<f64>) = theta.iter().map(|t| t.sin_cos()).unzip();

    // Normalize in order of decreasing norm so short columns are
    // orthogonalized against well-determined ones; complete with basis
    // vectors where a column vanishes.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| sin[b].total_cmp(&sin[a]));
    let mut cols: Vec<Option<ComplexVector>> = vec![None; m];
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(m);
    for &j in &order {
        let q = if sin[j] > 1e-14 {
            orthonormalize_against(&z.column(j).into_owned(), &basis, 1e-15)
        } else {
            None
        };
        let q = q.unwrap_or_else(|| {
            (0..m)
                .find_map(|e| {
                    let mut v = ComplexVector::zeros(m);
                    v[e] = c(1.0, 0.0);
                    orthonormalize_against(&v, &basis, 1e-3)
                })
                .expect("a unit basis vector outside a proper subspace")
        });
        basis.push(q.clone());
        cols[j] = Some(q);
    }
    let l1 = ComplexMatrix::from_columns(&cols.into_iter().map(|c| c.unwrap()).collect::<Vec<_>>());

    // Right column block is [[−S R1], [C R1]]; recover R1 = −S L0†U01 + C L1†U11.
    let x = l0.adjoint() * &u01;
    let y = l1.adjoint() * &u11;
    let mut r1 = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            r1[(i, j)] = x[(i, j)] * (-sin[i]) + y[(i, j)] * cos[i];
        }
    }
    let r1 = closest_unitary(&r1);
    CosineSine { l0, l1, theta, r0, r1 }
}

/// `U0 ⊕ U1 = (I ⊕ I ⊗ V) (D ⊕ D†) (I ⊕ I ⊗ W)` with `D = diag(e^{iφ})`.
fn demultiplex(u0: &ComplexMatrix, u1: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let x = u0 * u1.adjoint();
    let (v, lambda) = normal_eigen(&x).expect("products of checked unitaries are finite");
    let phases: Vec<f64> = lambda.iter().map(|l| l.arg() / 2.0).collect();
    let d_adj = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        phases.len(),
        phases.iter().map(|p| c64::from_polar(1.0, *p)),
    ));
    let w = d_adj * v.adjoint() * u1;
    (v, phases, w)
}

/// Gates for `u` on local qubits `0..q`, qubit `q - 1` most significant.
fn shannon(u: &ComplexMatrix, q: usize) -> Vec<Gate> {
    if q == 1 {
        return vec![Gate::Single {
            matrix: u.clone(),
            target: 0,
        }];
    }
    let top = q - 1;
    let controls: Vec<usize> = (0..top).collect();
    let cs = cosine_sine(u);
    let mut gates = multiplexor(&cs.r0, &cs.r1, q);
    let ry: Vec<f64> = cs.theta.iter().map(|t| 2.0 * t).collect();
    gates.extend(uniformly_controlled_rotation(Axis::Y, &ry, top, &controls));
    gates.extend(multiplexor(&cs.l0, &cs.l1, q));
    gates
}

/// `U0 ⊕ U1` selected by qubit `q - 1`.
fn multiplexor(u0: &ComplexMatrix, u1: &ComplexMatrix, q: usize) -> Vec<Gate> {
    let top = q - 1;
    let controls: Vec<usize> = (0..top).collect();
    let (v, phases, w) = demultiplex(u0, u1);
    let mut gates = shannon(&w, q - 1);
    // D ⊕ D† is Rz(−2φ_j) on the top qubit for lower index j
    let rz: Vec<f64> = phases.iter().map(|p| -2.0 * p).collect();
    gates.extend(uniformly_controlled_rotation(Axis::Z, &rz, top, &controls));
    gates.extend(shannon(&v, q - 1));
    gates
}

/// Merge runs of single-qubit gates on the same wire.
fn fuse_single_qubit_runs(gates: Vec<Gate>, q: usize) -> Vec<Gate> {
    let mut pending: Vec<Option<ComplexMatrix>> = vec![None; q];
    let mut out = Vec::with_capacity(gates.len());
    let flush = |wire: usize, pending: &mut Vec<Option<ComplexMatrix>>, out: &mut Vec<Gate>| {
        if let Some(m) = pending[wire].take() {
            if max_abs_diff(&m, &identity(2)) > 1e-14 {
                out.push(Gate::Single {
                    matrix: m,
                    target: wire,
                });
            }
        }
    };
    for g in gates {
        match g {
            Gate::Single { matrix, target } => {
                pending[target] = Some(match pending[target].take() {
                    Some(prev) => matrix * prev,
                    None => matrix,
                });
            }
            other => {
                for w in other.qubits() {
                    flush(w, &mut pending, &mut out);
                }
                out.push(other);
            }
        }
    }
    for w in 0..q {
        flush(w, &mut pending, &mut out);
    }
    out
}

/// Decompose a `2^q × 2^q` unitary into single-qubit gates and CNOTs.
pub fn synthesize(u: &ComplexMatrix, qubits: usize) -> Result<GateList> {
    if qubits == 0 || qubits > MAX_SYNTHESIS_QUBITS {
        return Err(Error::Capacity(format!(
            "synthesis supports 1..={MAX_SYNTHESIS_QUBITS} qubits, got {qubits}"
        )));
    }
    let dim = 1usize << qubits;
    if u.shape() != (dim, dim) {
        return Err(Error::Shape(format!(
            "{}x{} matrix does not act on {qubits} qubits",
            u.nrows(),
            u.ncols()
        )));
    }
    if !is_unitary(u, SYNTHESIS_UNITARY_TOL) {
        return Err(Error::Unitarity(unitarity_defect(u)));
    }
    let polished = closest_unitary(u);
    let gates = fuse_single_qubit_runs(shannon(&polished, qubits), qubits);
    let mut out = GateList::new(qubits);
    for g in gates {
        // rotations and fused products are unitary by construction
        out.push(g)?;
    }
    Ok(out)
}

/// `‖e^{iθ}P − U‖_max` for the best global phase `θ`.
pub fn phase_distance(p: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let overlap: c64 = p.iter().zip(u.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    max_abs_diff(&(p * phase), u)
}

/// Dense matrix of a (controlled) block over `controls ++ targets`, first
/// listed qubit most significant.
fn controlled_dense(matrix: &ComplexMatrix, controls: usize, values: &[bool]) -> ComplexMatrix {
    let t = matrix.nrows();
    let dim = t << controls;
    let pattern = values.iter().fold(0usize, |acc, &v| (acc << 1) | usize::from(v));
    let mut out = identity(dim);
    out.view_mut((pattern * t, pattern * t), (t, t)).copy_from(matrix);
    out
}

/// Merge consecutive blocks that share the same non-empty control set into a
/// single controlled block.
fn merge_controlled_runs(list: &GateList) -> Result<Vec<Gate>> {
    let mut out: Vec<Gate> = Vec::new();
    let mut run: Vec<Gate> = Vec::new();
    let key = |g: &Gate| match g {
        Gate::Block {
            controls,
            control_values,
            ..
        } if !controls.is_empty() => Some((controls.clone(), control_values.clone())),
        _ => None,
    };
    let close = |run: &mut Vec<Gate>, out: &mut Vec<Gate>| -> Result<()> {
        if run.len() <= 1 {
            out.append(run);
            return Ok(());
        }
        let (controls, values) = key(&run[0]).expect("runs hold controlled blocks");
        let mut support: Vec<usize> = Vec::new();
        for g in run.iter() {
            if let Gate::Block { targets, .. } = g {
                for &t in targets {
                    if !support.contains(&t) {
                        support.push(t);
                    }
                }
            }
        }
        support.sort_unstable_by(|a, b| b.cmp(a));
        // local index l <-> global support[width - 1 - l]
        let width = support.len();
        let local = |q: usize| width - 1 - support.iter().position(|&s| s == q).expect("in support");
        let mut body = GateList::new(width);
        for g in run.drain(..) {
            if let Gate::Block { matrix, targets, .. } = g {
                body.push(Gate::block(matrix, targets.iter().map(|&t| local(t)).collect()))?;
            }
        }
        out.push(Gate::Block {
            matrix: body.to_matrix()?,
            targets: support,
            controls,
            control_values: values,
        });
        Ok(())
    };
    for g in list.gates() {
        let k = key(g);
        if k.is_some() && (run.is_empty() || key(&run[0]) == k) {
            run.push(g.clone());
            continue;
        }
        close(&mut run, &mut out)?;
        if k.is_some() {
            run.push(g.clone());
        } else {
            out.push(g.clone());
        }
    }
    close(&mut run, &mut out)?;
    Ok(out)
}

/// Rewrite every dense block into elementary gates. Consecutive blocks under
/// the same controls are first merged into one controlled operation.
pub fn lower(list: &GateList) -> Result<GateList> {
    let mut out = GateList::new(list.qubit_count());
    for g in merge_controlled_runs(list)? {
        match g {
            Gate::Block {
                matrix,
                targets,
                controls,
                control_values,
            } => {
                let mut order = controls.clone();
                order.extend(&targets);
                let width = order.len();
                let dense = controlled_dense(&matrix, controls.len(), &control_values);
                let local = synthesize(&dense, width)?;
                let map: Vec<usize> = (0..width).map(|l| order[width - 1 - l]).collect();
                out.extend(&local.remap(&map, list.qubit_count())?)?;
            }
            elementary => out.push(elementary)?,
        }
    }
    Ok(out)
}

pub fn count_gates(g: &GateList) -> GateCountReport {
    let mut r = GateCountReport::default();
    for gate in g.gates() {
        if gate.qubits().len() == 1 {
            r.single_qubit += 1;
        } else {
            r.multi_qubit += 1;
        }
    }
    r.total = r.single_qubit + r.multi_qubit;
    r
}

/// Outcome of building and lowering both single-step circuits.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodComparison {
    pub ours: GateCountReport,
    pub augmented: GateCountReport,
    /// Dimension of the dilation each method encodes (`2N` vs `4N`).
    pub ours_dilation_dim: usize,
    pub augmented_dilation_dim: usize,
    pub qubits: usize,
    pub ours_result: ComplexVector,
    pub augmented_result: ComplexVector,
    pub classical_result: ComplexVector,
    /// Phase-quotiented distance between each lowered circuit and its
    /// block-level original.
    pub ours_reconstruction_error: f64,
    pub augmented_reconstruction_error: f64,
    /// `‖ours − augmented‖_max` on the de-scaled results.
    pub agreement: f64,
}

/// Build the sequential method's circuit (physical add/sub) and the augmented
/// method's circuit for one step `AΨ + B`, lower both to elementary gates,
/// and check that they compute the same vector. An all-zero `b` is treated as
/// the zero translation.
pub fn compare_methods(a: &ComplexMatrix, b: &ComplexVector, psi: &ComplexVector) -> Result<MethodComparison> {
    let n_dim = psi.len();
    if qubits_for_dim(n_dim).is_none_or(|n| n == 0 || n + 2 > MAX_SYNTHESIS_QUBITS) {
        return Err(Error::Capacity(format!(
            "method comparison supports N = 2, 4 or 8, got {n_dim}"
        )));
    }
    let translation = if b.iter().all(|z| *z == c(0.0, 0.0)) {
        Translation::Zero
    } else {
        Translation::Vector(b.clone())
    };
    let seq = AffineSequence::new(psi.clone(), vec![AffineStep::new(a.clone(), translation)?])?;
    let res = run_pipeline(&seq, AddSubMode::Physical)?;
    let ours_circuit = res.circuit.clone().expect("physical mode records its circuit");
    let ours_lowered = lower(&ours_circuit)?;
    let ours_reconstruction_error = phase_distance(&ours_lowered.to_matrix()?, &ours_circuit.to_matrix()?);
    let ours_state = ours_lowered.run_from_zero()?;
    let ours_result = ComplexVector::from_iterator(
        n_dim,
        ours_state.amplitudes()[..n_dim].iter().map(|z| z * res.scale as f64),
    );

    let aug = build_augmented(a, b, psi)?;
    let aug_circuit = aug.circuit()?;
    let aug_lowered = lower(&aug_circuit)?;
    let augmented_reconstruction_error = phase_distance(&aug_lowered.to_matrix()?, &aug_circuit.to_matrix()?);
    let aug_state = aug_lowered.run_from_zero()?;
    let augmented_result =
        ComplexVector::from_iterator(n_dim, aug_state.amplitudes()[..n_dim].iter().map(|z| z * aug.descale()));

    let classical_result = classical_affine_compose(&seq);
    let agreement = max_abs_diff_vec(&ours_result, &augmented_result);
    let worst_reconstruction = ours_reconstruction_error.max(augmented_reconstruction_error);
    if worst_reconstruction > COMPARISON_TOL {
        return Err(Error::Verification(format!(
            "lowered circuit deviates from its blocks by {worst_reconstruction:e}"
        )));
    }
    if agreement > COMPARISON_TOL {
        return Err(Error::Verification(format!(
            "methods disagree on AΨ + B by {agreement:e}"
        )));
    }
    Ok(MethodComparison {
        ours: count_gates(&ours_lowered),
        augmented: count_gates(&aug_lowered),
        ours_dilation_dim: 2 * n_dim,
        augmented_dilation_dim: aug.enc.unitary.nrows(),
        qubits: ours_lowered.qubit_count(),
        ours_result,
        augmented_result,
        classical_result,
        ours_reconstruction_error,
        augmented_reconstruction_error,
        agreement,
    })
}

/// CNOT as a dense 4×4 on (control, target), control most significant.
pub fn cnot_matrix() -> ComplexMatrix {
    crate::linalg::direct_sum(&identity(2), &pauli_x())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::hadamard;
    use crate::linalg::real_vector;
    use crate::random;

    fn reconstruct(u: &ComplexMatrix, q: usize) -> (GateList, f64) {
        let g = synthesize(u, q).unwrap();
        let d = phase_distance(&g.to_matrix().unwrap(), u);
        (g, d)
    }

    #[test]
    fn hadamard_and_cnot() {
        let (_, d) = reconstruct(&hadamard(), 1);
        assert!(d < 1e-12);
        let (g, d) = reconstruct(&cnot_matrix(), 2);
        assert!(d < 1e-12, "cnot reconstruction {d:e}");
        assert!(g.gates().iter().all(Gate::is_elementary));
    }

    #[test]
    fn uniformly_controlled_rotation_matches_blocks() {
        let angles = [0.3, -1.1, 2.0, 0.7];
        let mut g = GateList::new(3);
        for gate in uniformly_controlled_rotation(Axis::Y, &angles, 2, &[0, 1]) {
            g.push(gate).unwrap();
        }
        let m = g.to_matrix().unwrap();
        for (j, a) in angles.iter().enumerate() {
            let r = rotation(Axis::Y, *a);
            for (r0, r1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let got = m[(r0 * 4 + j, r1 * 4 + j)];
                assert!((got - r[(r0, r1)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn random_three_qubit_unitary() {
        let mut rng = random::rng(21);
        let u = random::unitary(&mut rng, 8);
        let (g, d) = reconstruct(&u, 3);
        assert!(d < 1e-10, "reconstruction {d:e}");
        let r = count_gates(&g);
        assert_eq!(r.single_qubit + r.multi_qubit, r.total);
        assert_eq!(r.multi_qubit, 36);
    }

    #[test]
    fn degenerate_cosine_sine_inputs() {
        // block-diagonal and anti-block-diagonal inputs hit θ = 0 and θ = π/2
        let mut rng = random::rng(8);
        let a = random::unitary(&mut rng, 4);
        let b = random::unitary(&mut rng, 4);
        let diag = crate::linalg::direct_sum(&a, &b);
        assert!(reconstruct(&diag, 3).1 < 1e-10);
        let swap = crate::linalg::kron(&pauli_x(), &identity(4)) * &diag;
        assert!(reconstruct(&swap, 3).1 < 1e-10);
        assert!(reconstruct(&identity(16), 4).1 < 1e-12);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_gates(&GateList::new(2)), GateCountReport::default());
        let mut g = GateList::new(2);
        g.push(Gate::Single {
            matrix: hadamard(),
            target: 0,
        })
        .unwrap();
        g.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(
            count_gates(&g),
            GateCountReport {
                single_qubit: 1,
                multi_qubit: 1,
                total: 2
            }
        );
    }

    #[test]
    fn synthesize_errors() {
        assert!(matches!(
            synthesize(&(identity(2) * c(2.0, 0.0)), 1),
            Err(Error::Unitarity(_))
        ));
        assert!(matches!(synthesize(&identity(4), 1), Err(Error::Shape(_))));
        assert!(matches!(synthesize(&identity(64), 6), Err(Error::Capacity(_))));
    }

    #[test]
    fn lowering_controlled_block() {
        let mut rng = random::rng(2);
        let u = random::unitary(&mut rng, 4);
        let mut g = GateList::new(3);
        g.push(Gate::Block {
            matrix: u,
            targets: vec![2, 0],
            controls: vec![1],
            control_values: vec![false],
        })
        .unwrap();
        let lowered = lower(&g).unwrap();
        assert!(lowered.gates().iter().all(Gate::is_elementary));
        let d = phase_distance(&lowered.to_matrix().unwrap(), &g.to_matrix().unwrap());
        assert!(d < 1e-10);
    }

    #[test]
    fn compare_identity_zero_translation() {
        let psi = real_vector(&[0.5, 0.5, 0.5, 0.5]);
        let cmp = compare_methods(&identity(4), &ComplexVector::zeros(4), &psi).unwrap();
        assert!(cmp.agreement < 1e-8);
        assert!(max_abs_diff_vec(&cmp.ours_result, &psi) < 1e-8);
        assert_eq!(cmp.ours_dilation_dim, 8);
        assert_eq!(cmp.augmented_dilation_dim, 16);
        assert_eq!(cmp.qubits, 4);
    }

    /// A state-preparation unitary seen in a physical-mode circuit.
    fn fixture() -> ComplexMatrix {
        let cols: [(f64, f64); 64] = [
            (4.532598103516111e-1, -1.5243432385064634e-1),
            (8.065964284298657e-2, 5.214431065478582e-1),
            (2.860272431861371e-1, -3.9708165661587447e-1),
            (-5.7897683926951334e-2, -3.266937913957051e-2),
            (2.8022044727675494e-1, -1.02626301457639e-1),
            (2.078230697322124e-1, -2.2977891385934096e-1),
            (-6.0934237294063436e-2, 1.1648318134606744e-1),
            (-8.378505717337052e-2, -1.9914791204686902e-1),
            (2.1309899464430574e-2, -2.368570751474173e-2),
            (2.1753350988741465e-2, 2.76163395295892e-2),
            (3.5958583519754292e-3, -3.2406128302150033e-2),
            (9.977878381011316e-1, -2.0131829167993473e-19),
            (1.2899914032608638e-2, -1.5129923038409127e-2),
            (4.535773814950197e-3, -2.013766536278506e-2),
            (2.780971996256834e-4, 8.754155726876439e-3),
            (-1.1382178623415194e-2, -8.81249172580441e-3),
            (4.597728221229726e-2, 4.408611142071057e-2),
            (-5.6565305503091835e-2, 4.1715617267063174e-2),
            (6.452736019365228e-2, 9.242553498499796e-3),
            (2.7154695157958566e-20, 2.0343314017520008e-18),
            (2.9414526180068165e-2, 2.673772209525206e-2),
            (3.995220965430081e-2, 1.0341947371020207e-2),
            (9.912829942091951e-1, -2.3836497759718654e-19),
            (1.833211623846603e-2, -2.2185054017345888e-2),
            (7.981175958759567e-3, -1.0792946585806368e-1),
            (1.1585354747996587e-1, 2.8937562726171373e-2),
            (-5.7729831711043456e-2, -9.451522732411068e-2),
            (2.6216866421652576e-18, 1.0173316174724153e-18),
            (3.1848277937017917e-3, -6.746162796119967e-2),
            (-2.969340404203177e-2, -6.351860933344648e-2),
            (-1.5955092845716557e-18, 5.5892332142991705e-18),
            (9.758507653394867e-1, 3.395583184939561e-18),
            (-1.61016623275389e-1, -4.290381321103187e-3),
            (3.488964553572711e-2, -1.7426801922650842e-1),
            (-1.3646200911458867e-1, 9.245930595126099e-2),
            (-2.565827335150884e-18, -3.075781572177048e-18),
            (9.510035154064641e-1, -4.635671810814839e-18),
            (-9.234773634199227e-2, 4.8602632180262305e-2),
            (-3.621400871944079e-18, 6.184829053162837e-18),
            (-3.1607558256345648e-18, -2.989077197279455e-17),
            (-1.6293155337444637e-1, -9.137370086862139e-2),
            (1.2993479365837948e-1, -1.6000355944043887e-1),
            (-1.89989315089502e-1, 2.118182633000932e-2),
            (-2.4399623638051726e-18, 2.5814345480752556e-18),
            (3.4565687513524626e-17, -1.0749333877731204e-17),
            (9.413157581030146e-1, -2.4941773721113557e-18),
            (-1.0470283876539973e-17, 2.362186372448431e-18),
            (-1.8068786206378063e-18, -7.870711345675402e-18),
            (8.32882721376973e-1, 1.5164813234719179e-18),
            (6.903409945779386e-2, -3.998725267857229e-1),
            (-3.0583893303619075e-1, 2.1932891944525915e-1),
            (1.0945168982264092e-18, -1.9597690945488154e-18),
            (-2.4857116550987484e-17, 5.132869424601635e-18),
            (-3.9508080970955044e-18, -1.854895283348841e-17),
            (1.0894717262432151e-17, 5.058520538417603e-18),
            (-1.116456747874364e-18, 2.4839957948721785e-17),
            (1.2213300501305545e-17, 1.2373435198079336e-17),
            (4.8452862311587136e-1, -4.7713041607001905e-1),
            (7.331975037070764e-1, -2.6972686222598443e-17),
            (-8.003533657936857e-19, -5.444744538157871e-18),
            (1.6220557683239387e-17, 1.8377450810477123e-17),
            (-4.996549326083818e-17, -7.519179859680278e-18),
            (1.1354985611913222e-17, 9.55059826795571e-19),
            (5.456061927815616e-18, -2.143177992809063e-18),
        ];
        ComplexMatrix::from_iterator(8, 8, cols.iter().map(|&(re, im)| c(re, im)))
    }

    #[test]
    fn rank_deficient_corner() {
        // upper-left block has two near-zero singular values
        let u = closest_unitary(&fixture());
        let (_, d) = reconstruct(&u, 3);
        assert!(d < 1e-12, "reconstruction {d:e}");
        let (_, d) = reconstruct(&fixture(), 3);
        assert!(d < 1e-12, "reconstruction {d:e}");
    }
}
