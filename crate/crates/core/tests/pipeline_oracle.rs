mod common;

use common::{affine_oracle, random_problem, sequence};
use qaffine_core::addsub::AddSubMode;
use qaffine_core::linalg::{identity, max_abs_diff_vec, ComplexVector};
use qaffine_core::pipeline::{extract_result, run_pipeline};
use qaffine_core::random;

#[test]
fn random_sequences_match_oracle() {
    let mut rng = random::rng(2024);
    for case in 0..200 {
        let n = 1 + case % 3;
        let k = 1 + (case / 3) % 3;
        let (psi, steps) = random_problem(&mut rng, n, k);
        let res = run_pipeline(&sequence(&psi, &steps), AddSubMode::Abstract).unwrap();
        let expected = affine_oracle(&psi, &steps);
        let got = extract_result(&res);
        assert!(max_abs_diff_vec(&got, &expected) <= 1e-9, "case {case} (n={n}, k={k})");
        assert!((res.state.norm() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn identity_chain_keeps_input() {
    let mut rng = random::rng(5);
    let psi = random::unit_vector(&mut rng, 4);
    let steps = vec![(identity(4), None); 3];
    let res = run_pipeline(&sequence(&psi, &steps), AddSubMode::Abstract).unwrap();
    assert!(max_abs_diff_vec(&extract_result(&res), &psi) <= 1e-12);
    assert_eq!(res.scale, 8);
}

#[test]
fn difference_branch_holds_a_psi_minus_b() {
    let mut rng = random::rng(9);
    let a = random::contraction(&mut rng, 4);
    let b = random::unit_vector(&mut rng, 4);
    let psi = random::unit_vector(&mut rng, 4);
    let steps = vec![(a.clone(), Some(b.clone()))];
    let res = run_pipeline(&sequence(&psi, &steps), AddSubMode::Abstract).unwrap();
    let range = res.branch_indices(&[true]).unwrap();
    let got = ComplexVector::from_iterator(4, res.state.amplitudes()[range].iter().map(|z| z * 2.0));
    assert!(max_abs_diff_vec(&got, &(&a * &psi - &b)) <= 1e-12);
}

#[test]
fn physical_mode_matches_abstract() {
    let mut rng = random::rng(77);
    for case in 0..12 {
        let n = 1 + case % 2;
        let k = 1 + case % 3;
        let (psi, steps) = random_problem(&mut rng, n, k);
        let seq = sequence(&psi, &steps);
        let a = run_pipeline(&seq, AddSubMode::Abstract).unwrap();
        let p = run_pipeline(&seq, AddSubMode::Physical).unwrap();
        assert!(
            max_abs_diff_vec(&a.state.to_vector(), &p.state.to_vector()) <= 1e-9,
            "case {case}"
        );
        let circuit = p.circuit.unwrap();
        assert_eq!(circuit.qubit_count(), n + 2 * k);
        let replay = circuit.run_from_zero().unwrap();
        assert!(max_abs_diff_vec(&replay.to_vector(), &p.state.to_vector()) <= 1e-9);
    }
}
