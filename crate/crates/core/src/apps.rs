//! Two worked applications of the add/sub pipeline.
//!
//! * Portfolio returns: groups of assets are added and subtracted in turn,
//!   one qubit per group, so every basis state carries one signed
//!   combination of the assets.
//! * Frequency-domain filtering: QFT, one affine step `a·X + b·u`, inverse
//!   QFT.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::addsub::{hadamard_addsub_inplace, inplace_stage_gates, preparation_gate, AddSubMode};
use crate::circuit::{hadamard, Gate, GateList};
use crate::error::{Error, Result};
use crate::linalg::{c, c64, identity, real_matrix, real_vector, vector_norm, ComplexVector};
use crate::pipeline::{extract_result, run_pipeline, AffineSequence, AffineStep};
use crate::simulator::{qubits_for_dim, QuantumState, INPUT_NORM_TOL, MAX_QUBITS};

/// Largest number of levels (`m`) accepted for a portfolio.
pub const MAX_PORTFOLIO_LEVELS: usize = 10;
pub const BLOCK_NORM_TOL: f64 = 1e-8;

/// `2^m` asset values split into `Ψ = [a₁, a₂]` and groups `B_r` holding the
/// next `2^r` assets, `r = 1..m`. Every group must be unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioSpec {
    assets: Vec<f64>,
    m: usize,
}

impl PortfolioSpec {
    pub fn new(assets: Vec<f64>) -> Result<Self> {
        let m = qubits_for_dim(assets.len())
            .filter(|&m| m >= 1)
            .ok_or_else(|| Error::Shape(format!("{} assets is not a power of two ≥ 2", assets.len())))?;
        if m > MAX_PORTFOLIO_LEVELS {
            return Err(Error::Capacity(format!(
                "{} assets needs m = {m} > {MAX_PORTFOLIO_LEVELS}",
                assets.len()
            )));
        }
        if assets.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("asset values must be finite".into()));
        }
        let spec = Self { assets, m };
        for r in 0..m {
            let g = spec.group(r);
            let norm = g.iter().map(|a| a * a).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > BLOCK_NORM_TOL {
                return Err(Error::Normalization {
                    norm,
                    tol: BLOCK_NORM_TOL,
                });
            }
        }
        Ok(spec)
    }

    pub fn assets(&self) -> &[f64] {
        &self.assets
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Group `r`: `Ψ` for `r = 0`, otherwise `B_r`.
    pub fn group(&self, r: usize) -> &[f64] {
        if r == 0 {
            &self.assets[..2]
        } else {
            &self.assets[1 << r..2 << r]
        }
    }

    /// Whether the assets are listed in non-increasing order. Not required:
    /// the construction is valid for any block-normalized list.
    pub fn is_sorted(&self) -> bool {
        self.assets.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Load `Ψ` on one qubit and add/subtract each `B_r` in turn. Qubit `r` is
/// the ancilla of stage `r` (1 = difference branch); qubit 0 indexes `Ψ`.
pub fn portfolio_circuit(p: &PortfolioSpec, mode: AddSubMode) -> Result<QuantumState> {
    let psi = real_vector(p.group(0));
    let mut state = QuantumState::from_amplitudes(&psi)?;
    let mut witness = match mode {
        AddSubMode::Physical => {
            let mut g = GateList::new(1);
            g.push(preparation_gate(&psi)?)?;
            Some(g)
        }
        AddSubMode::Abstract => None,
    };
    for r in 1..p.m() {
        let b = real_vector(p.group(r));
        hadamard_addsub_inplace(&mut state, &b, mode, witness.as_ref())?;
        if let Some(g) = witness.as_mut() {
            let stage = inplace_stage_gates(g, &b)?;
            g.grow_to(r + 1);
            g.extend(&stage)?;
        }
    }
    Ok(state)
}

/// Basis index of a bit tuple `(i₀, …, i_{m-1})`: bit `i_r` is qubit `r`.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(r, _)| 1usize << r)
        .sum()
}

pub fn index_to_bits(index: usize, m: usize) -> Vec<bool> {
    (0..m).map(|r| index >> r & 1 == 1).collect()
}

/// Closed form of one output amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioAmplitude {
    /// What iterated `(φ ± b)/2` produces:
    /// `Ψ[i₀]/2^(m-1) + Σ_r (−1)^{i_r} B_r[Σ_{s<r} i_s 2^s] / 2^(m-r)`.
    pub recursive: f64,
    /// The unit-weight sum
    /// `(−1)^{i₀} a_{1+i₀} + Σ_r (−1)^{i_r} a_{2^r+1+Σ_s 2^{r-1-s} i_s}`
    /// (1-based assets), divided by `2^(m-1)`. Agrees with `recursive` in
    /// absolute value for `m = 2` only.
    pub unit_weight: f64,
}

pub fn portfolio_closed_form(p: &PortfolioSpec, bits: &[bool]) -> Result<PortfolioAmplitude> {
    let m = p.m();
    if bits.len() != m {
        return Err(Error::Shape(format!("expected {m} bits, got {}", bits.len())));
    }
    let sign = |b: bool| if b { -1.0 } else { 1.0 };
    let i = |s: usize| usize::from(bits[s]);
    let top = 0.5f64.powi(m as i32 - 1);

    let mut recursive = p.group(0)[i(0)] * top;
    let mut unit = sign(bits[0]) * p.assets()[i(0)];
    for (r, &bit) in bits.iter().enumerate().skip(1) {
        let idx: usize = (0..r).map(|s| i(s) << s).sum();
        recursive += sign(bit) * p.group(r)[idx] * 0.5f64.powi((m - r) as i32);
        let offset: usize = (0..r).map(|s| i(s) << (r - 1 - s)).sum();
        unit += sign(bit) * p.assets()[(1 << r) + offset];
    }
    Ok(PortfolioAmplitude {
        recursive,
        unit_weight: unit * top,
    })
}

/// Empirical outcome frequencies from `shots` measurements, keyed by basis
/// index (see [`index_to_bits`]).
pub fn portfolio_estimate(p: &PortfolioSpec, shots: u64, seed: u64) -> Result<BTreeMap<usize, f64>> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be at least 1".into()));
    }
    let state = portfolio_circuit(p, AddSubMode::Abstract)?;
    let hist = state.sample(shots, seed);
    Ok(hist.counts.keys().map(|&k| (k, hist.frequency(k))).collect())
}

/// Gates of the QFT on `targets` (first target most significant), mapping
/// `|x⟩` to `Σ_k e^{2πi·xk/M} |k⟩ / √M` in natural order.
pub fn qft_circuit(targets: &[usize], qubit_count: usize) -> Result<GateList> {
    if targets.is_empty() {
        return Err(Error::Index("the QFT needs at least one target".into()));
    }
    let q = targets.len();
    // local bit l (weight 2^l) lives on targets[q - 1 - l]
    let wire = |l: usize| targets[q - 1 - l];
    let mut g = GateList::new(qubit_count);
    for l in (0..q).rev() {
        g.push(Gate::Single {
            matrix: hadamard(),
            target: wire(l),
        })?;
        for s in (0..l).rev() {
            let phase = 2.0 * PI / f64::from(1u32 << (l - s + 1));
            let mut rz = identity(2);
            rz[(1, 1)] = c64::from_polar(1.0, phase);
            g.push(Gate::Block {
                matrix: rz,
                targets: vec![wire(l)],
                controls: vec![wire(s)],
                control_values: vec![true],
            })?;
        }
    }
    let swap = real_matrix(4, 4, &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.]);
    for l in 0..q / 2 {
        g.push(Gate::block(swap.clone(), vec![wire(l), wire(q - 1 - l)]))?;
    }
    Ok(g)
}

/// Apply the QFT (or its inverse, the conjugate transform) to `targets`.
pub fn qft(state: &QuantumState, targets: &[usize], inverse: bool) -> Result<QuantumState> {
    let circuit = qft_circuit(targets, state.num_qubits())?;
    let circuit = if inverse { circuit.inverse() } else { circuit };
    let mut out = state.clone();
    circuit.apply_to(&mut out)?;
    Ok(out)
}

/// Samples to filter in the frequency domain by `X ↦ a·X + b·u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub samples: Vec<f64>,
    pub scale_a: f64,
    pub bias_b: f64,
    /// Unit-norm direction `u` of the bias; uniform when `None`.
    pub bias_vector: Option<ComplexVector>,
}

impl SignalSpec {
    pub fn new(samples: Vec<f64>, scale_a: f64, bias_b: f64) -> Self {
        Self {
            samples,
            scale_a,
            bias_b,
            bias_vector: None,
        }
    }

    fn bias_direction(&self) -> Result<ComplexVector> {
        let len = self.samples.len();
        match &self.bias_vector {
            None => Ok(ComplexVector::from_element(len, c(1.0 / (len as f64).sqrt(), 0.0))),
            Some(u) => {
                if u.len() != len {
                    return Err(Error::Shape(format!(
                        "bias vector has length {} but the signal has {len}",
                        u.len()
                    )));
                }
                let norm = vector_norm(u);
                if (norm - 1.0).abs() > INPUT_NORM_TOL {
                    return Err(Error::Normalization {
                        norm,
                        tol: INPUT_NORM_TOL,
                    });
                }
                Ok(u.clone())
            }
        }
    }
}

/// Filter output of both paths, in the units of the input samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalOutput {
    pub quantum: ComplexVector,
    pub classical: ComplexVector,
}

/// Unitary DFT with the `e^{−2πi·jk/M}` sign.
pub fn dft(x: &ComplexVector) -> ComplexVector {
    dft_signed(x, -1.0)
}

/// Inverse of [`dft`].
pub fn idft(x: &ComplexVector) -> ComplexVector {
    dft_signed(x, 1.0)
}

fn dft_signed(x: &ComplexVector, sign: f64) -> ComplexVector {
    let len = x.len();
    let norm = 1.0 / (len as f64).sqrt();
    ComplexVector::from_fn(len, |k, _| {
        x.iter()
            .enumerate()
            .map(|(j, z)| z * c64::from_polar(1.0, sign * 2.0 * PI * ((j * k) % len) as f64 / len as f64))
            .sum::<c64>()
            * norm
    })
}

/// Normalize the samples, move to the frequency domain, apply
/// `X̃ = a·X + b·u`, and transform back; the quantum path does this with
/// QFTs around a one-step pipeline, the classical path with dense DFTs.
///
/// The pipeline needs `‖B‖ ≤ 1`, so for `|b| > 1` both coefficients are
/// divided by `|b|` and the result multiplied back.
pub fn signal_filter(spec: &SignalSpec) -> Result<SignalOutput> {
    let len = spec.samples.len();
    let n = qubits_for_dim(len)
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Shape(format!("signal length {len} is not a power of two ≥ 2")))?;
    if n + 2 > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "signal of length {len} needs {} qubits",
            n + 2
        )));
    }
    if !spec.scale_a.is_finite() || !spec.bias_b.is_finite() || spec.samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("signal parameters must be finite".into()));
    }
    if spec.scale_a.abs() > 1.0 {
        return Err(Error::Contraction {
            step: 1,
            norm: spec.scale_a.abs(),
        });
    }
    let x = real_vector(&spec.samples);
    let amplitude = vector_norm(&x);
    if amplitude == 0.0 {
        return Err(Error::InvalidInput("cannot encode an all-zero signal".into()));
    }
    let x_hat = &x / c(amplitude, 0.0);
    let u = spec.bias_direction()?;

    let classical_freq = dft(&x_hat) * c(spec.scale_a, 0.0) + &u * c(spec.bias_b, 0.0);
    let classical = idft(&classical_freq) * c(amplitude, 0.0);

    let shrink = spec.bias_b.abs().max(1.0);
    let register: Vec<usize> = (0..n).rev().collect();
    let freq = qft(&QuantumState::from_amplitudes(&x_hat)?, &register, true)?;
    let step = AffineStep::with_partial_translation(
        identity(len) * c(spec.scale_a / shrink, 0.0),
        &u * c(spec.bias_b / shrink, 0.0),
    )?;
    let seq = AffineSequence::new(freq.to_vector(), vec![step])?;
    let mut res = run_pipeline(&seq, AddSubMode::Abstract)?;
    res.state = qft(&res.state, &register, false)?;
    let quantum = extract_result(&res) * c(shrink * amplitude, 0.0);

    Ok(SignalOutput { quantum, classical })
}

/// `a₁ sin(2π f₁ t) + a₂ sin(2π f₂ t)` on `len` points of `t ∈ [0, 1)`.
pub fn two_tone(len: usize, tones: [(f64, f64); 2]) -> Vec<f64> {
    (0..len)
        .map(|i| {
            let t = i as f64 / len as f64;
            tones.iter().map(|(a, f)| a * (2.0 * PI * f * t).sin()).sum()
        })
        .collect()
}
