//! Library half of the `qaffine` binary: input parsing, subcommands and
//! artifact writers.
//!
//! Exit codes: 0 success, 1 I/O, 2 schema/usage, 3 engine precondition,
//! 4 capacity, 5 verification tolerance exceeded.

pub mod output;
pub mod spec;

use std::fs;
use std::path::{Path, PathBuf};

use qaffine_core::addsub::AddSubMode;
use qaffine_core::apps::{
    index_to_bits, portfolio_circuit, portfolio_closed_form, portfolio_estimate, signal_filter, two_tone,
    PortfolioSpec, SignalSpec,
};
use qaffine_core::baseline::{build_augmented, run_augmented};
use qaffine_core::linalg::{max_abs_diff_vec, ComplexVector};
use qaffine_core::pipeline::{classical_affine_compose, extract_result, run_pipeline, Translation};
use qaffine_core::random;
use qaffine_core::synthesis::{compare_methods, GateCountReport};
use serde::Serialize;
use thiserror::Error;

use output::{fmt_f64, pairs, write_json, write_table_csv, write_vector_csv, Metadata, ResultBundle};
use spec::ProblemSpec;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Engine(#[from] qaffine_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("verification: max deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    Verification { deviation: f64, tolerance: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Engine(qaffine_core::Error::Capacity(_)) => 4,
            CliError::Engine(_) => 3,
            CliError::Verification { .. } => 5,
        }
    }
}

fn read_spec(path: &Path) -> Result<ProblemSpec, CliError> {
    let text = fs::read_to_string(path)?;
    ProblemSpec::parse(&text)
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn check_tolerance(deviation: f64, tolerance: f64) -> Result<(), CliError> {
    if deviation > tolerance {
        Err(CliError::Verification { deviation, tolerance })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub mode: Option<AddSubMode>,
    pub out_dir: PathBuf,
    pub verify: bool,
    pub tolerance: f64,
    pub raw: bool,
    pub seed: Option<u64>,
}

/// Sequential pipeline: writes `extracted.csv` and `result.json`.
pub fn cmd_run(spec_path: &Path, opts: &RunOptions) -> Result<(), CliError> {
    let spec = read_spec(spec_path)?;
    let seq = spec.to_sequence()?;
    let mode = opts.mode.unwrap_or(spec.mode);
    let res = run_pipeline(&seq, mode)?;
    let extracted = extract_result(&res);
    let max_deviation = opts
        .verify
        .then(|| max_abs_diff_vec(&extracted, &classical_affine_compose(&seq)));

    prepare_dir(&opts.out_dir)?;
    write_vector_csv(&opts.out_dir.join("extracted.csv"), &extracted)?;
    let bundle = ResultBundle {
        extracted: pairs(&extracted),
        raw_amplitudes: opts.raw.then(|| pairs(&res.state.to_vector())),
        scale: res.scale as f64,
        max_deviation,
        metadata: Metadata {
            k: seq.k(),
            n: seq.n(),
            mode: mode.to_string(),
            method: "sequential",
            seed: opts.seed,
            tool_version: TOOL_VERSION,
        },
    };
    write_json(&opts.out_dir.join("result.json"), &bundle)?;
    println!(
        "ran {} step(s) on n = {} in {mode} mode using {} qubits",
        seq.k(),
        seq.n(),
        res.state.num_qubits()
    );
    if let Some(d) = max_deviation {
        println!("max deviation vs classical oracle: {d:e}");
        check_tolerance(d, opts.tolerance)?;
    }
    Ok(())
}

/// Augmented single-dilation comparator for a one-step spec.
pub fn cmd_baseline(spec_path: &Path, opts: &RunOptions) -> Result<(), CliError> {
    let spec = read_spec(spec_path)?;
    let seq = spec.to_sequence()?;
    if seq.k() != 1 {
        return Err(qaffine_core::Error::Precondition(format!(
            "the augmented method handles exactly one step, the spec has {}",
            seq.k()
        ))
        .into());
    }
    let step = &seq.steps()[0];
    let aug = build_augmented(&step.a, &step.b.to_dense(seq.dim()), seq.psi0())?;
    let extracted = run_augmented(&aug)?;
    let max_deviation = opts
        .verify
        .then(|| max_abs_diff_vec(&extracted, &classical_affine_compose(&seq)));

    prepare_dir(&opts.out_dir)?;
    write_vector_csv(&opts.out_dir.join("extracted.csv"), &extracted)?;
    let bundle = ResultBundle {
        extracted: pairs(&extracted),
        raw_amplitudes: None,
        scale: aug.descale(),
        max_deviation,
        metadata: Metadata {
            k: 1,
            n: seq.n(),
            mode: "augmented".into(),
            method: "augmented",
            seed: opts.seed,
            tool_version: TOOL_VERSION,
        },
    };
    write_json(&opts.out_dir.join("result.json"), &bundle)?;
    println!(
        "augmented dilation {0}x{0}, alpha = {1}",
        aug.enc.unitary.nrows(),
        aug.enc.alpha
    );
    if let Some(d) = max_deviation {
        println!("max deviation vs classical oracle: {d:e}");
        check_tolerance(d, opts.tolerance)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct GateCountFile {
    pub n: usize,
    pub qubits: usize,
    pub sequential: CountEntry,
    pub augmented: CountEntry,
    pub agreement: f64,
    pub tool_version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountEntry {
    pub dilation_dim: usize,
    pub single_qubit: usize,
    pub multi_qubit: usize,
    pub total: usize,
    pub reconstruction_error: f64,
}

fn entry(r: GateCountReport, dilation_dim: usize, reconstruction_error: f64) -> CountEntry {
    CountEntry {
        dilation_dim,
        single_qubit: r.single_qubit,
        multi_qubit: r.multi_qubit,
        total: r.total,
        reconstruction_error,
    }
}

/// Lower both single-step circuits to CNOT + single-qubit gates and count.
pub fn cmd_gates_compare(spec_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let spec = read_spec(spec_path)?;
    let seq = spec.to_sequence()?;
    if seq.k() != 1 {
        return Err(qaffine_core::Error::Precondition(format!(
            "gate comparison needs exactly one step, the spec has {}",
            seq.k()
        ))
        .into());
    }
    let step = &seq.steps()[0];
    let b = match &step.b {
        Translation::Zero => ComplexVector::zeros(seq.dim()),
        Translation::Vector(v) => v.clone(),
    };
    let cmp = compare_methods(&step.a, &b, seq.psi0())?;
    let file = GateCountFile {
        n: seq.n(),
        qubits: cmp.qubits,
        sequential: entry(cmp.ours, cmp.ours_dilation_dim, cmp.ours_reconstruction_error),
        augmented: entry(
            cmp.augmented,
            cmp.augmented_dilation_dim,
            cmp.augmented_reconstruction_error,
        ),
        agreement: cmp.agreement,
        tool_version: TOOL_VERSION,
    };
    prepare_dir(out_dir)?;
    write_json(&out_dir.join("gatecounts.json"), &file)?;
    println!(
        "{:<12} {:>8} {:>7} {:>7} {:>7}",
        "method", "dilation", "single", "cnot", "total"
    );
    for (name, e) in [("sequential", &file.sequential), ("augmented", &file.augmented)] {
        println!(
            "{:<12} {:>8} {:>7} {:>7} {:>7}",
            name,
            format!("{0}x{0}", e.dilation_dim),
            e.single_qubit,
            e.multi_qubit,
            e.total
        );
    }
    println!("result agreement: {:e}", cmp.agreement);
    Ok(())
}

/// The worked four-asset example.
pub const DEFAULT_ASSETS: [f64; 4] = [0.8, 0.6, 0.6, 0.8];

pub fn cmd_demo_portfolio(assets: &[f64], shots: u64, seed: u64, out_dir: &Path) -> Result<(), CliError> {
    let p = PortfolioSpec::new(assets.to_vec())?;
    let state = portfolio_circuit(&p, AddSubMode::Abstract)?;
    let freq = portfolio_estimate(&p, shots, seed)?;
    let m = p.m();
    let mut rows = Vec::with_capacity(state.dim());
    println!(
        "{:<8} {:>12} {:>12} {:>12} {:>12}",
        "bits", "amplitude", "unit-weight", "probability", "frequency"
    );
    for (idx, z) in state.amplitudes().iter().enumerate() {
        let bits = index_to_bits(idx, m);
        let label: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let closed = portfolio_closed_form(&p, &bits)?;
        let f = freq.get(&idx).copied().unwrap_or(0.0);
        println!(
            "{label:<8} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            z.re,
            closed.unit_weight,
            z.norm_sqr(),
            f
        );
        rows.push(vec![label, fmt_f64(z.re), fmt_f64(z.norm_sqr()), fmt_f64(f)]);
    }
    if !p.is_sorted() {
        println!("note: assets are not sorted in non-increasing order");
    }
    prepare_dir(out_dir)?;
    write_table_csv(
        &out_dir.join("portfolio.csv"),
        &["bits", "amplitude", "probability", "empirical_frequency"],
        &rows,
    )?;
    Ok(())
}

/// Random two-tone signal, filtered in the frequency domain.
pub fn cmd_demo_signal(len: usize, a: f64, b: f64, seed: u64, out_dir: &Path) -> Result<(), CliError> {
    if !len.is_power_of_two() || len < 4 {
        return Err(qaffine_core::Error::Shape(format!("sample count {len} must be a power of two ≥ 4")).into());
    }
    let mut rng = random::rng(seed);
    let top = (len / 2) as f64;
    let tones = [
        (
            random::uniform(&mut rng, 0.5, 1.0),
            random::uniform(&mut rng, 1.0, top).floor(),
        ),
        (
            random::uniform(&mut rng, 0.1, 0.5),
            random::uniform(&mut rng, 1.0, top).floor(),
        ),
    ];
    let samples = two_tone(len, tones);
    let out = signal_filter(&SignalSpec::new(samples.clone(), a, b))?;
    let deviation = max_abs_diff_vec(&out.quantum, &out.classical);
    let rows: Vec<Vec<String>> = (0..len)
        .map(|i| {
            vec![
                fmt_f64(i as f64 / len as f64),
                fmt_f64(samples[i]),
                fmt_f64(out.quantum[i].re),
                fmt_f64(out.classical[i].re),
            ]
        })
        .collect();
    prepare_dir(out_dir)?;
    write_table_csv(
        &out_dir.join("signal.csv"),
        &["t", "input", "quantum_out", "classical_out"],
        &rows,
    )?;
    println!(
        "tones: {:.3}·sin(2π·{}t) + {:.3}·sin(2π·{}t); a = {a}, b = {b}",
        tones[0].0, tones[0].1, tones[1].0, tones[1].1
    );
    println!("max |quantum − classical|: {deviation:e}");
    Ok(())
}
