use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qaffine_cli::spec::ProblemSpec;
use qaffine_core::addsub::AddSubMode;
use qaffine_core::linalg::ComplexVector;
use qaffine_core::pipeline::{AffineSequence, AffineStep, Translation};
use qaffine_core::random;
use tempfile::TempDir;

fn qaffine(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaffine"))
        .args(args)
        .current_dir(dir)
        .env_remove("QAFFINE_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn rows(path: &Path) -> Vec<(usize, f64, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (
                rec[0].parse().unwrap(),
                rec[1].parse().unwrap(),
                rec[2].parse().unwrap(),
            )
        })
        .collect()
}

/// Row-wise comparison; the Hadamard factors leave a few ulps behind.
fn close(got: &[(usize, f64, f64)], want: &[(usize, f64, f64)]) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert_eq!(g.0, w.0);
        assert!((g.1 - w.1).abs() < 1e-14 && (g.2 - w.2).abs() < 1e-14, "{got:?}");
    }
}

const IDENTITY: &str = r#"{"version":1,"n":1,"psi":[[1,0],[0,0]],
  "steps":[{"A":[[[1,0],[0,0]],[[0,0],[1,0]]],"B":"zero"}]}"#;

const SHIFT: &str = r#"{"version":1,"n":1,"psi":[[1,0],[0,0]],
  "steps":[{"A":[[[1,0],[0,0]],[[0,0],[1,0]]],"B":[[1,0],[0,0]]}]}"#;

#[test]
fn identity_spec_returns_input() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "spec.json", IDENTITY);
    let out = qaffine(&["run", &spec], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    close(
        &rows(&tmp.path().join("extracted.csv")),
        &[(0, 1.0, 0.0), (1, 0.0, 0.0)],
    );
    let bundle: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(bundle["scale"], 2.0);
    assert_eq!(bundle["metadata"]["k"], 1);
}

#[test]
fn translation_is_added() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "spec.json", SHIFT);
    for mode in ["abstract", "physical"] {
        let dir = tmp.path().join(mode);
        let out = qaffine(
            &["run", &spec, "--mode", mode, "--out-dir", dir.to_str().unwrap()],
            tmp.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        close(&rows(&dir.join("extracted.csv")), &[(0, 2.0, 0.0), (1, 0.0, 0.0)]);
    }
}

fn random_spec(seed: u64, n: usize, k: usize) -> String {
    let mut rng = random::rng(seed);
    let d = 1 << n;
    let steps = (0..k)
        .map(|_| AffineStep {
            a: random::contraction(&mut rng, d),
            b: Translation::Vector(random::unit_vector(&mut rng, d)),
        })
        .collect();
    let seq = AffineSequence::new(random::unit_vector(&mut rng, d), steps).unwrap();
    ProblemSpec::from_sequence(&seq, AddSubMode::Abstract).to_json()
}

#[test]
fn verify_reports_small_deviation() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "spec.json", &random_spec(11, 2, 3));
    let out = qaffine(&["run", &spec, "--verify", "--raw"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("max deviation"))
        .expect("deviation line");
    let d: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(d <= 1e-9, "{d}");
    let bundle: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(bundle["raw_amplitudes"].as_array().unwrap().len(), 1 << (2 + 6));
    assert!(bundle["max_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        ("bad.json", r#"{"version":1,"n":1}"#.to_string(), 2, "schema"),
        (
            "ver.json",
            IDENTITY.replace("\"version\":1", "\"version\":7"),
            2,
            "schema",
        ),
        (
            "unnorm.json",
            IDENTITY.replace("\"psi\":[[1,0],[0,0]]", "\"psi\":[[1,0],[1,0]]"),
            3,
            "normalization",
        ),
        (
            "big.json",
            IDENTITY.replace("[[[1,0],[0,0]],[[0,0],[1,0]]]", "[[[3,0],[0,0]],[[0,0],[1,0]]]"),
            3,
            "contraction",
        ),
    ];
    for (name, text, code, kind) in cases {
        let spec = write(tmp.path(), name, &text);
        let out = qaffine(&["run", &spec], tmp.path());
        assert_eq!(out.status.code(), Some(code), "{name}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(kind), "{name}: {stderr}");
    }
    let missing = qaffine(&["run", "does-not-exist.json"], tmp.path());
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn capacity_exit_code() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "wide.json", &random_spec(3, 4, 1));
    let out = qaffine(&["gates", "compare", &spec], tmp.path());
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
}

#[test]
fn verification_failure_exit_code() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "spec.json", &random_spec(4, 2, 2));
    let out = qaffine(&["run", &spec, "--verify", "--tolerance", "0"], tmp.path());
    // exact agreement is possible but not for this instance
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn baseline_matches_run() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "spec.json", &random_spec(8, 2, 1));
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(qaffine(&["run", &spec, "--out-dir", a.to_str().unwrap()], tmp.path())
        .status
        .success());
    let out = qaffine(
        &["baseline", &spec, "--verify", "--out-dir", b.to_str().unwrap()],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for (x, y) in rows(&a.join("extracted.csv"))
        .iter()
        .zip(rows(&b.join("extracted.csv")))
    {
        assert!((x.1 - y.1).abs() < 1e-9 && (x.2 - y.2).abs() < 1e-9);
    }
    let two = write(tmp.path(), "two.json", &random_spec(8, 1, 2));
    assert_eq!(qaffine(&["baseline", &two], tmp.path()).status.code(), Some(3));
}

#[test]
fn gates_compare_writes_counts() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "spec.json", &random_spec(21, 2, 1));
    let out = qaffine(&["gates", "compare", &spec], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = fs::read_to_string(tmp.path().join("gatecounts.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["qubits"], 4);
    assert_eq!(v["sequential"]["dilation_dim"], 8);
    assert_eq!(v["augmented"]["dilation_dim"], 16);
    assert!(v["agreement"].as_f64().unwrap() <= 1e-8);
    assert!(v["sequential"]["total"].as_u64().unwrap() > 0);
    assert!(qaffine(&["gates", "compare", &spec], tmp.path()).status.success());
    assert_eq!(fs::read_to_string(tmp.path().join("gatecounts.json")).unwrap(), first);
}

#[test]
fn portfolio_demo_is_seeded() {
    let tmp = TempDir::new().unwrap();
    let run = |seed: &str| {
        let out = qaffine(&["demo", "portfolio", "--shots", "20000", "--seed", seed], tmp.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        fs::read_to_string(tmp.path().join("portfolio.csv")).unwrap()
    };
    let a = run("5");
    assert_eq!(a, run("5"));
    assert_ne!(a, run("6"));
    let mut r = csv::Reader::from_reader(a.as_bytes());
    assert_eq!(
        r.headers().unwrap(),
        vec!["bits", "amplitude", "probability", "empirical_frequency"]
    );
    let recs: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 4);
    let total: f64 = recs.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn seed_from_environment() {
    let tmp = TempDir::new().unwrap();
    let run = |env: &str, extra: &[&str]| {
        let mut args = vec!["demo", "portfolio", "--shots", "5000"];
        args.extend_from_slice(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_qaffine"))
            .args(&args)
            .current_dir(tmp.path())
            .env("QAFFINE_SEED", env)
            .output()
            .unwrap();
        assert!(out.status.success());
        fs::read_to_string(tmp.path().join("portfolio.csv")).unwrap()
    };
    assert_eq!(run("9", &[]), run("1", &["--seed", "9"]));
}

#[test]
fn signal_demo_writes_overlay() {
    let tmp = TempDir::new().unwrap();
    let out = qaffine(
        &[
            "demo",
            "signal",
            "--samples",
            "16",
            "--a",
            "-0.5",
            "--b",
            "0.2",
            "--seed",
            "3",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(tmp.path().join("signal.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["t", "input", "quantum_out", "classical_out"]);
    let recs: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 16);
    for rec in &recs {
        let q: f64 = rec[2].parse().unwrap();
        let c: f64 = rec[3].parse().unwrap();
        assert!((q - c).abs() < 1e-8);
    }
    let bad = qaffine(&["demo", "signal", "--samples", "12"], tmp.path());
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn spec_round_trip_through_file() {
    let text = random_spec(30, 1, 2);
    let spec = ProblemSpec::parse(&text).unwrap();
    let again = ProblemSpec::parse(&spec.to_json()).unwrap();
    let (a, b) = (spec.to_sequence().unwrap(), again.to_sequence().unwrap());
    assert_eq!(a.psi0(), b.psi0());
    let zero = ComplexVector::zeros(2);
    for (x, y) in a.steps().iter().zip(b.steps()) {
        assert_eq!(x.a, y.a);
        assert_eq!(x.b.to_dense(2) - y.b.to_dense(2), zero);
    }
}
