use std::process::Command;

use serde_json::Value;
use tensor_hermite_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("tensor-hermite").chain(args.iter().copied()));
    let json = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&out.stdout).expect("valid JSON")
    };
    (out.code, json)
}

fn checks(report: &Value) -> Vec<&Value> {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r.get("check").is_some())
        .collect()
}

#[test]
fn basis_examples() {
    let (code, r) = invoke(&["basis", "--rank", "1", "--point", "1,0,0"]);
    assert_eq!(code, EXIT_PASS);
    let values: Vec<f64> = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values, vec![2.0, 0.0, 0.0]);

    let (_, r) = invoke(&["basis", "--rank", "0"]);
    assert_eq!(r["results"][0]["value"].as_f64(), Some(1.0));

    let (code, r) = invoke(&["basis", "--rank", "2", "--symbolic"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(
        r["results"][0]["closed_form"].as_str(),
        Some("4 z_i z_j − 2 δ_ij")
    );

    let (code, r) = invoke(&["basis", "--rank", "3", "--symbolic"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(
        r["results"][0]["closed_form"].as_str(),
        Some("8 z_i z_j z_k − 4 (z_i δ_jk + z_j δ_ik + z_k δ_ij)")
    );

    let (_, r) = invoke(&[
        "basis",
        "--rank",
        "2",
        "--point",
        "-1,0.5,0",
        "--convention",
        "probabilist",
    ]);
    assert_eq!(r["results"][0]["value"].as_f64(), Some(0.0));
}

#[test]
fn basis_limits() {
    assert_eq!(invoke(&["basis", "--rank", "7"]).0, EXIT_USAGE);
    assert_eq!(
        invoke(&["basis", "--rank", "5", "--symbolic"]).0,
        EXIT_USAGE
    );
    assert_eq!(invoke(&["basis", "--rank", "4", "--symbolic"]).0, EXIT_PASS);
    assert_eq!(
        invoke(&["basis", "--rank", "1", "--point", "1,2"]).0,
        EXIT_USAGE
    );
    assert_eq!(invoke(&["basis"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn window_examples() {
    let message = |ti: &str, tn: &str| {
        let (code, r) = invoke(&["window", "--ti", ti, "--tn", tn]);
        assert_eq!(code, EXIT_PASS);
        r["results"][0]["message"].as_str().unwrap().to_string()
    };
    assert_eq!(message("2000", "1000"), "(1000, 2000)");
    assert_eq!(message("1000", "1000"), "(500, 2000)");
    assert!(message("4000", "1000").starts_with("EMPTY: collision-term criterion violated"));
    assert_eq!(
        invoke(&["window", "--ti", "1000", "--tn", "-5"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        invoke(&["window", "--ti", "500", "--tn", "1000"]).0,
        EXIT_USAGE
    );
}

#[test]
fn verify_examples() {
    let (code, r) = invoke(&["verify", "ortho", "--max-rank", "3", "--quad-order", "12"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["pass"], Value::Bool(true));
    for c in checks(&r) {
        assert!(c["residual"].as_f64().unwrap() < 1e-8);
        assert_eq!(c["tolerance"].as_f64(), Some(1e-8));
    }

    let (code, r) = invoke(&["verify", "scale", "--alpha", "2.0"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(
        r["results"][0]["classification"].as_str(),
        Some("divergent")
    );
    assert_eq!(r["results"][0]["pass"], Value::Bool(true));

    let (code, r) = invoke(&["verify", "scale", "--alpha", "1.3", "--z0", "1,0,0"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"][0]["classification"].as_str(), Some("finite"));

    let (code, _) = invoke(&[
        "verify",
        "rotate",
        "--ms",
        "16",
        "--msp",
        "16",
        "--max-rank",
        "3",
    ]);
    assert_eq!(code, EXIT_PASS);

    let (code, r) = invoke(&[
        "verify",
        "translate",
        "--max-rank",
        "3",
        "--samples",
        "5",
        "--seed",
        "9",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["config"]["seed"].as_u64(), Some(9));
}

#[test]
fn verify_config_errors() {
    assert_eq!(
        invoke(&["verify", "ortho", "--max-rank", "4", "--quad-order", "9"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        invoke(&["verify", "ortho", "--max-rank", "5"]).0,
        EXIT_USAGE
    );
    assert_eq!(invoke(&["verify", "rotate", "--ms", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "scale", "--alpha", "-1"]).0, EXIT_USAGE);
    assert_eq!(
        invoke(&["verify", "translate", "--samples", "0"]).0,
        EXIT_USAGE
    );
}

#[test]
fn expand_reports() {
    let (code, r) = invoke(&[
        "expand",
        "--mass",
        "16",
        "--temperature",
        "1000",
        "--drift",
        "100,0,-50",
        "--max-rank",
        "3",
    ]);
    assert_eq!(code, EXIT_PASS);
    let names: Vec<&str> = checks(&r)
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["l2-admissible", "drift-series"]);
    let a0 = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|row| row["rank"].as_u64() == Some(0))
        .unwrap();
    assert!((a0["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    // A field more than twice as hot as the weight is not square integrable.
    let (code, r) = invoke(&[
        "expand",
        "--mass",
        "16",
        "--temperature",
        "1000",
        "--field-temperature",
        "2500",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(r["pass"], Value::Bool(false));
    let (code, _) = invoke(&[
        "expand",
        "--mass",
        "16",
        "--temperature",
        "1000",
        "--field-temperature",
        "1500",
    ]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn csv_output() {
    let out = run([
        "tensor-hermite",
        "window",
        "--ti",
        "2000",
        "--tn",
        "1000",
        "--format",
        "csv",
    ]);
    assert_eq!(out.code, EXIT_PASS);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    assert_eq!(&row[col("message")], "(1000, 2000)");
    assert_eq!(&row[col("seed")], "0");
    assert_eq!(row[col("lower")].parse::<f64>().unwrap(), 1000.0);

    let out = run([
        "tensor-hermite",
        "verify",
        "ortho",
        "--max-rank",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.stdout.lines().count(), 1 + 2 * 9);
}

#[test]
fn binary_exit_codes_and_determinism() {
    let exe = env!("CARGO_BIN_EXE_tensor-hermite");
    let status = |args: &[&str]| Command::new(exe).args(args).output().unwrap();
    let a = status(&["verify", "rotate", "--seed", "5", "--samples", "4"]);
    let b = status(&["verify", "rotate", "--seed", "5", "--samples", "4"]);
    let c = status(&["verify", "rotate", "--seed", "6", "--samples", "4"]);
    assert_eq!(a.status.code(), Some(EXIT_PASS));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let bad = status(&["basis", "--rank", "9"]);
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("exceeds the maximum"));
    assert_eq!(status(&["--help"]).status.code(), Some(EXIT_PASS));
}
