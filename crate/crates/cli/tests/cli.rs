use std::process::{Command, Output};

use num_complex::Complex64 as C64;
use serde_json::Value;
use zmeasure::kernels::{gamma_kernel, Form};

fn zmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zmlab")).args(args).output().expect("zmlab runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn kernel_single_row() {
    let o = zmlab(&["kernel", "--family", "gamma_first", "--z", "0.3", "--zp", "0.6", "--x", "0.5", "--y", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["x", "y", "value"]);
    assert_eq!(rows.len(), 1);
    let want = gamma_kernel(Form::First, 0.5, 1.5, C64::new(0.3, 0.0), C64::new(0.6, 0.0)).unwrap();
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), want);
}

#[test]
fn correlation_side_by_side() {
    let o = zmlab(&[
        "correlation",
        "--family",
        "zxi",
        "--z",
        "0.3",
        "--zp",
        "0.6",
        "--xi",
        "0.35",
        "--points",
        "0.5,1.5",
        "--embedding",
        "underline",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["points", "oracle", "tail_bound", "determinant", "abs_diff"]);
    let v: Vec<f64> = rows[0][1..].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(v[3], (v[2] - v[0]).abs());
    assert!(v[3] < 1e-6 * v[0]);
}

#[test]
fn identity_suites() {
    for suite in ["thm42", "thm44", "prop45", "prop51", "prop66"] {
        let o = zmlab(&["identity", "--suite", suite, "--window", "30"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
    let o = zmlab(&["identity", "--suite", "thm42", "--tol", "1e-17"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pass=false"));
}

#[test]
fn invalid_parameters_exit_2() {
    let o = zmlab(&["kernel", "--family", "gamma_first", "--z", "0.3", "--x", "0.5", "--y", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--zp"));
    let o = zmlab(&["kernel", "--family", "no_such", "--z", "0.3", "--zp", "0.6", "--x", "0.5", "--y", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zmlab(&["sample", "--family", "gamma_first", "--z", "0.3", "--zp", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zmlab(&[
        "scan",
        "--source",
        "hypergeom_first",
        "--target",
        "tail_first",
        "--z",
        "0.3",
        "--zp",
        "0.6",
        "--xi",
        "0.5",
        "--coupling",
        "coupled_xi_s0:0.8",
        "--ladder",
        "2",
        "--probes",
        "0:0.7",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_failures_exit_3() {
    let o = zmlab(&[
        "correlation",
        "--family",
        "zxi",
        "--z",
        "0.3",
        "--zp",
        "0.6",
        "--xi",
        "0.35",
        "--points",
        "0.5",
        "--size",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = zmlab(&[
        "kernel", "--family", "zw", "--z", "0.3", "--zp", "0.6", "--w", "0.2", "--wp", "0.5", "--n", "80", "--x",
        "-40.5", "--y", "1.5",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn conjugate_pairs_are_completed() {
    let o = zmlab(&[
        "kernel",
        "--family",
        "hypergeom_first",
        "--z",
        "0.4+0.7i",
        "--xi",
        "0.35",
        "--x",
        "0.5",
        "--y",
        "-1.5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inputs"]["zp"], "0.4-0.7i");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn json_mirrors_csv() {
    let args = ["ortho", "--family", "zw", "--z", "1.5+0.5i", "--w", "1.5+0.3i", "--n", "4"];
    let c = zmlab(&args);
    let j = zmlab(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(c.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&c));
    let v: Value = serde_json::from_str(&stdout(&j)).unwrap();
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(jrows.len(), rows.len());
    for (r, jr) in rows.iter().zip(jrows) {
        assert_eq!(jr[&header[1]].as_f64().unwrap(), r[1].parse::<f64>().unwrap());
        assert_eq!(jr[&header[0]], r[0].as_str());
    }
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["pass"] == true));
}

#[test]
fn sampling_is_deterministic() {
    let run = |seed: &str| {
        zmlab(&[
            "sample",
            "--family",
            "gamma_first",
            "--z",
            "0.3",
            "--zp",
            "0.6",
            "--window",
            "12",
            "--count",
            "50",
            "--seed",
            seed,
        ])
    };
    let (a, b, c) = (run("9"), run("9"), run("10"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let (_, rows) = csv_rows(&stdout(&a));
    assert_eq!(rows.len(), 50);
    let o = zmlab(&[
        "sample",
        "--family",
        "gamma_first",
        "--z",
        "0.3",
        "--zp",
        "0.6",
        "--count",
        "4000",
        "--seed",
        "3",
        "--summary",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("zmlab-out-{}.csv", std::process::id()));
    let args = ["weight", "--family", "plancherel", "--theta", "1.5", "--lambda", "2,1", "--lambda", ""];
    let o = zmlab(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, stdout(&zmlab(&args)));
    let (_, rows) = csv_rows(&written);
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v - 1.5f64.powi(3) * (-1.5f64).exp() * 4.0 / 36.0).abs() < 1e-15);
}

#[test]
fn default_scans_pass() {
    let o = zmlab(&["scan"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains(": exploratory pass=true"));
    assert!(!text.contains("pass=false"));
    for kind in [
        vec![
            "scan",
            "--kind",
            "density",
            "--family",
            "gamma_first",
            "--z",
            "0.3",
            "--zp",
            "0.6",
            "--ladder",
            "10.5,20.5,40.5",
        ],
        vec![
            "scan", "--kind", "cross", "--z", "0.3", "--zp", "0.6", "--w", "0.2", "--wp", "0.5", "--ladder", "20,40,80",
        ],
        vec!["scan", "--kind", "plancherel", "--theta", "1.5", "--ladder", "1000,10000"],
    ] {
        assert_eq!(zmlab(&kind).status.code(), Some(0), "{kind:?}");
    }
}

#[test]
fn projection_scans() {
    let o = zmlab(&[
        "scan",
        "--kind",
        "projection",
        "--family",
        "gamma_first",
        "--z",
        "0.2",
        "--zp",
        "0.1",
        "--radius",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# input family: gamma_first\n"));
    assert!(text.contains("projection: decreasing pass=true"));
    let o = zmlab(&[
        "scan",
        "--kind",
        "projection",
        "--family",
        "gamma_first",
        "--z",
        "0.8",
        "--zp",
        "0.7",
        "--ladder",
        "20,40",
    ]);
    assert!(stdout(&o).contains("projection: exploratory pass=true"));
    let o = zmlab(&["scan", "--kind", "projection", "--family", "L_xi", "--z", "0.3", "--zp", "0.6", "--xi", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}
