//! End-to-end tests of the `fracbvp` binary: exit-code contract, output
//! determinism and file formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracbvp"))
}

fn write_problem(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const MANUFACTURED_CUBIC: &str = "\
# manufactured cubic: exact solution t^3
alpha = 2.5
beta1 = 0.5
beta2 = 1.5
T = 1
eta = 0.1
a0 = 1
a1 = 1
a2 = 1
b0 = 1
b1 = 1
b2 = 1
lambda0 = 1
lambda1 = 0.5
lambda2 = 0.3333333333333333
f = monomial:3
g0 = const:1.0
g1 = const:3.622231729049018
g2 = const:13.968739793022816
";

const ZERO_LIPSCHITZ: &str = "\
alpha = 2.5
beta1 = 0.5
beta2 = 1.5
T = 1
eta = 0.1
a0 = 1
a1 = 1
a2 = 1
b0 = 1
b1 = 1
b2 = 1
lambda0 = 1
lambda1 = 0.5
lambda2 = 0.3333333333333333
f = zero
g0 = zero
g1 = zero
g2 = zero
lf = 0
lg0 = 0
lg1 = 0
lg2 = 0
";

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn certify_zero_data_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "zero.txt", ZERO_LIPSCHITZ);
    let out = bin().args(["certify"]).arg(&path).arg("--constant-lf").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("verdict: certified"), "{text}");
    assert!(text.contains("kind: uniqueness"));
    assert!(text.contains("contraction_constant:"));
}

#[test]
fn certify_not_certified_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let body = ZERO_LIPSCHITZ.replace("lf = 0", "lf = 1").replace("lg0 = 0", "lg0 = 1");
    let path = write_problem(&dir, "fat.txt", &body);
    let out = bin().args(["certify"]).arg(&path).arg("--constant-lf").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("verdict: not-certified"));
}

#[test]
fn certify_hoelder_mode_accepts_tau_flag() {
    let dir = tempfile::tempdir().unwrap();
    let body = ZERO_LIPSCHITZ.replace("lf = 0", "lf = 0.01");
    let path = write_problem(&dir, "small.txt", &body);
    let out = bin().args(["certify"]).arg(&path).args(["--tau", "0.25"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("verdict: certified"), "{text}");
    // ||l_f||_{1/tau} for a constant on [0,1] is the constant itself
    assert!(text.contains("lf_norm: 1.00000000000e-2"), "{text}");
    // an inadmissible tau is rejected before any arithmetic
    let bad = bin().args(["certify"]).arg(&path).args(["--tau", "1.5"]).output().unwrap();
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn certify_existence_kind_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        "{ZERO_LIPSCHITZ}kind = existence\nphi = const:0.5\npsi0 = linear\npsi1 = zero\npsi2 = zero\n"
    )
    .replace("lf = 0", "lf = 0.05")
    .replace("lg0 = 0", "lg0 = 0.1");
    let path = write_problem(&dir, "exist.txt", &body);
    let out = bin().args(["certify"]).arg(&path).arg("--constant-lf").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("kind: existence"), "{text}");
    assert!(text.contains("verdict: certified"));
    assert!(text.contains("k_threshold:"));
}

#[test]
fn parse_failure_exits_two_with_line_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "broken.txt", "alpha = 2.5\nbeta1 : oops\n");
    let out = bin().args(["certify"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn validation_failure_exits_three_listing_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let body = MANUFACTURED_CUBIC.replace("b0 = 1", "b0 = -1");
    let path = write_problem(&dir, "degenerate.txt", &body);
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("a0 + b0"), "stderr: {err}");
}

#[test]
fn non_convergence_exits_four_with_history_tail() {
    let dir = tempfile::tempdir().unwrap();
    let body = MANUFACTURED_CUBIC.replace("f = monomial:3", "f = example1:0.05");
    let path = write_problem(&dir, "slow.txt", &body);
    let out = bin()
        .args(["solve"])
        .arg(&path)
        .args(["--max-iter", "2", "--out"])
        .arg(dir.path().join("s.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("history tail"), "stderr: {err}");
}

#[test]
fn solve_writes_csv_and_residual_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "cubic.txt", MANUFACTURED_CUBIC);
    let csv_path = dir.path().join("solution.csv");
    let out = bin()
        .args(["solve"])
        .arg(&path)
        .args(["--grid", "65", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_of(&out);
    assert!(summary.contains("converged: true"));
    assert!(summary.contains("ode_residual_sup:"));
    assert!(summary.contains("boundary_residual_2:"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,u,d_beta1_u,d_beta2_u"));
    assert_eq!(csv.lines().count(), 66);
    // final row carries t = T and u close to T^3 = 1
    let last = csv.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|v| v.parse().unwrap()).collect();
    assert!((fields[0] - 1.0).abs() < 1e-12);
    assert!((fields[1] - 1.0).abs() < 1e-2);
}

#[test]
fn solve_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "cubic.txt", MANUFACTURED_CUBIC);
    let run = || {
        let csv = dir.path().join("out.csv");
        let out = bin()
            .args(["solve"])
            .arg(&path)
            .args(["--grid", "65", "--out"])
            .arg(&csv)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(csv).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn green_exports_kernel_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "cubic.txt", MANUFACTURED_CUBIC);
    let csv_path = dir.path().join("green.csv");
    let out = bin()
        .args(["green"])
        .arg(&path)
        .args(["--t-points", "9", "--s-points", "17", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().next(), Some("t,s,G,G0"));
    assert_eq!(csv.lines().count(), 1 + 9 * 17);
    // determinism
    let out2 = bin()
        .args(["green"])
        .arg(&path)
        .args(["--t-points", "9", "--s-points", "17"])
        .output()
        .unwrap();
    assert_eq!(stdout_of(&out2), csv);
}

#[test]
fn examples_table_prints_reference_block() {
    let out = bin().args(["examples", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let table = stdout_of(&out);
    assert!(table.contains("delta0"), "{table}");
    assert!(table.contains("2.34"), "missing reference delta0: {table}");
    assert!(table.contains("rho2"));
    assert!(table.contains("1.2"));
    // both-example mode adds the growth threshold
    let both = stdout_of(&bin().args(["examples"]).output().unwrap());
    assert!(both.contains("k_threshold"));
    assert!(both.contains("9.8"));
    assert!(both.contains("lf_threshold"));
}

#[test]
fn grid_floor_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "cubic.txt", MANUFACTURED_CUBIC);
    let out = bin().args(["solve"]).arg(&path).args(["--grid", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
