use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixfrac"))
}

fn run_into(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    bin().args(args).arg("--out").arg(dir).output().unwrap()
}

#[test]
fn outputs_are_deterministic() {
    let one = tempfile::tempdir().unwrap();
    let two = tempfile::tempdir().unwrap();
    let args = ["lemmas", "--n", "48", "--k-max", "6", "--trials", "20", "--seed", "7"];
    assert!(run_into(one.path(), &args).status.success());
    assert!(run_into(two.path(), &args).status.success());
    for name in ["summary.json", "lemmas.csv"] {
        assert_eq!(fs::read(one.path().join(name)).unwrap(), fs::read(two.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let one = tempfile::tempdir().unwrap();
    let many = tempfile::tempdir().unwrap();
    let args = ["verify", "lower", "--n", "64", "--k-max", "8"];
    let a = bin().args(args).arg("--out").arg(one.path()).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let b = bin().args(args).arg("--out").arg(many.path()).env("RAYON_NUM_THREADS", "4").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(one.path().join("lower.csv")).unwrap(), fs::read(many.path().join("lower.csv")).unwrap());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nn = 40\ns1 = 0.45\nk_max = 5\n").unwrap();
    let out = bin().args(["spectrum", "--n", "32", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["domain"]["n"], 32);
    assert_eq!(v["config"]["params"]["s1"], 0.45);
    assert_eq!(v["config"]["k_max"], 5);
    assert!(v["rng"].as_str().unwrap().contains("ChaCha8"));

    fs::write(&cfg, "grid = 40\n").unwrap();
    let bad = bin().args(["spectrum", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["spectrum", "--n", "32", "--k-max", "4"]).status.success());
    let csv = fs::read_to_string(dir.path().join("eigenvalues.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("j,lambda"));
    let first = lines.next().unwrap();
    let mantissa = first.split(',').nth(1).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    assert_eq!(lines.count(), 3);
}

#[test]
fn shift_below_admissible_range_is_an_error() {
    let out = bin().args(["sweep-mu", "--n", "32", "--mu-list", "-1.1lhat,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_hat"));
}

#[test]
fn diagnostics_never_gate() {
    // Far too coarse for the Weyl constants to match; still exit 0.
    let out = bin().args(["weyl", "--n", "12", "--k-max", "12"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gating"], false);
}

#[test]
fn upper_requires_zero_shift() {
    let out = bin().args(["verify", "upper", "--n", "32", "--mu", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
