use std::process::{Command, Output};

fn adtrap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adtrap")).args(args).output().unwrap()
}

#[test]
fn list_shows_experiments_and_functions() {
    let out = adtrap(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["lorenz", "cosine", "quadrature", "heron", "pointwise", "fastpath_g", "log_expm1"] {
        assert!(text.contains(id), "{id}");
    }
}

#[test]
fn run_cosine_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = adtrap(&["run", "cosine", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("omega,T,L,ad_dLdomega,fd_dLdomega"));
}

#[test]
fn overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let p = path.to_str().unwrap();
    let out = adtrap(&["run", "quadrature", "--out", p, "--set", "N_grid=1000", "--set", "x_grid=0.5"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("1000,0.5,"));
}

#[test]
fn unknown_experiment_is_usage_error() {
    assert_eq!(adtrap(&["run", "unknown_exp"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    assert_eq!(adtrap(&["run", "unknown_exp", "--out", path.to_str().unwrap()]).status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn bad_override_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let p = path.to_str().unwrap();
    for bad in ["tol", "tol=abc", "colour=red"] {
        let out = adtrap(&["run", "heron", "--out", p, "--set", "a_grid=2", "--set", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(!path.exists());
    }
}

#[test]
fn blow_up_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.csv");
    let out = adtrap(&["run", "lorenz", "--out", path.to_str().unwrap(), "--set", "dt=0.5", "--set", "T_grid=50"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blow-up"));
}

#[test]
fn verify_fastpath_g_reports_the_origin() {
    let out = adtrap(&["verify", "fastpath_g"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("CHECK ")));
    assert!(text.contains("CHECK fastpath_g[0.0]/gradcheck: SUSPECT — plateau=1e0"));
}

#[test]
fn verify_smooth_function_passes() {
    let out = adtrap(&["verify", "exp_sin", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().lines().all(|l| l.contains(": PASS — ")));
}

#[test]
fn verify_is_seed_deterministic() {
    let a = adtrap(&["verify", "rosenbrock", "--seed", "42"]).stdout;
    let b = adtrap(&["verify", "rosenbrock", "--seed", "42"]).stdout;
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    adtrap(&["verify", "rosenbrock", "--seed", "42", "--report", path.to_str().unwrap()]);
    assert_eq!(std::fs::read(&path).unwrap(), a);
}

#[test]
fn verify_unknown_function_is_usage_error() {
    assert_eq!(adtrap(&["verify", "tanh"]).status.code(), Some(2));
}
