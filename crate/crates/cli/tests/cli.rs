use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/zeros100.txt")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeta-fluct"))
        .current_dir(dir)
        .env_remove("ZETA_FLUCT_CACHE")
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn compute_then_fluct_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        d,
        &["--zeros-cache", "c", "zeros", "compute", "--t-max", "2000"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(d.join("c/zeros.txt").exists());

    let out = run(
        d,
        &[
            "--zeros-cache",
            "c",
            "--out",
            "o",
            "fluct",
            "--n",
            "200",
            "--xi",
            "-1,0.5",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let samples = std::fs::read_to_string(d.join("o/samples.csv")).unwrap();
    assert!(samples.contains("# command: fluct"));
    let header = samples.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "k,gamma,t,sigma,f,X[xi=-1],X[xi=0.5]");
    assert_eq!(samples.lines().filter(|l| !l.starts_with('#')).count(), 201);
    for name in ["moments.csv", "cdf.csv"] {
        assert!(d.join("o").join(name).exists(), "{name}");
    }
    let cdf = std::fs::read_to_string(d.join("o/cdf.csv")).unwrap();
    assert!(cdf.lines().any(|l| l.contains(",sup,")));
}

#[test]
fn missing_cache_and_short_coverage_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(&run(d, &["--zeros-cache", "none", "fluct", "--n", "10"])),
        3
    );

    let file = fixture();
    let out = run(
        d,
        &[
            "--zeros-cache",
            "c",
            "zeros",
            "ingest",
            "--file",
            file.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(d, &["--zeros-cache", "c", "fluct", "--n", "80"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn invalid_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let file = fixture();
    run(
        d,
        &[
            "--zeros-cache",
            "c",
            "zeros",
            "ingest",
            "--file",
            file.to_str().unwrap(),
        ],
    );
    for args in [
        &["--zeros-cache", "c", "fluct", "--n", "10", "--theta", "0.5"][..],
        &["--zeros-cache", "c", "cov", "--n", "10", "--betas", "-1"],
        &["expsum", "--primes", "4,6"],
        &["expsum", "--primes", "2,3", "--k", "100", "--h", "101"],
        &["zeros", "ingest", "--file", "does-not-exist.txt"],
        &["--config", "missing.conf", "expsum"],
        &["fluct", "--n", "many"],
    ] {
        let out = run(d, args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn duplicate_betas_warn_once() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(
        d,
        &["--zeros-cache", "c", "zeros", "compute", "--t-max", "3000"],
    );
    let out = run(
        d,
        &[
            "--zeros-cache",
            "c",
            "--out",
            "o",
            "cov",
            "--n",
            "1000",
            "--betas",
            "0.5,1,0.5",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stderr(&out).matches("duplicate beta 0.5").count(), 1);
    let cov = std::fs::read_to_string(d.join("o/cov.csv")).unwrap();
    assert_eq!(cov.lines().filter(|l| !l.starts_with('#')).count(), 3);

    let out = run(
        d,
        &[
            "--zeros-cache",
            "c",
            "cov",
            "--n",
            "1000",
            "--theta",
            "0.75",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("1000"), "{}", stderr(&out));
}

#[test]
fn config_file_and_env_supply_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("run.conf"), "out = reports\nt_max = 500 # small\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_zeta-fluct"))
        .current_dir(d)
        .env("ZETA_FLUCT_CACHE", d.join("envcache"))
        .args(["--config", "run.conf", "zeros", "compute"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(d.join("envcache/zeros.txt").exists());

    let out = run(d, &["--config", "run.conf", "expsum", "--per-height", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let expsum = std::fs::read_to_string(d.join("reports/expsum.csv")).unwrap();
    assert!(expsum.contains("# fitted_constant:"));
    assert!(d.join("reports/phase.csv").exists());

    std::fs::write(d.join("bad.conf"), "speed = 3\n").unwrap();
    assert_eq!(code(&run(d, &["--config", "bad.conf", "expsum"])), 2);
}

#[test]
fn single_tuple_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        d,
        &[
            "expsum", "--primes", "2,3,5,7", "--split", "2", "--k", "1000", "--h", "300",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(d.join("expsum.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0,1000,300,"));
}
