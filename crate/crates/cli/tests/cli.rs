//! End-to-end checks of the binary: schema, determinism, config handling,
//! and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stable-torsion"))
}

#[test]
fn bounds_emits_ball_torsion_sup() {
    let out = bin()
        .args(["bounds", "--alpha", "1", "--dim", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let header = stdout
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("header row");
    assert_eq!(
        header,
        "experiment,alpha,dim,quantity,value,stderr,lower,upper,verdict,seed,n,h,h_s"
    );
    let row = stdout
        .lines()
        .find(|l| l.contains("ball_torsion_sup"))
        .expect("ball torsion row");
    // 2/pi to the printed precision
    assert!(row.contains("6.3661977236758"), "{row}");
}

#[test]
fn reruns_are_byte_identical() {
    let run = || {
        bin()
            .args([
                "simulate",
                "--estimator",
                "torsion",
                "--domain",
                "interval",
                "--process",
                "y",
                "--alpha",
                "1",
                "--n",
                "2000",
                "--h",
                "1e-2",
                "--h-s",
                "1e-2",
                "--seed",
                "9",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.cfg");
    std::fs::write(
        &path,
        "[small_run]\nestimator = torsion\ndomain = ball\ndim = 2\nprocess = y\n\
         alpha = 1.0\nn = 1500\nh = 1e-2\nh_s = 1e-2\nseed = 4\n",
    )
    .unwrap();
    let out = bin()
        .args([
            "simulate",
            "--config",
            path.to_str().unwrap(),
            "--experiment",
            "small_run",
            "--n",
            "2500",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // flag overrides the file's n
    assert!(stdout.contains("# n=2500"), "{stdout}");
    assert!(stdout.lines().any(|l| l.contains("torsion_mean")));
}

#[test]
fn usage_errors_exit_1() {
    // missing seed
    let out = bin()
        .args([
            "simulate", "--estimator", "torsion", "--domain", "interval", "--alpha", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("seed"), "{err}");

    // malformed config line
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "[a]\nnot a pair\n").unwrap();
    let out = bin()
        .args(["simulate", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.cfg:2"), "{err}");

    // unknown domain
    let out = bin()
        .args([
            "verify", "--check", "theorem1", "--domain", "teapot", "--alpha", "1", "--seed", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_comparison_lemma_passes() {
    let out = bin()
        .args(["verify", "--check", "comparison_lemma", "--alpha", "1"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.contains("comparison_lemma") && l.contains("pass")));
}

#[test]
fn json_format() {
    let out = bin()
        .args(["bounds", "--alpha", "0.5", "--dim", "3", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["alpha"], "0.5");
    assert!(doc["rows"].as_array().unwrap().len() > 5);
}
