use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arc-lebesgue"))
        .args(args)
        .current_dir(dir)
        .env("ARC_LEBESGUE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = run(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn nodes_and_energy_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        &[
            "nodes",
            "--family",
            "adjusted-fejer-gamma0",
            "--n",
            "46",
            "--out",
            "adj.csv",
        ],
        d,
    );
    let text = std::fs::read_to_string(d.join("adj.csv")).unwrap();
    assert!(text.starts_with("k,theta,re,im,adjusted_flag\n"));
    assert_eq!(text.lines().count(), 48);
    assert!(text.lines().skip(1).any(|l| l.ends_with(",1")));
    assert!(!text.contains('\r'));

    ok(
        &[
            "nodes",
            "--family",
            "fejer-gamma0",
            "--n",
            "9",
            "--rotation",
            "-0.05",
            "--out",
            "rot.csv",
        ],
        d,
    );
    let bad = run(
        &[
            "nodes",
            "--family",
            "chebyshev",
            "--n",
            "9",
            "--rotation",
            "0.1",
            "--out",
            "x.csv",
        ],
        d,
    );
    assert!(!bad.status.success());

    ok(
        &[
            "fekete",
            "--curve",
            "circle",
            "--n",
            "5",
            "--restarts",
            "2",
            "--iters",
            "60",
            "--out",
            "fk.csv",
        ],
        d,
    );
    ok(
        &["energy", "--config", "fk.csv", "--n", "5", "--json", "e.json"],
        d,
    );
    let e: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("e.json")).unwrap()).unwrap();
    assert!(e["energy"].as_f64().unwrap() > 0.174533);
    assert!(!run(
        &["energy", "--config", "fk.csv", "--n", "6", "--json", "e2.json"],
        d
    )
    .status
    .success());

    ok(
        &[
            "energy",
            "--config",
            "roots-of-unity",
            "--n",
            "0",
            "--json",
            "one.json",
        ],
        d,
    );
    let e: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("one.json")).unwrap()).unwrap();
    assert!((e["energy"].as_f64().unwrap() - 4.0).abs() < 1e-3);
}

#[test]
fn lebesgue_and_mz_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(&["lebesgue", "--family", "equispaced", "--n", "2"], d);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["L"].as_f64().unwrap() - 1.25).abs() < 1e-9);
    for key in [
        "n",
        "family",
        "argmax_param",
        "samples_used",
        "refinement_gap",
        "warnings",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    ok(
        &[
            "mz",
            "--family",
            "fejer-gamma0",
            "--n",
            "46",
            "--p",
            "2",
            "--witness",
            "lagrange",
            "--json",
            "mz.json",
        ],
        d,
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("mz.json")).unwrap()).unwrap();
    assert!(v["ratio"].as_f64().unwrap() > 1e5);
    assert_eq!(v["witness"]["kind"], "lagrange");
    assert!(v["theta_J_gap"].as_f64().is_some());

    let bad = run(&["lebesgue", "--family", "fekete-circle", "--n", "40"], d);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn sweep_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "sweep",
        "--family",
        "fejer-gamma0",
        "--n-list",
        "16,32,64",
        "--with-collisions",
        "5",
        "--mz",
        "--p",
        "2",
        "--out-dir",
    ];
    let a: Vec<&str> = args.iter().copied().chain(["a"]).collect();
    let b: Vec<&str> = args.iter().copied().chain(["b"]).collect();
    ok(&a, d);
    ok(&b, d);
    let ca = std::fs::read(d.join("a/sweep.csv")).unwrap();
    assert_eq!(ca, std::fs::read(d.join("b/sweep.csv")).unwrap());
    let text = String::from_utf8(ca).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 17);
    let hash = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .to_string();
    assert!(text.lines().skip(1).all(|l| l.starts_with(&hash)));
    assert!(text
        .lines()
        .any(|l| l.contains(",46,fejer-gamma0,collision,") && l.contains(",1,")));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("a/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config_hash"].as_str().unwrap(), hash);
    assert!(summary["spikes"].as_array().unwrap().iter().any(|v| v == 46));

    std::fs::write(
        d.join("cfg.toml"),
        "family = \"chebyshev\"\nn_list = [16, 32, 64, 128]\nout_dir = \"c\"\n[lebesgue]\nsamples_per_gap = 20\n",
    )
    .unwrap();
    let out = ok(&["sweep", "--config", "cfg.toml"], d);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["fit"]["b"].as_f64().unwrap() > 0.5);
    assert!(d.join("c/sweep.csv").exists());

    let bad = run(
        &[
            "sweep",
            "--family",
            "chebyshev",
            "--n-list",
            "8,4",
            "--out-dir",
            "x",
        ],
        d,
    );
    assert!(!bad.status.success());
}

#[test]
fn collisions_witness_and_level() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(
        &[
            "collisions",
            "--j-max",
            "6",
            "--n-max",
            "2000",
            "--out",
            "col.csv",
        ],
        d,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"], 6);
    let csv = std::fs::read_to_string(d.join("col.csv")).unwrap();
    assert!(csv.starts_with("j,n,scaled_gap,L,L_over_ln2n,witness_lambda,spike\n"));
    assert!(csv.contains("\n5,46,"));

    let v: serde_json::Value = serde_json::from_str(&ok(&["witness", "--n", "128"], d)).unwrap();
    assert!(v["lambda_over_ln2"].as_f64().unwrap() > 0.0);
    assert!(!run(&["witness", "--n", "11"], d).status.success());

    ok(&["level", "--m", "4", "--samples", "64", "--out", "lvl.csv"], d);
    let lvl = std::fs::read_to_string(d.join("lvl.csv")).unwrap();
    assert!(lvl.starts_with("m,phi,re,im\n"));
    assert_eq!(lvl.lines().count(), 65);
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_arc-lebesgue"))
        .args(["lebesgue", "--family", "chebyshev", "--n", "3"])
        .current_dir(dir.path())
        .env("ARC_LEBESGUE_THREADS", "many")
        .output()
        .unwrap();
    assert!(!out.status.success());
}
