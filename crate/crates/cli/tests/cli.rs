use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn loadshare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loadshare"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn floats(v: &serde_json::Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn simulate_writes_header_and_rows() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("d.csv");
    let out = loadshare(&[
        "simulate",
        "--model",
        "kim-kvam",
        "--k",
        "3",
        "--theta",
        "1",
        "--lambda",
        "1,1",
        "--n",
        "5",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("n=5 k=3 seed=7"));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t1,t2,t3");
    assert_eq!(lines.len(), 6);
}

#[test]
fn simulate_is_reproducible_and_defaults_seed() {
    let args = [
        "simulate", "--model", "ssk", "--k", "4", "--s", "2", "--theta", "2", "--lambda",
        "0.5,1,3", "--n", "20",
    ];
    let a = loadshare(&args);
    let b = loadshare(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "0"]);
    assert_eq!(loadshare(&seeded).stdout, a.stdout);
}

#[test]
fn simulate_usage_errors() {
    let bad: &[&[&str]] = &[
        &[
            "simulate", "--model", "ssk", "--k", "3", "--s", "3", "--theta", "1", "--lambda",
            "1,1", "--n", "5",
        ],
        &[
            "simulate", "--model", "ssk", "--k", "3", "--theta", "1", "--lambda", "1,1", "--n", "5",
        ],
        &[
            "simulate", "--model", "kim-kvam", "--k", "1", "--theta", "1", "--lambda", "1", "--n",
            "5",
        ],
        &[
            "simulate", "--model", "kim-kvam", "--k", "3", "--theta", "-1", "--lambda", "1,1",
            "--n", "5",
        ],
        &[
            "simulate", "--model", "kim-kvam", "--k", "3", "--theta", "1", "--lambda", "1", "--n",
            "5",
        ],
        &[
            "simulate", "--model", "kim-kvam", "--k", "3", "--theta", "1", "--lambda", "1,1",
            "--n", "0",
        ],
        &[
            "simulate", "--model", "weibull", "--k", "3", "--theta", "1", "--lambda", "1,1", "--n",
            "5",
        ],
    ];
    for args in bad {
        let out = loadshare(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
    let out = loadshare(bad[0]);
    assert!(stderr(&out).contains("s must satisfy 2 ≤ s ≤ k−1"));
}

#[test]
fn simulate_from_params_file() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "p.json",
        r#"{"model":"ssk","k":3,"s":2,"theta":1,"lambda":[1,2]}"#,
    );
    let a = loadshare(&["simulate", "--params", &p, "--n", "4", "--seed", "3"]);
    let b = loadshare(&[
        "simulate", "--model", "ssk", "--k", "3", "--s", "2", "--theta", "1", "--lambda", "1,2",
        "--n", "4", "--seed", "3",
    ]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let bad = write(
        &dir,
        "bad.json",
        r#"{"model":"ssk","k":3,"s":2,"theta":1,"lambda":[1,2],"x":1}"#,
    );
    assert_eq!(
        code(&loadshare(&["simulate", "--params", &bad, "--n", "4"])),
        2
    );
}

#[test]
fn fit_unit_spacing_json() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", "1,1\n");
    let out = loadshare(&[
        "fit", "--model", "kim-kvam", "--data", &d, "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["theta_hat"], 0.5);
    assert_eq!(floats(&v["lambda_hat"]), [2.0]);
    assert_eq!(v["n"], 1);
    assert_eq!(v["k"], 2);
    assert_eq!(v["model"], "kim-kvam");
    assert!(v.get("s").is_none());
    let ll = v["loglik"].as_f64().unwrap();
    // ln 2 + 2 ln 0.5 + ln 2 - 0.5·(2 + 2)
    assert!((ll - (2.0f64.ln() + 2.0 * 0.5f64.ln() + 2.0f64.ln() - 2.0)).abs() < 1e-14);
}

#[test]
fn fit_two_rows_and_ssk() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", "t1,t2,t3\n1,2,3\n3,2,1\n");
    let v = json(&loadshare(&[
        "fit", "--model", "kim-kvam", "--data", &d, "--format", "json",
    ]));
    assert!((v["theta_hat"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(floats(&v["lambda_hat"]), [1.5, 3.0]);

    let d = write(&dir, "u.csv", "t1,t2,t3\n1,1,1\n");
    let v = json(&loadshare(&[
        "fit", "--model", "ssk", "--s", "2", "--data", &d, "--format", "json",
    ]));
    assert_eq!(v["s"], 2);
    assert_eq!(floats(&v["lambda_hat"]), [1.5, 6.0]);
    assert_eq!(v["model"], "ssk");
}

#[test]
fn fit_text_output() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", "t1,t2\n1,1\n");
    let out = loadshare(&["fit", "--model", "kim-kvam", "--data", &d]);
    let s = stdout(&out);
    assert!(s.contains("theta_hat: 0.5\n"));
    assert!(s.contains("lambda_hat: 2\n"));
}

#[test]
fn fit_data_errors_cite_position() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("zero.csv", "t1,t2\n1,1\n1,0\n", "row 2 (line 3), column 2"),
        ("neg.csv", "t1,t2\n-1,1\n", "row 1 (line 2), column 1"),
        ("nan.csv", "t1,t2\n1,NaN\n", "column 2"),
        ("ragged.csv", "t1,t2\n1,1\n1\n", "row 2"),
        ("dup.csv", "x1,x2,x3\n1,2,3\n2,2,3\n", "row 2 (line 3)"),
        ("one.csv", "t1\n1\n", "at least 2"),
    ];
    for (name, body, needle) in cases {
        let d = write(&dir, name, body);
        let out = loadshare(&["fit", "--model", "kim-kvam", "--data", &d]);
        assert_eq!(code(&out), 1, "{name}");
        assert!(stderr(&out).contains(needle), "{name}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn fit_usage_errors() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", "t1,t2,t3\n1,2,3\n");
    for args in [
        vec!["fit", "--model", "ssk", "--data", &d],
        vec!["fit", "--model", "ssk", "--s", "3", "--data", &d],
        vec!["fit", "--model", "kim-kvam", "--s", "2", "--data", &d],
        vec!["fit", "--model", "kim-kvam", "--data", &d, "--lifetimes"],
        vec!["fit", "--model", "kim-kvam"],
    ] {
        assert_eq!(code(&loadshare(&args)), 2, "{args:?}");
    }
    let missing = dir.path().join("nope.csv");
    let out = loadshare(&[
        "fit",
        "--model",
        "kim-kvam",
        "--data",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn lifetimes_and_spacings_fit_identically() {
    let dir = TempDir::new().unwrap();
    let life = write(&dir, "x.csv", "x1,x2,x3\n1,2,4\n5,1,2\n");
    let legacy = write(&dir, "legacy.csv", "1,2,4\n5,1,2\n");
    let spac = write(&dir, "t.csv", "t1,t2,t3\n1,1,2\n1,1,3\n");
    let a = loadshare(&[
        "fit", "--model", "kim-kvam", "--data", &life, "--format", "json",
    ]);
    let b = loadshare(&[
        "fit", "--model", "kim-kvam", "--data", &spac, "--format", "json",
    ]);
    let c = loadshare(&[
        "fit",
        "--model",
        "kim-kvam",
        "--data",
        &legacy,
        "--lifetimes",
        "--format",
        "json",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn verify_single_dataset() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", "1,1\n");
    let out = loadshare(&[
        "verify", "--model", "kim-kvam", "--data", &d, "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    let inst = &v["instances"][0];
    assert!(inst["max_rel_discrepancy"].as_f64().unwrap() <= 1e-6);
    assert!(inst["loglik_gap"].as_f64().unwrap() <= 1e-9);
    let oracle = inst["oracle"].as_array().unwrap();
    assert!((oracle[0].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!((oracle[1].as_f64().unwrap() - 2.0).abs() < 2e-6);
}

#[test]
fn verify_random_both_models() {
    for model in ["kim-kvam", "ssk"] {
        let out = loadshare(&[
            "verify",
            "--model",
            model,
            "--random",
            "--instances",
            "50",
            "--seed",
            "1",
        ]);
        assert_eq!(code(&out), 0, "{model}: {}", stderr(&out));
        assert!(stdout(&out).contains("summary: 50 instances, 50 passed, 0 failed"));
    }
}

#[test]
fn verify_failure_exit_code() {
    // a one-sweep budget cannot converge
    let out = loadshare(&[
        "verify",
        "--model",
        "kim-kvam",
        "--random",
        "--instances",
        "3",
        "--max-iters",
        "1",
    ]);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn mc_study_outputs_reference_means() {
    let out = loadshare(&[
        "mc-study", "--model", "kim-kvam", "--k", "3", "--theta", "2", "--lambda", "1,0.5", "--n",
        "10", "--reps", "2000", "--seed", "42", "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    let params = v["parameters"].as_array().unwrap();
    assert_eq!(params.len(), 3);
    assert_eq!(params[0]["name"], "theta");
    let reference = params[0]["reference_mean"].as_f64().unwrap();
    assert!((reference - 20.0 / 9.0).abs() < 1e-15);
    for p in params {
        let bias = p["bias"].as_f64().unwrap();
        assert!(p["mse"].as_f64().unwrap() >= bias * bias - 1e-12);
    }
}

#[test]
fn mc_study_rejects_small_n() {
    let out = loadshare(&[
        "mc-study", "--model", "kim-kvam", "--k", "3", "--theta", "1", "--lambda", "1,1", "--n",
        "1", "--reps", "10",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("at least 2"));
}

#[test]
fn round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sim.csv");
    let p = path.to_str().unwrap();
    let out = loadshare(&[
        "simulate", "--model", "kim-kvam", "--k", "3", "--theta", "0.5", "--lambda", "2,4", "--n",
        "10000", "--seed", "11", "--out", p,
    ]);
    assert_eq!(code(&out), 0);
    assert!(Path::new(p).exists());
    let v = json(&loadshare(&[
        "fit", "--model", "kim-kvam", "--data", p, "--format", "json",
    ]));
    let theta = v["theta_hat"].as_f64().unwrap();
    assert!((theta / 0.5 - 1.0).abs() < 0.05);
    let lambdas = v["lambda_hat"].as_array().unwrap();
    assert!((lambdas[0].as_f64().unwrap() / 2.0 - 1.0).abs() < 0.05);
    assert!((lambdas[1].as_f64().unwrap() / 4.0 - 1.0).abs() < 0.05);
}
