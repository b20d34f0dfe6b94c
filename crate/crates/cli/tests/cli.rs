use std::process::{Command, Output};

use serde_json::Value;

fn hyperq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is one JSON document");
    assert_eq!(v["schema_version"], 1);
    v
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn amplify_examples() {
    let out = hyperq(&[
        "amplify",
        "--rule",
        "dep-failure",
        "--eps",
        "0.5",
        "--delta",
        "1e-3",
        "--eta",
        "1e-4",
        "--d",
        "1024",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((num(&v["delta_prime"]) - 9.998366483134082e-4).abs() < 1e-15);

    let v = json(&hyperq(&[
        "amplify", "--rule", "gd", "--eps", "1", "--delta", "1e-4", "--eta", "0.3",
    ]));
    assert_eq!(num(&v["delta_prime"]), 4e-5);

    let v = json(&hyperq(&[
        "amplify",
        "--rule",
        "dep-failure",
        "--eta",
        "0",
        "--d",
        "8",
    ]));
    assert_eq!(num(&v["delta_prime"]), num(&v["input"]["delta"]));
    assert_eq!(num(&v["epsilon_prime"]), num(&v["input"]["epsilon"]));
}

#[test]
fn amplify_threshold_and_errors() {
    let v = json(&hyperq(&[
        "amplify", "--rule", "dep-loss", "--eps", "1", "--delta", "0.01", "--eta", "0.5", "--k",
        "10",
    ]));
    assert!((num(&v["eta_threshold"]) - 0.9779721694853157).abs() < 1e-11);

    // (1 − e^{−2})·(1 − 1e-5) < (e² − 1)/2, so the threshold does not exist.
    let out = hyperq(&[
        "amplify", "--rule", "dep-loss", "--eps", "2", "--eta", "0.5", "--k", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["eta_threshold"].is_null());

    assert_eq!(
        hyperq(&["amplify", "--rule", "dep-loss", "--eta", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hyperq(&["amplify", "--rule", "dep-failure", "--eta", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hyperq(&["amplify", "--rule", "gd", "--eta", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hyperq(&["amplify", "--rule", "nope", "--eta", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn calibrate_examples() {
    let v = json(&hyperq(&[
        "calibrate",
        "--eps",
        "1",
        "--delta",
        "1e-5",
        "--l",
        "1",
        "--eta",
        "0.1",
        "--d",
        "32",
    ]));
    assert!((num(&v["relaxed_delta"]) - 5.97736745993e-3).abs() < 1e-14);
    assert!(num(&v["residuals"]["gaussian"]) <= 1e-9);
    assert!(num(&v["residuals"]["amplification"]) <= 1e-12);

    let plain = json(&hyperq(&["calibrate", "--eta", "0"]));
    assert_eq!(num(&plain["relaxed_delta"]), 1e-5);
    assert!((num(&plain["sigma"]) - 3.730631634815941).abs() < 1e-9);

    let basic = json(&hyperq(&["calibrate", "--mechanism", "basic"]));
    assert!((num(&basic["sigma"]) - 4.844805262605389).abs() < 1e-10);
    assert!(basic["residuals"]["gaussian"].is_null());

    let out = hyperq(&["calibrate", "--eta", "0.999999", "--delta", "1e-12"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "infeasible");
}

#[test]
fn certify_examples() {
    let v = json(&hyperq(&[
        "certify",
        "--scores",
        "0.8,0.1,0.1",
        "--class",
        "0",
        "--eps",
        "0.1",
        "--delta-prime",
        "0.01",
    ]));
    assert_eq!(v["certified"], true);
    assert!((num(&v["margin"]) - 0.6568080150032265).abs() < 1e-11);

    let tie = json(&hyperq(&[
        "certify",
        "--scores",
        "0.5,0.5",
        "--class",
        "0",
        "--eps",
        "0",
        "--delta-prime",
        "0",
    ]));
    assert_eq!(tie["certified"], false);

    let v = json(&hyperq(&[
        "certify",
        "--scores",
        "0.6,0.4",
        "--class",
        "0",
        "--eps",
        "0",
        "--delta-prime",
        "0",
    ]));
    assert_eq!(v["certified"], true);
    assert!((num(&v["margin"]) - 0.2).abs() < 1e-12);

    assert_eq!(
        hyperq(&[
            "certify",
            "--scores",
            "0.6,x",
            "--class",
            "0",
            "--eps",
            "0",
            "--delta-prime",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        hyperq(&[
            "certify",
            "--scores",
            "1.2,0.1",
            "--class",
            "0",
            "--eps",
            "0",
            "--delta-prime",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        hyperq(&[
            "certify",
            "--scores",
            "0.6,0.4",
            "--class",
            "5",
            "--eps",
            "0",
            "--delta-prime",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn scan_csv_shape() {
    let out = hyperq(&["scan", "--etas", "0,0.4", "--n-min", "1", "--n-max", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("eta,n,sigma2_classical,sigma2_hybrid,reduction_percent")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 60);
    assert!(rows[..30].iter().all(|r| r[4] == 0.0));
    let last = rows.last().unwrap();
    assert_eq!((last[0], last[1]), (0.4, 30.0));
    assert!((5.0..=11.0).contains(&last[4]));
    assert!(rows[30..].windows(2).all(|w| w[1][4] <= w[0][4]));
}

#[test]
fn scan_marks_infeasible_rows() {
    let out = hyperq(&[
        "scan", "--eps", "0.01", "--delta", "0.6", "--etas", "0,0.5", "--n-min", "1", "--n-max",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "0.5,1,,,"), "{text}");
    assert!(text
        .lines()
        .any(|l| l.starts_with("0,1,") && !l.ends_with(",,")));
}

#[test]
fn utility_reference_and_tightness() {
    let v = json(&hyperq(&["utility", "--sigma", "0", "--eta", "0"]));
    assert_eq!(num(&v["bound"]), 0.0);
    assert_eq!(num(&v["empirical"]["ratio"]), 0.0);

    let out = hyperq(&[
        "--format",
        "csv",
        "--seed",
        "3",
        "utility",
        "--tightness",
        "--samples",
        "200",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sigma,eta,ratio"));
    let cells: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(cells.len(), 6 * 9);
    assert!(cells.iter().all(|c| c[2] < 1.0));
    let zero: Vec<f64> = cells
        .iter()
        .filter(|c| c[0] == 0.0 && c[1] > 0.0)
        .map(|c| c[2])
        .collect();
    assert!(zero.iter().all(|r| (r - zero[0]).abs() < 1e-9));
}

#[test]
fn utility_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"weights":[[1,0],[0,1]],"generators":"rx","povm":{"computational":{"n":2,"k":2}},"eta":0.1,"sigma":0.2}"#,
    )
    .unwrap();
    let v = json(&hyperq(&[
        "utility",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "100",
    ]));
    assert_eq!(v["input"]["qubits"], 2);
    assert_eq!(num(&v["input"]["eta"]), 0.1);
    // ‖E_exp‖ = 1, ‖W‖∞ = 1, Σ‖H_j‖ = 1: L∞ = 2·0.9.
    assert!((num(&v["l_inf"]) - 1.8).abs() < 1e-12);

    std::fs::write(
        &cfg,
        r#"{"generators":"rx","povm":{"computational":{"n":1,"k":2}}}"#,
    )
    .unwrap();
    assert_eq!(
        hyperq(&["utility", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(
        hyperq(&["utility", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_examples() {
    let out = hyperq(&["verify", "--lemma", "b7", "--trials", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reports"][0]["verdict"], "Holds");
    assert_eq!(v["reports"][0]["trials"], 10000);

    let out = hyperq(&["verify", "--lemma", "b9", "--eta", "0", "--trials", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["reports"][0];
    assert_eq!(r["verdict"], "Reported");
    for c in r["cells"].as_array().unwrap() {
        assert_eq!(num(&c["max_ratio"]), 1.0);
        assert_eq!(num(&c["bound"]), 0.0);
    }

    let out = hyperq(&["verify", "--lemma", "b8", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reports"][0]["verdict"], "Violated");

    assert_eq!(hyperq(&["verify", "--lemma", "b10"]).status.code(), Some(2));
    assert_eq!(hyperq(&["verify"]).status.code(), Some(2));
    assert_eq!(
        hyperq(&["verify", "--lemma", "b4", "--trials", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_is_reproducible_and_seed_sensitive() {
    let args = ["--seed", "9", "verify", "--all", "--trials", "200"];
    let a = hyperq(&args);
    let b = hyperq(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = hyperq(&["--seed", "10", "verify", "--all", "--trials", "200"]);
    assert_ne!(a.stdout, c.stdout);
    let v = json(&a);
    assert_eq!(v["reports"].as_array().unwrap().len(), 8);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = hyperq(&[
        "--out",
        path.to_str().unwrap(),
        "scan",
        "--etas",
        "0.1",
        "--n-max",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn every_subcommand_emits_versioned_json() {
    for args in [
        vec!["amplify", "--rule", "gad", "--eta", "0.25"],
        vec!["calibrate"],
        vec![
            "certify",
            "--scores",
            "0.9,0.1",
            "--class",
            "0",
            "--eps",
            "0.1",
            "--delta-prime",
            "0",
        ],
        vec!["scan", "--n-max", "2"],
        vec!["utility", "--samples", "10"],
        vec!["verify", "--lemma", "b6", "--trials", "50"],
    ] {
        let mut full = vec!["--format", "json"];
        full.extend(args);
        json(&hyperq(&full));
    }
}

#[test]
fn human_format_is_readable() {
    let out = hyperq(&[
        "--format",
        "human",
        "certify",
        "--scores",
        "0.8,0.1,0.1",
        "--class",
        "0",
        "--eps",
        "0.1",
        "--delta-prime",
        "0.01",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("certified  true"));
    assert!(text.contains("margin     0.656808015003"));
}
