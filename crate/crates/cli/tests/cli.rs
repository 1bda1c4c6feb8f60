use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photon-phase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn default_check_passes_with_json_report() {
    let o = run(&[
        "check",
        "--n-max",
        "31",
        "--boundary",
        "cyclic",
        "--format",
        "json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let reports: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 12);
    for (i, r) in reports.iter().enumerate() {
        assert_eq!(r["check_id"], format!("C{:02}", i + 1));
        assert_eq!(r["passed"], true);
        assert!(r["max_deviation"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn coherent_distribution_csv() {
    let o = run(&[
        "phasedist",
        "--n-max",
        "63",
        "--state",
        "coherent:upper,alpha=2+0i",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("phi,probability"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (phi, p) = l.split_once(',').unwrap();
            (phi.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 128);
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() <= 1e-10, "total {total}");
}

#[test]
fn invalid_configuration_exits_2() {
    for args in [
        &["check", "--n-max", "-1"][..],
        &["check", "--lo", "0", "--hi", "3"],
        &["check", "--n-max", "3", "--boundary", "sideways"],
        &["phasedist", "--n-max", "3"],
        &[
            "phasedist",
            "--n-max",
            "3",
            "--state",
            "coherent:upper,alpha=5+0i",
        ],
        &["phasedist", "--n-max", "3", "--state", "squeezed:1"],
        &["operators", "--n-max", "3", "--operator", "nonsense"],
        &[
            "operators",
            "--lo",
            "-2",
            "--hi",
            "5",
            "--operator",
            "polarization_swap",
        ],
        &["spectrum", "--n-max", "3", "--boundary", "open"],
        &["check", "--tolerance", "C99=1"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?} wrote data");
        assert!(!o.stderr.is_empty(), "{args:?} gave no diagnostic");
    }
    // n_max = 0 is the smallest valid window.
    assert_eq!(run(&["check", "--n-max", "0"]).status.code(), Some(0));
}

#[test]
fn failing_check_exits_1() {
    let o = run(&["check", "--n-max", "7", "--tolerance", "C11=0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("C11"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["check", "--n-max", "15", "--wrap-phase", "0.3"][..],
        &["spectrum", "--n-max", "15", "--format", "csv"],
        &[
            "phasedist",
            "--lo",
            "-5",
            "--hi",
            "20",
            "--state",
            "coherent:upper,alpha=1.5-0.5i",
            "--phi0",
            "0.1",
        ],
        &["operators", "--n-max", "4", "--operator", "a_m"],
    ] {
        let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("out{i}"))).collect();
        for p in &paths {
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--out", p.to_str().unwrap()]);
            let o = run(&full);
            assert_eq!(o.status.code(), Some(0), "{args:?}");
            assert!(o.stdout.is_empty());
        }
        assert_eq!(
            fs::read(&paths[0]).unwrap(),
            fs::read(&paths[1]).unwrap(),
            "{args:?}"
        );
    }
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let base = [
        "phasedist",
        "--n-max",
        "20",
        "--state",
        "coherent:lower,alpha=0.5+1i",
        "--phi0",
        "-0.2",
    ];
    let csv = stdout(&run(&[&base[..], &["--format", "csv"]].concat()));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&[&base[..], &["--format", "json"]].concat()))).unwrap();
    let points = json["grid"]["points"].as_array().unwrap();
    let probs = json["probabilities"].as_array().unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), probs.len());
    for ((row, phi), p) in rows.iter().zip(points).zip(probs) {
        let (a, b) = row.split_once(',').unwrap();
        assert_eq!(a.parse::<f64>().unwrap(), phi.as_f64().unwrap());
        assert_eq!(b.parse::<f64>().unwrap(), p.as_f64().unwrap());
    }

    let csv = stdout(&run(&[
        "operators",
        "--n-max",
        "3",
        "--operator",
        "a_m",
        "--format",
        "csv",
    ]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "operators",
        "--n-max",
        "3",
        "--operator",
        "a_m",
    ])))
    .unwrap();
    let entries = json["entries"].as_array().unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), entries.len());
    for (row, e) in rows.iter().zip(entries) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0].parse::<i64>().unwrap(), e[0].as_i64().unwrap());
        assert_eq!(fields[1].parse::<i64>().unwrap(), e[1].as_i64().unwrap());
        assert_eq!(fields[2].parse::<f64>().unwrap(), e[2].as_f64().unwrap());
        assert_eq!(fields[3].parse::<f64>().unwrap(), e[3].as_f64().unwrap());
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"subcommand": "phasedist", "n_max": 5, "state": "fock:2", "format": "csv"}"#,
    )
    .unwrap();
    let from_file = stdout(&run(&["phasedist", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_file.lines().count(), 1 + 12);

    let overridden = stdout(&run(&[
        "phasedist",
        "--config",
        cfg.to_str().unwrap(),
        "--n-max",
        "2",
        "--format",
        "json",
    ]));
    let json: serde_json::Value = serde_json::from_str(&overridden).unwrap();
    assert_eq!(json["probabilities"].as_array().unwrap().len(), 6);

    let wrong = run(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));

    fs::write(&cfg, r#"{"n_max": 3, "unexpected": 1}"#).unwrap();
    assert_eq!(
        run(&["check", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn baseline_report() {
    let o = run(&[
        "phasedist",
        "--n-max",
        "63",
        "--state",
        "coherent:upper,alpha=1+0i",
        "--baseline",
        "pegg-barnett",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["baseline"], "pegg-barnett");
    assert_eq!(r["state_spec"], "coherent:upper,alpha=1+0i");
    assert!(r["sup_diff"].as_f64().unwrap() <= 1e-13);
}

#[test]
fn spectrum_matches_phase_states() {
    let o = run(&[
        "spectrum",
        "--n-max",
        "7",
        "--wrap-phase",
        "1.0",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pairs = v["eigenpairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 16);
    for (k, p) in pairs.iter().enumerate() {
        let expected = (1.0 + std::f64::consts::TAU * k as f64) / 16.0;
        assert!((p["phase"].as_f64().unwrap() - expected).abs() < 1e-10);
        assert!(p["overlap"].as_f64().unwrap() >= 1.0 - 1e-10);
    }
}
