use std::fs;
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;
use serde_json::Value;
use tempfile::tempdir;

fn skewinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewinfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const PHASE_FLIP_HALF: &str = r#"{"name":"phase_flip","params":{"p":0.5}}"#;

#[test]
fn measure_examples() {
    let out = skewinfo(&[
        "measure",
        "--state",
        r#"{"bloch":[0,0,0]}"#,
        "--channel",
        PHASE_FLIP_HALF,
        "--alpha",
        "0.25",
        "--beta",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_abs_diff_eq!(r["I"].as_f64().unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r["J"].as_f64().unwrap(), 1.0, epsilon = 1e-12);
    for key in ["V", "W", "sum_IJ", "rhs_IJ", "sum_VW", "rhs_VW"] {
        assert!(r[key].is_f64(), "{key}");
    }

    let full = r#"{"name":"phase_flip","params":{"p":1}}"#;
    let out = skewinfo(&[
        "measure",
        "--state",
        r#"{"bloch":[1,0,0]}"#,
        "--channel",
        full,
        "--alpha",
        "0.25",
        "--beta",
        "0.25",
    ]);
    assert_abs_diff_eq!(json(&out)["I"].as_f64().unwrap(), 0.25, epsilon = 1e-12);
}

#[test]
fn measure_reads_descriptor_files() {
    let dir = tempdir().unwrap();
    let state = dir.path().join("state.json");
    fs::write(&state, r#"{"matrix":[[0.5,[0.25,-0.1]],[[0.25,0.1],0.5]]}"#).unwrap();
    let out = skewinfo(&[
        "measure",
        "--state",
        state.to_str().unwrap(),
        "--channel",
        r#"{"name":"depolarizing","params":{"p":0.2}}"#,
        "--alpha",
        "0.3",
        "--beta",
        "0.7",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_abs_diff_eq!(json(&out)["sum_IJ"].as_f64().unwrap(), 1.0, epsilon = 1e-10);
}

#[test]
fn exit_codes() {
    let bad_json = skewinfo(&[
        "measure",
        "--state",
        "{bloch",
        "--channel",
        PHASE_FLIP_HALF,
        "--alpha",
        "0.2",
        "--beta",
        "0.2",
    ]);
    assert_eq!(bad_json.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_json.stderr).contains("state"));

    let not_psd = r#"{"matrix":[[1.2,0],[0,-0.2]]}"#;
    let out = skewinfo(&[
        "measure",
        "--state",
        not_psd,
        "--channel",
        PHASE_FLIP_HALF,
        "--alpha",
        "0.2",
        "--beta",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("state.matrix"));

    let out = skewinfo(&[
        "measure",
        "--state",
        r#"{"bloch":[0,0,1]}"#,
        "--channel",
        PHASE_FLIP_HALF,
        "--alpha",
        "0.7",
        "--beta",
        "0.7",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = skewinfo(&[
        "measure",
        "--state",
        "/nonexistent/state.json",
        "--channel",
        PHASE_FLIP_HALF,
        "--alpha",
        "0.2",
        "--beta",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(4));

    assert_eq!(
        skewinfo(&["verify", "--trials", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        skewinfo(&["measure", "--alpha", "x"]).status.code(),
        Some(2)
    );
}

fn sweep_spec(grids: &str) -> String {
    format!(
        r#"{{"state":{{"bloch":[0.3,0.4,0.5]}},"channel":{{"name":"depolarizing","params":{{"p":0.1}}}},{grids}}}"#
    )
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("grid.json");
    fs::write(
        &spec,
        sweep_spec(
            r#""alpha_grid":[0.1,0.2,0.3],"beta_grid":[0.2,0.5],"strength_grid":[0,0.1,0.2,0.3]"#,
        ),
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let run = skewinfo(&[
            "sweep",
            "--grid",
            spec.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            run.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&run.stderr)
        );
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());

    let mut reader = csv::Reader::from_reader(text.as_slice());
    assert_eq!(
        reader
            .headers()
            .unwrap()
            .iter()
            .collect::<Vec<_>>()
            .join(","),
        "alpha,beta,strength,I,J,V,W,sum_IJ,rhs_IJ,sum_VW,rhs_VW"
    );
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 24);
    for block in rows.chunks(4) {
        assert!(
            block.windows(2).all(|w| w[1][3] >= w[0][3]),
            "I nondecreasing in p"
        );
        assert!(block.iter().all(|r| (r[7] - r[8]).abs() < 1e-10));
    }
}

#[test]
fn sweep_edge_cases() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("empty.csv");
    let run = skewinfo(&[
        "sweep",
        "--grid",
        &sweep_spec(r#""alpha_grid":[],"beta_grid":[]"#),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "alpha,beta,strength,I,J,V,W,sum_IJ,rhs_IJ,sum_VW,rhs_VW\n"
    );

    let run = skewinfo(&[
        "sweep",
        "--grid",
        &sweep_spec(r#""alpha_grid":[0.5,0.9],"beta_grid":[0.2]"#),
    ]);
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains("alpha_grid[1]"));

    let unwritable = dir.path().join("missing").join("out.csv");
    let run = skewinfo(&[
        "sweep",
        "--grid",
        &sweep_spec(r#""alpha_grid":[0.1],"beta_grid":[0.1]"#),
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(4));

    let run = skewinfo(&[
        "sweep",
        "--grid",
        &sweep_spec(r#""alpha_grid":[0.1],"beta_grid":[0.2]"#),
        "--format",
        "json",
    ]);
    let rows = json(&run);
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["strength"].as_f64(), Some(0.1));
}

#[test]
fn verify_is_deterministic() {
    let a = skewinfo(&["verify", "--seed", "9", "--trials", "20"]);
    let b = skewinfo(&["verify", "--seed", "9", "--trials", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["seed"], 9);
    assert!(report["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
}

#[test]
fn mz_scan_output() {
    let config =
        r#"{"bloch":[0,0,1],"tau":{"bloch":[0,0,1]},"V":[[1,0],[0,1]],"alpha":0.5,"theta_grid":8}"#;
    let out = skewinfo(&["mz", "--config", config]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["I_alpha"].as_array().unwrap().len(), 8);
    assert_eq!(r["J_alpha"].as_array().unwrap().len(), 8);
    assert_abs_diff_eq!(r["P_tilde"].as_f64().unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r["W_tilde"].as_f64().unwrap(), 1.0, epsilon = 1e-12);
    assert!(r["duality_residual"].as_f64().unwrap() < 1e-10);
    assert!(r["closed_form_residual"].as_f64().unwrap() < 1e-8);

    let bad = r#"{"bloch":[0,0,1],"tau":{"bloch":[0,0,1]},"V":[[1,0],[0,1]],"alpha":0.5}"#;
    assert_eq!(skewinfo(&["mz", "--config", bad]).status.code(), Some(2));
}
