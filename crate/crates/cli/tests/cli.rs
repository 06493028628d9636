use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn holostar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holostar"))
        .args(args)
        .env_remove("HOLOSTAR_TOLERANCE_SCALE")
        .output()
        .expect("binary runs")
}

fn holostar_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_holostar"))
        .args(args)
        .env_remove("HOLOSTAR_TOLERANCE_SCALE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn synth1q_schedule(theta: &str, phi: &str, dphi: &str) -> String {
    let out = holostar(&["synth1q", "--theta", theta, "--phi", phi, "--dphi", dphi]);
    assert_eq!(code(&out), 0);
    serde_json::to_string(&json(&out)["schedule"]).unwrap()
}

#[test]
fn synth1q_quarter_turn_has_step_areas() {
    // the rounded quarter turn used on the command line
    let theta: f64 = "1.5707963".parse().unwrap();
    let out = holostar(&[
        "synth1q",
        "--theta",
        "1.5707963",
        "--phi",
        "0",
        "--dphi",
        "1.5707963",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let areas: Vec<f64> = v["schedule"]["segments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| f(&s["area"]))
        .collect();
    assert_eq!(areas.len(), 3);
    assert!((areas[0] - theta).abs() < 1e-15);
    assert!((areas[1] - PI).abs() < 1e-15);
    assert!((areas[2] - (PI - theta)).abs() < 1e-15);
    for a in [areas[0], areas[2]] {
        assert!((a - PI / 2.0).abs() < 1e-7);
    }
}

#[test]
fn synth1q_trivial_target_is_identity() {
    let v = json(&holostar(&[
        "synth1q", "--theta", "0", "--phi", "0", "--dphi", "0",
    ]));
    let m = v["target_matrix"].as_array().unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.as_array().unwrap().iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((f(&entry[0]) - want).abs() < 1e-15);
            assert!(f(&entry[1]).abs() < 1e-15);
        }
    }
}

#[test]
fn synth1q_reports_verify_distance() {
    let v = json(&holostar(&[
        "synth1q",
        "--theta",
        "1.0471976",
        "--phi",
        "0.6283185",
        "--dphi",
        "0.7",
    ]));
    assert!(f(&v["verify_distance"]) <= 1e-9);
    assert_eq!(v["pass"], true);
}

#[test]
fn invalid_flags_exit_2() {
    for args in [
        &["synth1q", "--theta", "abc", "--phi", "0", "--dphi", "0"][..],
        &["synth1q", "--theta", "4", "--phi", "0", "--dphi", "0"],
        &["synth1q", "--theta", "1", "--phi", "0"],
        &[
            "synth1q", "--theta", "1", "--phi", "0", "--dphi", "0", "--format", "csv",
        ],
        &[
            "synth1q",
            "--theta",
            "1",
            "--phi",
            "0",
            "--dphi",
            "0",
            "--tol",
            "nonsense=1",
        ],
        &["synth2q", "--theta", "1", "--k", "0", "--l", "0"],
        &["ep-sweep", "--grid", "1"],
        &["frobnicate"],
        &["verify", "/nonexistent/file.json"],
    ] {
        let out = holostar(args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn tolerance_scale_environment() {
    let run = |scale: &str| {
        Command::new(env!("CARGO_BIN_EXE_holostar"))
            .args(["ep-sweep", "--grid", "2"])
            .env("HOLOSTAR_TOLERANCE_SCALE", scale)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("0.5")), 2);
    assert_eq!(code(&run("many")), 2);
    let out = run("100");
    assert_eq!(code(&out), 0);
    assert!((f(&json(&out)["tolerance"]) - 1e-8).abs() < 1e-20);
}

#[test]
fn impossible_tolerance_is_a_verification_failure() {
    let out = holostar(&[
        "synth1q",
        "--theta",
        "1",
        "--phi",
        "0.3",
        "--dphi",
        "0.9",
        "--tol",
        "synthesis=1e-300",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn ep_sweep_rows() {
    let v = json(&holostar(&["ep-sweep", "--grid", "5"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(f(&rows[0]["theta"]), 0.0);
    assert!(f(&rows[0]["entangling_power"]).abs() <= 1e-10);
    assert_eq!(f(&rows[2]["theta"]), PI / 2.0);
    assert!((f(&rows[2]["entangling_power"]) - 2.0 / 9.0).abs() <= 1e-10);
    assert!(rows.iter().all(|r| f(&r["abs_diff"]) <= 1e-10));
}

#[test]
fn ep_sweep_csv() {
    let out = holostar(&["ep-sweep", "--grid", "4", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,entangling_power,formula,abs_diff");
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 4);
        assert!(cols[3] <= 1e-10);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let out = holostar(&["ep-sweep", "--grid", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_synthesized_schedule_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "s.json",
        &synth1q_schedule("1.0471976", "0.6283185", "0.7"),
    );
    let out = holostar(&["verify", &path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["rotations"].as_array().unwrap().len(), 1);
    assert!(f(&v["max_residuals"]["integrand"]) <= 1e-9);
    assert!((f(&v["rotations"][0]["dphi"]) - 0.7).abs() < 1e-12);
}

#[test]
fn verify_reads_stdin() {
    let schedule = synth1q_schedule("2.5", "4", "-1.2");
    let out = holostar_stdin(&["verify", "-"], &schedule);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["pass"], true);
}

fn coupling_schedule(area: f64) -> String {
    format!(
        r#"{{"document":"schedule","n_register":2,"segments":[
            {{"kind":"coupling","pair":[0,1],"mix_theta":1.2,"shape":"constant","duration":1.0,"area":{area}}}]}}"#
    )
}

#[test]
fn verify_full_coupling_passes() {
    let out = holostar_stdin(&["verify", "-"], &coupling_schedule(2.0 * PI));
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(f(&v["couplings"][0]["off_block_residual"]) <= 1e-10);
    assert!(f(&v["couplings"][0]["transport_residual"]) <= 1e-9);
}

#[test]
fn verify_half_area_coupling_fails() {
    let out = holostar_stdin(&["verify", "-"], &coupling_schedule(PI));
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(f(&v["couplings"][0]["off_block_residual"]) > 0.1);
}

#[test]
fn verify_empty_schedule_passes_trivially() {
    let out = holostar_stdin(
        &["verify", "-"],
        r#"{"document":"schedule","n_register":1,"segments":[]}"#,
    );
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for (_, r) in v["max_residuals"].as_object().unwrap() {
        assert_eq!(f(r), 0.0);
    }
}

#[test]
fn verify_lone_field_segment_fails() {
    let doc = r#"{"document":"schedule","n_register":1,"segments":[
        {"kind":"field","qubit":0,"beta":0.0,"shape":"constant","duration":1.0,"area":1.0}]}"#;
    let out = holostar_stdin(&["verify", "-"], doc);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["unrecognized"].as_array().unwrap().len(), 1);
}

#[test]
fn malformed_documents_exit_2() {
    for doc in [
        "not json",
        r#"{"document":"schedule","n_register":1}"#,
        r#"{"document":"schedule","n_register":1,"segments":[],"extra":1}"#,
        r#"{"document":"poem","lines":[]}"#,
        r#"{"document":"schedule","n_register":1,"segments":[
            {"kind":"field","qubit":3,"beta":0.0,"shape":"constant","duration":1.0,"area":1.0}]}"#,
    ] {
        let out = holostar_stdin(&["verify", "-"], doc);
        assert_eq!(
            code(&out),
            2,
            "{doc}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

const BELL: &str = r#"{
  "document": "circuit",
  "architecture": {"n_register": 2, "auxiliary_state": 0},
  "gates": [
    {"kind": "rot", "qubit": 0, "theta": 1.5707963267948966, "phi": 0.0, "dphi": 0.7853981633974483},
    {"kind": "rot", "qubit": 1, "theta": 1.5707963267948966, "phi": 0.0, "dphi": 0.7853981633974483},
    {"kind": "ent", "k": 0, "l": 1, "theta": 1.5707963267948966}
  ]
}"#;

#[test]
fn simulate_circuit_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bell.json", BELL);
    let out = holostar(&["simulate", &path]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(f(&v["aux_match_probability"]) >= 1.0 - 1e-10);
    assert!(f(&v["ideal_fidelity"]) >= 1.0 - 1e-9);
    let amps: Vec<(f64, f64)> = v["register_state"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (f(&a[0]), f(&a[1])))
        .collect();
    // 2|a00 a11 - a01 a10|² is the linear entropy of either qubit
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let (p, q) = (mul(amps[0], amps[3]), mul(amps[1], amps[2]));
    let entropy = 2.0 * ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2));
    assert!((entropy - 0.5).abs() <= 1e-9);
}

#[test]
fn simulate_input_bits() {
    let out = holostar_stdin(&["simulate", "-", "--input", "10"], BELL);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["input_bits"], "10");
    assert_eq!(
        code(&holostar_stdin(&["simulate", "-", "--input", "101"], BELL)),
        2
    );
}

#[test]
fn verify_circuit_document() {
    let out = holostar_stdin(&["verify", "-"], BELL);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["document"], "circuit");
    assert_eq!(v["rotations"].as_array().unwrap().len(), 2);
    assert_eq!(v["couplings"].as_array().unwrap().len(), 1);
    assert_eq!(v["simulation"].as_array().unwrap().len(), 5);
}

#[test]
fn random_circuit_round_trips_through_a_file() {
    let first = holostar(&[
        "simulate",
        "--random",
        "12",
        "--n-register",
        "3",
        "--aux",
        "1",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&first), 0);
    let v = json(&first);
    assert_eq!(v["shots"], Value::Null);
    let dir = tempfile::tempdir().unwrap();
    // the report prints the circuit with 17 digits, so rebuilding it from the
    // parsed JSON must give back the same simulation bytes
    let path = write(
        dir.path(),
        "c.json",
        &serde_json::to_string(&v["circuit"]).unwrap(),
    );
    let second = holostar(&["simulate", &path]);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn seeded_runs_are_deterministic() {
    let args = [
        "simulate",
        "--random",
        "8",
        "--n-register",
        "2",
        "--seed",
        "4",
        "--shots",
        "50",
    ];
    let a = holostar(&args);
    let b = holostar(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(
        v["shots"]["matched"].as_u64().unwrap() + v["shots"]["mismatched"].as_u64().unwrap(),
        50
    );
}

#[test]
fn phase_report_tracks_dphi() {
    let out = holostar(&[
        "phase-report",
        "--theta",
        "0.8",
        "--phi",
        "2",
        "--grid",
        "6",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for r in rows {
        assert!(f(&r["error"]) <= 1e-6);
        assert!(f(&r["dynamical_phase"]).abs() <= 1e-6);
    }
    let csv = holostar(&[
        "phase-report",
        "--theta",
        "0.8",
        "--phi",
        "2",
        "--grid",
        "6",
        "--format",
        "csv",
    ]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 13);
}

#[test]
fn synth2q_blocks() {
    let out = holostar(&["synth2q", "--theta", "1.5707963267948966"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(f(&v["off_block_residual"]) <= 1e-10);
    assert!((f(&v["entangling_power"]) - 2.0 / 9.0).abs() <= 1e-10);
    assert!((f(&v["schedule"]["segments"][0]["area"]) - 2.0 * PI).abs() < 1e-15);
    // u0 ends in -1 on |11⟩, u1 starts with -1 on |00⟩
    assert!((f(&v["u0"][3][3][0]) + 1.0).abs() < 1e-10);
    assert!((f(&v["u1"][0][0][0]) + 1.0).abs() < 1e-10);
}
