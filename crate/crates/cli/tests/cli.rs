//! End-to-end tests of the binary: flag contracts, exit codes, golden
//! output values, and determinism.

use std::process::{Command, Output};

fn heun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heun"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn spectrum_ground_level_matches_algebraic_root() {
    let out = heun(&[
        "spectrum", "--l", "1,2,0,8", "--p", "0.02", "--levels", "4", "--order", "8",
        "--format", "json",
    ]);
    let v = json_of(&out);
    assert_eq!(v["meta"]["schema_version"], 1);
    assert_eq!(v["results"]["pi2_units"], true);
    let energy = v["results"]["levels"][0]["energy_at_p"].as_f64().unwrap();
    // smaller algebraic root of the dim-2 invariant space; the order-8
    // truncation carries ~4e-6 of intrinsic error at p = 0.02
    let expect = -37.33577568303348;
    assert!(
        (energy - expect).abs() < 1e-5,
        "E_0(0.02) = {} vs {}",
        energy,
        expect
    );
    assert_eq!(v["results"]["levels"].as_array().unwrap().len(), 4);
}

#[test]
fn spectrum_trig_point_is_exact() {
    let out = heun(&["spectrum", "--l", "1,2,0,8", "--p", "0", "--levels", "1"]);
    let v = json_of(&out);
    assert_eq!(v["results"]["levels"][0]["coefficients"][0], "-5/3");
    let energy = v["results"]["levels"][0]["energy_at_p"].as_f64().unwrap();
    let expect = -5.0 / 3.0 * std::f64::consts::PI.powi(2);
    assert!((energy - expect).abs() < 1e-12);
}

#[test]
fn both_p_and_a_is_a_config_error() {
    let out = heun(&["spectrum", "--l", "1,2,0,8", "--p", "0.02", "--a", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_p_and_a_is_a_config_error() {
    let out = heun(&["spectrum", "--l", "1,2,0,8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn direct_engine_requires_positive_couplings() {
    let out = heun(&["spectrum", "--l", "1,0,4,1", "--p", "0.02", "--engine", "p"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn qes_census_shapes() {
    let out = heun(&["qes", "--l", "1,2,1,0", "--p", "0.1"]);
    let v = json_of(&out);
    let census = v["results"]["census"].as_array().unwrap();
    assert_eq!(census.len(), 3);
    for row in census {
        assert_eq!(row["hilbert"], "not-in-H");
    }
    let out = heun(&["qes", "--l", "1,2,0,8", "--p", "0.1"]);
    let v = json_of(&out);
    let census = v["results"]["census"].as_array().unwrap();
    assert_eq!(census.len(), 4);
    let in_h: Vec<_> = census.iter().filter(|r| r["hilbert"] == "H").collect();
    assert_eq!(in_h.len(), 1);
    assert_eq!(in_h[0]["dim"], 2);
}

#[test]
fn qes_trig_spectra_exact() {
    let out = heun(&["qes", "--l", "1,0,4,1", "--p", "0", "--trig"]);
    let v = json_of(&out);
    let census = v["results"]["census"].as_array().unwrap();
    let plus = census
        .iter()
        .find(|r| r["hilbert"] == "H+")
        .expect("H+ space present");
    assert_eq!(plus["trig_spectrum"][0], "-4");
    let minus = census
        .iter()
        .find(|r| r["hilbert"] == "H-")
        .expect("H- space present");
    assert_eq!(minus["trig_spectrum"][0], "1");
    assert_eq!(minus["trig_spectrum"][1], "17");
}

#[test]
fn qes_match_bottom_reports_levels() {
    let out = heun(&[
        "qes", "--l", "1,0,4,1", "--p", "0.02", "--order", "8", "--match-bottom",
    ]);
    let v = json_of(&out);
    let pairs = v["results"]["match_bottom"]["pairs"].as_array().unwrap();
    let levels: Vec<u64> = pairs
        .iter()
        .map(|p| p["global_level"].as_u64().unwrap())
        .collect();
    assert_eq!(levels, vec![0, 1, 3]);
}

#[test]
fn validate_single_check_passes() {
    let out = heun(&["validate", "--only", "s6.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] s6.2"));
}

#[test]
fn validate_unknown_id_is_config_error() {
    let out = heun(&["validate", "--only", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = std::env::temp_dir().join("heun-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.conf");
    std::fs::write(&path, "l = 1,2,0,8\np = 0\nlevels = 3\n# comment\nformat = \"json\"\n").unwrap();
    let out = heun(&["spectrum", "--config", path.to_str().unwrap(), "--levels", "1"]);
    let v = json_of(&out);
    // the explicit flag overrides the file value
    assert_eq!(v["results"]["levels"].as_array().unwrap().len(), 1);
    assert_eq!(v["inputs"]["p"], 0.0);
}

#[test]
fn output_is_deterministic() {
    let run = || {
        heun(&[
            "spectrum", "--l", "1,2,1/2,3/10", "--p", "0.05", "--levels", "3", "--order", "6",
        ])
        .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn csv_columns_are_stable() {
    let out = heun(&[
        "spectrum", "--l", "1,2,0,8", "--p", "0.02", "--levels", "1", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,sector,energy_at_p,truncation_margin,decay_ratio,coefficients"));
    let out = heun(&["qes", "--l", "1,2,0,8", "--p", "0.1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(
        "alpha0,alpha1,alpha2,alpha3,dim,hilbert,eigenvalues_re,eigenvalues_im,trig_spectrum"
    ));
}

#[test]
fn thread_cap_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_heun"))
        .env("HEUN_THREADS", "1")
        .args(["spectrum", "--l", "1,2,0,8", "--p", "0.02", "--levels", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
