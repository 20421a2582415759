use std::process::{Command, Output};

fn stopred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stopred"))
        .args(args)
        .env("STOPRED_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn closed_form_bounds() {
    let v = json(&stopred(&["bounds", "--n", "155", "--k", "64", "--d", "20"]));
    assert_eq!(v["reports"][1]["name"], "hs");
    assert_eq!(v["reports"][1]["value"], "1526972");
    let missing = stopred(&["bounds", "--n", "48", "--k", "24"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn golay_bounds_all_ell_as_csv() {
    let text = stdout(&stopred(&["bounds", "--code", "builtin:golay", "--all-ell", "--csv"]));
    let xi1: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("xi1,"))
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(xi1, ["12", "12", "12", "25", "49", "91", "168", "304", "540", "927", "1507", "2241"]);
}

#[test]
fn spectrum_validation_and_seed_echo() {
    let bad = stopred(&["spectrum", "--ell", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("ell"));
    let est = stopred(&["spectrum", "--ell", "4", "--estimate", "--N", "1e4"]);
    assert!(String::from_utf8_lossy(&est.stderr).contains("seed: "));
    let a = json(&stopred(&["spectrum", "--ell", "5", "--estimate", "--N", "1e4", "--seed", "3"]));
    let b = json(&stopred(&["spectrum", "--ell", "5", "--estimate", "--N", "1e4", "--seed", "3"]));
    assert_eq!(a, b);
    assert_eq!(a["sizes"][0]["u_hat"], "0");
}

#[test]
fn greedy_matrix_reloads_and_audits_clean() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g7.alist");
    let p = path.to_str().unwrap();
    let v = json(&stopred(&["greedy", "--ell", "7", "--restarts", "2", "--seed", "5", "--matrix-out", p]));
    let rows = v["rows"].as_u64().unwrap();
    assert!(rows <= 40);
    let cmp = json(&stopred(&[
        "profile", "--matrix", p, "--compare", "it,ml", "--w-max", "7", "--seed", "1",
    ]));
    let total: u64 = cmp["comparison"]["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["disagreements"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 0);
}

#[test]
fn ml_profile_and_fer() {
    let v = json(&stopred(&["profile", "--decoder", "ml"]));
    let counts: Vec<&str> = v["profile"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["count"].as_str().unwrap())
        .collect();
    assert_eq!(&counts[8..=12], ["759", "12144", "91080", "425040", "1313116"]);
    let text = stdout(&stopred(&["profile", "--decoder", "ml", "--fer", "--csv"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,fer"));
    assert_eq!(lines.count(), 10);
}

#[test]
fn ensembles() {
    let v = json(&stopred(&["ensemble", "sre", "--n", "12", "--rate", "1/2", "--analytic"]));
    let rho: f64 = v["analytic"]["bound"]["value"].as_str().unwrap().parse().unwrap();
    assert!((rho - 34.75).abs() < 0.01);
    let g = json(&stopred(&["ensemble", "gallager", "--n", "20", "--J", "3", "--K", "5", "--estimate", "--N", "2e3", "--seed", "1"]));
    assert_eq!(g["r_max"], 10);
    assert_eq!(g["estimate"]["spectrum"]["sizes"].as_array().unwrap().len(), 10);
}

#[test]
fn reproduce_profiles() {
    let out = stopred(&["reproduce", "--tables", "IV"]);
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() == 50);
    assert!(!text.contains("FAIL"));
}
