use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_theta-units"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = bin(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (doc, out.status.code().unwrap())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_b_10_3() {
    let (doc, code) = json(&[
        "eval", "--kind", "b", "--m", "10", "--n", "3", "--prec", "256",
    ]);
    assert_eq!(code, 0);
    // (√2 − 1)² = 3 − 2√2
    let v = doc["value"].as_str().unwrap();
    assert!(
        v.starts_with("0.171572875253809902396622551580603842860656249246103853646640524"),
        "{v}"
    );
    assert_eq!(v.len(), "0.".len() + 67);
    assert!(doc["representations"]["eta_quotient"].is_string());
}

#[test]
fn eval_trivial_and_classical() {
    let (doc, code) = json(&["eval", "--kind", "b", "--m", "7", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(doc["value"].as_str().unwrap().starts_with("1.000000000000"));
    let (doc, code) = json(&["eval", "--kind", "g", "--n", "2", "--prec", "128"]);
    assert_eq!(code, 0);
    assert!(doc["value"]
        .as_str()
        .unwrap()
        .starts_with("1.0000000000000000"));
}

#[test]
fn eval_domain_errors() {
    assert_eq!(
        bin(&["eval", "--m", "0", "--n", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["eval", "--m", "10", "--n", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["--prec", "8", "eval", "--n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn derive_5_3() {
    let (doc, code) = json(&["derive", "--m", "5", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["unit_product"], "(1+√2)^(-2)");
    assert_eq!(doc["h"], 4);
    assert_eq!(doc["d"], -120);
    assert_eq!(doc["printed_table"]["status"], "pass");
}

#[test]
fn derive_23_7_annotates_the_table() {
    let (doc, code) = json(&["derive", "--m", "23", "--n", "7"]);
    assert_eq!(code, 0);
    let selected: Vec<(i64, i64)> = doc["decompositions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["selected"] == true)
        .map(|r| (r["d1"].as_i64().unwrap(), r["d2"].as_i64().unwrap()))
        .collect();
    assert_eq!(selected, [(56, -23), (161, -8)]);
    assert_eq!(doc["printed_table"]["status"], "pass-corrected");
    let notes = doc["printed_table"]["notes"].to_string();
    assert!(
        notes.contains("56×(−23)") && notes.contains("√161"),
        "{notes}"
    );
}

#[test]
fn derive_hypothesis_failure() {
    let out = bin(&["derive", "--m", "4", "--n", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn enumerate_bounds() {
    let (doc, _) = json(&["enumerate", "--bound", "10000"]);
    assert_eq!(
        (doc["one_class"].as_u64(), doc["two_class"].as_u64()),
        (Some(7), Some(3))
    );
    // 8·5·3 = 120 is the smallest admissible discriminant size
    let (doc, _) = json(&["enumerate", "--bound", "120"]);
    assert_eq!(doc["pairs"].as_array().unwrap().len(), 1);
    assert_eq!(doc["pairs"][0]["b"], "b_{10,3}");
    let (doc, _) = json(&["enumerate", "--bound", "10"]);
    assert!(doc["pairs"].as_array().unwrap().is_empty());
    let (doc, _) = json(&["enumerate", "--bound", "10000", "--all"]);
    assert_eq!(doc["pairs"].as_array().unwrap().len(), 20);
}

#[test]
fn classdata_and_recognize() {
    let (doc, code) = json(&["classdata", "--d", "-1288"]);
    assert_eq!(code, 0);
    assert_eq!(
        (doc["h"].as_u64(), doc["classes_per_genus"].as_u64()),
        (Some(8), Some(2))
    );
    let (doc, _) = json(&["classdata", "--d", "161"]);
    assert_eq!(doc["unit"]["display"], "11775+928√161");
    assert_eq!(bin(&["classdata", "--d", "-12"]).status.code(), Some(2));

    let lit = "0.17157287525380990239662255158060384286065624924610385364664052401855";
    let (doc, code) = json(&["recognize", lit]);
    assert_eq!(code, 0);
    assert_eq!(doc["polynomial"], "x^2 - 6x + 1");
    assert_eq!(doc["unit"], true);
    // π is not quadratic
    let (_, code) = json(&[
        "recognize",
        "3.14159265358979323846264338327950288419716939937510582",
        "--max-deg",
        "2",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn derive_gn_46() {
    let (doc, code) = json(&["derive-gn", "--k", "46"]);
    assert_eq!(code, 0);
    assert_eq!(doc["branch"], "principal");
    // x = 29 + 4√46
    assert!(doc["x"].as_str().unwrap().starts_with("56.129319932"));
    assert_eq!(bin(&["derive-gn", "--k", "45"]).status.code(), Some(2));
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        &["derive", "--m", "17", "--n", "7"][..],
        &["eval", "--kind", "G", "--n", "5/3"],
        &["verify-paper"],
    ] {
        let mut all = vec!["--json"];
        all.extend_from_slice(args);
        let text = stdout(&bin(&all));
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(theta_units::render::json(&doc), text, "{args:?}");
        // and deterministic across runs
        assert_eq!(stdout(&bin(&all)), text);
    }
}

fn pass_set(doc: &Value) -> Vec<(String, String)> {
    doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["id"].as_str().unwrap().into(),
                e["status"].as_str().unwrap().into(),
            )
        })
        .collect()
}

#[test]
fn verify_corpus_default_and_high_precision() {
    let (doc, code) = json(&["verify-paper"]);
    assert_eq!(code, 0);
    let s = &doc["summary"];
    assert_eq!(s["by_kind"]["b-value"], "10/10");
    assert_eq!(s["by_kind"]["class-data"], "10/10");
    assert_eq!(s["by_kind"]["g-value"], "2/2");
    assert_eq!(s["fail"], 0);
    let corrected: Vec<_> = pass_set(&doc)
        .into_iter()
        .filter(|(_, s)| s == "pass-corrected")
        .map(|(id, _)| id)
        .collect();
    assert_eq!(corrected, ["class_46_7", "ratio_46", "s_94"]);

    let (hi, code) = json(&["--prec", "512", "verify-paper", "--parallel"]);
    assert_eq!(code, 0);
    assert_eq!(pass_set(&hi), pass_set(&doc));
}

#[test]
fn corrupted_corpus_names_the_entry() {
    let text = include_str!("../data/corpus.toml").replacen(
        "expr = \"(pow (sub (sqrt 10) 3) 2)\"",
        "expr = \"(pow (sub (sqrt 10) 3) 3)\"",
        1,
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.toml");
    std::fs::write(&path, text).unwrap();
    let out = bin(&["verify-paper", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let s = stdout(&out);
    let failed = s.lines().find(|l| l.contains("failed_ids")).unwrap();
    assert_eq!(failed.trim(), "failed_ids: [b_14_5]");

    std::fs::write(&path, "[[entry]]\nid = 3\n").unwrap();
    let out = bin(&["verify-paper", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
