use std::process::Command;

use mproj_core::{EvConstSeq, GeoTailSeq};
use serde_json::Value;

fn mproj(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mproj")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let doc: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (out.status.code().expect("exit code"), doc, text)
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().expect("number") - want).abs() <= tol
}

#[test]
fn remez_reproduces_the_cubic_level() {
    let (code, doc, _) = mproj(&["remez", "--function", "poly", "0", "-1", "0", "1", "--degree", "2"]);
    assert_eq!(code, 0);
    let cert = &doc["certificate"];
    assert!(close(&cert["A"], 1.0 / 32.0, 1e-10));
    assert_eq!(cert["eps"], -1);
    assert!(close(&cert["coeffs"][2], 1.5, 1e-9));
    assert_eq!(doc["check"]["ok"], true);
    assert_eq!(doc["residual_measure"]["atoms"].as_array().unwrap().len(), 4);
}

#[test]
fn catalog_functions() {
    let (code, doc, _) = mproj(&["remez", "--function", "sin", "4", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(close(&doc["certificate"]["A"], 1.0, 1e-9));
    for f in [&["abs", "0.5"][..], &["exp"][..]] {
        let mut args = vec!["remez", "--function"];
        args.extend_from_slice(f);
        args.extend_from_slice(&["--degree", "1"]);
        assert_eq!(mproj(&args).0, 0, "{f:?}");
    }
    let (code, doc, _) = mproj(&["remez", "--function", "cosh", "--degree", "1"]);
    assert_eq!((code, doc["error"]["kind"].as_str()), (2, Some("usage")));
}

#[test]
fn project_l1_canonical_and_members() {
    let (code, doc, _) = mproj(&["project-l1", "--x", "[2,1]", "--r", "1", "--sample", "3"]);
    assert_eq!(code, 0);
    assert!(close(&doc["canonical"]["head"][0], 2.0 / 3.0, 1e-15));
    assert!(close(&doc["canonical"]["head"][1], 1.0 / 3.0, 1e-15));
    assert!(close(&doc["distance"], 2.0, 0.0));
    assert_eq!(doc["members"].as_array().unwrap().len(), 3);
    assert_eq!(doc["members_verified"], true);

    let (_, doc, _) = mproj(&["project-l1", "--x", "[0,3]", "--r", "1"]);
    assert_eq!(doc["singleton"]["head"], serde_json::json!([0.0, 1.0]));
}

#[test]
fn project_c0_distance_is_the_limit() {
    let x = r#"{"kind":"evconst","head":[3,2],"tail":2}"#;
    let (code, doc, _) = mproj(&["project-c0", "--x", x, "--sample", "4", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["distance"], 2.0);
    assert_eq!(doc["canonical"]["head"], serde_json::json!([1.0]));
    assert_eq!(doc["members"].as_array().unwrap().len(), 4);
}

#[test]
fn coderivative_verdicts() {
    let (code, doc, _) = mproj(&["coderiv", "--space", "c-to-c0", "--case", "limit-functional", "--q0", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "CONSISTENT");
    assert_eq!(doc["mode"], "consistency");

    let (_, doc, _) =
        mproj(&["coderiv", "--space", "c-to-c0", "--case", "limit-functional", "--q0", "3", "--psi", "[0, 1]"]);
    assert_eq!(doc["verdict"], "EXCLUDED");

    let (_, doc, _) = mproj(&["coderiv", "--space", "l1-ball", "--case", "dual-target"]);
    assert_eq!(doc["verdict"], "EXCLUDED");
    assert_eq!(doc["path"], "spike-sequence");

    let (_, doc, _) = mproj(&["coderiv", "--space", "c01-to-pn", "--case", "negative-pairing"]);
    assert_eq!(doc["verdict"], "EXCLUDED");
    assert!(close(&doc["extrapolated"], 1.0, 1e-12));

    let (code, doc, _) = mproj(&["coderiv", "--space", "l1-ball", "--case", "interior"]);
    assert_eq!((code, doc["verdict"].as_str()), (0, Some("CONSISTENT")));
}

#[test]
fn duality_memberships() {
    let (code, doc, _) = mproj(&["duality", "--space", "l1", "--x", "[1,1]", "--phi", r#"{"kind":"evconst","head":[],"tail":2}"#]);
    assert_eq!((code, doc["member"].as_bool()), (0, Some(true)));
    let (_, doc, _) = mproj(&["duality", "--space", "c", "--x", r#"{"kind":"evconst","head":[],"tail":2}"#, "--phi", "[1,1]"]);
    assert_eq!(doc["member"], true);
    let (_, doc, _) = mproj(&["duality", "--space", "c01", "--function", "poly", "-1", "2", "--mu", r#"[{"t":0,"w":-0.5},{"t":1,"w":0.5}]"#]);
    assert_eq!(doc["member"], true);
    let (_, doc, _) = mproj(&["duality", "--space", "c01", "--function", "poly", "0", "-1", "0", "1", "--degree", "2"]);
    assert_eq!(doc["member"], true);
}

#[test]
fn oracle_agrees_with_descriptor() {
    let (code, doc, _) = mproj(&["oracle", "--x", "[0.5,0.3,0.2]", "--r", "0.6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["descriptor_agrees"], true);
    assert!(close(&doc["oracle"]["min_distance"], 0.4, 1e-2));
}

#[test]
fn exit_codes() {
    // domain errors
    for args in [
        &["project-l1", "--x", "[-1,2]", "--r", "1", "--sample", "2"][..],
        &["project-l1", "--x", "[1]", "--r", "-1"][..],
        &["coderiv", "--space", "l1-ball", "--case", "theta-target", "--x", "[1,0,1]"][..],
        &["coderiv", "--space", "c-to-c0", "--case", "general-functional", "--phi", "[1]"][..],
        &["remez", "--function", "exp", "--degree", "2", "--max-iterations", "0"][..],
        &["oracle", "--x", "[1,1,1,1,1]", "--r", "1"][..],
    ] {
        let (code, doc, _) = mproj(args);
        assert_eq!(code, 1, "{args:?}: {doc}");
        assert!(doc["error"]["message"].is_string());
        assert_ne!(doc["error"]["kind"], "usage");
    }
    // usage errors
    for args in [
        &["project-l1", "--x", "[2,1]", "--r", "1", "--bogus"][..],
        &["project-l1", "--x", "[2,1", "--r", "1"][..],
        &["project-l1", "--r", "1"][..],
        &["frobnicate"][..],
        &["coderiv", "--space", "l1-ball", "--case", "mass-gap"][..],
        &["duality", "--space", "c", "--x", "[1]"][..],
    ] {
        let (code, doc, _) = mproj(args);
        assert_eq!(code, 2, "{args:?}: {doc}");
        assert_eq!(doc["error"]["kind"], "usage");
    }
    let (code, doc, _) = mproj(&["--help"]);
    assert_eq!(code, 0);
    assert!(doc["help"].as_str().unwrap().contains("project-l1"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let runs = [
        &["project-c0", "--x", r#"{"kind":"evconst","head":[0.1,-0.7],"tail":-0.3}"#, "--sample", "6", "--seed", "9"][..],
        &["project-l1", "--x", r#"{"kind":"geotail","head":[1,2],"geo":1}"#, "--r", "1", "--sample", "5", "--seed", "4"][..],
        &["coderiv", "--space", "c-to-c0", "--case", "general-functional", "--mode", "consistency", "--seed", "2"][..],
    ];
    for args in runs {
        assert_eq!(mproj(args).2, mproj(args).2, "{args:?}");
    }
}

#[test]
fn emitted_sequences_round_trip() {
    let (_, doc, _) =
        mproj(&["project-l1", "--x", r#"{"kind":"geotail","head":[1,2],"geo":1}"#, "--r", "1", "--sample", "5", "--seed", "4"]);
    for m in doc["members"].as_array().unwrap() {
        let y: GeoTailSeq = serde_json::from_value(m.clone()).unwrap();
        assert_eq!(&serde_json::to_value(&y).unwrap(), m);
    }
    let (_, doc, _) = mproj(&["project-c0", "--x", r#"{"kind":"evconst","head":[0.1],"tail":-0.3}"#, "--sample", "4"]);
    for m in doc["members"].as_array().unwrap() {
        let y: EvConstSeq = serde_json::from_value(m.clone()).unwrap();
        assert_eq!(&serde_json::to_value(&y).unwrap(), m);
        // feeding an emitted sequence back in is accepted as-is
        let (code, back, _) = mproj(&["project-c0", "--x", &m.to_string()]);
        assert_eq!((code, back["distance"].as_f64()), (0, Some(0.0)));
    }
}

#[test]
fn payload_file_supplies_flags() {
    let path = std::env::temp_dir().join(format!("mproj-payload-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"x": [2, 1], "r": 1, "sample": 2}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, doc, _) = mproj(&["project-l1", "--json", p]);
    assert_eq!(code, 0);
    assert_eq!(doc["members"].as_array().unwrap().len(), 2);
    // explicit flags win
    let (_, doc, _) = mproj(&["project-l1", "--json", p, "--r", "2"]);
    assert_eq!(doc["distance"], 1.0);
    std::fs::write(&path, r#"{"function": "poly 0 -1 0 1", "degree": 2}"#).unwrap();
    let (code, doc, _) = mproj(&["remez", "--json", p]);
    assert!(code == 0 && close(&doc["certificate"]["A"], 1.0 / 32.0, 1e-10));
    std::fs::write(&path, r#"{"x": [2, 1], "r": 1, "colour": "red"}"#).unwrap();
    assert_eq!(mproj(&["project-l1", "--json", p]).0, 2);
    std::fs::remove_file(&path).ok();
}
