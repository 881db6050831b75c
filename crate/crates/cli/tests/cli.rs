use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mflab"))
        .args(args)
        .env_remove("MFLAB_MEMORY_CAP_MB")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn workspace_file(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    root.join(rel).to_string_lossy().into_owned()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mflab-cli-{}-{name}", std::process::id()))
}

#[test]
fn ext_examples() {
    let cases = [
        (["--f", "x*y", "--M", "S{1}", "--N", "S{2}"], 1),
        (["--f", "x*y", "--M", "R", "--N", "S{1}"], 0),
        (["--f", "x*y*(x+y)", "--M", "S{1}", "--N", "S{1,2}"], 0),
    ];
    for (args, dim) in cases {
        let mut full = vec!["ext"];
        full.extend(args);
        let out = mflab(&full);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["stable_dim"], dim, "{args:?}");
        for key in ["p", "vars", "d_schedule", "seed", "artifact_version"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn ext_with_both_engines() {
    let out = mflab(&["ext", "--f", "x*y*(x+y)", "--M", "S{1}", "--N", "S{2,3}", "--cocycle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["engines_agree"], true);
    assert_eq!(v["stable_dim"], v["cocycle"]["stable_dim"]);
}

#[test]
fn parse_errors_exit_one() {
    let out = mflab(&["ext", "--f", "x*y", "--M", "T{1}", "--N", "S{2}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        mflab(&["ext", "--f", "x*y+", "--M", "R", "--N", "R"]).status.code(),
        Some(1)
    );
    assert_eq!(
        mflab(&["ext", "--f", "x*y", "--M", "S{3}", "--N", "R"]).status.code(),
        Some(1)
    );
    assert_eq!(mflab(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn ct_check_exit_codes() {
    assert_eq!(
        mflab(&["ct-check", "--f", "x*y*(x+y)", "--omega", "1,2,3"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mflab(&["ct-check", "--f", "x*y", "--omega", "2,1"]).status.code(),
        Some(0)
    );
    let out = mflab(&["ct-check", "--f", "x*(x^2+y^3)"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["overall"], "refuted");
    assert!(v["catalog"]["refutation"]["module"]["phi"].is_array());
}

#[test]
fn module_constructions() {
    let k = json(&mflab(&["knoerrer", "--f", "x*y", "--M", "S{1}"]));
    assert_eq!(k["valid"], true);
    assert_eq!(k["vars"], serde_json::json!(["x", "y", "u", "v"]));
    let s = json(&mflab(&["syzygy", "--f", "x*y", "--M", "S{1}"]));
    assert_eq!(s["module"]["phi"], serde_json::json!([["y"]]));
    let d = json(&mflab(&["dual", "--f", "x*y", "--M", "knoerrer(S{1})"]));
    assert_eq!(d["valid"], true);
    let w = mflab(&["witness", "--f", "x*y*(x^2+y^3)"]);
    assert_eq!(w.status.code(), Some(0));
    assert_eq!(json(&w)["bad_index"], 3);
    assert_eq!(mflab(&["witness", "--f", "x*y"]).status.code(), Some(1));
}

#[test]
fn json_files_round_trip_through_specs() {
    let path = tmp("k.json");
    let path_s = path.to_string_lossy().into_owned();
    let out = mflab(&["syzygy", "--f", "x*y", "--M", "syz(S{1})", "--out", &path_s]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::write(&path, report["module"].to_string()).unwrap();
    let iso = json(&mflab(&["iso", "--f", "x*y", "--M", &path_s, "--N", "S{1}"]));
    assert_eq!(iso["verdict"], "isomorphic");
    std::fs::remove_file(&path).ok();
}

#[test]
fn iso_and_tor() {
    let iso = mflab(&[
        "iso",
        "--f",
        "x*y",
        "--M",
        "syz(knoerrer(S{1}))",
        "--N",
        "knoerrer(syz(S{1}))",
    ]);
    assert_eq!(iso.status.code(), Some(0));
    assert_eq!(json(&iso)["verdict"], "isomorphic");
    let no = json(&mflab(&["iso", "--f", "x*y*(x+y)", "--M", "S{1}", "--N", "S{2}"]));
    assert_eq!(no["verdict"], "not-isomorphic");
    let tor = json(&mflab(&["tor", "--f", "x*y", "--M", "S{1}", "--N", "S{1}", "--i", "2"]));
    assert_eq!(tor["stable_dim"], 0);
}

#[test]
fn pushforward_and_endo_probe() {
    let pf = mflab(&["pushforward", "--f", "x*y", "--M", "knoerrer(S{1})"]);
    assert_eq!(pf.status.code(), Some(0));
    assert_eq!(json(&pf)["rank_accounting"]["holds"], true);
    let ep = mflab(&["endo-probe", "--f", "x*y", "--M", "R", "--N", "knoerrer(S{1})"]);
    assert_eq!(
        ep.status.code(),
        Some(1),
        "R and a Knörrer image live over different rings"
    );
    let ep = mflab(&[
        "endo-probe",
        "--f",
        "x*y",
        "--M",
        "sum(knoerrer(R), knoerrer(S{1}))",
        "--N",
        "knoerrer(S{1})",
    ]);
    assert_eq!(ep.status.code(), Some(0));
    assert_eq!(json(&ep)["pd"], 0);
}

#[test]
fn schedule_flag_is_validated_and_echoed() {
    let out = mflab(&[
        "ext",
        "--f",
        "x*y",
        "--M",
        "S{1}",
        "--N",
        "S{2}",
        "--schedule",
        "6,8,10,12",
    ]);
    assert_eq!(json(&out)["d_schedule"], serde_json::json!([6, 8, 10, 12]));
    assert_eq!(
        mflab(&["ext", "--f", "x*y", "--M", "S{1}", "--N", "S{2}", "--schedule", "8,10"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["ct-check", "--f", "x*y*(x+y)", "--omega", "2,3,1", "--seed", "9"];
    assert_eq!(mflab(&args).stdout, mflab(&args).stdout);
}

#[test]
fn suite_empty_and_negative_control() {
    let empty = tmp("empty.json");
    std::fs::write(&empty, "{}").unwrap();
    let out = mflab(&["suite", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"], serde_json::json!([]));

    let claim = tmp("claim.json");
    std::fs::write(
        &claim,
        r#"{"checks": [{"kind": "rigid_claim", "f": "x*y*(x+y)", "modules": ["S{1}", "S{2,3}"]}]}"#,
    )
    .unwrap();
    let out = mflab(&["suite", claim.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["checks"][0]["pass"], false);

    let bad = tmp("bad.json");
    std::fs::write(&bad, r#"{"checks": [{"kind": "nestedness"}]}"#).unwrap();
    assert_eq!(mflab(&["suite", bad.to_str().unwrap()]).status.code(), Some(1));
    for p in [empty, claim, bad] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn shipped_default_suite_passes() {
    let out = mflab(&["suite", &workspace_file("configs/default_suite.json"), "--quiet"]);
    let v = json(&out);
    assert_eq!(out.status.code(), Some(0), "{}", v["checks"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["failed"], 0);
}
