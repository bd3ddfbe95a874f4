use std::process::Command;

use gq_core::cli::{run, Outcome, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use gq_core::io;
use proptest::prelude::*;

fn gq(args: &[&str], stdin: &str) -> Outcome {
    let mut input = stdin.as_bytes();
    run(std::iter::once("gq").chain(args.iter().copied()), &mut input)
}

fn example(name: &str) -> String {
    let out = gq(&["example", name], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    out.stdout
}

#[test]
fn every_example_validates() {
    for name in ["z3", "zk", "z2n", "pres0", "pres1", "pres2"] {
        let out = gq(&["validate", "-"], &example(name));
        assert_eq!(out.code, EXIT_OK, "{name}: {}{}", out.stdout, out.stderr);
    }
}

#[test]
fn binary_pipeline() {
    let exe = env!("CARGO_BIN_EXE_gq");
    let ex = Command::new(exe).args(["example", "z3"]).output().unwrap();
    assert!(ex.status.success());
    let dir = std::env::temp_dir().join(format!("gq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("z3.json");
    std::fs::write(&file, &ex.stdout).unwrap();
    let v = Command::new(exe).arg("validate").arg(&file).output().unwrap();
    assert_eq!(v.status.code(), Some(0));
    let bad = Command::new(exe).arg("validate").arg(dir.join("missing.json")).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pres1_word_problem() {
    let p = example("pres1");
    let out = gq(&["equal", "-", "[1,2] [2,1]", "[1,3] [3,1]"], &p);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "equal\n"));
    let out = gq(&["oracle-check", "-", "--max-len", "5"], &p);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let out = gq(&["equal", "-", "--groupoid", "[1,2] ~[3,2]", "[1,3] [3,2] ~[3,2] ~[1,3] [1,2] ~[3,2]"], &p);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let out = gq(&["equal", "-", "--groupoid", "[1,2] ~[3,2]", "[1,3]"], &p);
    assert_eq!(out.code, EXIT_FAIL);
}

#[test]
fn lcm_and_normal_form() {
    let p = example("pres1");
    let out = gq(&["lcm", "-", "--right", "[1,2]", "[1,3]"], &p);
    assert_eq!(out.stdout, "[1,2] [2,1]\n");
    let out = gq(&["lcm", "-", "--left", "[2,1]", "[3,1]"], &p);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.ends_with(" [2,1]\n") || out.stdout.ends_with(" [3,1]\n"));
    let out = gq(&["lcm", "-", "--right", "--left", "[1,2]", "[1,3]"], &p);
    assert_eq!(out.code, EXIT_USAGE);
    let z3 = example("z3");
    let out = gq(&["normal-form", "-", "[0,1] [1,1]"], &z3);
    assert_eq!(out.stdout, "([0,0] [0,1])\n");
    let out = gq(&["normal-form", "-", "eps:2"], &z3);
    assert_eq!(out.stdout, "eps:2\n");
}

#[test]
fn garside_family_summary() {
    let out = gq(&["garside-family", "-"], &example("z3"));
    assert!(out.stdout.ends_with("24 elements (21 non-identity), max length 3\n"), "{}", out.stdout);
    let json = gq(&["--json", "garside-family", "-"], &example("z3"));
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["count"], 24);
}

#[test]
fn derive_rc_tables() {
    let z3 = example("z3");
    let star = gq(&["derive-rc", "-"], &z3);
    assert_eq!(star.stdout.lines().count(), 27);
    assert!(star.stdout.contains("[0,1] ⋆ [0,2] = [1,0]\n"));
    let done = gq(&["derive-rc", "-", "--complete"], &z3);
    assert!(done.stdout.contains("[0,1] ⋆ [0,1] = eps:1\n"), "{}", done.stdout);
    let co = gq(&["derive-rc", "-", "--co"], &z3);
    assert_eq!(co.stdout.lines().count(), 27);
    let grid = gq(&["grid", "-", "--star", "[0,1]", "[0,2]"], &z3);
    assert_eq!(grid.stdout, "p ⋆ q = [1,0]\nq ⋆ p = [2,0]\n");
}

#[test]
fn from_presentation_writes_solution() {
    let out = gq(&["from-presentation", "-", "-o", "-"], &example("pres0"));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stderr.contains("round trip: ok"));
    let v = gq(&["validate", "-"], &out.stdout);
    assert_eq!(v.code, EXIT_OK);
    let broken = example("pres1").replacen("\"[3,1]\"\n      ]", "\"[3,2]\"\n      ]", 1);
    if broken != example("pres1") {
        assert_ne!(gq(&["from-presentation", "-"], &broken).code, EXIT_OK);
    }
}

#[test]
fn heaps_and_groups() {
    let heap = io::serialize(&io::heap_document(&gq_core::builtin::zk_heap(3)));
    let out = gq(&["check-heap", "-"], &heap);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let out = gq(&["from-heap", "-", "-o", "-"], &heap);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, example("z3"));
    let s3 = io::serialize(&io::group_document(&gq_core::heap::GroupTable::symmetric(3)));
    let out = gq(&["from-group", "-"], &s3);
    assert!(out.stdout.contains("abelian: no\ninvolutive: no\n"), "{}", out.stdout);
    let proj = gq_core::heap::TernaryOp::from_fn(vec!["x".into(), "y".into()], |_, b, _| b).unwrap();
    let out = gq(&["check-heap", "-"], &io::serialize(&io::heap_document(&proj)));
    assert_eq!(out.code, EXIT_FAIL);
}

#[test]
fn violation_cap_and_json() {
    let z3 = example("z3");
    // Break one σ entry: the braid check then reports several violations.
    let broken = z3.replacen("\"out\": [\n        \"[0,0]\",\n        \"[0,0]\"", "\"out\": [\n        \"[0,1]\",\n        \"[1,0]\"", 1);
    assert_ne!(broken, z3);
    let out = gq(&["--json", "--max-violations", "1", "validate", "-"], &broken);
    assert_eq!(out.code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    for k in ["braid", "involutive", "nondegenerate"] {
        assert!(v[k]["violations"].as_array().unwrap().len() <= 1);
    }
}

#[test]
fn errors_are_usage() {
    assert_eq!(gq(&["validate", "-"], "not json").code, EXIT_USAGE);
    assert_eq!(gq(&["example", "nope"], "").code, EXIT_USAGE);
    let out = gq(&["validate", "-"], r#"{"kind":"solution","format_version":1,"vertices":[],"arrows":[]}"#);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("sigma"));
    assert_eq!(gq(&["normal-form", "-", "[0,1] [2,0]"], &example("z3")).code, EXIT_USAGE);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn serialization_is_canonical(seed in any::<u64>(), name in prop::sample::select(vec!["z3", "z2n", "pres0", "pres1", "pres2"])) {
        // Shuffling lists in the document does not change the canonical text.
        let text = example(name);
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["vertices", "arrows", "sigma", "relations"] {
            if let Some(a) = v.get_mut(key).and_then(|x| x.as_array_mut()) {
                let n = a.len();
                if n > 1 {
                    a.rotate_left((seed as usize) % n);
                    a.swap(0, n - 1);
                }
            }
        }
        let doc = io::parse(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(io::serialize(&doc), text);
    }
}
