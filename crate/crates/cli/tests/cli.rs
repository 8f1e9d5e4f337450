use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const TREFOIL: &str = r#"{"strands":4,"colors_twice":[1,1,1,1],"orient":["+","-","-","+"],"word":[[2,1],[2,1],[2,1]]}"#;
const HOPF: &str = r#"{"strands":4,"colors_twice":[1,1,1,1],"orient":["+","-","+","-"],"word":[[2,1],[2,1]]}"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kauljones"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // the tool may exit before reading stdin
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

#[test]
fn unknot_v_is_quantum_dimension() {
    for (k, t) in [(4u32, 2u32), (5, 3), (2, 1)] {
        let input = format!(r#"{{"strands":2,"colors_twice":[{t},{t}],"orient":["+","-"],"word":[]}}"#);
        let v = json(&run(&["--k", &k.to_string(), "compute"], &input));
        let h = (t + 1) as f64 * std::f64::consts::PI / (k + 2) as f64;
        let g = std::f64::consts::PI / (k + 2) as f64;
        assert!((f(&v["V"]["re"]) - h.sin() / g.sin()).abs() < 1e-12);
        assert!((f(&v["J"]["re"]) - 1.0).abs() < 1e-12);
        assert_eq!(v["meta"]["k"], k);
    }
}

#[test]
fn sample_replays_byte_for_byte() {
    let args = ["sample", "--seed", "17", "--component", "both"];
    let a = run(&args, TREFOIL);
    let b = run(&args, TREFOIL);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["shots"], 832);
    assert_eq!(v["meta"]["seed"], 17);
    let c = run(&["sample", "--seed", "18", "--component", "both"], TREFOIL);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sample_shots_below_bound_rejected() {
    let out = run(&["sample", "--shots", "10"], TREFOIL);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_passes() {
    let out = run(&["verify"], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.contains("circuit vs dense"));
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(run(&["compute"], "{not json").status.code(), Some(1));
    assert_eq!(run(&["compute"], r#"{"strands":3,"colors_twice":[1,1,1],"orient":["+","-","+"],"word":[]}"#).status.code(), Some(1));
    assert_eq!(run(&["--k", "0", "compute"], TREFOIL).status.code(), Some(1));
}

#[test]
fn resource_limit_exits_two() {
    let out = run(&["--k", "300", "rt"], HOPF);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rt_empty_link() {
    let v = json(&run(&["rt"], r#"{"strands":0,"colors_twice":[],"orient":[],"word":[]}"#));
    assert!((f(&v["tau"]["re"]) - 1.0).abs() < 1e-15);
    assert_eq!(v["term_count"], 1);
}

#[test]
fn rt_framings_flag_overrides() {
    let a = json(&run(&["rt", "--framings", "1,1"], HOPF));
    let b = json(&run(&["rt", "--framings", "0,0"], HOPF));
    assert_ne!(a["tau"], b["tau"]);
    assert_eq!(a["framings"], serde_json::json!([1, 1]));
}

#[test]
fn config_file_sets_k() {
    let dir = std::env::temp_dir().join(format!("kauljones-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"k": 6}"#).unwrap();
    let v = json(&run(&["--config", cfg.to_str().unwrap(), "compute"], TREFOIL));
    assert_eq!(v["meta"]["k"], 6);
    let v = json(&run(&["--config", cfg.to_str().unwrap(), "--k", "3", "compute"], TREFOIL));
    assert_eq!(v["meta"]["k"], 3);
    std::fs::write(&cfg, r#"{"kk": 6}"#).unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "compute"], TREFOIL).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn volscan_csv() {
    let dir = std::env::temp_dir().join(format!("kauljones-vol-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("scan.csv");
    let v = json(&run(&["volscan", "--nmax", "5", "--csv", csv.to_str().unwrap()], ""));
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert!((f(&v["points"][0]["abs_J"]) - 5.0).abs() < 1e-12);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("N,abs_J,ratio"));
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(run(&["volscan", "--knot", "trefoil_right", "--nmax", "3"], "").status.code(), Some(1));
}

#[test]
fn basis_lists_labels() {
    let v = json(&run(&["basis", "--colors", "1,1,1,1"], ""));
    assert_eq!(v["dim"], 2);
    let labels = v["labels"].as_array().unwrap();
    assert_eq!(labels[0]["bits"], "000");
    assert_eq!(labels.len(), 2);
}

#[test]
fn conjugate_flag_conjugates() {
    let a = json(&run(&["compute"], TREFOIL));
    let b = json(&run(&["--conjugate-q", "compute"], TREFOIL));
    assert!((f(&a["J"]["im"]) + f(&b["J"]["im"])).abs() < 1e-12);
    assert!((f(&a["J"]["re"]) - f(&b["J"]["re"])).abs() < 1e-12);
}
