use std::io::Write;
use std::process::{Command, Output, Stdio};

fn isokw(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_isokw"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn gen(kind: &str, n: &str) -> Vec<u8> {
    let o = isokw(&["gen", "--kind", kind, "--n", n], None);
    assert!(o.status.success());
    o.stdout
}

#[test]
fn bouquet_spin_structures() {
    let o = isokw(&["spin-structures"], Some(&gen("bouquet", "1")));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["count"], 16);
    let sums: Vec<i64> = v["result"]["structures"].as_array().unwrap().iter().map(|s| s["gauss_sum"].as_i64().unwrap()).collect();
    assert!(sums.iter().all(|s| s.abs() == 4));
    assert_eq!(v["hypotheses"]["passed"], true);
    assert_eq!(v["map_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn seeded_reports_are_identical() {
    let map = gen("triangular", "2");
    let args = ["duality-check", "--random-characters", "10", "--seed", "7"];
    let a = isokw(&args, Some(&map));
    let b = isokw(&args, Some(&map));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["result"]["max_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["tolerance"], 1e-9);
}

#[test]
fn exit_codes() {
    let square = gen("square", "1");
    // missing seed
    assert_eq!(isokw(&["tau", "--random-characters", "3"], Some(&square)).status.code(), Some(2));
    // unknown flag
    assert_eq!(isokw(&["tau", "--nope"], Some(&square)).status.code(), Some(2));
    // wrong basis length
    assert_eq!(isokw(&["tau", "--character", "exp:1/2"], Some(&square)).status.code(), Some(2));
    let cone = br#"{"darts":2,"reversal":[1,0],"rotation":[1,0],"theta":[{"num":1,"den":4}]}"#;
    let o = isokw(&["partition"], Some(cone));
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["status"], "hypothesis_violation");
    let o = isokw(&["delta-check"], Some(&gen("bouquet", "1")));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(isokw(&["validate"], Some(b"{}")).status.code(), Some(1));
}

#[test]
fn character_forms() {
    let square = gen("square", "1");
    let a = json(&isokw(&["tau", "--character", "exp:1/1,-1+0i"], Some(&square)));
    let t = a["result"]["values"][0]["tau"][0].as_f64().unwrap();
    assert!((t - 16.0 * (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
    let o = isokw(&["laplacian", "--all-sign-characters"], Some(&square));
    let dets: Vec<f64> = json(&o)["result"]["values"].as_array().unwrap().iter().map(|r| r["det"][0].as_f64().unwrap()).collect();
    for (d, want) in dets.iter().zip([0.0, 4.0, 4.0, 8.0]) {
        assert!((d - want).abs() < 1e-12, "{dets:?}");
    }
}

#[test]
fn dual_round_trip() {
    let tri = gen("triangular", "2");
    let dual = isokw(&["dual"], Some(&tri));
    assert!(dual.status.success());
    let v = json(&isokw(&["validate"], Some(&dual.stdout)));
    assert_eq!(v["result"]["vertices"], 8);
    assert_eq!(v["result"]["faces"], 4);
    let back = isokw(&["dual"], Some(&dual.stdout));
    let w = json(&isokw(&["validate"], Some(&back.stdout)));
    assert_eq!(w["result"]["vertices"], 4);
}

#[test]
fn partition_methods_agree() {
    let hex = gen("hexagonal", "2");
    let z: Vec<f64> = ["kw", "oracle", "spins"]
        .iter()
        .map(|m| json(&isokw(&["partition", "--method", m], Some(&hex)))["result"]["z"].as_f64().unwrap())
        .collect();
    assert!((z[0] - z[1]).abs() < 1e-9 * z[1] && (z[2] - z[1]).abs() < 1e-9 * z[1]);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("isokw-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = isokw(&["coupling-check", "--theta", "1/4", "--output", path.to_str().unwrap()], None);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["result"]["max_residual"].as_f64().unwrap() <= 1e-12);
    std::fs::remove_dir_all(dir).unwrap();
}
