use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolscramble"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let p = dir.path().join(name);
    let path = p.to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &path]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn analyze_json(path: &str) -> Value {
    let o = run(&["analyze", "--json", path]);
    assert_eq!(code(&o), 0);
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn generate_writes_the_text_format() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "w3.txt", &["wielandt:3"]);
    assert_eq!(fs::read_to_string(p).unwrap(), "3 3\n010\n101\n100\n");

    let o = run(&["generate", "t2:1", "--blocks", "1,1,1"]);
    assert_eq!(stdout(&o), "3 3\n010\n101\n101\n");

    let o = run(&["generate", "m1", "--b", "3", "--blocks", "1,1,1,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("4 4\n"));
}

#[test]
fn generate_rejects_bad_parameters() {
    for args in [
        &["generate", "m1"][..],
        &["generate", "m1", "--b", "3", "--blocks", "1,1"],
        &["generate", "t2:99"],
        &["generate", "t3:1", "--blocks", "1,0,1,1,1,1"],
        &["generate", "wielandt:1"],
        &["generate", "nosuch"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn analyze_wielandt() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "w5.txt", &["wielandt:5"]);
    let v = analyze_json(&p);
    assert_eq!(v["scrambling_index"], 9);
    assert_eq!(v["label_base"], 0);
    let order = v["bound_checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "order")
        .unwrap();
    assert_eq!(order["attained"], true);
    assert!(v["extremal_match"].is_null());
}

#[test]
fn analyze_all_ones_and_identity() {
    let dir = TempDir::new().unwrap();
    let j = write(&dir, "j3.txt", "3 3\n111\n111\n111\n");
    let v = analyze_json(&j);
    assert_eq!((v["primitive"].as_bool(), v["scrambling_index"].as_u64()), (Some(true), Some(1)));
    assert_eq!(v["boolean_rank"], 1);
    assert!(v["extremal_match"].is_null());

    let i = write(&dir, "i3.txt", "3 3\n100\n010\n001\n");
    let v = analyze_json(&i);
    assert_eq!(v["primitive"], false);
    assert!(v["exponent"].is_null() && v["scrambling_index"].is_null() && v["witness_pair"].is_null());
}

#[test]
fn analyze_no_rank_and_text_labels() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "w4.txt", &["wielandt:4"]);
    let o = run(&["analyze", "--json", "--no-rank", &p]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["boolean_rank"].is_null());
    let statuses: Vec<_> = v["bound_checks"].as_array().unwrap().iter().map(|c| c["status"].clone()).collect();
    assert_eq!(statuses.iter().filter(|s| *s == "skipped").count(), 2);

    let o = run(&["analyze", &p]);
    let text = stdout(&o);
    assert!(text.contains("0-based") && text.contains("1-based"), "{text}");

    assert_eq!(code(&run(&["analyze", "--rank-timeout", "0", &p])), 2);
}

#[test]
fn analyze_exit_codes() {
    let dir = TempDir::new().unwrap();
    let rect = write(&dir, "rect.txt", "2 3\n010\n101\n");
    assert_eq!(code(&run(&["analyze", &rect])), 3);
    let bad = write(&dir, "bad.txt", "2 2\n01\n2x\n");
    assert_eq!(code(&run(&["analyze", &bad])), 2);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&run(&["analyze", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["match", &rect])), 3);
}

#[test]
fn analyze_generate_roundtrip_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "m3.txt", &["m3", "--b", "4", "--blocks", "1,1,2,1,1,1"]);
    let first = analyze_json(&p);
    let text = fs::read_to_string(&p).unwrap();
    let copy = write(&dir, "copy.txt", &format!("# copy\n{text}\n"));
    assert_eq!(analyze_json(&copy), first);
    assert_eq!(first["extremal_match"]["kind"], "M3");
    assert_eq!(first["boolean_rank"], 4);
}

#[test]
fn match_round_trips_and_rejects() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "m2.txt", &["m2", "--b", "4", "--blocks", "1,2,1,1,1"]);
    let o = run(&["match", &p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("M2 b=4 blocks=["), "{}", stdout(&o));

    let j5 = generate(&dir, "j5.txt", &["jn:5"]);
    let o = run(&["match", &j5]);
    assert_eq!((code(&o), stdout(&o).trim()), (1, "no match"));

    let w6 = generate(&dir, "w6.txt", &["wielandt:6"]);
    assert_eq!(code(&run(&["match", &w6])), 1);

    let o = run(&["match", "--json", &p]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["matched"].as_bool(), v["kind"].as_str(), v["b"].as_u64()), (Some(true), Some("M2"), Some(4)));
}

#[test]
fn verify_campaigns() {
    let o = run(&["verify", "--order", "3", "--exhaustive"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("examined         512"));

    let o = run(&["verify", "--random", "1000", "--seed", "42", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total_examined"], 1000);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let o = run(&["verify", "--families", "20", "--seed", "7", "--json"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_refusals() {
    assert_eq!(code(&run(&["verify", "--order", "5", "--exhaustive"])), 2);
    assert_eq!(code(&run(&["verify", "--exhaustive"])), 2);
    assert_eq!(code(&run(&["verify", "--order", "3"])), 2);
    assert_eq!(code(&run(&["verify", "--order", "3", "--exhaustive", "--random", "5"])), 2);
    // Randomized JSON output must name its seed.
    assert_eq!(code(&run(&["verify", "--random", "10", "--json"])), 2);
}

#[test]
fn verify_dump_is_written() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("dump.txt");
    let o = run(&["verify", "--order", "2", "--exhaustive", "--dump", dump.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(Path::new(&dump).exists());
    assert_eq!(fs::read_to_string(dump).unwrap(), "");
}
