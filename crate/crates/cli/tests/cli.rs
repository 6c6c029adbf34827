use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sl2rep"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sl2rep-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

const WEEKS: &str = "a,b | a^2 b^2 a^2 B a B, a^2 b^2 A b A b^2\n";

#[test]
fn weeks_demo_end_to_end() {
    let start = Instant::now();
    let out = run(&["weeks-demo", "--ball", "6", "--order", "4", "--json", "-"]);
    assert!(start.elapsed().as_secs() < 60);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "1.0.0");
    assert_eq!(v["presentation"], "a,b | a^2 b^2 a^2 B a B, a^2 b^2 A b A b^2");
    assert_eq!(v["abelianization"]["invariant_factors"], serde_json::json!([5, 5]));
    let abelian = v["abelian_representations"].as_array().unwrap();
    assert_eq!(abelian.len(), 25);
    assert!(abelian.iter().all(|r| r["verdict"] == "AdmissibleCertified"));
    assert!(abelian.iter().all(|r| r["residual"].as_f64().unwrap() < 1e-12));
    assert_eq!(v["abelian_conjugacy_classes"], 13);
    let t = &v["trivial_cohomology"];
    assert_eq!([&t["dim_Z1"], &t["dim_B1"], &t["dim_H1"], &t["dim_centralizer"]], [0, 0, 0, 3]);
    for g in v["geometric"].as_array().unwrap() {
        assert!(g["residual"].as_f64().unwrap() < 1e-10);
        assert_eq!(g["verdict"], "NotAdmissibleCertified");
    }
    assert_eq!(v["ball"]["elements"], 1173);
    for c in v["conjugation_check"]["results"].as_array().unwrap() {
        assert_eq!(c["dimensions_equal"], true);
        assert_eq!(c["verdicts_equal"], true);
        assert_eq!(c["characters_equal"], true);
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = scratch("determinism");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let out = run(&["weeks-demo", "--seed", "7", "--json", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stdout).contains("abelianization"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let other = dir.join("c.json");
    run(&["weeks-demo", "--seed", "8", "--json", other.to_str().unwrap()]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&other).unwrap());
}

#[test]
fn cyclic_cohomology() {
    let dir = scratch("cyclic");
    let p = write(&dir, "z.txt", "a |\n");
    let r = write(&dir, "r.json", r#"{"images": [[[2, 0], [0, 0], [0, 0], [0.5, 0]]]}"#);
    let out = run(&["cohomology", p.to_str().unwrap(), "--rep", r.to_str().unwrap(), "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "1.0.0");
    assert_eq!([&v["dim_Z1"], &v["dim_B1"], &v["dim_H1"], &v["dim_centralizer"]], [3, 2, 1, 1]);
    assert_eq!(v["slice_basis"].as_array().unwrap().len(), 1);

    let text = run(&["cohomology", p.to_str().unwrap(), "--rep", r.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("dim H1 = 1"));
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = scratch("parse");
    let bad = write(&dir, "bad.txt", "a,b | a c\n");
    let out = run(&["parse", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("presentation:") && err.contains("byte 8"), "{err}");

    let good = write(&dir, "weeks.txt", WEEKS);
    let out = run(&["parse", good.to_str().unwrap(), "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["generators"], serde_json::json!(["a", "b"]));
    assert_eq!(v["relator_lengths"], serde_json::json!([9, 9]));
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["weeks-demo", "--ball", "0"]).status.code(), Some(1));
    assert_eq!(run(&["weeks-demo", "--tol-rep", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["parse", "/nonexistent/file"]).status.code(), Some(1));

    let dir = scratch("inputs");
    let p = write(&dir, "z.txt", "a |\n");
    let mismatched = write(&dir, "m.json", r#"{"presentation": "a,b |", "images": [[[1,0],[0,0],[0,0],[1,0]]]}"#);
    let out = run(&["cohomology", p.to_str().unwrap(), "--rep", mismatched.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("repvar:"));

    let q = write(&dir, "q.txt", "a | a^3\n");
    let off = write(&dir, "off.json", r#"{"images": [[[2,0],[0,0],[0,0],[0.5,0]]]}"#);
    let out = run(&["cohomology", q.to_str().unwrap(), "--rep", off.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("off the variety"));
}

#[test]
fn abelian_subcommand() {
    let dir = scratch("abelian");
    let p = write(&dir, "weeks.txt", WEEKS);
    let v = json_of(&run(&["abelian", p.to_str().unwrap(), "--json", "-"]));
    assert_eq!(v["invariant_factors"], serde_json::json!([5, 5]));
    assert_eq!(v["representations"].as_array().unwrap().len(), 25);
    assert_eq!(v["conjugacy_classes"], 13);

    let free = write(&dir, "free.txt", "a,b |\n");
    let v = json_of(&run(&["abelian", free.to_str().unwrap(), "--json", "-"]));
    assert_eq!(v["rank_free"], 2);
    assert!(v.get("representations").is_none());
}

#[test]
fn admissible_exit_codes() {
    let dir = scratch("admissible");
    let p = write(&dir, "z.txt", "a |\n");
    let e = 1f64.exp();
    let reference = write(&dir, "ref.json", &format!(r#"{{"images": [[[{e},0],[0,0],[0,0],[{},0]]]}}"#, 1.0 / e));
    let unipotent = write(&dir, "unip.json", r#"{"images": [[[1,0],[1,0],[0,0],[1,0]]]}"#);
    let (c, s) = (e * 0.3f64.cos(), e * 0.3f64.sin());
    let (ci, si) = (0.3f64.cos() / e, -0.3f64.sin() / e);
    let twisted = write(&dir, "tw.json", &format!(r#"{{"images": [[[{c},{s}],[0,0],[0,0],[{ci},{si}]]]}}"#));
    let args = |rep: &PathBuf| {
        vec![
            "admissible".to_string(),
            p.to_str().unwrap().to_string(),
            "--rep".into(),
            rep.to_str().unwrap().to_string(),
            "--ref".into(),
            reference.to_str().unwrap().to_string(),
            "--json".into(),
            "-".into(),
        ]
    };
    let out = bin().args(args(&unipotent)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["verdict"], "LikelyAdmissible");

    let out = bin().args(args(&twisted)).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["result"]["verdict"], "Inconclusive");

    let out = bin().args(args(&reference)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["verdict"], "NotAdmissibleCertified");
    assert_eq!(v["result"]["certificate"]["type"], "intertwiner");

    // Weeks group: reference defaults to the geometric embedding
    let w = write(&dir, "weeks.txt", WEEKS);
    let trivial = write(&dir, "triv.json", r#"{"images": [[[1,0],[0,0],[0,0],[1,0]], [[1,0],[0,0],[0,0],[1,0]]]}"#);
    let out = run(&["admissible", w.to_str().unwrap(), "--rep", trivial.to_str().unwrap(), "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["verdict"], "AdmissibleCertified");
}

#[test]
fn deform_subcommand() {
    let dir = scratch("deform");
    let p = write(&dir, "z2.txt", "a,b | a b A B\n");
    let r = write(&dir, "r.json", r#"{"images": [[[2,0],[0,0],[0,0],[0.5,0]], [[3,0],[0,0],[0,0],[0.3333333333333333,0]]]}"#);
    let out = run(&["deform", p.to_str().unwrap(), "--rep", r.to_str().unwrap(), "--order", "4", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["cohomology"]["dim_H1"], 2);
    let dirs = v["directions"].as_array().unwrap();
    assert_eq!(dirs.len(), 2);
    for d in dirs {
        assert!(d["obstructed_at"].is_null());
        assert_eq!(d["reached_order"], 4);
    }
    let v = json_of(&run(&["deform", p.to_str().unwrap(), "--order", "3", "--json", "-"]));
    assert_eq!(v["cohomology"]["dim_H1"], 6);
    assert_eq!(v["directions"].as_array().unwrap().len(), 6);
}
