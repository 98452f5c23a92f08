use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fptsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fptsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_is_byte_identical() {
    for kind in ["ksum", "vectorsum", "clique", "nodeweight", "edgeweight", "targetsum", "lindep"] {
        let m = if matches!(kind, "targetsum" | "lindep") { "7" } else { "50" };
        let args = ["gen", kind, "--n", "7", "--k", "3", "--m", m, "--seed", "11", "--plant"];
        let a = fptsum(&args);
        let b = fptsum(&args);
        assert_eq!(code(&a), 0, "{kind}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{kind}");
        assert!(!a.stdout.is_empty());
    }
    let a = fptsum(&["gen", "ksum", "--seed", "1"]);
    let b = fptsum(&["gen", "ksum", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let yes = write(dir.path(), "yes.txt", r#"{"type":"ksum","k":2,"numbers":["1","3","5"],"target":"8"}"#);
    let no = write(dir.path(), "no.txt", r#"{"type":"ksum","k":2,"numbers":["1","3","5"],"target":"7"}"#);
    assert_eq!(code(&fptsum(&["solve", &yes])), 0);
    assert_eq!(code(&fptsum(&["solve", &no])), 1);
    assert_eq!(code(&fptsum(&["solve", &yes, "--solver", "mim"])), 0);
    assert_eq!(code(&fptsum(&["solve", &yes, "--solver", "nonsense"])), 2);
    assert_eq!(code(&fptsum(&["frobnicate"])), 2);
    assert_eq!(code(&fptsum(&["solve", "/does/not/exist"])), 2);
    assert_eq!(code(&fptsum(&["verify", &yes, "--witness", "1,2"])), 0);
    assert_eq!(code(&fptsum(&["verify", &yes, "--witness", "0,1"])), 1);
    assert_eq!(code(&fptsum(&["verify", &yes, "--witness", "0"])), 1);

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"trials": 2, "seed": 1, "n": [4, 5], "k": [3, 3], "m": [0, 0], "chain": ["kclique_to_ksum"], "oracle": "mim"}"#,
    );
    let out = dir.path().join("bad-out");
    let r = fptsum(&["experiment", "--config", &bad, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&r), 3);
    let bundle = out.join("repro-0.json");
    assert!(bundle.exists());
    assert_eq!(code(&fptsum(&["experiment", "--replay", bundle.to_str().unwrap()])), 3);
}

#[test]
fn reduce_solve_lift_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = fptsum(&["gen", "clique", "--n", "6", "--k", "3", "--edge-prob", "0.2", "--plant", "--seed", "5"]);
    let src = write(dir.path(), "g.txt", &String::from_utf8(g.stdout).unwrap());
    let r = fptsum(&["reduce", &src, "--from", "clique", "--to", "ksum", "--radix", "mixed"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let coll = write(dir.path(), "r.jsonl", &String::from_utf8(r.stdout).unwrap());
    let s = fptsum(&["solve", &coll, "--solver", "mim"]);
    assert_eq!(code(&s), 0);
    let report: serde_json::Value = serde_json::from_slice(&s.stdout).unwrap();
    let w: Vec<String> = report["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect();
    let v = fptsum(&["verify", &coll, "--witness", &w.join(","), "--source", &src]);
    assert_eq!(code(&v), 0);
    let verdict: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(verdict["lifted"].as_array().unwrap().len(), 3);
}

#[test]
fn reduce_needs_via_when_ambiguous() {
    let dir = tempfile::tempdir().unwrap();
    let k = fptsum(&["gen", "ksum", "--n", "5", "--k", "2", "--m", "9"]);
    let src = write(dir.path(), "k.txt", &String::from_utf8(k.stdout).unwrap());
    assert_eq!(code(&fptsum(&["reduce", &src, "--from", "ksum", "--to", "ksum"])), 0);
    assert_eq!(code(&fptsum(&["reduce", &src, "--from", "ksum", "--to", "clique"])), 0);
    assert_eq!(code(&fptsum(&["reduce", &src, "--from", "ksum", "--to", "lindep"])), 2);
    assert_eq!(
        code(&fptsum(&["reduce", &src, "--from", "ksum", "--to", "ksum", "--via", "vectorsum_to_ksum"])),
        2
    );
}

#[test]
fn output_directories_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"trials": 25, "seed": 9, "n": [4, 7], "k": [2, 3], "m": [0, 40], "chain": ["ksum_to_vectorsum", "vectorsum_to_ksum"]}"#,
    );
    let k = fptsum(&["gen", "ksum", "--n", "6", "--k", "2", "--m", "30", "--seed", "3"]);
    let src = write(dir.path(), "k.txt", &String::from_utf8(k.stdout).unwrap());
    let run = |tag: &str| {
        let out = dir.path().join(tag);
        let o = out.to_str().unwrap();
        assert_eq!(code(&fptsum(&["experiment", "--config", &cfg, "--out", o])), 0);
        assert_eq!(code(&fptsum(&["subsetsum-mode", &src, "--out", o, "--seed", "4"])), 0);
        assert_eq!(code(&fptsum(&["reduce", &src, "--from", "ksum", "--to", "ksum", "--seed", "4", "--out", o])), 0);
        out
    };
    let (a, b) = (run("a"), run("b"));
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 4);
    for name in names {
        assert_eq!(
            fs::read_to_string(a.join(&name)).unwrap(),
            fs::read_to_string(b.join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn subsetsum_mode_answers() {
    let dir = tempfile::tempdir().unwrap();
    let yes = write(dir.path(), "y.txt", r#"{"type":"ksum","k":1,"numbers":["3","-5","7","2"],"target":"4"}"#);
    let no = write(dir.path(), "n.txt", r#"{"type":"ksum","k":1,"numbers":["2","4","6"],"target":"5"}"#);
    let r = fptsum(&["subsetsum-mode", &yes, "--solve"]);
    assert_eq!(code(&r), 0);
    let summary: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(summary["layers"].as_array().unwrap().len(), 4);
    assert_eq!(code(&fptsum(&["subsetsum-mode", &no, "--solve"])), 1);
}
