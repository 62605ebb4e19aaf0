use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gorenstein"))
}

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Dir {
        let d = std::env::temp_dir().join(format!("gorenstein_cli_{tag}_{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        Dir(d)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn validator(schema: &str) -> jsonschema::Validator {
    jsonschema::validator_for(&serde_json::from_str(schema).unwrap()).unwrap()
}

fn verdict_json(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    let schema = validator(include_str!("../../../docs/verdict.schema.json"));
    let errors: Vec<String> = schema.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    v
}

const K4: &str = "a b\na c\na d\nb c\nb d\nc d\n";
const C5_CHORD: &str = "1 2\n2 3\n3 4\n4 5\n5 1\n1 3\n";
const G5: &str = "a x\nx b\na c\nc b\na d\nd b\n";

#[test]
fn check_examples() {
    let d = Dir::new("check");
    let k4 = d.file("k4.txt", K4);
    let out = run(&["check", "base", arg(&k4)]);
    assert_eq!(out.status.code(), Some(0));
    let v = verdict_json(&out);
    assert_eq!((v["status"].as_str(), v["delta"].as_u64()), (Some("gorenstein"), Some(2)));

    let c4 = d.file("c4x2.txt", "1 2 2\n2 3 2\n3 4 2\n4 1 2\n");
    let v = verdict_json(&run(&["check", "indep", arg(&c4)]));
    assert_eq!((v["status"].as_str(), v["delta"].as_u64(), v["m"].as_u64()), (Some("gorenstein"), Some(3), Some(2)));

    let out = run(&["check", "base", arg(&c4)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("base checker requires simple graph; use oracle"));

    // Negative verdicts still exit 0.
    let c5c = d.file("c5c.txt", C5_CHORD);
    let out = run(&["check", "base", arg(&c5c), "--delta", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = verdict_json(&out);
    assert_eq!(v["status"], "not_gorenstein");
    assert_eq!(v["details"]["at_delta"]["witness"]["vertices"], serde_json::json!(["1", "3", "4", "5"]));
}

#[test]
fn exit_codes() {
    let d = Dir::new("exit");
    let bad = d.file("bad.txt", "a b c\n");
    assert_eq!(run(&["check", "base", arg(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["check", "base", "/nonexistent/graph.txt"]).status.code(), Some(1));
    let k4 = d.file("k4.txt", K4);
    assert_eq!(run(&["oracle", "indep", arg(&k4), "--hstar", "--guard-nodes", "10"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--max-vertices", "7", "--cross-validate"]).status.code(), Some(2));
    let c5c = d.file("c5c.txt", C5_CHORD);
    let out = run(&["certify", "base", arg(&c5c)]);
    assert_eq!(out.status.code(), Some(3));
    let v = verdict_json(&out);
    assert_eq!(v["details"]["verdict"]["witness"]["witness"]["kind"], "flat_equality_violated");
}

#[test]
fn oracle_examples() {
    let d = Dir::new("oracle");
    let c3 = d.file("c3.txt", "a b\nb c\nc a\n");
    let v = verdict_json(&run(&["oracle", "base", arg(&c3), "--max-delta", "3", "--normality"]));
    assert_eq!(v["delta"], 3);
    assert_eq!(v["details"]["witness"]["point"], serde_json::json!([2, 2, 2]));
    assert_eq!(v["details"]["facets"], 3);
    assert_eq!(v["details"]["enumerative_agrees"], true);
    assert_eq!(v["details"]["normality"]["result"], "pass");

    let c5c = d.file("c5c.txt", C5_CHORD);
    let v = verdict_json(&run(&["oracle", "base", arg(&c5c), "--hstar"]));
    assert_eq!(v["details"]["witness"], Value::Null);
    assert_eq!(v["details"]["hstar"]["palindromic"], false);

    let k2 = d.file("k2.txt", "u v\n");
    let v = verdict_json(&run(&["oracle", "indep", arg(&k2)]));
    assert_eq!(v["delta"], 2);
}

#[test]
fn certify_and_replay() {
    let d = Dir::new("certify");
    let g5 = d.file("g5.txt", G5);
    let out = run(&["certify", "base", arg(&g5)]);
    assert_eq!(out.status.code(), Some(0));
    let v = verdict_json(&out);
    let block = &v["details"]["blocks"][0];
    assert_eq!(block["description"], "Subdivide(Glue(Seed(C3), Seed(C3)))");
    assert_eq!(block["replay"]["outcome"], "isomorphic");
    let cert_schema = validator(include_str!("../../../docs/certificate.schema.json"));
    assert!(cert_schema.is_valid(&block["certificate"]));

    let k4 = d.file("k4.txt", K4);
    let v = verdict_json(&run(&["certify", "base", arg(&k4)]));
    assert_eq!(v["details"]["blocks"][0]["description"], "Seed(K4)");

    // Replaying from the whole report, and from the bare certificate.
    let report = d.file("report.json", std::str::from_utf8(&out.stdout).unwrap());
    let replayed = d.0.join("replayed.txt");
    let v = verdict_json(&run(&["replay", arg(&report), "-o", arg(&replayed)]));
    assert_eq!((v["status"].as_str(), v["delta"].as_u64()), (Some("gorenstein"), Some(3)));
    assert_eq!(v["details"]["results"][0]["reproduced"], true);
    let again = verdict_json(&run(&["check", "base", arg(&replayed)]));
    assert_eq!(again["delta"], 3);
    let cert = d.file("cert.json", &block["certificate"].to_string());
    assert_eq!(run(&["replay", arg(&cert)]).status.code(), Some(0));
}

#[test]
fn generate_examples() {
    let d = Dir::new("generate");
    let out = run(&["generate", "seed", "--cycle", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 5);

    let c3 = d.file("c3.txt", "a b\nb c\nc a\n");
    let glued = d.0.join("glued.txt");
    let v = verdict_json(&run(&["generate", "glue", arg(&c3), arg(&c3), "--delta", "3", "-o", arg(&glued)]));
    assert_eq!((v["delta"].as_u64(), v["input"]["vertices"].as_u64(), v["input"]["edges"].as_u64()), (Some(3), Some(4), Some(5)));

    let k4 = d.file("k4.txt", K4);
    let collided = d.0.join("collided.txt");
    let v = verdict_json(&run(&["generate", "collide", arg(&k4), arg(&k4), "-o", arg(&collided)]));
    assert_eq!((v["delta"].as_u64(), v["input"]["vertices"].as_u64(), v["input"]["edges"].as_u64()), (Some(2), Some(6), Some(10)));

    let sub = d.0.join("sub.txt");
    let v = verdict_json(&run(&["generate", "subdivide", arg(&glued), "--delta", "3", "-o", arg(&sub)]));
    assert_eq!((v["delta"].as_u64(), v["input"]["edges"].as_u64()), (Some(3), Some(6)));

    let k2 = d.file("k2.txt", "u v\n");
    let attached = d.0.join("att.txt");
    let v = verdict_json(&run(&["generate", "attach", arg(&k2), "--delta", "3", "-o", arg(&attached)]));
    // C4 on its own is not Gorenstein; it needs doubling.
    assert_eq!((v["kind"].as_str(), v["status"].as_str()), (Some("independence"), Some("not_gorenstein")));
    let blown = d.0.join("blown.txt");
    let v = verdict_json(&run(&["generate", "blowup", arg(&attached), "--m", "2", "-o", arg(&blown)]));
    assert_eq!((v["delta"].as_u64(), v["m"].as_u64()), (Some(3), Some(2)));

    let out = run(&["generate", "glue", arg(&c3), "--delta", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn dot_output() {
    let d = Dir::new("dot");
    let g5 = d.file("g5.txt", G5);
    let dot = d.0.join("g5.dot");
    run(&["check", "base", arg(&g5), "--dot", arg(&dot)]);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph G {"));
    assert_eq!(text.matches("color=\"red\"").count(), 6);
}

#[test]
fn sweep_small() {
    let out = run(&["sweep", "--max-vertices", "5", "--kind", "base", "--cross-validate"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["mismatches"], serde_json::json!([]));
    let a = run(&["sweep", "--max-vertices", "5", "--kind", "spade-heart", "--jobs", "1"]);
    let b = run(&["sweep", "--max-vertices", "5", "--kind", "spade-heart", "--jobs", "4"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"]["jobs"] = Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
