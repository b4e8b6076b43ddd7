use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn minifix(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minifix"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("cli runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A small synthetic corpus, its index and a handful of mutants.
fn fixture() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let steps: [&[&str]; 3] = [
        &[
            "synth",
            "--out",
            "corpus",
            "--count",
            "36",
            "--seed",
            "2",
            "--held-out",
            "12",
        ],
        &[
            "index",
            "--solutions",
            "corpus",
            "--tests",
            "corpus/tests.json",
            "--out",
            "index.jsonl",
        ],
        &[
            "bench",
            "--index",
            "index.jsonl",
            "--tests",
            "corpus/tests.json",
            "--out",
            "bench",
            "--count",
            "8",
            "--seed",
            "1",
            "--from",
            "corpus/held_out",
        ],
    ];
    for args in steps {
        let o = minifix(dir.path(), args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    dir
}

fn repair(dir: &Path, submission: &str, extra: &[&str]) -> Output {
    fs::write(dir.join("submission.mi"), submission).unwrap();
    let mut args = vec![
        "repair",
        "submission.mi",
        "--index",
        "index.jsonl",
        "--tests",
        "corpus/tests.json",
    ];
    args.extend_from_slice(extra);
    minifix(dir, &args)
}

#[test]
fn exit_codes_follow_the_outcome() {
    let dir = fixture();
    let correct = fs::read_to_string(dir.path().join("corpus/c0000.mi")).unwrap();

    let ok = repair(dir.path(), &correct, &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "The program requires 0 changes\n");

    let odd_shape = "func chessboard(n: int) { while (n > 0) { while (n > 1) { while (n > 2) { n = 0; } } } }";
    assert_eq!(repair(dir.path(), odd_shape, &[]).status.code(), Some(2));

    let broken = correct.replacen("\"X\"", "\"Q\"", 1);
    assert_ne!(broken, correct);
    let capped = repair(dir.path(), &broken, &["--max-fixes", "0"]);
    assert_eq!(
        capped.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&capped.stderr)
    );
    assert_eq!(repair(dir.path(), &broken, &[]).status.code(), Some(0));

    let parse = repair(dir.path(), "func chessboard(n: int) { print(n) }", &[]);
    assert_eq!(parse.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("syntax error at 1:"));
}

#[test]
fn json_feedback_has_the_documented_shape() {
    let dir = fixture();
    let correct = fs::read_to_string(dir.path().join("corpus/c0001.mi")).unwrap();
    let broken = correct.replacen("\"O\"", "\"X\"", 1);
    let o = repair(dir.path(), &broken, &["--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v["items"].as_array().unwrap();
    assert_eq!(v["change_count"].as_u64().unwrap() as usize, items.len());
    assert!(!items.is_empty());
    for item in items {
        let keys: Vec<&String> = item.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["kind", "line", "original", "replacement"]);
        assert!(["insertion", "deletion", "modification"].contains(&item["kind"].as_str().unwrap()));
        assert!(item["line"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn levels_reveal_progressively_more() {
    let dir = fixture();
    let correct = fs::read_to_string(dir.path().join("corpus/c0002.mi")).unwrap();
    let broken = correct.replacen("% 2", "% 3", 1);
    let texts: Vec<String> = (1..=5)
        .map(|l| stdout(&repair(dir.path(), &broken, &["--level", &l.to_string()])))
        .collect();
    assert_eq!(texts[0].lines().count(), 1);
    assert!(texts[0].starts_with("The program requires"));
    for t in &texts[1..] {
        assert!(t.lines().count() > 1, "{t}");
        assert!(t.starts_with(texts[0].trim_end()));
    }
    assert!(texts[4].contains("% 2"), "{}", texts[4]);
    assert_eq!(repair(dir.path(), &broken, &["--level", "6"]).status.code(), Some(2));
}

#[test]
fn index_reports_rejections() {
    let dir = fixture();
    fs::write(
        dir.path().join("corpus/zz_bad.mi"),
        "func chessboard(n: int) { print(\"X\"); }",
    )
    .unwrap();
    fs::write(dir.path().join("corpus/zz_broken.mi"), "func (").unwrap();
    let o = minifix(
        dir.path(),
        &[
            "index",
            "--solutions",
            "corpus",
            "--tests",
            "corpus/tests.json",
            "--out",
            "again.jsonl",
        ],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "indexed 36 program(s), rejected 2\n");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("rejected zz_bad"), "{err}");
    assert!(err.contains("rejected zz_broken"), "{err}");
    let lines = fs::read_to_string(dir.path().join("again.jsonl")).unwrap();
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    for key in ["program_id", "cf_signature", "pacv", "source_path"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn commands_are_deterministic() {
    let (a, b) = (fixture(), fixture());
    for name in [
        "index.jsonl",
        "bench/cases.jsonl",
        "corpus/tests.json",
        "corpus/c0005.mi",
        "corpus/held_out/h0003.mi",
    ] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let compare = [
        "compare",
        "--bench",
        "bench",
        "--index",
        "index.jsonl",
        "--tests",
        "corpus/tests.json",
        "--ks",
        "1,3",
    ];
    let (ca, cb) = (minifix(a.path(), &compare), minifix(b.path(), &compare));
    assert!(ca.status.success());
    assert_eq!(ca.stdout, cb.stdout);
    let sampled = [
        "repair",
        "bench/case0000.mi",
        "--index",
        "index.jsonl",
        "--tests",
        "corpus/tests.json",
        "--sample-frac",
        "0.5",
        "--seed",
        "3",
    ];
    assert_eq!(minifix(a.path(), &sampled).stdout, minifix(b.path(), &sampled).stdout);
}
