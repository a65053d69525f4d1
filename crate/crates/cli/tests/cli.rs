use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn knowsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knowsearch"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const HAND_CORPUS: &str = r#"{"id":"D1","title":"Exposure apparatus","abstract":"The mask alignment with a wafer stage and a lens.","priority_date":"2000-06-01","publication_date":"2001-06-01","forward_citations_5y":3}
{"id":"D2","title":"Exposure apparatus","abstract":"A mask alignment for a wafer stage.","priority_date":"2001-06-01","publication_date":"2002-06-01","forward_citations_5y":0}
{"id":"D3","title":"Illuminator","abstract":"The mask alignment with a light source.","priority_date":"2002-06-01","publication_date":"2003-06-01","forward_citations_5y":0}
{"id":"D4","title":"Photoresist","abstract":"A light source with a novel resist.","priority_date":"2003-06-01","publication_date":"2004-06-01","forward_citations_5y":1}
{"id":"D5","title":"Photoresist","abstract":"The wafer stage with a novel resist.","priority_date":"2004-06-01","publication_date":"2005-06-01","forward_citations_5y":0}
{"id":"F","title":"Mask alignment","abstract":"The mask alignment with a novel resist.","priority_date":"2010-01-01","publication_date":"2011-01-01","forward_citations_5y":12}
{"id":"G","title":"Mask alignment","abstract":"The mask alignment with a quantum dot.","priority_date":"2010-01-01","publication_date":"2011-01-01","forward_citations_5y":0}
"#;

#[test]
fn synth_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for path in [&a, &b] {
        let out = knowsearch(&["synth", "--patents", "60", "--seed", "9", "--out", p(path)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 60);
}

#[test]
fn build_pkn_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    fs::write(&corpus, HAND_CORPUS).unwrap();

    let out = knowsearch(&["extract", "--corpus", p(&corpus), "--patent", "F"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("novel resist"), "{text}");

    let pkn = dir.path().join("f.json");
    let out = knowsearch(&[
        "build-pkn",
        "--corpus",
        p(&corpus),
        "--focal",
        "F",
        "--out",
        p(&pkn),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let trace = dir.path().join("trace.csv");
    let out = knowsearch(&[
        "simulate",
        "--pkn",
        p(&pkn),
        "--rule",
        "familiarity",
        "--trace",
        p(&trace),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tsc 2.5 nsn 3"), "{text}");
    assert_eq!(fs::read_to_string(&trace).unwrap().lines().count(), 4);
}

#[test]
fn experiment_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("corpus.jsonl"), HAND_CORPUS).unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"corpus_path": "corpus.jsonl", "focal_ids": ["F", "G"], "output_dir": "out"}"#,
    )
    .unwrap();
    let out = knowsearch(&["experiment", "--config", p(&config)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let runs = dir.path().join("out/runs.csv");
    assert_eq!(fs::read_to_string(&runs).unwrap().lines().count(), 6);
    let exclusions = fs::read_to_string(dir.path().join("out/exclusions.csv")).unwrap();
    assert!(exclusions.contains("G,prd,"), "{exclusions}");

    let stats = dir.path().join("again.json");
    let out = knowsearch(&["stats", "--runs", p(&runs), "--out", p(&stats)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(
        json["aggregate"]["complete_patents"],
        serde_json::json!(["F"])
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    fs::write(&corpus, HAND_CORPUS).unwrap();
    let write = |name: &str, body: &str| {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    };

    let bad_field = write(
        "bad.json",
        r#"{"corpus_path": "corpus.jsonl", "output_dir": "o", "colour": 1}"#,
    );
    assert_eq!(
        code(&knowsearch(&["experiment", "--config", p(&bad_field)])),
        2
    );
    let bad_rule = write(
        "rule.json",
        r#"{"corpus_path": "corpus.jsonl", "focal_ids": ["F"], "rules": ["random"], "output_dir": "o"}"#,
    );
    assert_eq!(
        code(&knowsearch(&["experiment", "--config", p(&bad_rule)])),
        2
    );
    assert_eq!(
        code(&knowsearch(&["simulate", "--pkn", "x", "--rule", "random"])),
        2
    );

    let missing = write(
        "missing.json",
        r#"{"corpus_path": "nope.jsonl", "focal_ids": ["F"], "output_dir": "o"}"#,
    );
    assert_eq!(
        code(&knowsearch(&["experiment", "--config", p(&missing)])),
        3
    );
    let garbage = write("garbage.jsonl", "{not json\n");
    let out = knowsearch(&["extract", "--corpus", p(&garbage), "--patent", "F"]);
    assert_eq!(code(&out), 3);

    let unusable = write(
        "g.json",
        r#"{"corpus_path": "corpus.jsonl", "focal_ids": ["G"], "output_dir": "o"}"#,
    );
    let out = knowsearch(&["experiment", "--config", p(&unusable)]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("quantum dot"));
    let pkn = dir.path().join("g.pkn.json");
    assert_eq!(
        code(&knowsearch(&[
            "build-pkn",
            "--corpus",
            p(&corpus),
            "--focal",
            "G",
            "--out",
            p(&pkn)
        ])),
        4
    );
}
