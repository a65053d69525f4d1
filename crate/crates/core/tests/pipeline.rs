mod common;

use std::fs;
use std::path::{Path, PathBuf};

use common::{hand_corpus, naive_search};
use knowsearch::corpus::{load_corpus, Corpus};
use knowsearch::experiment::synth::{gen_synthetic_corpus, SynthParams};
use knowsearch::experiment::{
    aggregate, emit_report, read_runs_csv, run_experiment, run_experiment_on, ExperimentConfig,
    Section,
};
use knowsearch::extract::extract_focal_elements;
use knowsearch::pkn::{build_pkn, PknFile, DEFAULT_SIMILARITY_THRESHOLD};
use knowsearch::prd::build_prd;
use knowsearch::search::{SearchRule, SearchTarget};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn hand_config(rules: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(&format!(
        r#"{{"corpus_path": "-", "focal_ids": ["F"], "rules": {rules}, "output_dir": "-"}}"#
    ))
    .unwrap()
}

#[test]
fn hand_traced_corpus_end_to_end() {
    let corpus = Corpus::from_docs(hand_corpus()).unwrap();
    let report = run_experiment_on(
        &corpus,
        &hand_config(r#"["bfs","dfs","familiarity","degree","recency"]"#),
    )
    .unwrap();
    assert!(report.exclusions.is_empty());
    let outcome = &report.outcomes[0];
    assert_eq!(
        (outcome.network.total_nodes, outcome.network.total_edges),
        (5, 5)
    );
    assert_eq!(outcome.prd_size, 5);
    let got: Vec<(SearchRule, f64, usize)> = outcome
        .searches
        .iter()
        .map(|s| (s.rule, s.tsc, s.nsn))
        .collect();
    assert_eq!(
        got,
        [
            (SearchRule::Bfs, 2.5, 3),
            (SearchRule::Dfs, 2.0, 2),
            (SearchRule::Familiarity, 2.5, 3),
            (SearchRule::Degree, 2.5, 3),
            (SearchRule::Recency, 2.0, 2),
        ]
    );
    assert_eq!(report.runs.len(), 5);
}

#[test]
fn emit_report_writes_and_overwrites() {
    let corpus = Corpus::from_docs(hand_corpus()).unwrap();
    let report = run_experiment_on(&corpus, &hand_config(r#"["familiarity","bfs"]"#)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_report(&report, dir.path()).unwrap();
    let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 3);
    assert!(dir.path().join("traces/F_bfs.csv").exists());
    assert!(dir.path().join("progress/F.csv").exists());

    let single = run_experiment_on(&corpus, &hand_config(r#"["dfs"]"#)).unwrap();
    assert!(matches!(
        single.aggregate.tsc,
        Section::NotApplicable { .. }
    ));
    emit_report(&single, dir.path()).unwrap();
    let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 2);
    let stats = fs::read_to_string(dir.path().join("stats.json")).unwrap();
    assert!(stats.contains("not_applicable"));
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(Result::ok)
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

fn benchmark_config(parallelism: usize, out: &Path) -> ExperimentConfig {
    let mut config = ExperimentConfig::load(data_dir().join("benchmark.json")).unwrap();
    config.parallelism = parallelism;
    config.output_dir = out.to_path_buf();
    config
}

#[test]
fn parallelism_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (p, dir) in [(1, &a), (8, &b)] {
        let config = benchmark_config(p, dir.path());
        let report = run_experiment(&config).unwrap();
        emit_report(&report, dir.path()).unwrap();
    }
    for name in ["runs.csv", "stats.json", "exclusions.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn benchmark_runs_match_the_naive_simulator() {
    let dir = tempfile::tempdir().unwrap();
    let config = benchmark_config(4, dir.path());
    let corpus = load_corpus(&config.corpus_path).unwrap();
    let report = run_experiment_on(&corpus, &config).unwrap();
    assert_eq!(
        report.outcomes.len() + report.exclusions.len(),
        report.sampling.focal_ids.len()
    );
    assert_eq!(
        report.runs.len(),
        report.outcomes.len() * config.rules.len()
    );

    for outcome in &report.outcomes {
        let doc = corpus.get(&outcome.focal_id).unwrap();
        let elements = extract_focal_elements(doc).unwrap();
        let prd = build_prd(&corpus, doc, &elements).unwrap();
        let pkn = build_pkn(&corpus, &prd, DEFAULT_SIMILARITY_THRESHOLD).unwrap();
        let pkes: Vec<String> = elements.pke_keys().map(str::to_string).collect();
        let skes: Vec<String> = elements.ske_keys().map(str::to_string).collect();
        let file = PknFile::new(&pkn, &doc.id, doc.publication_date, &pkes, &skes);
        let file = PknFile::from_json(&file.to_json()).unwrap();
        let network = file.network().unwrap();
        let target = SearchTarget::from_file(&file);
        for s in &outcome.searches {
            let naive = naive_search(&network, &target, s.rule);
            let steps: Vec<(String, f64)> = s
                .trace
                .iter()
                .map(|t| (t.selected.clone(), t.cost))
                .collect();
            assert_eq!(steps, naive.steps, "{} {}", outcome.focal_id, s.rule);
            assert_eq!(s.tsc.to_bits(), naive.tsc.to_bits());
        }
    }
}

#[test]
fn stats_from_runs_csv_reproduce_the_aggregate() {
    let dir = tempfile::tempdir().unwrap();
    let config = benchmark_config(2, dir.path());
    let report = run_experiment(&config).unwrap();
    emit_report(&report, dir.path()).unwrap();
    let records = read_runs_csv(&dir.path().join("runs.csv")).unwrap();
    assert_eq!(records, report.runs);
    assert_eq!(
        aggregate(&records, &config.sorted_rules()),
        report.aggregate
    );
}

#[test]
fn bundled_corpus_is_the_default_generator_output() {
    let bundled = fs::read_to_string(data_dir().join("synthetic_seed42.jsonl")).unwrap();
    let fresh = gen_synthetic_corpus(&SynthParams::default()).unwrap();
    assert_eq!(bundled, fresh.to_jsonl());
}
