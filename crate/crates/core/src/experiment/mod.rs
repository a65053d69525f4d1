//! End-to-end experiment: focal sampling, per-patent pipeline, aggregate
//! statistics and report files.

mod aggregate;
mod report;
pub mod synth;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{load_corpus, Corpus, CorpusError, PatentDoc, ValueCategory};
use crate::extract::extract_focal_elements;
use crate::pkn::{
    build_pkn, check_searchability, network_stats, NetworkStats, DEFAULT_SIMILARITY_THRESHOLD,
};
use crate::prd::{build_prd_indexed, TextIndex};
use crate::search::{run_search, SearchResult, SearchRule, SearchTarget, Termination};

pub use aggregate::{
    aggregate, Aggregate, FitPair, GroupReport, PairReport, RankAnalysis, RuleDescriptives, Section,
};
pub use report::{emit_report, read_runs_csv, write_runs_csv, write_stats_json, StatsDocument};

/// Identifier of the focal sampling procedure, recorded in every report.
pub const SAMPLING_ALGORITHM: &str = "chacha8-partial-fisher-yates-v1";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("no usable focal patents ({} excluded)", .0.len())]
    NoUsableFocalPatents(Vec<Exclusion>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },
}

impl ExperimentError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn default_rules() -> Vec<SearchRule> {
    SearchRule::ALL.to_vec()
}

fn default_threshold() -> f64 {
    DEFAULT_SIMILARITY_THRESHOLD
}

fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub corpus_path: PathBuf,
    #[serde(default)]
    pub focal_ids: Option<Vec<String>>,
    #[serde(default)]
    pub sample_size: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_rules")]
    pub rules: Vec<SearchRule>,
    #[serde(default = "default_threshold")]
    pub similarity_threshold: f64,
    #[serde(default)]
    pub max_steps: Option<usize>,
    pub output_dir: PathBuf,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        let mut config = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if config.corpus_path.is_relative() {
            config.corpus_path = base.join(&config.corpus_path);
        }
        if config.output_dir.is_relative() {
            config.output_dir = base.join(&config.output_dir);
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        match (&self.focal_ids, self.sample_size) {
            (Some(_), Some(_)) => return bad("give either focal_ids or sample_size, not both"),
            (None, None) => return bad("one of focal_ids or sample_size is required"),
            (Some(ids), None) if ids.is_empty() => return bad("focal_ids is empty"),
            (None, Some(0)) => return bad("sample_size must be at least 1"),
            (None, Some(_)) if self.seed.is_none() => return bad("sampling requires a seed"),
            _ => {}
        }
        if self.rules.is_empty() {
            return bad("rules is empty");
        }
        let mut seen = self.rules.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.rules.len() {
            return bad("rules contains duplicates");
        }
        if !(self.similarity_threshold > 0.0 && self.similarity_threshold <= 1.0) {
            return bad("similarity_threshold must be in (0, 1]");
        }
        if self.max_steps == Some(0) {
            return bad("max_steps must be at least 1");
        }
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1");
        }
        Ok(())
    }

    /// Configured rules in canonical order.
    pub fn sorted_rules(&self) -> Vec<SearchRule> {
        let mut rules = self.rules.clone();
        rules.sort();
        rules
    }
}

/// Draws `size` focal candidates uniformly without replacement.
///
/// Candidates are taken in corpus order and shuffled with a partial
/// Fisher-Yates pass driven by ChaCha8 seeded from `seed`. The result is
/// sorted by id.
pub fn sample_focal_ids(
    corpus: &Corpus,
    size: usize,
    seed: u64,
) -> Result<Vec<String>, ExperimentError> {
    let mut pool: Vec<&str> = corpus
        .docs()
        .iter()
        .filter(|d| d.focal_candidate)
        .map(|d| d.id.as_str())
        .collect();
    if size > pool.len() {
        return Err(ExperimentError::Config(format!(
            "sample_size {size} exceeds the {} focal candidates",
            pool.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..size {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    let mut picked: Vec<String> = pool[..size].iter().map(|s| s.to_string()).collect();
    picked.sort();
    Ok(picked)
}

/// Pipeline stage at which a patent dropped out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Lookup,
    Extract,
    Prd,
    Pkn,
    Searchability,
    Search,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Lookup => "lookup",
            Stage::Extract => "extract",
            Stage::Prd => "prd",
            Stage::Pkn => "pkn",
            Stage::Searchability => "searchability",
            Stage::Search => "search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub focal_id: String,
    pub stage: Stage,
    pub reason: String,
}

/// One completed search of one focal patent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub focal_id: String,
    pub rule: SearchRule,
    pub tsc: f64,
    pub nsn: usize,
    pub terminated: String,
    pub lcc_nodes: usize,
    pub lcc_density: f64,
    /// Absent when the corpus lacks citation counts for the patent.
    pub value_category: Option<ValueCategory>,
}

/// Everything computed for one searchable focal patent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatentOutcome {
    pub focal_id: String,
    pub value_category: Option<ValueCategory>,
    pub network: NetworkStats,
    pub prd_size: usize,
    pub expansions: usize,
    pub searches: Vec<SearchResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingInfo {
    pub algorithm: &'static str,
    pub seed: Option<u64>,
    pub requested: usize,
    pub focal_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub sampling: SamplingInfo,
    pub rules: Vec<SearchRule>,
    pub similarity_threshold: f64,
    pub outcomes: Vec<PatentOutcome>,
    pub exclusions: Vec<Exclusion>,
    pub runs: Vec<RunRecord>,
    pub aggregate: Aggregate,
}

/// Runs every configured rule on one focal patent.
pub fn run_patent(
    corpus: &Corpus,
    index: &TextIndex,
    doc: &PatentDoc,
    rules: &[SearchRule],
    threshold: f64,
    max_steps: Option<usize>,
) -> Result<PatentOutcome, Exclusion> {
    let exclude = |stage, reason: String| Exclusion {
        focal_id: doc.id.clone(),
        stage,
        reason,
    };
    let elements =
        extract_focal_elements(doc).map_err(|e| exclude(Stage::Extract, e.to_string()))?;
    let prd =
        build_prd_indexed(index, doc, &elements).map_err(|e| exclude(Stage::Prd, e.to_string()))?;
    let pkn = build_pkn(corpus, &prd, threshold).map_err(|e| exclude(Stage::Pkn, e.to_string()))?;
    let check = check_searchability(&pkn, elements.pke_keys(), elements.ske_keys());
    if !check.searchable {
        return Err(exclude(Stage::Searchability, check.diagnosis()));
    }
    let target = SearchTarget::new(doc, &elements);
    let mut searches = Vec::with_capacity(rules.len());
    for &rule in rules {
        let result = run_search(&pkn, &target, rule, max_steps)
            .map_err(|e| exclude(Stage::Search, format!("{rule}: {e}")))?;
        if result.terminated != Termination::Completed {
            return Err(exclude(
                Stage::Search,
                format!("{rule}: {}", result.terminated.as_str()),
            ));
        }
        searches.push(result);
    }
    Ok(PatentOutcome {
        focal_id: doc.id.clone(),
        value_category: doc.value_category().ok(),
        network: network_stats(&pkn),
        prd_size: prd.doc_ids.len(),
        expansions: prd.expansion_log.len(),
        searches,
    })
}

/// Per-run records of the outcomes, sorted by `(focal_id, rule)`.
pub fn run_records(outcomes: &[PatentOutcome]) -> Vec<RunRecord> {
    let mut runs: Vec<RunRecord> = outcomes
        .iter()
        .flat_map(|o| {
            o.searches.iter().map(move |s| RunRecord {
                focal_id: o.focal_id.clone(),
                rule: s.rule,
                tsc: s.tsc,
                nsn: s.nsn,
                terminated: s.terminated.as_str().to_string(),
                lcc_nodes: o.network.lcc_nodes,
                lcc_density: o.network.lcc_density,
                value_category: o.value_category,
            })
        })
        .collect();
    runs.sort_by(|a, b| (&a.focal_id, a.rule).cmp(&(&b.focal_id, b.rule)));
    runs
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let corpus = load_corpus(&config.corpus_path)?;
    run_experiment_on(&corpus, config)
}

/// Like [`run_experiment`] with an already loaded corpus.
pub fn run_experiment_on(
    corpus: &Corpus,
    config: &ExperimentConfig,
) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let (focal_ids, requested) = match (&config.focal_ids, config.sample_size) {
        (Some(ids), _) => {
            let mut ids = ids.clone();
            ids.sort();
            ids.dedup();
            let n = ids.len();
            (ids, n)
        }
        (None, Some(size)) => (
            sample_focal_ids(corpus, size, config.seed.expect("validated"))?,
            size,
        ),
        (None, None) => unreachable!("validated"),
    };
    let rules = config.sorted_rules();
    let index = TextIndex::new(corpus);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| ExperimentError::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<PatentOutcome, Exclusion>> = pool.install(|| {
        focal_ids
            .par_iter()
            .map(|id| match corpus.get(id) {
                None => Err(Exclusion {
                    focal_id: id.clone(),
                    stage: Stage::Lookup,
                    reason: "not in corpus".into(),
                }),
                Some(doc) => run_patent(
                    corpus,
                    &index,
                    doc,
                    &rules,
                    config.similarity_threshold,
                    config.max_steps,
                ),
            })
            .collect()
    });
    let mut outcomes = Vec::new();
    let mut exclusions = Vec::new();
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => exclusions.push(e),
        }
    }
    if outcomes.is_empty() {
        return Err(ExperimentError::NoUsableFocalPatents(exclusions));
    }
    let runs = run_records(&outcomes);
    let aggregate = aggregate(&runs, &rules);
    Ok(ExperimentReport {
        sampling: SamplingInfo {
            algorithm: SAMPLING_ALGORITHM,
            seed: config.sample_size.and(config.seed),
            requested,
            focal_ids,
        },
        rules,
        similarity_threshold: config.similarity_threshold,
        outcomes,
        exclusions,
        runs,
        aggregate,
    })
}

/// Number of patents per value category among the outcomes.
pub fn category_counts(outcomes: &[PatentOutcome]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for o in outcomes {
        let name = o.value_category.map_or("unknown", ValueCategory::as_str);
        *counts.entry(name.to_string()).or_insert(0) += 1;
    }
    counts
}
