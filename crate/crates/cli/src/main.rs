use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use knowsearch::corpus::load_corpus;
use knowsearch::experiment::synth::{write_synthetic_corpus, SynthError, SynthParams};
use knowsearch::experiment::{
    aggregate, emit_report, read_runs_csv, run_experiment, write_stats_json, ExperimentConfig,
    ExperimentError, StatsDocument,
};
use knowsearch::extract::extract_focal_elements;
use knowsearch::pkn::{build_pkn, network_stats, PknFile, DEFAULT_SIMILARITY_THRESHOLD};
use knowsearch::prd::build_prd;
use knowsearch::search::{run_search, write_trace_csv, SearchRule, SearchTarget};

const CONFIG_ERROR: u8 = 2;
const DATA_ERROR: u8 = 3;
const NO_USABLE_FOCAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "knowsearch",
    version,
    about = "Knowledge-search simulation on patent corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus as JSON lines
    Synth {
        #[arg(long, default_value_t = 200)]
        patents: usize,
        #[arg(long, default_value_t = 240)]
        vocab: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        phrases_per_abstract: usize,
        #[arg(long, default_value_t = 6)]
        topics: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the PKEs and SKEs of one patent
    Extract {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        patent: String,
    },
    /// Build and export the prior knowledge network of a focal patent
    BuildPkn {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        focal: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SIMILARITY_THRESHOLD)]
        threshold: f64,
    },
    /// Run one search rule on an exported network
    Simulate {
        #[arg(long)]
        pkn: PathBuf,
        #[arg(long)]
        rule: SearchRule,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Run a full experiment from a JSON config
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Recompute aggregate statistics from an existing runs.csv
    Stats {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn data(message: impl std::fmt::Display) -> Self {
        Self::new(DATA_ERROR, message.to_string())
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        let code = match &e {
            ExperimentError::Config(_) => CONFIG_ERROR,
            ExperimentError::NoUsableFocalPatents(_) => NO_USABLE_FOCAL,
            _ => DATA_ERROR,
        };
        let mut message = e.to_string();
        if let ExperimentError::NoUsableFocalPatents(ex) = &e {
            for x in ex {
                message.push_str(&format!(
                    "\n  {} [{}] {}",
                    x.focal_id,
                    x.stage.as_str(),
                    x.reason
                ));
            }
        }
        Failure::new(code, message)
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    let mut say = |line: String| {
        let _ = writeln!(out, "{line}");
    };
    match cli.command {
        Command::Synth {
            patents,
            vocab,
            seed,
            phrases_per_abstract,
            topics,
            out: path,
        } => {
            let params = SynthParams {
                n_patents: patents,
                vocab_size: vocab,
                phrases_per_abstract,
                topics,
                seed,
                ..SynthParams::default()
            };
            let corpus = write_synthetic_corpus(&params, &path).map_err(|e| match e {
                SynthError::InvalidParams(_) => Failure::new(CONFIG_ERROR, e.to_string()),
                SynthError::Io { .. } => Failure::data(e),
            })?;
            say(format!(
                "wrote {} patents to {}",
                corpus.len(),
                path.display()
            ));
        }
        Command::Extract { corpus, patent } => {
            let corpus = load_corpus(&corpus).map_err(Failure::data)?;
            let doc = corpus
                .get(&patent)
                .ok_or_else(|| Failure::data(format!("patent {patent} not in corpus")))?;
            let elements = extract_focal_elements(doc).map_err(Failure::data)?;
            say("PKEs:".into());
            elements.pke_keys().for_each(|k| say(format!("  {k}")));
            say("SKEs:".into());
            elements.ske_keys().for_each(|k| say(format!("  {k}")));
        }
        Command::BuildPkn {
            corpus,
            focal,
            out: path,
            threshold,
        } => {
            if !(threshold > 0.0 && threshold <= 1.0) {
                return Err(Failure::new(CONFIG_ERROR, "threshold must be in (0, 1]"));
            }
            let corpus = load_corpus(&corpus).map_err(Failure::data)?;
            let doc = corpus
                .get(&focal)
                .ok_or_else(|| Failure::data(format!("patent {focal} not in corpus")))?;
            let unusable =
                |e: &dyn std::fmt::Display| Failure::new(NO_USABLE_FOCAL, format!("{focal}: {e}"));
            let elements = extract_focal_elements(doc).map_err(|e| unusable(&e))?;
            let prd = build_prd(&corpus, doc, &elements).map_err(|e| unusable(&e))?;
            let pkn = build_pkn(&corpus, &prd, threshold).map_err(Failure::data)?;
            let pkes: Vec<String> = elements.pke_keys().map(str::to_string).collect();
            let skes: Vec<String> = elements.ske_keys().map(str::to_string).collect();
            let file = PknFile::new(&pkn, &doc.id, doc.publication_date, &pkes, &skes);
            write_file(&path, file.to_json().as_bytes())?;
            let s = network_stats(&pkn);
            say(format!(
                "PRD {} docs, {} expansions; PKN {} nodes, {} edges; LCC {} nodes, density {:.4}",
                prd.doc_ids.len(),
                prd.expansion_log.len(),
                s.total_nodes,
                s.total_edges,
                s.lcc_nodes,
                s.lcc_density
            ));
        }
        Command::Simulate {
            pkn,
            rule,
            trace,
            max_steps,
        } => {
            if max_steps == Some(0) {
                return Err(Failure::new(CONFIG_ERROR, "max-steps must be at least 1"));
            }
            let file = PknFile::from_json(&read_to_string(&pkn)?).map_err(Failure::data)?;
            let network = file.network().map_err(Failure::data)?;
            let target = SearchTarget::from_file(&file);
            let result = run_search(&network, &target, rule, max_steps)
                .map_err(|e| Failure::new(NO_USABLE_FOCAL, e.to_string()))?;
            if let Some(path) = trace {
                let mut bytes = Vec::new();
                write_trace_csv(&mut bytes, &file.focal_id, &result).map_err(Failure::data)?;
                write_file(&path, &bytes)?;
            }
            say(format!(
                "{} {}: tsc {} nsn {} ({}, {}/{} SKEs)",
                file.focal_id,
                rule,
                result.tsc,
                result.nsn,
                result.terminated.as_str(),
                result.trace.last().map_or(0, |s| s.skes_found),
                result.skes_total
            ));
        }
        Command::Experiment { config } => {
            let config = ExperimentConfig::load(&config)?;
            let report = run_experiment(&config)?;
            emit_report(&report, &config.output_dir)?;
            say(format!(
                "{} patents sampled, {} searched, {} excluded; reports in {}",
                report.sampling.focal_ids.len(),
                report.outcomes.len(),
                report.exclusions.len(),
                config.output_dir.display()
            ));
            for d in &report.aggregate.descriptives {
                say(format!(
                    "  {:<12} mean TSC {:>9.3}  median {:>9.3}  mean NSN {:>8.2}",
                    d.rule.as_str(),
                    d.tsc.mean,
                    d.tsc.median,
                    d.nsn.mean
                ));
            }
            if let Some(rank) = report.aggregate.tsc.computed() {
                say(format!(
                    "  Friedman on TSC: chi2 {:.3}, p {:.3e}",
                    rank.friedman.statistic, rank.friedman.p_value
                ));
            }
        }
        Command::Stats { runs, out: path } => {
            let records = read_runs_csv(&runs)?;
            let mut rules: Vec<SearchRule> = records.iter().map(|r| r.rule).collect();
            rules.sort();
            rules.dedup();
            let agg = aggregate(&records, &rules);
            write_stats_json(
                &path,
                &StatsDocument {
                    sampling: None,
                    similarity_threshold: None,
                    patents_excluded: None,
                    aggregate: &agg,
                },
            )?;
            say(format!(
                "{} complete patents over {} rules; wrote {}",
                agg.complete_patents.len(),
                rules.len(),
                path.display()
            ));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
