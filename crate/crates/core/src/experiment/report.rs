//! Report files. Every file is written to a temporary sibling and renamed
//! into place.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{Aggregate, ExperimentError, ExperimentReport, RunRecord, SamplingInfo};
use crate::corpus::ValueCategory;
use crate::search::{write_trace_csv, SearchResult};

const RUNS_HEADER: [&str; 8] = [
    "focal_id",
    "rule",
    "tsc",
    "nsn",
    "terminated",
    "lcc_nodes",
    "lcc_density",
    "value_category",
];

/// Contents of `stats.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsDocument<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<&'a SamplingInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patents_excluded: Option<usize>,
    pub aggregate: &'a Aggregate,
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).map_err(|e| ExperimentError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| ExperimentError::io(path, e))
}

fn create_dir(path: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(path).map_err(|e| ExperimentError::io(path, e))
}

fn csv_bytes(
    path: &Path,
    fill: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
) -> Result<Vec<u8>, ExperimentError> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        fill(&mut w)
            .and_then(|_| w.flush().map_err(csv::Error::from))
            .map_err(|e| ExperimentError::Data {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
    }
    Ok(buf)
}

/// File-name-safe form of a patent id.
fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn write_runs_csv(path: &Path, runs: &[RunRecord]) -> Result<(), ExperimentError> {
    let bytes = csv_bytes(path, |w| {
        w.write_record(RUNS_HEADER)?;
        for r in runs {
            w.write_record([
                r.focal_id.as_str(),
                r.rule.as_str(),
                &r.tsc.to_string(),
                &r.nsn.to_string(),
                &r.terminated,
                &r.lcc_nodes.to_string(),
                &r.lcc_density.to_string(),
                r.value_category.map_or("", ValueCategory::as_str),
            ])?;
        }
        Ok(())
    })?;
    write_atomic(path, &bytes)
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>, ExperimentError> {
    let mut text = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| ExperimentError::io(path, e))?;
    let data_err = |line: u64, message: String| ExperimentError::Data {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| data_err(1, e.to_string()))?
        .clone();
    if header.iter().ne(RUNS_HEADER) {
        return Err(data_err(
            1,
            format!("expected header {}", RUNS_HEADER.join(",")),
        ));
    }
    let mut runs = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| data_err(line, e.to_string()))?;
        let field = |j: usize| row.get(j).unwrap_or("");
        let num = |j: usize| -> Result<f64, ExperimentError> {
            field(j)
                .parse::<f64>()
                .map_err(|_| data_err(line, format!("bad {} {:?}", RUNS_HEADER[j], field(j))))
        };
        let int = |j: usize| -> Result<usize, ExperimentError> {
            field(j)
                .parse::<usize>()
                .map_err(|_| data_err(line, format!("bad {} {:?}", RUNS_HEADER[j], field(j))))
        };
        let value_category = match field(7) {
            "" => None,
            s => Some(
                ValueCategory::parse(s)
                    .ok_or_else(|| data_err(line, format!("bad value_category {s:?}")))?,
            ),
        };
        runs.push(RunRecord {
            focal_id: field(0).to_string(),
            rule: field(1)
                .parse()
                .map_err(|e| data_err(line, format!("{e}")))?,
            tsc: num(2)?,
            nsn: int(3)?,
            terminated: field(4).to_string(),
            lcc_nodes: int(5)?,
            lcc_density: num(6)?,
            value_category,
        });
    }
    Ok(runs)
}

pub fn write_stats_json(path: &Path, doc: &StatsDocument) -> Result<(), ExperimentError> {
    let mut text = serde_json::to_string_pretty(doc).expect("stats serialize");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn write_progress(
    path: &Path,
    focal_id: &str,
    searches: &[SearchResult],
) -> Result<(), ExperimentError> {
    let bytes = csv_bytes(path, |w| {
        w.write_record([
            "focal_id",
            "rule",
            "step",
            "cumulative_tsc",
            "skes_found",
            "skes_total",
            "fraction_found",
        ])?;
        for s in searches {
            for step in &s.trace {
                w.write_record([
                    focal_id,
                    s.rule.as_str(),
                    &step.index.to_string(),
                    &step.cumulative.to_string(),
                    &step.skes_found.to_string(),
                    &s.skes_total.to_string(),
                    &(step.skes_found as f64 / s.skes_total as f64).to_string(),
                ])?;
            }
        }
        Ok(())
    })?;
    write_atomic(path, &bytes)
}

/// Writes `runs.csv`, `stats.json`, `exclusions.csv`, `traces/` and
/// `progress/` under `dir`. Returns the paths written.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
    let traces = dir.join("traces");
    let progress = dir.join("progress");
    create_dir(&traces)?;
    create_dir(&progress)?;
    let mut written = Vec::new();

    let runs = dir.join("runs.csv");
    write_runs_csv(&runs, &report.runs)?;
    written.push(runs);

    let stats = dir.join("stats.json");
    write_stats_json(
        &stats,
        &StatsDocument {
            sampling: Some(&report.sampling),
            similarity_threshold: Some(report.similarity_threshold),
            patents_excluded: Some(report.exclusions.len()),
            aggregate: &report.aggregate,
        },
    )?;
    written.push(stats);

    let exclusions = dir.join("exclusions.csv");
    let bytes = csv_bytes(&exclusions, |w| {
        w.write_record(["focal_id", "stage", "reason"])?;
        for e in &report.exclusions {
            w.write_record([e.focal_id.as_str(), e.stage.as_str(), e.reason.as_str()])?;
        }
        Ok(())
    })?;
    write_atomic(&exclusions, &bytes)?;
    written.push(exclusions);

    for o in &report.outcomes {
        let stem = file_stem(&o.focal_id);
        for s in &o.searches {
            let path = traces.join(format!("{stem}_{}.csv", s.rule));
            let mut bytes = Vec::new();
            write_trace_csv(&mut bytes, &o.focal_id, s).map_err(|e| ExperimentError::Data {
                path: path.clone(),
                message: e.to_string(),
            })?;
            write_atomic(&path, &bytes)?;
            written.push(path);
        }
        let path = progress.join(format!("{stem}.csv"));
        write_progress(&path, &o.focal_id, &o.searches)?;
        written.push(path);
    }
    Ok(written)
}
