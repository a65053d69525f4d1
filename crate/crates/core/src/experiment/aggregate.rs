//! Aggregate statistics over complete-case run records.

use std::collections::BTreeMap;

use serde::Serialize;

use super::RunRecord;
use crate::corpus::ValueCategory;
use crate::search::SearchRule;
use crate::stats::{
    descriptive, friedman_test, kruskal_wallis, linear_fit, nemenyi_posthoc, variance_homogeneity,
    Descriptive, LinearFit, PairedMatrix, StatsError, TestReport,
};

/// A statistic that was either computed or could not be.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Computed { result: T },
    NotApplicable { reason: String },
}

impl<T> Section<T> {
    fn from_result(r: Result<T, StatsError>) -> Self {
        match r {
            Ok(result) => Section::Computed { result },
            Err(e) => Section::NotApplicable {
                reason: e.to_string(),
            },
        }
    }

    fn not_applicable(reason: impl Into<String>) -> Self {
        Section::NotApplicable {
            reason: reason.into(),
        }
    }

    pub fn computed(&self) -> Option<&T> {
        match self {
            Section::Computed { result } => Some(result),
            Section::NotApplicable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub a: SearchRule,
    pub b: SearchRule,
    pub mean_rank_diff: f64,
    pub q: f64,
    pub p_value: f64,
    pub cohens_d: Option<f64>,
}

/// Friedman test with Nemenyi comparisons on one measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankAnalysis {
    pub friedman: TestReport,
    pub nemenyi: Vec<PairReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleDescriptives {
    pub rule: SearchRule,
    pub tsc: Descriptive,
    pub nsn: Descriptive,
}

/// TSC by value category for one rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub rule: SearchRule,
    pub groups: BTreeMap<&'static str, Descriptive>,
    pub kruskal_wallis: Section<TestReport>,
    pub variance_homogeneity: Section<TestReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitPair {
    pub rule: SearchRule,
    pub tsc_vs_lcc_nodes: Section<LinearFit>,
    pub tsc_vs_lcc_density: Section<LinearFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub rules: Vec<SearchRule>,
    /// Patents with a completed run for every rule; only these enter the
    /// statistics.
    pub complete_patents: Vec<String>,
    pub descriptives: Vec<RuleDescriptives>,
    pub tsc: Section<RankAnalysis>,
    pub nsn: Section<RankAnalysis>,
    pub value_groups: Vec<GroupReport>,
    pub fits: Vec<FitPair>,
}

fn rank_analysis(rules: &[SearchRule], rows: Vec<Vec<f64>>) -> Section<RankAnalysis> {
    if rules.len() < 2 {
        return Section::not_applicable("needs at least two rules");
    }
    let result = PairedMatrix::new(rows).and_then(|m| {
        let friedman = friedman_test(&m)?;
        let nemenyi = nemenyi_posthoc(&m)?
            .into_iter()
            .map(|p| PairReport {
                a: rules[p.a],
                b: rules[p.b],
                mean_rank_diff: p.mean_rank_diff,
                q: p.q,
                p_value: p.p_value,
                cohens_d: p.cohens_d,
            })
            .collect();
        Ok(RankAnalysis { friedman, nemenyi })
    });
    Section::from_result(result)
}

/// Statistics over the records of patents that completed every rule in
/// `rules`. Records for other rules are ignored.
pub fn aggregate(records: &[RunRecord], rules: &[SearchRule]) -> Aggregate {
    let mut rules = rules.to_vec();
    rules.sort();
    rules.dedup();

    let mut by_patent: BTreeMap<&str, BTreeMap<SearchRule, &RunRecord>> = BTreeMap::new();
    for r in records {
        if r.terminated == "completed" && rules.contains(&r.rule) {
            by_patent.entry(&r.focal_id).or_default().insert(r.rule, r);
        }
    }
    by_patent.retain(|_, runs| runs.len() == rules.len());
    let patents: Vec<&BTreeMap<SearchRule, &RunRecord>> = by_patent.values().collect();

    let column = |rule: SearchRule, f: &dyn Fn(&RunRecord) -> f64| -> Vec<f64> {
        patents.iter().map(|p| f(p[&rule])).collect()
    };
    let tsc = |r: &RunRecord| r.tsc;
    let nsn = |r: &RunRecord| r.nsn as f64;

    let descriptives = if patents.is_empty() {
        Vec::new()
    } else {
        rules
            .iter()
            .map(|&rule| RuleDescriptives {
                rule,
                tsc: descriptive(&column(rule, &tsc)).expect("non-empty"),
                nsn: descriptive(&column(rule, &nsn)).expect("non-empty"),
            })
            .collect()
    };

    let rows = |f: &dyn Fn(&RunRecord) -> f64| -> Vec<Vec<f64>> {
        patents
            .iter()
            .map(|p| rules.iter().map(|r| f(p[r])).collect())
            .collect()
    };

    let value_groups = rules
        .iter()
        .map(|&rule| {
            let mut groups: BTreeMap<ValueCategory, Vec<f64>> = BTreeMap::new();
            for p in &patents {
                let r = p[&rule];
                if let Some(cat) = r.value_category {
                    groups.entry(cat).or_default().push(r.tsc);
                }
            }
            let lists: Vec<Vec<f64>> = groups.values().cloned().collect();
            GroupReport {
                rule,
                groups: groups
                    .iter()
                    .map(|(c, v)| (c.as_str(), descriptive(v).expect("non-empty group")))
                    .collect(),
                kruskal_wallis: Section::from_result(kruskal_wallis(&lists)),
                variance_homogeneity: Section::from_result(variance_homogeneity(&lists)),
            }
        })
        .collect();

    let fits = rules
        .iter()
        .map(|&rule| {
            let y = column(rule, &tsc);
            FitPair {
                rule,
                tsc_vs_lcc_nodes: Section::from_result(linear_fit(
                    &column(rule, &|r| r.lcc_nodes as f64),
                    &y,
                )),
                tsc_vs_lcc_density: Section::from_result(linear_fit(
                    &column(rule, &|r| r.lcc_density),
                    &y,
                )),
            }
        })
        .collect();

    Aggregate {
        tsc: rank_analysis(&rules, rows(&tsc)),
        nsn: rank_analysis(&rules, rows(&nsn)),
        complete_patents: by_patent.keys().map(|k| k.to_string()).collect(),
        rules,
        descriptives,
        value_groups,
        fits,
    }
}
