use std::collections::BTreeMap;

use chrono::NaiveDate;
use rayon::prelude::*;

use super::{PknError, PriorKnowledgeNetwork, Provenance};
use crate::corpus::Corpus;
use crate::extract::abstract_elements;
use crate::prd::{contains_phrase, doc_text, Prd};
use crate::similarity::key_similarity;

pub const DEFAULT_SIMILARITY_THRESHOLD: f64 = 0.7;

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Sentence-adjacency counts over PRD abstracts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdjacencyNetwork {
    /// Every extracted key with the earliest publication date it was extracted from.
    pub nodes: BTreeMap<String, NaiveDate>,
    /// Adjacency counts keyed by `(smaller key, larger key)`.
    pub counts: BTreeMap<(String, String), u32>,
}

impl AdjacencyNetwork {
    pub fn count(&self, a: &str, b: &str) -> Option<u32> {
        self.counts.get(&ordered(a, b)).copied()
    }
}

/// Counts consecutive knowledge elements within each abstract sentence of
/// every PRD document.
pub fn build_adjacency_network(corpus: &Corpus, prd: &Prd) -> AdjacencyNetwork {
    let mut an = AdjacencyNetwork::default();
    for doc in prd.docs(corpus) {
        for sentence in abstract_elements(doc) {
            for ke in &sentence {
                an.nodes
                    .entry(ke.key.clone())
                    .and_modify(|d| *d = (*d).min(doc.publication_date))
                    .or_insert(doc.publication_date);
            }
            for pair in sentence.windows(2) {
                if pair[0].key != pair[1].key {
                    *an.counts
                        .entry(ordered(&pair[0].key, &pair[1].key))
                        .or_insert(0) += 1;
                }
            }
        }
    }
    an
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SemanticNetwork {
    pub edges: BTreeMap<(String, String), f64>,
}

impl SemanticNetwork {
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        self.edges.get(&ordered(a, b)).copied()
    }
}

pub fn build_semantic_network<'a>(
    nodes: impl IntoIterator<Item = &'a str>,
    threshold: f64,
) -> SemanticNetwork {
    build_semantic_network_with(nodes, threshold, key_similarity)
}

/// Links every pair of distinct keys whose similarity reaches `threshold`.
pub fn build_semantic_network_with<'a, F>(
    nodes: impl IntoIterator<Item = &'a str>,
    threshold: f64,
    similarity: F,
) -> SemanticNetwork
where
    F: Fn(&str, &str) -> f64 + Sync,
{
    assert!(
        threshold > 0.0 && threshold <= 1.0,
        "similarity threshold must lie in (0, 1], got {threshold}"
    );
    let mut keys: Vec<&str> = nodes.into_iter().collect();
    keys.sort_unstable();
    keys.dedup();
    let n = keys.len();
    let edges: Vec<((String, String), f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let keys = &keys;
            let similarity = &similarity;
            (i + 1..n).filter_map(move |j| {
                let s = similarity(keys[i], keys[j]);
                (s >= threshold).then(|| ((keys[i].to_string(), keys[j].to_string()), s))
            })
        })
        .collect();
    SemanticNetwork {
        edges: edges.into_iter().collect(),
    }
}

/// Unions both edge sets. Pairs present in both keep the adjacency count.
///
/// Birthdates are the earliest publication date among PRD documents whose
/// title or abstract contains the key.
pub fn merge_networks(
    an: &AdjacencyNetwork,
    sn: &SemanticNetwork,
    corpus: &Corpus,
    prd: &Prd,
) -> Result<PriorKnowledgeNetwork, PknError> {
    let texts: Vec<(String, NaiveDate)> = prd
        .docs(corpus)
        .map(|d| (doc_text(d), d.publication_date))
        .collect();
    let nodes = an.nodes.iter().map(|(key, &extracted)| {
        let birthdate = texts
            .iter()
            .filter(|(text, _)| contains_phrase(text, key))
            .map(|&(_, date)| date)
            .fold(extracted, NaiveDate::min);
        (key.clone(), birthdate)
    });

    let mut edges: BTreeMap<&(String, String), Provenance> = sn
        .edges
        .iter()
        .map(|(pair, &similarity)| (pair, Provenance::Semantic { similarity }))
        .collect();
    for (pair, &count) in &an.counts {
        edges.insert(pair, Provenance::Adjacency { count });
    }
    PriorKnowledgeNetwork::from_parts(
        nodes,
        edges
            .into_iter()
            .map(|((a, b), p)| (a.clone(), b.clone(), p)),
    )
}

/// Adjacency network, semantic network over its nodes, then the merge.
pub fn build_pkn(
    corpus: &Corpus,
    prd: &Prd,
    threshold: f64,
) -> Result<PriorKnowledgeNetwork, PknError> {
    let an = build_adjacency_network(corpus, prd);
    let sn = build_semantic_network(an.nodes.keys().map(String::as_str), threshold);
    merge_networks(&an, &sn, corpus, prd)
}
