//! Shared test helpers: a naive reference simulator, random networks and
//! small hand-checked fixtures.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use knowsearch::corpus::PatentDoc;
use knowsearch::pkn::{PriorKnowledgeNetwork, Provenance};
use knowsearch::search::{SearchRule, SearchTarget, Termination};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn date(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

pub fn doc(id: &str, title: &str, abs: &str, prio: &str, publ: &str) -> PatentDoc {
    PatentDoc {
        id: id.into(),
        title: title.into(),
        abstract_text: abs.into(),
        priority_date: date(prio),
        publication_date: date(publ),
        forward_citations_5y: Some(0),
        focal_candidate: false,
        tagged_title: None,
        tagged_abstract: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveRun {
    pub steps: Vec<(String, f64)>,
    pub tsc: f64,
    pub terminated: Termination,
}

/// Reference search: every step rebuilds the frontier from the full edge
/// list and scores every candidate from scratch.
///
/// BFS and DFS order candidates by the step at which they first touched the
/// searched set (earliest for BFS, latest for DFS), then by key.
pub fn naive_search(
    pkn: &PriorKnowledgeNetwork,
    target: &SearchTarget,
    rule: SearchRule,
) -> NaiveRun {
    let keys: Vec<&str> = pkn.nodes().iter().map(|n| n.key.as_str()).collect();
    let edges: Vec<(&str, &str, f64)> = pkn
        .edges()
        .iter()
        .map(|e| (keys[e.a], keys[e.b], e.weight()))
        .collect();
    let degree = |k: &str| edges.iter().filter(|e| e.0 == k || e.1 == k).count() as f64;
    let strength = |k: &str| {
        edges
            .iter()
            .filter(|e| e.0 == k || e.1 == k)
            .map(|e| e.2)
            .sum::<f64>()
    };
    let birth: BTreeMap<&str, NaiveDate> = pkn
        .nodes()
        .iter()
        .map(|n| (n.key.as_str(), n.birthdate))
        .collect();

    let mut searched: BTreeSet<&str> = target
        .pkes
        .iter()
        .map(String::as_str)
        .filter(|k| birth.contains_key(k))
        .collect();
    let skes: BTreeSet<&str> = target.skes.iter().map(String::as_str).collect();
    let mut discovered: BTreeMap<&str, usize> = BTreeMap::new();
    let mut steps = Vec::new();
    let mut tsc = 0.0;
    loop {
        if skes.iter().all(|s| searched.contains(s)) {
            return NaiveRun {
                steps,
                tsc,
                terminated: Termination::Completed,
            };
        }
        // frontier with the heaviest edge into the searched set
        let mut frontier: BTreeMap<&str, f64> = BTreeMap::new();
        for &(a, b, w) in &edges {
            for (inside, outside) in [(a, b), (b, a)] {
                if searched.contains(inside) && !searched.contains(outside) {
                    let e = frontier.entry(outside).or_insert(0.0);
                    if w > *e {
                        *e = w;
                    }
                }
            }
        }
        if frontier.is_empty() {
            return NaiveRun {
                steps,
                tsc,
                terminated: Termination::FrontierExhausted,
            };
        }
        for k in frontier.keys() {
            discovered.entry(k).or_insert(steps.len());
        }
        // candidates come in ascending key order; `better` must be strict so
        // the first (smallest) key wins remaining ties
        let mut best: Option<&str> = None;
        for &k in frontier.keys() {
            let better = match best {
                None => true,
                Some(c) => match rule {
                    SearchRule::Bfs => discovered[k] < discovered[c],
                    SearchRule::Dfs => discovered[k] > discovered[c],
                    SearchRule::Familiarity => (frontier[k], degree(k)) > (frontier[c], degree(c)),
                    SearchRule::Degree => (degree(k), strength(k)) > (degree(c), strength(c)),
                    SearchRule::Recency => (birth[k], -degree(k)) > (birth[c], -degree(c)),
                },
            };
            if better {
                best = Some(k);
            }
        }
        let pick = best.unwrap();
        let cost = 1.0 / frontier[pick];
        tsc += cost;
        steps.push((pick.to_string(), cost));
        searched.insert(pick);
    }
}

/// Weight palettes for random networks; small palettes force ties.
#[derive(Debug, Clone, Copy)]
pub enum Weights {
    Mixed,
    AllEqual,
    Coarse,
}

/// A random simple graph on `n` nodes with adjacency and semantic edges,
/// plus PKEs and SKEs drawn from its nodes.
pub fn random_network(
    seed: u64,
    n: usize,
    weights: Weights,
) -> (PriorKnowledgeNetwork, SearchTarget) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<String> = (0..n)
        .map(|i| format!("ke{:02}", (i * 7 + 3) % 100))
        .collect();
    let days = [
        "2001-01-01",
        "2003-06-30",
        "2003-06-30",
        "2007-12-01",
        "2009-09-09",
    ];
    let nodes: Vec<(String, NaiveDate)> = keys
        .iter()
        .map(|k| (k.clone(), date(days.choose(&mut rng).unwrap())))
        .collect();
    let p = rng.random_range(0.08..0.5);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !rng.random_bool(p) {
                continue;
            }
            let prov = match weights {
                Weights::AllEqual => Provenance::Adjacency { count: 1 },
                Weights::Coarse => {
                    if rng.random_bool(0.5) {
                        Provenance::Adjacency {
                            count: rng.random_range(1..=2),
                        }
                    } else {
                        Provenance::Semantic { similarity: 0.8 }
                    }
                }
                Weights::Mixed => {
                    if rng.random_bool(0.6) {
                        Provenance::Adjacency {
                            count: rng.random_range(1..=6),
                        }
                    } else {
                        Provenance::Semantic {
                            similarity: *[0.7, 0.75, 0.8125, 0.9, 1.0].choose(&mut rng).unwrap(),
                        }
                    }
                }
            };
            edges.push((keys[i].clone(), keys[j].clone(), prov));
        }
    }
    let pkn = PriorKnowledgeNetwork::from_parts(nodes, edges).unwrap();
    let pick = |rng: &mut ChaCha8Rng, count: usize| -> Vec<String> {
        keys.choose_multiple(rng, count).cloned().collect()
    };
    let n_pke = rng.random_range(1..=3.min(n));
    let n_ske = rng.random_range(1..=5.min(n));
    let target = SearchTarget {
        pkes: pick(&mut rng, n_pke),
        skes: pick(&mut rng, n_ske),
        focal_pubdate: date("2012-01-01"),
    };
    (pkn, target)
}

/// PKE {a}, SKE {e}; edges a-b 4, a-c 1, b-e 2, c-e 0.8.
pub fn four_node_fixture() -> (PriorKnowledgeNetwork, SearchTarget) {
    let d = date("2000-01-01");
    let pkn = PriorKnowledgeNetwork::from_parts(
        ["a", "b", "c", "e"].map(|k| (k.to_string(), d)),
        [
            ("a".into(), "b".into(), Provenance::Adjacency { count: 4 }),
            ("a".into(), "c".into(), Provenance::Adjacency { count: 1 }),
            ("b".into(), "e".into(), Provenance::Adjacency { count: 2 }),
            (
                "c".into(),
                "e".into(),
                Provenance::Semantic { similarity: 0.8 },
            ),
        ],
    )
    .unwrap();
    let target = SearchTarget {
        pkes: vec!["a".into()],
        skes: vec!["e".into()],
        focal_pubdate: date("2010-01-01"),
    };
    (pkn, target)
}

/// Five prior documents and focal patent "F" (PKE "mask alignment", SKEs
/// "mask alignment" and "novel resist"). Only D1-D3 mention the PKE, so
/// "novel resist" needs one expansion, which pulls in D4 and D5.
///
/// Resulting network: mask alignment-wafer stage 2, wafer stage-lens 1,
/// mask alignment-light source 1, light source-novel resist 1,
/// wafer stage-novel resist 1; no semantic edges.
pub fn hand_corpus() -> Vec<PatentDoc> {
    vec![
        doc(
            "D1",
            "Exposure apparatus",
            "The mask alignment with a wafer stage and a lens.",
            "2000-06-01",
            "2001-06-01",
        ),
        doc(
            "D2",
            "Exposure apparatus",
            "A mask alignment for a wafer stage.",
            "2001-06-01",
            "2002-06-01",
        ),
        doc(
            "D3",
            "Illuminator",
            "The mask alignment with a light source.",
            "2002-06-01",
            "2003-06-01",
        ),
        doc(
            "D4",
            "Photoresist",
            "A light source with a novel resist.",
            "2003-06-01",
            "2004-06-01",
        ),
        doc(
            "D5",
            "Photoresist",
            "The wafer stage with a novel resist.",
            "2004-06-01",
            "2005-06-01",
        ),
        doc(
            "F",
            "Mask alignment",
            "The mask alignment with a novel resist.",
            "2010-01-01",
            "2011-01-01",
        ),
    ]
}
