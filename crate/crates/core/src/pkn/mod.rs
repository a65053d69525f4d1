//! Prior knowledge networks (PKN).
//!
//! A PKN is a simple undirected weighted graph over knowledge-element keys.
//! Edges come either from sentence adjacency (weight = adjacency count) or
//! from phrase similarity (weight = similarity score). Node ids follow
//! ascending key order, so comparing ids is the same as comparing keys.

mod build;
mod io;

use std::collections::{BTreeSet, HashMap, VecDeque};

use chrono::NaiveDate;
use serde::Serialize;
use thiserror::Error;

pub use build::{
    build_adjacency_network, build_pkn, build_semantic_network, build_semantic_network_with,
    merge_networks, AdjacencyNetwork, SemanticNetwork, DEFAULT_SIMILARITY_THRESHOLD,
};
pub use io::{EdgeRecord, NodeRecord, PknFile};

pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum PknError {
    #[error("edge {0:?}-{1:?} is a self-loop")]
    SelfLoop(String, String),
    #[error("edge {0:?}-{1:?} appears more than once")]
    ParallelEdge(String, String),
    #[error("edge references unknown node {0:?}")]
    UnknownNode(String),
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("edge {0:?}-{1:?} has invalid weight {2} for its provenance")]
    InvalidWeight(String, String, f64),
    #[error("stored {attr} of node {key:?} does not match its edges")]
    AttributeMismatch { key: String, attr: &'static str },
    #[error("malformed network file: {0}")]
    Format(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Adjacency { count: u32 },
    Semantic { similarity: f64 },
}

impl Provenance {
    pub fn weight(self) -> f64 {
        match self {
            Provenance::Adjacency { count } => f64::from(count),
            Provenance::Semantic { similarity } => similarity,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Provenance::Adjacency { .. } => "adjacency",
            Provenance::Semantic { .. } => "semantic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub key: String,
    pub degree: usize,
    pub strength: f64,
    pub birthdate: NaiveDate,
}

/// An undirected edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub provenance: Provenance,
}

impl Edge {
    pub fn weight(&self) -> f64 {
        self.provenance.weight()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorKnowledgeNetwork {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    index: HashMap<String, NodeId>,
}

impl PriorKnowledgeNetwork {
    /// Builds a network from node keys with birthdates and keyed edges.
    ///
    /// Degree and strength are computed here from the edge set.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = (String, NaiveDate)>,
        edges: impl IntoIterator<Item = (String, String, Provenance)>,
    ) -> Result<Self, PknError> {
        let mut nodes: Vec<(String, NaiveDate)> = nodes.into_iter().collect();
        nodes.sort_by(|x, y| x.0.cmp(&y.0));
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, (key, _)) in nodes.iter().enumerate() {
            if index.insert(key.clone(), i).is_some() {
                return Err(PknError::DuplicateNode(key.clone()));
            }
        }

        let mut keyed: Vec<Edge> = Vec::new();
        for (ka, kb, provenance) in edges {
            let ia = *index
                .get(&ka)
                .ok_or_else(|| PknError::UnknownNode(ka.clone()))?;
            let ib = *index
                .get(&kb)
                .ok_or_else(|| PknError::UnknownNode(kb.clone()))?;
            if ia == ib {
                return Err(PknError::SelfLoop(ka, kb));
            }
            let valid = match provenance {
                Provenance::Adjacency { count } => count >= 1,
                Provenance::Semantic { similarity } => similarity > 0.0 && similarity <= 1.0,
            };
            if !valid {
                return Err(PknError::InvalidWeight(ka, kb, provenance.weight()));
            }
            keyed.push(Edge {
                a: ia.min(ib),
                b: ia.max(ib),
                provenance,
            });
        }
        keyed.sort_by_key(|e| (e.a, e.b));
        for pair in keyed.windows(2) {
            if (pair[0].a, pair[0].b) == (pair[1].a, pair[1].b) {
                return Err(PknError::ParallelEdge(
                    nodes[pair[0].a].0.clone(),
                    nodes[pair[0].b].0.clone(),
                ));
            }
        }

        let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); nodes.len()];
        for e in &keyed {
            adjacency[e.a].push((e.b, e.weight()));
            adjacency[e.b].push((e.a, e.weight()));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(n, _)| n);
        }
        let nodes = nodes
            .into_iter()
            .zip(&adjacency)
            .map(|((key, birthdate), adj)| Node {
                key,
                degree: adj.len(),
                strength: adj.iter().map(|&(_, w)| w).sum(),
                birthdate,
            })
            .collect();
        Ok(Self {
            nodes,
            edges: keyed,
            adjacency,
            index,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id(&self, key: &str) -> Option<NodeId> {
        self.index.get(key).copied()
    }

    pub fn key(&self, id: NodeId) -> &str {
        &self.nodes[id].key
    }

    /// Neighbors of `id` with edge weights, in ascending id (key) order.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[id]
    }

    pub fn edge_weight(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let list = &self.adjacency[a];
        list.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn edge(&self, ka: &str, kb: &str) -> Option<&Edge> {
        let (a, b) = (self.id(ka)?, self.id(kb)?);
        let (a, b) = (a.min(b), a.max(b));
        self.edges
            .binary_search_by_key(&(a, b), |e| (e.a, e.b))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for start in 0..self.nodes.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Nodes reachable from any of `starts` (including the starts).
    pub fn reachable_from(&self, starts: &[NodeId]) -> BTreeSet<NodeId> {
        let mut seen: BTreeSet<NodeId> = starts.iter().copied().collect();
        let mut queue: VecDeque<NodeId> = starts.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkStats {
    pub lcc_nodes: usize,
    pub lcc_edges: usize,
    pub lcc_density: f64,
    pub total_nodes: usize,
    pub total_edges: usize,
}

/// Size and density of the largest connected component.
///
/// Among equally large components the one holding the smallest key wins.
pub fn network_stats(pkn: &PriorKnowledgeNetwork) -> NetworkStats {
    let mut lcc: &[NodeId] = &[];
    let components = pkn.components();
    for comp in &components {
        if comp.len() > lcc.len() {
            lcc = comp;
        }
    }
    let lcc_edges: usize = lcc.iter().map(|&u| pkn.neighbors(u).len()).sum::<usize>() / 2;
    let v = lcc.len();
    let lcc_density = if v < 2 {
        0.0
    } else {
        2.0 * lcc_edges as f64 / (v as f64 * (v - 1) as f64)
    };
    NetworkStats {
        lcc_nodes: v,
        lcc_edges,
        lcc_density,
        total_nodes: pkn.node_count(),
        total_edges: pkn.edge_count(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Searchability {
    pub searchable: bool,
    pub start_nodes: usize,
    pub missing_pkes: Vec<String>,
    pub missing_skes: Vec<String>,
    pub unreachable_skes: Vec<String>,
}

impl Searchability {
    pub fn diagnosis(&self) -> String {
        if self.searchable {
            return "searchable".into();
        }
        let mut parts = Vec::new();
        if self.start_nodes == 0 {
            parts.push("no PKE is a network node".to_string());
        }
        if !self.missing_skes.is_empty() {
            parts.push(format!(
                "SKEs not in network: {}",
                self.missing_skes.join("; ")
            ));
        }
        if !self.unreachable_skes.is_empty() {
            parts.push(format!(
                "SKEs unreachable from PKEs: {}",
                self.unreachable_skes.join("; ")
            ));
        }
        parts.join(" | ")
    }
}

/// Checks that at least one PKE is a node and every SKE is reachable from
/// the PKE nodes.
pub fn check_searchability<'a>(
    pkn: &PriorKnowledgeNetwork,
    pkes: impl IntoIterator<Item = &'a str>,
    skes: impl IntoIterator<Item = &'a str>,
) -> Searchability {
    let mut starts = Vec::new();
    let mut missing_pkes = Vec::new();
    for k in pkes {
        match pkn.id(k) {
            Some(id) => starts.push(id),
            None => missing_pkes.push(k.to_string()),
        }
    }
    let reachable = pkn.reachable_from(&starts);
    let mut missing_skes = Vec::new();
    let mut unreachable_skes = Vec::new();
    for k in skes {
        match pkn.id(k) {
            None => missing_skes.push(k.to_string()),
            Some(id) if !reachable.contains(&id) => unreachable_skes.push(k.to_string()),
            Some(_) => {}
        }
    }
    let searchable = !starts.is_empty() && missing_skes.is_empty() && unreachable_skes.is_empty();
    Searchability {
        searchable,
        start_nodes: starts.len(),
        missing_pkes,
        missing_skes,
        unreachable_skes,
    }
}
