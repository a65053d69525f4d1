//! Single-agent knowledge search over a prior knowledge network.
//!
//! The agent starts with its PKEs as the searched set `V`. Every neighbor of
//! `V` outside it forms the frontier `N`. Each step the rule picks one
//! frontier node, the agent pays `1 / w` where `w` is the heaviest edge from
//! that node into `V`, and the node moves into `V`. The run ends once every
//! SKE is in `V`.

mod rule;

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};
use std::io::Write;

use chrono::NaiveDate;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::PatentDoc;
use crate::extract::FocalElements;
use crate::pkn::{NodeId, PknFile, PriorKnowledgeNetwork};

pub use rule::{SearchRule, UnknownRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no problem knowledge element is a node of the network")]
    NoStartNodes,
    #[error("the frontier is empty")]
    EmptyFrontier,
    #[error("search did not finish within {0} steps")]
    BudgetExceeded(usize),
}

/// What the agent knows at the start and what it is looking for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchTarget {
    pub pkes: Vec<String>,
    pub skes: Vec<String>,
    /// Publication date of the focal patent, the reference for recency.
    pub focal_pubdate: NaiveDate,
}

impl SearchTarget {
    pub fn new(focal: &PatentDoc, elements: &FocalElements) -> Self {
        Self {
            pkes: elements.pke_keys().map(str::to_string).collect(),
            skes: elements.ske_keys().map(str::to_string).collect(),
            focal_pubdate: focal.publication_date,
        }
    }

    pub fn from_file(file: &PknFile) -> Self {
        Self {
            pkes: file.pkes.clone(),
            skes: file.skes.clone(),
            focal_pubdate: file.focal_publication_date,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    FrontierExhausted,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::FrontierExhausted => "frontier_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    /// 1-based step number.
    pub index: usize,
    pub selected: String,
    pub cost: f64,
    pub cumulative: f64,
    pub skes_found: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub rule: SearchRule,
    pub tsc: f64,
    pub nsn: usize,
    pub skes_total: usize,
    pub trace: Vec<Step>,
    pub terminated: Termination,
}

/// `f64` with a total order, for heap keys.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Score(f64);

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// A frontier node's rank under an informed rule. Larger is better: rule
/// value first, then the rule's tiebreaker, then the smaller key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CandidateScore {
    value: Score,
    tiebreak: Score,
    key: Reverse<NodeId>,
}

impl CandidateScore {
    pub fn node(&self) -> NodeId {
        self.key.0
    }
}

/// Days from a node's birthdate to the focal publication date.
pub fn age_days(pkn: &PriorKnowledgeNetwork, node: NodeId, focal_pubdate: NaiveDate) -> i64 {
    (focal_pubdate - pkn.node(node).birthdate).num_days()
}

/// Scores `node` under an informed rule. `familiarity` is the heaviest edge
/// weight from `node` into the searched set.
pub fn candidate_score(
    rule: SearchRule,
    pkn: &PriorKnowledgeNetwork,
    node: NodeId,
    familiarity: f64,
    focal_pubdate: NaiveDate,
) -> CandidateScore {
    let n = pkn.node(node);
    let (value, tiebreak) = match rule {
        SearchRule::Familiarity => (familiarity, n.degree as f64),
        SearchRule::Degree => (n.degree as f64, n.strength),
        // most recent first, then the smallest degree
        SearchRule::Recency => (
            -(age_days(pkn, node, focal_pubdate) as f64),
            -(n.degree as f64),
        ),
        SearchRule::Bfs | SearchRule::Dfs => panic!("{rule} has no candidate score"),
    };
    CandidateScore {
        value: Score(value),
        tiebreak: Score(tiebreak),
        key: Reverse(node),
    }
}

#[derive(Debug, Clone)]
enum Order {
    Queue(VecDeque<NodeId>),
    Stack(Vec<NodeId>),
    Heap(BinaryHeap<CandidateScore>),
}

/// Searched set, frontier and per-rule selection structure.
#[derive(Debug, Clone)]
pub struct SearchState<'a> {
    pkn: &'a PriorKnowledgeNetwork,
    rule: SearchRule,
    focal_pubdate: NaiveDate,
    searched: Vec<NodeId>,
    in_searched: Vec<bool>,
    in_frontier: Vec<bool>,
    frontier_len: usize,
    /// Heaviest edge weight into the searched set; 0 when there is none.
    best_weight: Vec<f64>,
    is_ske: Vec<bool>,
    skes_total: usize,
    skes_found: usize,
    order: Order,
}

impl<'a> SearchState<'a> {
    /// Seeds `V` with the PKEs present in the network and `N` with their neighbors.
    pub fn new(
        pkn: &'a PriorKnowledgeNetwork,
        target: &SearchTarget,
        rule: SearchRule,
    ) -> Result<Self, SearchError> {
        let n = pkn.node_count();
        let mut starts: Vec<NodeId> = target.pkes.iter().filter_map(|k| pkn.id(k)).collect();
        starts.sort_unstable();
        starts.dedup();
        if starts.is_empty() {
            return Err(SearchError::NoStartNodes);
        }
        let mut skes: Vec<&str> = target.skes.iter().map(String::as_str).collect();
        skes.sort_unstable();
        skes.dedup();
        let mut is_ske = vec![false; n];
        for k in &skes {
            if let Some(id) = pkn.id(k) {
                is_ske[id] = true;
            }
        }
        let order = match rule {
            SearchRule::Bfs => Order::Queue(VecDeque::new()),
            SearchRule::Dfs => Order::Stack(Vec::new()),
            _ => Order::Heap(BinaryHeap::new()),
        };
        let mut state = Self {
            pkn,
            rule,
            focal_pubdate: target.focal_pubdate,
            searched: Vec::with_capacity(n),
            in_searched: vec![false; n],
            in_frontier: vec![false; n],
            frontier_len: 0,
            best_weight: vec![0.0; n],
            is_ske,
            skes_total: skes.len(),
            skes_found: 0,
            order,
        };
        for &s in &starts {
            state.mark_searched(s);
        }
        let mut seeds: Vec<NodeId> = Vec::new();
        for &s in &starts {
            for &(v, _) in pkn.neighbors(s) {
                if !state.in_searched[v] {
                    seeds.push(v);
                }
            }
        }
        seeds.sort_unstable();
        seeds.dedup();
        state.enqueue(&seeds);
        Ok(state)
    }

    fn mark_searched(&mut self, node: NodeId) {
        self.in_searched[node] = true;
        self.searched.push(node);
        if self.is_ske[node] {
            self.skes_found += 1;
        }
        for &(v, w) in self.pkn.neighbors(node) {
            if !self.in_searched[v] && w > self.best_weight[v] {
                self.best_weight[v] = w;
                if self.in_frontier[v] && self.rule == SearchRule::Familiarity {
                    self.push_scored(v);
                }
            }
        }
    }

    fn push_scored(&mut self, node: NodeId) {
        let score = candidate_score(
            self.rule,
            self.pkn,
            node,
            self.best_weight[node],
            self.focal_pubdate,
        );
        if let Order::Heap(heap) = &mut self.order {
            heap.push(score);
        }
    }

    /// Adds fresh nodes (ascending) to the frontier.
    fn enqueue(&mut self, fresh: &[NodeId]) {
        for &v in fresh {
            self.in_frontier[v] = true;
        }
        self.frontier_len += fresh.len();
        match &mut self.order {
            Order::Queue(q) => q.extend(fresh.iter().copied()),
            // smallest key ends on top
            Order::Stack(s) => s.extend(fresh.iter().rev().copied()),
            Order::Heap(_) => {
                for &v in fresh {
                    self.push_scored(v);
                }
            }
        }
    }

    pub fn searched(&self) -> &[NodeId] {
        &self.searched
    }

    pub fn frontier(&self) -> Vec<NodeId> {
        (0..self.in_frontier.len())
            .filter(|&i| self.in_frontier[i])
            .collect()
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier_len
    }

    pub fn skes_found(&self) -> usize {
        self.skes_found
    }

    pub fn skes_total(&self) -> usize {
        self.skes_total
    }

    pub fn is_complete(&self) -> bool {
        self.skes_found == self.skes_total
    }

    /// The frontier node the rule picks next. Does not modify the frontier.
    pub fn select_next(&mut self) -> Result<NodeId, SearchError> {
        if self.frontier_len == 0 {
            return Err(SearchError::EmptyFrontier);
        }
        let (in_frontier, best_weight) = (&self.in_frontier, &self.best_weight);
        let picked = match &mut self.order {
            Order::Queue(q) => q.front().copied(),
            Order::Stack(s) => s.last().copied(),
            Order::Heap(heap) => {
                // drop entries for searched nodes and superseded familiarity scores
                while let Some(top) = heap.peek() {
                    let v = top.node();
                    let stale = !in_frontier[v]
                        || (self.rule == SearchRule::Familiarity && top.value.0 != best_weight[v]);
                    if stale {
                        heap.pop();
                    } else {
                        break;
                    }
                }
                heap.peek().map(CandidateScore::node)
            }
        };
        Ok(picked.expect("frontier bookkeeping matches the order structure"))
    }

    /// `1 / w` for the heaviest edge from `node` into the searched set.
    pub fn step_cost(&self, node: NodeId) -> f64 {
        debug_assert!(self.in_frontier[node]);
        1.0 / self.best_weight[node]
    }

    /// Moves `node` from the frontier into the searched set.
    pub fn advance(&mut self, node: NodeId) {
        assert!(
            self.in_frontier[node],
            "only frontier nodes can be searched"
        );
        match &mut self.order {
            Order::Queue(q) => {
                if q.front() == Some(&node) {
                    q.pop_front();
                } else {
                    q.retain(|&v| v != node);
                }
            }
            Order::Stack(s) => {
                if s.last() == Some(&node) {
                    s.pop();
                } else {
                    s.retain(|&v| v != node);
                }
            }
            Order::Heap(_) => {}
        }
        self.in_frontier[node] = false;
        self.frontier_len -= 1;
        self.mark_searched(node);
        let fresh: Vec<NodeId> = self
            .pkn
            .neighbors(node)
            .iter()
            .map(|&(v, _)| v)
            .filter(|&v| !self.in_searched[v] && !self.in_frontier[v])
            .collect();
        self.enqueue(&fresh);
    }
}

/// Runs one rule until every SKE is searched or the frontier runs dry.
///
/// `max_steps` caps the number of steps; hitting the cap before the natural
/// end is an error.
pub fn run_search(
    pkn: &PriorKnowledgeNetwork,
    target: &SearchTarget,
    rule: SearchRule,
    max_steps: Option<usize>,
) -> Result<SearchResult, SearchError> {
    let mut state = SearchState::new(pkn, target, rule)?;
    let mut trace: Vec<Step> = Vec::new();
    let mut tsc = 0.0;
    let terminated = loop {
        if state.is_complete() {
            break Termination::Completed;
        }
        if state.frontier_len() == 0 {
            break Termination::FrontierExhausted;
        }
        if let Some(limit) = max_steps {
            if trace.len() >= limit {
                return Err(SearchError::BudgetExceeded(limit));
            }
        }
        let node = state.select_next()?;
        let cost = state.step_cost(node);
        state.advance(node);
        tsc += cost;
        trace.push(Step {
            index: trace.len() + 1,
            selected: pkn.key(node).to_string(),
            cost,
            cumulative: tsc,
            skes_found: state.skes_found(),
        });
    };
    Ok(SearchResult {
        rule,
        tsc,
        nsn: trace.len(),
        skes_total: state.skes_total(),
        trace,
        terminated,
    })
}

/// Writes a trace as CSV with a header row.
pub fn write_trace_csv<W: Write>(
    writer: W,
    focal_id: &str,
    result: &SearchResult,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "focal_id",
        "rule",
        "step",
        "selected_ke",
        "cost",
        "cumulative_tsc",
        "skes_found",
    ])?;
    for s in &result.trace {
        w.write_record([
            focal_id,
            result.rule.as_str(),
            &s.index.to_string(),
            &s.selected,
            &s.cost.to_string(),
            &s.cumulative.to_string(),
            &s.skes_found.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
