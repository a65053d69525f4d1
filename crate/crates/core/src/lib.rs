//! Simulation of knowledge search over prior knowledge networks built from
//! patent text.
//!
//! The pipeline runs corpus loading, noun-phrase extraction, prior related
//! document retrieval, network construction, rule-driven search and the
//! statistics used to compare search rules.

pub mod corpus;
pub mod experiment;
pub mod extract;
pub mod pkn;
pub mod prd;
pub mod search;
pub mod similarity;
pub mod stats;

pub use corpus::{load_corpus, Corpus, CorpusError, PatentDoc, ValueCategory};
pub use extract::{extract_focal_elements, FocalElements, KnowledgeElement};
pub use pkn::{build_pkn, PknFile, PriorKnowledgeNetwork};
pub use prd::{build_prd, Prd};
pub use search::{run_search, SearchResult, SearchRule, SearchTarget};
