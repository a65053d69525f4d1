//! Patent records and line-delimited corpus files.
//!
//! A corpus file holds one JSON object per line. Blank lines are ignored.
//! Records keep their file order, which is also the iteration order of
//! [`Corpus::docs`].

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::TaggedToken;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate patent id {0:?}")]
    DuplicateId(String),
    #[error("patent {0:?} has priority_date after publication_date")]
    DateOrderViolation(String),
    #[error("patent {0:?} has no 5-year forward citation count")]
    MissingCitations(String),
}

/// One patent record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentDoc {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub priority_date: NaiveDate,
    pub publication_date: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward_citations_5y: Option<u32>,
    #[serde(default)]
    pub focal_candidate: bool,
    /// Pre-tagged title tokens; when present they replace the built-in tagger.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tagged_title: Option<Vec<TaggedToken>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tagged_abstract: Option<Vec<TaggedToken>>,
}

impl PatentDoc {
    pub fn value_category(&self) -> Result<ValueCategory, CorpusError> {
        categorize_value(self)
    }
}

/// Value class by 5-year forward citations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueCategory {
    ZeroCited,
    MediumCited,
    HighlyCited,
}

impl ValueCategory {
    pub const ALL: [ValueCategory; 3] = [Self::ZeroCited, Self::MediumCited, Self::HighlyCited];

    pub fn from_citations(citations: u32) -> Self {
        match citations {
            0 => Self::ZeroCited,
            1..=19 => Self::MediumCited,
            _ => Self::HighlyCited,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ZeroCited => "zero_cited",
            Self::MediumCited => "medium_cited",
            Self::HighlyCited => "highly_cited",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ValueCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn categorize_value(doc: &PatentDoc) -> Result<ValueCategory, CorpusError> {
    doc.forward_citations_5y
        .map(ValueCategory::from_citations)
        .ok_or_else(|| CorpusError::MissingCitations(doc.id.clone()))
}

/// A validated, immutable collection of patent records.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    docs: Vec<PatentDoc>,
    index: HashMap<String, usize>,
}

impl Corpus {
    /// Validates and indexes `docs`, keeping their order.
    pub fn from_docs(docs: Vec<PatentDoc>) -> Result<Self, CorpusError> {
        let mut index = HashMap::with_capacity(docs.len());
        for (pos, doc) in docs.iter().enumerate() {
            validate(doc).map_err(|reason| CorpusError::MalformedRecord {
                line: pos + 1,
                reason,
            })?;
            if doc.priority_date > doc.publication_date {
                return Err(CorpusError::DateOrderViolation(doc.id.clone()));
            }
            if index.insert(doc.id.clone(), pos).is_some() {
                return Err(CorpusError::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Self { docs, index })
    }

    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut docs = Vec::new();
        let mut lines = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let doc: PatentDoc =
                serde_json::from_str(line).map_err(|e| CorpusError::MalformedRecord {
                    line: n + 1,
                    reason: e.to_string(),
                })?;
            docs.push(doc);
            lines.push(n + 1);
        }
        // Re-run validation so malformed-record errors carry file line numbers.
        for (doc, &line) in docs.iter().zip(&lines) {
            validate(doc).map_err(|reason| CorpusError::MalformedRecord { line, reason })?;
        }
        Self::from_docs(docs)
    }

    pub fn docs(&self) -> &[PatentDoc] {
        &self.docs
    }

    pub fn get(&self, id: &str) -> Option<&PatentDoc> {
        self.index.get(id).map(|&i| &self.docs[i])
    }

    /// Position of `id` in file order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Serializes back to the line-delimited file format.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.docs {
            out.push_str(&serde_json::to_string(doc).expect("PatentDoc serializes"));
            out.push('\n');
        }
        out
    }
}

fn validate(doc: &PatentDoc) -> Result<(), String> {
    if doc.id.trim().is_empty() {
        return Err("empty id".into());
    }
    if doc.focal_candidate {
        if doc.title.trim().is_empty() {
            return Err(format!("focal candidate {:?} has an empty title", doc.id));
        }
        if doc.abstract_text.trim().is_empty() {
            return Err(format!(
                "focal candidate {:?} has an empty abstract",
                doc.id
            ));
        }
    }
    Ok(())
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Corpus::parse(&text)
}
