//! Knowledge-element extraction from patent titles and abstracts.
//!
//! Titles yield problem knowledge elements (PKEs), abstracts yield solution
//! knowledge elements (SKEs). Both go through the same tokenizer, rule-based
//! tagger and pattern chunker.

mod chunk;
mod tagger;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::PatentDoc;

pub use chunk::chunk_noun_phrases;
pub use tagger::{
    pos_tag, split_sentences, split_tagged_sentences, tag_word, tokenize, Tag, TaggedToken,
    DETERMINERS, FUNCTION_WORDS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TextField {
    Title,
    Abstract,
}

impl fmt::Display for TextField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextField::Title => f.write_str("title"),
            TextField::Abstract => f.write_str("abstract"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no knowledge elements found in {0}")]
    NoElementsFound(TextField),
}

/// Lowercases, collapses whitespace and strips leading determiners.
pub fn normalize(text: &str) -> String {
    let lower = text.to_lowercase();
    let mut words: Vec<&str> = lower.split_whitespace().collect();
    let skip = words.iter().take_while(|w| DETERMINERS.contains(w)).count();
    words.drain(..skip);
    words.join(" ")
}

/// A normalized noun phrase. Identity, ordering and hashing use `key` only.
#[derive(Debug, Clone, Serialize)]
pub struct KnowledgeElement {
    pub key: String,
    pub surface_forms: BTreeSet<String>,
}

impl KnowledgeElement {
    /// Builds an element from a bare key, normalizing it. `None` if empty.
    pub fn new(text: &str) -> Option<Self> {
        let key = normalize(text);
        if key.is_empty() {
            return None;
        }
        Some(Self {
            surface_forms: BTreeSet::from([text.to_string()]),
            key,
        })
    }

    fn from_tokens(tokens: &[TaggedToken]) -> Option<Self> {
        let content: Vec<&str> = tokens
            .iter()
            .filter(|t| t.tag != Tag::Dt)
            .map(|t| t.surface.as_str())
            .collect();
        let key = normalize(&content.join(" "));
        if key.is_empty() {
            return None;
        }
        let surface = tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        Some(Self {
            key,
            surface_forms: BTreeSet::from([surface]),
        })
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.key.split(' ')
    }
}

impl PartialEq for KnowledgeElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for KnowledgeElement {}

impl Hash for KnowledgeElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for KnowledgeElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KnowledgeElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for KnowledgeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

/// The PKEs and SKEs of one focal patent, each sorted by key.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocalElements {
    pub pkes: Vec<KnowledgeElement>,
    pub skes: Vec<KnowledgeElement>,
}

impl FocalElements {
    pub fn pke_keys(&self) -> impl Iterator<Item = &str> {
        self.pkes.iter().map(|k| k.key.as_str())
    }

    pub fn ske_keys(&self) -> impl Iterator<Item = &str> {
        self.skes.iter().map(|k| k.key.as_str())
    }
}

/// Chunks each sentence of `text` (or of its pre-tagged form).
pub fn sentence_elements(
    text: &str,
    pretagged: Option<&[TaggedToken]>,
) -> Vec<Vec<KnowledgeElement>> {
    match pretagged {
        Some(tokens) => split_tagged_sentences(tokens)
            .into_iter()
            .map(chunk_noun_phrases)
            .collect(),
        None => split_sentences(text)
            .into_iter()
            .map(|s| chunk_noun_phrases(&pos_tag(s)))
            .collect(),
    }
}

/// Ordered knowledge elements of a document's abstract, one list per sentence.
pub fn abstract_elements(doc: &PatentDoc) -> Vec<Vec<KnowledgeElement>> {
    sentence_elements(&doc.abstract_text, doc.tagged_abstract.as_deref())
}

pub fn title_elements(doc: &PatentDoc) -> Vec<Vec<KnowledgeElement>> {
    sentence_elements(&doc.title, doc.tagged_title.as_deref())
}

fn distinct(lists: Vec<Vec<KnowledgeElement>>) -> Vec<KnowledgeElement> {
    let mut merged: BTreeMap<String, KnowledgeElement> = BTreeMap::new();
    for ke in lists.into_iter().flatten() {
        merged
            .entry(ke.key.clone())
            .and_modify(|e| e.surface_forms.extend(ke.surface_forms.iter().cloned()))
            .or_insert(ke);
    }
    merged.into_values().collect()
}

/// PKEs from the title and SKEs from the abstract, deduplicated by key.
pub fn extract_focal_elements(doc: &PatentDoc) -> Result<FocalElements, ExtractError> {
    let pkes = distinct(title_elements(doc));
    if pkes.is_empty() {
        return Err(ExtractError::NoElementsFound(TextField::Title));
    }
    let skes = distinct(abstract_elements(doc));
    if skes.is_empty() {
        return Err(ExtractError::NoElementsFound(TextField::Abstract));
    }
    Ok(FocalElements { pkes, skes })
}
