//! Prior related documents (PRD) for a focal patent.
//!
//! The PRD starts as every document published strictly before the focal
//! priority date whose title or abstract contains one of the focal PKEs.
//! SKEs that this initial set misses are appended to the query one at a
//! time, rarest first, until every SKE is covered.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use chrono::NaiveDate;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Corpus, PatentDoc};
use crate::extract::{tokenize, FocalElements, KnowledgeElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrdError {
    #[error("focal patent has no problem knowledge elements")]
    NoPkes,
    #[error("solution knowledge elements cannot be covered before the priority date: {0:?}")]
    UncoverableSkes(Vec<String>),
}

/// Lowercased word text of each document, for phrase lookups.
///
/// Title and abstract are kept apart so a phrase never spans the two.
#[derive(Debug, Clone)]
pub struct TextIndex {
    texts: Vec<String>,
    pub_dates: Vec<NaiveDate>,
    ids: Vec<String>,
}

/// Lowercased words of `text` joined by single spaces.
pub(crate) fn word_text(text: &str) -> String {
    tokenize(text)
        .into_iter()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Searchable text of a document: title and abstract words, padded with
/// spaces and separated so that no phrase spans the two fields.
pub(crate) fn doc_text(doc: &PatentDoc) -> String {
    format!(
        " {} | {} ",
        word_text(&doc.title),
        word_text(&doc.abstract_text)
    )
}

pub(crate) fn contains_phrase(text: &str, key: &str) -> bool {
    text.contains(format!(" {key} ").as_str())
}

impl TextIndex {
    pub fn new(corpus: &Corpus) -> Self {
        let docs = corpus.docs();
        Self {
            texts: docs.iter().map(doc_text).collect(),
            pub_dates: docs.iter().map(|d| d.publication_date).collect(),
            ids: docs.iter().map(|d| d.id.clone()).collect(),
        }
    }

    /// Positions (file order) of documents published before `d0` that contain any key.
    fn matching(&self, keys: &[&str], d0: NaiveDate) -> Vec<usize> {
        (0..self.texts.len())
            .filter(|&i| self.pub_dates[i] < d0)
            .filter(|&i| keys.iter().any(|k| contains_phrase(&self.texts[i], k)))
            .collect()
    }

    /// Whether document `pos` contains `key` as a whole-word phrase.
    pub fn contains(&self, pos: usize, key: &str) -> bool {
        contains_phrase(&self.texts[pos], key)
    }

    pub fn retrievals(&self, key: &str, d0: NaiveDate) -> usize {
        self.matching(&[key], d0).len()
    }
}

/// Ids of documents published strictly before `d0` whose title or abstract
/// contains at least one key. The focal patent is never returned because its
/// publication date is not before its own priority date.
pub fn match_query(corpus: &Corpus, kes: &[KnowledgeElement], d0: NaiveDate) -> BTreeSet<String> {
    let index = TextIndex::new(corpus);
    let keys: Vec<&str> = kes.iter().map(|k| k.key.as_str()).collect();
    index
        .matching(&keys, d0)
        .into_iter()
        .map(|i| index.ids[i].clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrdSpec {
    pub focal_id: String,
    pub d0: NaiveDate,
    pub query_kes: Vec<String>,
    /// SKEs missing from the initial PRD, in expansion order.
    pub uncovered: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub ske: String,
    pub retrievals: usize,
    pub prd_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prd {
    pub spec: PrdSpec,
    pub doc_ids: BTreeSet<String>,
    pub coverage: BTreeMap<String, bool>,
    pub expansion_log: Vec<Expansion>,
}

impl Prd {
    pub fn fully_covered(&self) -> bool {
        self.coverage.values().all(|&c| c)
    }

    pub fn docs<'a>(&'a self, corpus: &'a Corpus) -> impl Iterator<Item = &'a PatentDoc> + 'a {
        self.doc_ids.iter().filter_map(|id| corpus.get(id))
    }
}

pub fn build_prd(
    corpus: &Corpus,
    focal: &PatentDoc,
    elements: &FocalElements,
) -> Result<Prd, PrdError> {
    build_prd_indexed(&TextIndex::new(corpus), focal, elements)
}

pub fn build_prd_indexed(
    index: &TextIndex,
    focal: &PatentDoc,
    elements: &FocalElements,
) -> Result<Prd, PrdError> {
    if elements.pkes.is_empty() {
        return Err(PrdError::NoPkes);
    }
    let d0 = focal.priority_date;
    let mut query: Vec<String> = elements.pke_keys().map(str::to_string).collect();
    let query_refs: Vec<&str> = query.iter().map(String::as_str).collect();
    let mut prd: BTreeSet<usize> = index.matching(&query_refs, d0).into_iter().collect();

    let covers = |prd: &BTreeSet<usize>, key: &str| prd.iter().any(|&i| index.contains(i, key));
    let mut coverage: BTreeMap<String, bool> = elements
        .ske_keys()
        .map(|k| (k.to_string(), covers(&prd, k)))
        .collect();

    let mut ranked: Vec<(String, usize)> = coverage
        .iter()
        .filter(|(_, &c)| !c)
        .map(|(k, _)| (k.clone(), index.retrievals(k, d0)))
        .collect();
    ranked.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    let mut log = Vec::new();
    for (ske, retrievals) in &ranked {
        if coverage.values().all(|&c| c) {
            break;
        }
        // appending an SKE with no retrievals cannot change the PRD
        if *retrievals == 0 {
            continue;
        }
        prd.extend(index.matching(&[ske.as_str()], d0));
        query.push(ske.clone());
        for (k, c) in coverage.iter_mut() {
            if !*c {
                *c = covers(&prd, k);
            }
        }
        log.push(Expansion {
            ske: ske.clone(),
            retrievals: *retrievals,
            prd_size: prd.len(),
        });
    }

    let missing: Vec<String> = coverage
        .iter()
        .filter(|(_, &c)| !c)
        .map(|(k, _)| k.clone())
        .collect();
    if !missing.is_empty() {
        return Err(PrdError::UncoverableSkes(missing));
    }

    Ok(Prd {
        spec: PrdSpec {
            focal_id: focal.id.clone(),
            d0,
            query_kes: query,
            uncovered: ranked.into_iter().map(|(k, _)| k).collect(),
        },
        doc_ids: prd.into_iter().map(|i| index.ids[i].clone()).collect(),
        coverage,
        expansion_log: log,
    })
}

/// Writes the expansion log as CSV with a header row.
pub fn write_expansion_csv<W: Write>(writer: W, prd: &Prd) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "focal_id",
        "iteration",
        "appended_ske",
        "retrievals",
        "prd_size",
    ])?;
    for (i, e) in prd.expansion_log.iter().enumerate() {
        w.write_record([
            prd.spec.focal_id.clone(),
            (i + 1).to_string(),
            e.ske.clone(),
            e.retrievals.to_string(),
            e.prd_size.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::extract_focal_elements;

    fn rec(id: &str, title: &str, abs: &str, prio: &str, publ: &str) -> PatentDoc {
        PatentDoc {
            id: id.into(),
            title: title.into(),
            abstract_text: abs.into(),
            priority_date: prio.parse().unwrap(),
            publication_date: publ.parse().unwrap(),
            forward_citations_5y: None,
            focal_candidate: false,
            tagged_title: None,
            tagged_abstract: None,
        }
    }

    fn ke(s: &str) -> KnowledgeElement {
        KnowledgeElement::new(s).unwrap()
    }

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn query_matches_words_before_d0() {
        let corpus = Corpus::from_docs(vec![
            rec("A", "Mask holder", "x", "2000-01-01", "2001-01-01"),
            rec("B", "Masking tool", "x", "2000-01-01", "2001-01-01"),
            rec("C", "Mask", "x", "2004-01-01", "2005-01-01"),
            rec("D", "A mask", "x", "2004-01-01", "2005-01-01"),
        ])
        .unwrap();
        let got = match_query(&corpus, &[ke("mask")], d("2005-01-01"));
        assert_eq!(got, BTreeSet::from(["A".to_string()]));
        assert!(match_query(&corpus, &[ke("lens")], d("2010-01-01")).is_empty());
    }

    fn focal() -> PatentDoc {
        let mut f = rec(
            "F",
            "Resist mask",
            "A novel resist is applied. The mask is exposed.",
            "2010-01-01",
            "2011-06-01",
        );
        f.focal_candidate = true;
        f
    }

    #[test]
    fn one_expansion_covers_missing_ske() {
        let focal = focal();
        let corpus = Corpus::from_docs(vec![
            rec(
                "A",
                "Resist mask frame",
                "A frame for a mask.",
                "2001-01-01",
                "2002-01-01",
            ),
            rec(
                "B",
                "Coating",
                "A novel resist and a coating.",
                "2003-01-01",
                "2004-01-01",
            ),
            focal.clone(),
        ])
        .unwrap();
        let el = extract_focal_elements(&focal).unwrap();
        assert_eq!(
            el.ske_keys().collect::<Vec<_>>(),
            vec!["mask", "novel resist"]
        );
        let prd = build_prd(&corpus, &focal, &el).unwrap();
        assert_eq!(prd.expansion_log.len(), 1);
        assert_eq!(prd.expansion_log[0].ske, "novel resist");
        assert_eq!(prd.expansion_log[0].retrievals, 1);
        assert_eq!(prd.expansion_log[0].prd_size, 2);
        assert!(prd.fully_covered());
        assert_eq!(
            prd.doc_ids,
            BTreeSet::from(["A".to_string(), "B".to_string()])
        );
        assert_eq!(prd.spec.query_kes, vec!["resist mask", "novel resist"]);

        let mut out = Vec::new();
        write_expansion_csv(&mut out, &prd).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "focal_id,iteration,appended_ske,retrievals,prd_size\nF,1,novel resist,1,2\n"
        );
    }

    #[test]
    fn already_covered_needs_no_expansion() {
        let focal = focal();
        let corpus = Corpus::from_docs(vec![
            rec(
                "A",
                "Resist mask",
                "The mask and a novel resist.",
                "2001-01-01",
                "2002-01-01",
            ),
            focal.clone(),
        ])
        .unwrap();
        let prd = build_prd(&corpus, &focal, &extract_focal_elements(&focal).unwrap()).unwrap();
        assert!(prd.expansion_log.is_empty());
        assert!(prd.coverage.values().all(|&c| c));
    }

    #[test]
    fn zero_retrieval_ske_is_uncoverable() {
        let focal = focal();
        let corpus = Corpus::from_docs(vec![
            rec("A", "Resist mask", "The mask.", "2001-01-01", "2002-01-01"),
            // mentions the SKE only after d0
            rec("B", "Novel resist", "x", "2009-01-01", "2010-01-01"),
            focal.clone(),
        ])
        .unwrap();
        let err = build_prd(&corpus, &focal, &extract_focal_elements(&focal).unwrap()).unwrap_err();
        assert_eq!(err, PrdError::UncoverableSkes(vec!["novel resist".into()]));
    }
}
