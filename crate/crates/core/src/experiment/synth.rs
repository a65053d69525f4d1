//! Seeded generator of patent-like corpora.
//!
//! Every topic owns a list of noun phrases built from made-up words. Some
//! phrases are spelling variants of earlier ones, so the semantic network has
//! edges. Abstracts draw phrases with preferential reuse: a phrase is picked
//! in proportion to how often its topic has already used it, and fresh
//! phrases enter with a probability that decays to zero at the start of the
//! focal period. Popularity is therefore heavy tailed and late patents reuse
//! established vocabulary.
//!
//! Generated words never trigger the tagger's suffix rules except where
//! intended (adjectives end in "ic" or "al"), and no phrase occurs inside
//! another, so phrase containment in text and chunk extraction agree.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, PatentDoc};
use crate::extract::{tag_word, Tag};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Forward citations: zero with `zero_probability`, otherwise
/// `1 + Geometric(1 / mean_if_cited)` with mean `mean_if_cited`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CitationDistribution {
    pub zero_probability: f64,
    pub mean_if_cited: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_patents: usize,
    /// Number of distinct phrases available across all topics.
    pub vocab_size: usize,
    pub phrases_per_abstract: usize,
    /// Priority dates fall in this closed range.
    pub date_range: (NaiveDate, NaiveDate),
    pub citation_distribution: CitationDistribution,
    pub seed: u64,
    pub topics: usize,
    /// Share of the latest patents flagged as focal candidates.
    pub focal_fraction: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n_patents: 200,
            vocab_size: 240,
            phrases_per_abstract: 6,
            date_range: (
                NaiveDate::from_ymd_opt(1995, 1, 1).unwrap(),
                NaiveDate::from_ymd_opt(2014, 12, 31).unwrap(),
            ),
            citation_distribution: CitationDistribution {
                zero_probability: 0.3,
                mean_if_cited: 9.0,
            },
            seed: 42,
            topics: 6,
            focal_fraction: 0.3,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::InvalidParams(m.to_string()));
        if self.n_patents == 0 {
            return bad("n_patents must be positive");
        }
        if self.vocab_size == 0 {
            return bad("vocab_size must be positive");
        }
        if self.phrases_per_abstract == 0 {
            return bad("phrases_per_abstract must be positive");
        }
        if self.topics == 0 || self.topics > self.vocab_size {
            return bad("topics must be between 1 and vocab_size");
        }
        if self.date_range.0 >= self.date_range.1 {
            return bad("date_range must be increasing");
        }
        let c = self.citation_distribution;
        if !(0.0..=1.0).contains(&c.zero_probability) {
            return bad("zero_probability must be in [0, 1]");
        }
        if !(c.mean_if_cited >= 1.0 && c.mean_if_cited.is_finite()) {
            return bad("mean_if_cited must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.focal_fraction) {
            return bad("focal_fraction must be in [0, 1]");
        }
        Ok(())
    }
}

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z", "br", "dr", "gl", "kr", "pl",
    "tr", "st",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u"];
const CODAS: &[&str] = &["", "", "k", "m", "n", "p", "r", "t", "x", "rn", "nt"];
const SIBLING_ENDINGS: &[&str] = &["x", "n", "r", "k"];

/// Made-up words, unique across the corpus.
struct Lexicon {
    used: HashSet<String>,
}

impl Lexicon {
    fn syllable(rng: &mut ChaCha8Rng) -> String {
        format!(
            "{}{}",
            ONSETS.choose(rng).unwrap(),
            VOWELS.choose(rng).unwrap()
        )
    }

    fn fresh(
        &mut self,
        rng: &mut ChaCha8Rng,
        make: impl Fn(&mut ChaCha8Rng) -> String,
        tag: Tag,
    ) -> String {
        loop {
            let w = make(rng);
            if w.len() >= 3 && tag_word(&w) == tag && self.used.insert(w.clone()) {
                return w;
            }
        }
    }

    fn noun(&mut self, rng: &mut ChaCha8Rng) -> String {
        self.fresh(
            rng,
            |r| {
                format!(
                    "{}{}{}",
                    Self::syllable(r),
                    Self::syllable(r),
                    CODAS.choose(r).unwrap()
                )
            },
            Tag::Nn,
        )
    }

    fn adjective(&mut self, rng: &mut ChaCha8Rng) -> String {
        self.fresh(
            rng,
            |r| {
                let end = if r.random_bool(0.5) { "ic" } else { "al" };
                format!("{}{}{end}", Self::syllable(r), ONSETS.choose(r).unwrap())
            },
            Tag::Jj,
        )
    }

    /// A new word that extends `word` by one or two letters.
    fn sibling(&mut self, rng: &mut ChaCha8Rng, word: &str) -> Option<String> {
        for _ in 0..8 {
            let w = format!("{word}{}", SIBLING_ENDINGS.choose(rng).unwrap());
            if tag_word(&w) == Tag::Nn && self.used.insert(w.clone()) {
                return Some(w);
            }
        }
        None
    }
}

fn contains_run(long: &[String], short: &[String]) -> bool {
    short.len() <= long.len() && long.windows(short.len()).any(|w| w == short)
}

struct Vocabulary {
    phrases: Vec<Vec<String>>,
}

impl Vocabulary {
    /// False when `candidate` equals, contains or is contained in a phrase.
    fn admits(&self, candidate: &[String]) -> bool {
        self.phrases
            .iter()
            .all(|p| !contains_run(p, candidate) && !contains_run(candidate, p))
    }
}

/// Builds the per-topic phrase lists (phrase indices into `vocab`).
fn build_topics(
    params: &SynthParams,
    rng: &mut ChaCha8Rng,
    vocab: &mut Vocabulary,
) -> Vec<Vec<usize>> {
    let mut lexicon = Lexicon {
        used: HashSet::new(),
    };
    let adjectives: Vec<String> = (0..(params.vocab_size / 8).max(4))
        .map(|_| lexicon.adjective(rng))
        .collect();
    let mut topics = Vec::with_capacity(params.topics);
    for t in 0..params.topics {
        let size =
            params.vocab_size / params.topics + usize::from(t < params.vocab_size % params.topics);
        let nouns: Vec<String> = (0..(size * 3 / 5).max(2))
            .map(|_| lexicon.noun(rng))
            .collect();
        let mut list: Vec<usize> = Vec::with_capacity(size);
        let mut attempts = 0;
        while list.len() < size {
            attempts += 1;
            let candidate: Vec<String> = if !list.is_empty() && rng.random_bool(0.3) {
                let base = &vocab.phrases[*list.choose(rng).unwrap()];
                let pos = rng.random_range(0..base.len());
                if tag_word(&base[pos]) != Tag::Nn {
                    continue;
                }
                match lexicon.sibling(rng, &base[pos]) {
                    Some(w) => {
                        let mut p = base.clone();
                        p[pos] = w;
                        p
                    }
                    None => continue,
                }
            } else {
                let mut p = Vec::new();
                if rng.random_bool(0.35) {
                    p.push(adjectives.choose(rng).unwrap().clone());
                }
                let n_nouns = if rng.random_bool(0.5) { 1 } else { 2 };
                for _ in 0..n_nouns {
                    // a fresh word now and then keeps short phrases available
                    let w = if attempts > 50 && rng.random_bool(0.5) {
                        lexicon.noun(rng)
                    } else {
                        nouns.choose(rng).unwrap().clone()
                    };
                    if p.contains(&w) {
                        break;
                    }
                    p.push(w);
                }
                p
            };
            if vocab.admits(&candidate) {
                vocab.phrases.push(candidate);
                list.push(vocab.phrases.len() - 1);
                attempts = 0;
            }
        }
        topics.push(list);
    }
    topics
}

/// Phrase usage within one topic.
struct TopicState {
    /// How many of the topic's phrases have been used so far.
    born: usize,
    /// One entry per use, for draws proportional to usage.
    uses: Vec<usize>,
}

fn sentence(phrases: &[String], first: bool) -> String {
    let det = if first { "The" } else { "A" };
    match phrases {
        [a] => format!("{det} {a}."),
        [a, b] => format!("{det} {a} for {b}."),
        [a, b, c] => format!("{det} {a} with {b} and {c}."),
        _ => unreachable!("sentences hold one to three phrases"),
    }
}

/// Generates the corpus. Same parameters give the same corpus.
pub fn gen_synthetic_corpus(params: &SynthParams) -> Result<Corpus, SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut vocab = Vocabulary {
        phrases: Vec::new(),
    };
    let topics = build_topics(params, &mut rng, &mut vocab);
    let text: Vec<String> = vocab.phrases.iter().map(|p| p.join(" ")).collect();

    let n = params.n_patents;
    let (start, end) = params.date_range;
    let span = (end - start).num_days() as u64;
    let mut offsets: Vec<u64> = (0..n).map(|_| rng.random_range(0..=span)).collect();
    offsets.sort_unstable();

    let focal_start = n - (n as f64 * params.focal_fraction).round() as usize;
    let cit = params.citation_distribution;
    let geometric = Geometric::new(1.0 / cit.mean_if_cited).expect("validated");

    let mut states: Vec<TopicState> = topics
        .iter()
        .map(|_| TopicState {
            born: 0,
            uses: Vec::new(),
        })
        .collect();
    let k = params.phrases_per_abstract;
    let mut docs = Vec::with_capacity(n);
    for (i, &offset) in offsets.iter().enumerate() {
        let topic = rng.random_range(0..topics.len());
        // chance of a new phrase falls linearly to zero at the focal period
        let p_new = if focal_start == 0 {
            0.0
        } else {
            0.5 * (1.0 - i as f64 / focal_start as f64).max(0.0)
        };
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        let mut seen = BTreeSet::new();
        let mut tries = 0;
        while chosen.len() < k && tries < 50 * k {
            tries += 1;
            let t = if rng.random_bool(0.05) {
                rng.random_range(0..topics.len())
            } else {
                topic
            };
            let st = &mut states[t];
            let fresh_available = st.born < topics[t].len();
            let phrase = if st.uses.is_empty() || (fresh_available && rng.random_bool(p_new)) {
                if !fresh_available {
                    continue;
                }
                st.born += 1;
                topics[t][st.born - 1]
            } else {
                *st.uses.choose(&mut rng).unwrap()
            };
            if seen.insert(phrase) {
                chosen.push(phrase);
            }
        }
        for &p in &chosen {
            let t = topics.iter().position(|l| l.contains(&p)).unwrap();
            states[t].uses.push(p);
        }
        let words: Vec<String> = chosen.iter().map(|&p| text[p].clone()).collect();
        let title = if words.len() >= 2 && rng.random_bool(0.7) {
            format!("{} and {}", words[0], words[1])
        } else {
            words[0].clone()
        };
        let mut sentences = Vec::new();
        let mut rest: &[String] = &words;
        while !rest.is_empty() {
            let take = if rest.len() == 4 {
                2
            } else {
                rest.len().min(3)
            };
            sentences.push(sentence(&rest[..take], sentences.is_empty()));
            rest = &rest[take..];
        }
        let priority = start + Days::new(offset);
        let publication = priority + Days::new(rng.random_range(300..=900));
        let citations = if rng.random_bool(cit.zero_probability) {
            0
        } else {
            1 + geometric.sample(&mut rng) as u32
        };
        docs.push(PatentDoc {
            id: format!("SYN{:05}", i + 1),
            title: capitalize(&title),
            abstract_text: sentences.join(" "),
            priority_date: priority,
            publication_date: publication,
            forward_citations_5y: Some(citations),
            focal_candidate: i >= focal_start,
            tagged_title: None,
            tagged_abstract: None,
        });
    }
    Ok(Corpus::from_docs(docs).expect("generated records are valid"))
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Generates the corpus and writes it as JSON lines.
pub fn write_synthetic_corpus(params: &SynthParams, path: &Path) -> Result<Corpus, SynthError> {
    let corpus = gen_synthetic_corpus(params)?;
    std::fs::write(path, corpus.to_jsonl()).map_err(|source| SynthError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(corpus)
}
