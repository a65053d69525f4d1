//! Noun-phrase chunking with the two knowledge-element tag patterns.
//!
//! ```text
//! <DT><VBG|VBN>*<JJ.*>*<VBG|VBN|VB>*<NN.*>*<JJ.*>*<NN.*>+
//! <VBN>*<JJ.*>*<VBN>*<NN.*>*<JJ.*>*<NN.*>+
//! ```
//!
//! Each pattern is a sequence of tag classes with `*` or exactly-one
//! quantifiers (`X+` is expanded to `X X*`). Matching runs a small NFA over
//! the tag stream and keeps the longest accepting prefix.

use super::tagger::{Tag, TaggedToken};
use super::KnowledgeElement;

#[derive(Debug, Clone, Copy)]
enum Class {
    Dt,
    VbgVbn,
    VbgVbnVb,
    Vbn,
    Adj,
    Noun,
}

impl Class {
    fn accepts(self, tag: Tag) -> bool {
        match self {
            Class::Dt => tag == Tag::Dt,
            Class::VbgVbn => matches!(tag, Tag::Vbg | Tag::Vbn),
            Class::VbgVbnVb => matches!(tag, Tag::Vbg | Tag::Vbn | Tag::Vb),
            Class::Vbn => tag == Tag::Vbn,
            Class::Adj => tag.is_adjective(),
            Class::Noun => tag.is_noun(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Quant {
    One,
    Star,
}

type Pattern = [(Class, Quant)];

const PATTERN_DETERMINED: &Pattern = &[
    (Class::Dt, Quant::One),
    (Class::VbgVbn, Quant::Star),
    (Class::Adj, Quant::Star),
    (Class::VbgVbnVb, Quant::Star),
    (Class::Noun, Quant::Star),
    (Class::Adj, Quant::Star),
    (Class::Noun, Quant::One),
    (Class::Noun, Quant::Star),
];

const PATTERN_BARE: &Pattern = &[
    (Class::Vbn, Quant::Star),
    (Class::Adj, Quant::Star),
    (Class::Vbn, Quant::Star),
    (Class::Noun, Quant::Star),
    (Class::Adj, Quant::Star),
    (Class::Noun, Quant::One),
    (Class::Noun, Quant::Star),
];

/// Adds states reachable by skipping starred elements.
fn close(pattern: &Pattern, states: &mut [bool]) {
    for s in 0..pattern.len() {
        if states[s] && matches!(pattern[s].1, Quant::Star) {
            states[s + 1] = true;
        }
    }
}

/// Length of the longest match of `pattern` starting at `tokens[0]`.
fn longest_match(pattern: &Pattern, tokens: &[TaggedToken]) -> Option<usize> {
    let accept = pattern.len();
    let mut states = vec![false; accept + 1];
    states[0] = true;
    close(pattern, &mut states);
    let mut best = None;
    for (consumed, token) in tokens.iter().enumerate() {
        let mut next = vec![false; accept + 1];
        for s in 0..accept {
            if !states[s] {
                continue;
            }
            let (class, quant) = pattern[s];
            if class.accepts(token.tag) {
                match quant {
                    Quant::Star => next[s] = true,
                    Quant::One => next[s + 1] = true,
                }
            }
        }
        close(pattern, &mut next);
        if !next.iter().any(|&b| b) {
            break;
        }
        if next[accept] {
            best = Some(consumed + 1);
        }
        states = next;
    }
    best
}

/// Chunks a tagged sentence into knowledge elements, left to right.
///
/// At each position the determiner pattern is tried first, then the bare
/// pattern; the longest match wins and scanning resumes after it. The
/// output keeps sentence order and duplicates.
pub fn chunk_noun_phrases(tokens: &[TaggedToken]) -> Vec<KnowledgeElement> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let rest = &tokens[i..];
        let matched =
            longest_match(PATTERN_DETERMINED, rest).or_else(|| longest_match(PATTERN_BARE, rest));
        match matched {
            Some(len) => {
                if let Some(ke) = KnowledgeElement::from_tokens(&rest[..len]) {
                    out.push(ke);
                }
                i += len;
            }
            None => i += 1,
        }
    }
    out
}
