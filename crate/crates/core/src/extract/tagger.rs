use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coarse part-of-speech alphabet used by the chunk patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Dt,
    Jj,
    Jjr,
    Jjs,
    Nn,
    Nns,
    Nnp,
    Vb,
    Vbg,
    Vbn,
    Other,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Dt => "DT",
            Tag::Jj => "JJ",
            Tag::Jjr => "JJR",
            Tag::Jjs => "JJS",
            Tag::Nn => "NN",
            Tag::Nns => "NNS",
            Tag::Nnp => "NNP",
            Tag::Vb => "VB",
            Tag::Vbg => "VBG",
            Tag::Vbn => "VBN",
            Tag::Other => "OTHER",
        }
    }

    /// Parses a tag name. Anything outside the closed alphabet maps to `Other`.
    pub fn parse(s: &str) -> Tag {
        match s {
            "DT" => Tag::Dt,
            "JJ" => Tag::Jj,
            "JJR" => Tag::Jjr,
            "JJS" => Tag::Jjs,
            "NN" => Tag::Nn,
            "NNS" => Tag::Nns,
            "NNP" => Tag::Nnp,
            "VB" => Tag::Vb,
            "VBG" => Tag::Vbg,
            "VBN" => Tag::Vbn,
            _ => Tag::Other,
        }
    }

    pub fn is_noun(self) -> bool {
        matches!(self, Tag::Nn | Tag::Nns | Tag::Nnp)
    }

    pub fn is_adjective(self) -> bool {
        matches!(self, Tag::Jj | Tag::Jjr | Tag::Jjs)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Tag::parse(&s))
    }
}

/// A token with its tag. Serialized as a `[surface, tag]` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(String, Tag)", into = "(String, Tag)")]
pub struct TaggedToken {
    pub surface: String,
    pub tag: Tag,
}

impl TaggedToken {
    pub fn new(surface: impl Into<String>, tag: Tag) -> Self {
        Self {
            surface: surface.into(),
            tag,
        }
    }
}

impl From<(String, Tag)> for TaggedToken {
    fn from((surface, tag): (String, Tag)) -> Self {
        Self { surface, tag }
    }
}

impl From<TaggedToken> for (String, Tag) {
    fn from(t: TaggedToken) -> Self {
        (t.surface, t.tag)
    }
}

pub const DETERMINERS: [&str; 3] = ["a", "an", "the"];

/// Function words tagged `OTHER` before any suffix rule applies.
pub const FUNCTION_WORDS: &[&str] = &[
    "about",
    "above",
    "after",
    "against",
    "all",
    "along",
    "also",
    "among",
    "and",
    "any",
    "are",
    "around",
    "as",
    "at",
    "be",
    "been",
    "before",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "can",
    "could",
    "did",
    "do",
    "does",
    "during",
    "each",
    "either",
    "for",
    "from",
    "had",
    "has",
    "have",
    "having",
    "he",
    "her",
    "his",
    "how",
    "however",
    "if",
    "in",
    "into",
    "is",
    "it",
    "its",
    "may",
    "more",
    "most",
    "must",
    "neither",
    "no",
    "nor",
    "not",
    "of",
    "on",
    "one",
    "onto",
    "or",
    "other",
    "our",
    "over",
    "said",
    "shall",
    "she",
    "should",
    "so",
    "some",
    "such",
    "than",
    "that",
    "their",
    "them",
    "then",
    "there",
    "thereby",
    "therefore",
    "these",
    "they",
    "this",
    "those",
    "through",
    "thus",
    "to",
    "under",
    "upon",
    "very",
    "via",
    "was",
    "we",
    "were",
    "what",
    "when",
    "where",
    "whereby",
    "wherein",
    "which",
    "while",
    "who",
    "whose",
    "will",
    "with",
    "within",
    "without",
    "would",
];

/// Characters that end a sentence.
pub const SENTENCE_DELIMITERS: [char; 4] = ['.', '!', '?', ';'];

/// Splits text into word and punctuation tokens.
///
/// Words are maximal runs of alphanumeric characters; a hyphen joining two
/// alphanumeric characters stays inside the word. Every other non-space
/// character becomes a one-character token.
pub fn tokenize(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if cj.is_alphanumeric() {
                    j += 1;
                } else if cj == '-' && j + 1 < chars.len() && chars[j + 1].1.is_alphanumeric() {
                    j += 2;
                } else {
                    break;
                }
            }
            let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
            out.push(&text[start..end]);
            i = j;
        } else {
            out.push(&text[start..start + c.len_utf8()]);
            i += 1;
        }
    }
    out
}

/// Tags one token with the lexicon, then suffix rules, then the `NN` default.
pub fn tag_word(word: &str) -> Tag {
    if !word.chars().any(char::is_alphanumeric) {
        return Tag::Other;
    }
    let lower = word.to_lowercase();
    let w = lower.as_str();
    if DETERMINERS.contains(&w) {
        return Tag::Dt;
    }
    if FUNCTION_WORDS.contains(&w) {
        return Tag::Other;
    }
    if w.ends_with("ing") {
        return Tag::Vbg;
    }
    if w.ends_with("ed") {
        return Tag::Vbn;
    }
    if ["ic", "ive", "able", "ous", "al"]
        .iter()
        .any(|s| w.ends_with(s))
    {
        return Tag::Jj;
    }
    if is_plural_like(w) {
        return Tag::Nns;
    }
    Tag::Nn
}

fn is_plural_like(w: &str) -> bool {
    let chars: Vec<char> = w.chars().collect();
    let n = chars.len();
    n >= 4 && chars[n - 1] == 's' && is_consonant(chars[n - 2])
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_alphabetic() && !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Tokenizes and tags `text`. Total and deterministic.
pub fn pos_tag(text: &str) -> Vec<TaggedToken> {
    tokenize(text)
        .into_iter()
        .map(|t| TaggedToken::new(t, tag_word(t)))
        .collect()
}

/// Splits raw text into sentences at `.`, `!`, `?` and `;`.
pub fn split_sentences(text: &str) -> Vec<&str> {
    text.split(SENTENCE_DELIMITERS)
        .filter(|s| !s.trim().is_empty())
        .collect()
}

/// Splits a pre-tagged token stream at sentence-delimiter tokens.
pub fn split_tagged_sentences(tokens: &[TaggedToken]) -> Vec<&[TaggedToken]> {
    tokens
        .split(|t| {
            let mut cs = t.surface.chars();
            matches!((cs.next(), cs.next()), (Some(c), None) if SENTENCE_DELIMITERS.contains(&c))
        })
        .filter(|s| !s.is_empty())
        .collect()
}
