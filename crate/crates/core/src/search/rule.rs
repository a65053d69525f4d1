use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchRule {
    Bfs,
    Dfs,
    Familiarity,
    Degree,
    Recency,
}

impl SearchRule {
    pub const ALL: [SearchRule; 5] = [
        SearchRule::Bfs,
        SearchRule::Dfs,
        SearchRule::Familiarity,
        SearchRule::Degree,
        SearchRule::Recency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SearchRule::Bfs => "bfs",
            SearchRule::Dfs => "dfs",
            SearchRule::Familiarity => "familiarity",
            SearchRule::Degree => "degree",
            SearchRule::Recency => "recency",
        }
    }

    pub fn is_informed(self) -> bool {
        matches!(
            self,
            SearchRule::Familiarity | SearchRule::Degree | SearchRule::Recency
        )
    }
}

impl fmt::Display for SearchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownRule(pub String);

impl fmt::Display for UnknownRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown search rule {:?} (expected bfs, dfs, familiarity, degree or recency)",
            self.0
        )
    }
}

impl std::error::Error for UnknownRule {}

impl FromStr for SearchRule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        SearchRule::ALL
            .into_iter()
            .find(|r| r.as_str() == lower)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}
