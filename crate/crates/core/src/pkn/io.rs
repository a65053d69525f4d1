//! JSON export of a PKN with its focal patent context.
//!
//! The file carries a node table and an edge table. Importing rebuilds the
//! network and checks the stored degree and strength against the edges.

use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{PknError, PriorKnowledgeNetwork, Provenance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub key: String,
    pub degree: usize,
    pub strength: f64,
    pub birthdate: NaiveDate,
    pub is_pke: bool,
    pub is_ske: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub key_i: String,
    pub key_j: String,
    pub weight: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PknFile {
    pub focal_id: String,
    pub focal_publication_date: NaiveDate,
    /// All focal PKEs, including any that are not network nodes.
    pub pkes: Vec<String>,
    pub skes: Vec<String>,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl PknFile {
    pub fn new(
        pkn: &PriorKnowledgeNetwork,
        focal_id: &str,
        focal_publication_date: NaiveDate,
        pkes: &[String],
        skes: &[String],
    ) -> Self {
        let pke_set: BTreeSet<&str> = pkes.iter().map(String::as_str).collect();
        let ske_set: BTreeSet<&str> = skes.iter().map(String::as_str).collect();
        let nodes = pkn
            .nodes()
            .iter()
            .map(|n| NodeRecord {
                key: n.key.clone(),
                degree: n.degree,
                strength: n.strength,
                birthdate: n.birthdate,
                is_pke: pke_set.contains(n.key.as_str()),
                is_ske: ske_set.contains(n.key.as_str()),
            })
            .collect();
        let edges = pkn
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                key_i: pkn.key(e.a).to_string(),
                key_j: pkn.key(e.b).to_string(),
                weight: e.weight(),
                provenance: e.provenance.name().to_string(),
            })
            .collect();
        Self {
            focal_id: focal_id.to_string(),
            focal_publication_date,
            pkes: pkes.to_vec(),
            skes: skes.to_vec(),
            nodes,
            edges,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("PknFile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PknError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the network, rejecting inconsistent attributes.
    pub fn network(&self) -> Result<PriorKnowledgeNetwork, PknError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let bad = || PknError::InvalidWeight(e.key_i.clone(), e.key_j.clone(), e.weight);
            let provenance = match e.provenance.as_str() {
                "adjacency" => {
                    if e.weight.fract() != 0.0 || e.weight < 1.0 || e.weight > f64::from(u32::MAX) {
                        return Err(bad());
                    }
                    Provenance::Adjacency {
                        count: e.weight as u32,
                    }
                }
                "semantic" => Provenance::Semantic {
                    similarity: e.weight,
                },
                _ => return Err(bad()),
            };
            edges.push((e.key_i.clone(), e.key_j.clone(), provenance));
        }
        let pkn = PriorKnowledgeNetwork::from_parts(
            self.nodes.iter().map(|n| (n.key.clone(), n.birthdate)),
            edges,
        )?;
        for rec in &self.nodes {
            let node = pkn.node(pkn.id(&rec.key).expect("node was inserted"));
            if node.degree != rec.degree {
                return Err(PknError::AttributeMismatch {
                    key: rec.key.clone(),
                    attr: "degree",
                });
            }
            if (node.strength - rec.strength).abs() > 1e-9 * node.strength.max(1.0) {
                return Err(PknError::AttributeMismatch {
                    key: rec.key.clone(),
                    attr: "strength",
                });
            }
        }
        Ok(pkn)
    }
}
