//! JSON proof documents.
//!
//! ```json
//! {
//!   "lower": "((~P | Q) & ~P) | P",
//!   "upper": "(~P & ~P) | (P | P)",
//!   "links": [[0, 3], [1, 2]],
//!   "map": [0, 2, 3, 3],
//!   "mix": false
//! }
//! ```
//!
//! Formulas use the surface syntax; leaf indices refer to left-to-right
//! leaf order after normalization. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, ParseError};
use crate::net::Linking;
use crate::proof::{CombinatorialProof, LeafMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofDocument {
    pub lower: String,
    pub upper: String,
    pub links: Vec<[usize; 2]>,
    pub map: Vec<usize>,
    #[serde(default)]
    pub mix: bool,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid proof document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Formula {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedProof {
    pub proof: CombinatorialProof,
    pub mix: bool,
}

impl ProofDocument {
    pub fn from_proof(p: &CombinatorialProof, mix: bool) -> Self {
        ProofDocument {
            lower: p.lower.print(),
            upper: p.upper.print(),
            links: p.linking.pairs().iter().map(|&(a, b)| [a, b]).collect(),
            map: p.map.as_slice().to_vec(),
            mix,
        }
    }

    /// Parses both formulas and checks index ranges. Duality, net
    /// correctness and the map conditions are left to verification.
    pub fn to_proof(&self) -> Result<LoadedProof, DocumentError> {
        let lower = Formula::parse(&self.lower).map_err(|source| DocumentError::Formula { field: "lower", source })?;
        let upper = Formula::parse(&self.upper).map_err(|source| DocumentError::Formula { field: "upper", source })?;
        let (n_upper, n_lower) = (upper.leaf_count(), lower.leaf_count());
        for (i, pair) in self.links.iter().enumerate() {
            for (j, &leaf) in pair.iter().enumerate() {
                if leaf >= n_upper {
                    return Err(DocumentError::Schema {
                        path: format!("links[{i}][{j}]"),
                        message: format!("leaf {leaf} out of range (upper has {n_upper} leaves)"),
                    });
                }
            }
        }
        if self.map.len() != n_upper {
            return Err(DocumentError::Schema {
                path: "map".into(),
                message: format!("has {} entries but upper has {n_upper} leaves", self.map.len()),
            });
        }
        for (i, &target) in self.map.iter().enumerate() {
            if target >= n_lower {
                return Err(DocumentError::Schema {
                    path: format!("map[{i}]"),
                    message: format!("leaf {target} out of range (lower has {n_lower} leaves)"),
                });
            }
        }
        let proof = CombinatorialProof {
            lower,
            upper,
            linking: Linking::new(self.links.iter().map(|&[a, b]| (a, b))),
            map: LeafMap(self.map.clone()),
        };
        Ok(LoadedProof { proof, mix: self.mix })
    }

    pub fn to_text(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let links: Vec<String> = self.links.iter().map(|[a, b]| format!("[{a}, {b}]")).collect();
        let map: Vec<String> = self.map.iter().map(|x| x.to_string()).collect();
        format!(
            "{{\n  \"lower\": {},\n  \"upper\": {},\n  \"links\": [{}],\n  \"map\": [{}],\n  \"mix\": {}\n}}\n",
            quote(&self.lower),
            quote(&self.upper),
            links.join(", "),
            map.join(", "),
            self.mix
        )
    }
}

pub fn load_proof(text: &str) -> Result<LoadedProof, DocumentError> {
    let doc: ProofDocument = serde_json::from_str(text)?;
    doc.to_proof()
}

pub fn save_proof(p: &CombinatorialProof) -> String {
    save_proof_with_mix(p, false)
}

pub fn save_proof_with_mix(p: &CombinatorialProof, mix: bool) -> String {
    ProofDocument::from_proof(p, mix).to_text()
}
