//! JSON map documents.
//!
//! ```json
//! {"darts":4,"reversal":[1,0,3,2],"rotation":[2,3,1,0],"theta":[{"num":1,"den":4},{"num":1,"den":4}]}
//! ```
//!
//! `theta` is listed per edge, edges ordered by their smallest dart. Optional
//! `weights` are decimal strings per edge and `name` is free text. Canonical
//! documents are compact JSON followed by a newline, with reduced fractions.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::angle::{AnglePi, Fraction};
use crate::error::{Error, Result};
use crate::ribbon::{build_isoradial_map, IsoradialMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub darts: usize,
    pub reversal: Vec<usize>,
    pub rotation: Vec<usize>,
    pub theta: Vec<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl MapDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MapDocument = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
        if !doc.darts.is_multiple_of(2) {
            return Err(Error::ParseError(format!("odd dart count {}", doc.darts)));
        }
        if doc.reversal.len() != doc.darts || doc.rotation.len() != doc.darts {
            return Err(Error::ParseError(format!(
                "darts = {} but reversal has {} and rotation {} entries",
                doc.darts,
                doc.reversal.len(),
                doc.rotation.len()
            )));
        }
        if doc.theta.len() != doc.darts / 2 {
            return Err(Error::ParseError(format!(
                "{} theta entries for {} edges",
                doc.theta.len(),
                doc.darts / 2
            )));
        }
        if let Some(w) = &doc.weights {
            if w.len() != doc.darts / 2 {
                return Err(Error::ParseError(format!("{} weights for {} edges", w.len(), doc.darts / 2)));
            }
        }
        Ok(doc)
    }

    /// Canonical bytes: compact JSON and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Hex SHA-256 of [`MapDocument::to_json`].
    pub fn sha256(&self) -> String {
        Sha256::digest(self.to_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Parsed edge weights, if present.
    pub fn parsed_weights(&self) -> Result<Option<Vec<f64>>> {
        self.weights
            .as_ref()
            .map(|ws| {
                ws.iter()
                    .map(|w| {
                        w.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| Error::ParseError(format!("weight {w:?} is not a decimal number")))
                    })
                    .collect()
            })
            .transpose()
    }

    /// Same map, reduced fractions; weights and name kept.
    pub fn canonicalize(&self) -> Result<Self> {
        let map = read_map(self)?;
        Ok(MapDocument {
            weights: self.weights.clone(),
            name: self.name.clone(),
            ..write_map(&map)
        })
    }
}

/// Validates a document into a map.
pub fn read_map(doc: &MapDocument) -> Result<IsoradialMap> {
    if !doc.darts.is_multiple_of(2) {
        return Err(Error::ParseError(format!("odd dart count {}", doc.darts)));
    }
    let theta = doc
        .theta
        .iter()
        .map(|&f| AnglePi::try_from_fraction(f).ok_or_else(|| Error::ParseError("zero denominator in theta".into())))
        .collect::<Result<Vec<_>>>()?;
    build_isoradial_map(doc.darts, doc.reversal.clone(), doc.rotation.clone(), theta)
}

pub fn write_map(map: &IsoradialMap) -> MapDocument {
    MapDocument {
        darts: map.dart_count(),
        reversal: map.reversal_array().to_vec(),
        rotation: map.rotation_array().to_vec(),
        theta: map.edge_thetas().iter().map(|t| t.fraction()).collect(),
        weights: None,
        name: None,
    }
}

/// Parses document text and validates the map.
pub fn read_map_str(text: &str) -> Result<(IsoradialMap, MapDocument)> {
    let doc = MapDocument::from_json(text)?;
    let map = read_map(&doc)?;
    Ok((map, doc))
}
