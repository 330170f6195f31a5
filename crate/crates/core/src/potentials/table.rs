//! Invariant table files: a JSON array of
//! `{"g": 0, "beta": [3], "insertions": [3, 3, ...], "value": 12}` with
//! 1-based insertion indices and integer or `"num/den"` values.

use serde::{Deserialize, Serialize};

use super::{InvariantEntry, PotentialError};
use crate::model::RawScalar;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDocument {
    g: u8,
    beta: Vec<u32>,
    insertions: Vec<usize>,
    value: RawScalar,
}

pub fn parse_table<S: Scalar>(text: &str) -> Result<Vec<InvariantEntry<S>>, PotentialError> {
    let docs: Vec<EntryDocument> =
        serde_json::from_str(text).map_err(|e| PotentialError::TableParse(e.to_string()))?;
    docs.into_iter()
        .enumerate()
        .map(|(i, doc)| {
            if doc.insertions.contains(&0) {
                return Err(PotentialError::TableParse(format!(
                    "entry {}: insertion indices are 1-based",
                    i + 1
                )));
            }
            let value = doc
                .value
                .parse::<S>("value")
                .map_err(|e| PotentialError::TableParse(format!("entry {}: {e}", i + 1)))?;
            Ok(InvariantEntry {
                genus: doc.g,
                beta: doc.beta,
                insertions: doc.insertions.iter().map(|k| k - 1).collect(),
                value,
            })
        })
        .collect()
}

/// Pretty JSON with one entry per line; deterministic for a given slice.
pub fn table_to_json<S: Scalar>(entries: &[InvariantEntry<S>]) -> String {
    if entries.is_empty() {
        return "[]\n".to_string();
    }
    let lines: Vec<String> = entries
        .iter()
        .map(|e| {
            let doc = EntryDocument {
                g: e.genus,
                beta: e.beta.clone(),
                insertions: e.insertions.iter().map(|k| k + 1).collect(),
                value: RawScalar::from_scalar(&e.value),
            };
            format!(
                "  {}",
                serde_json::to_string(&doc).expect("entry serializes")
            )
        })
        .collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}
