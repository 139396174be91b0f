//! Parsing of the TYPE argument: a preset name, an inline JSON document
//! `{"cartan": [[...]]}`, or `@path` to a file holding such a document.

use std::sync::Arc;

use bruhat_core::coxeter::{build_system, build_system_from_cartan, CoxeterSystem};
use bruhat_core::error::{Error, Result};
use serde::Deserialize;

#[derive(Deserialize)]
struct CartanDoc {
    cartan: Vec<Vec<i64>>,
}

pub fn build_descriptor(text: &str) -> Result<Arc<CoxeterSystem>> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let doc: CartanDoc = serde_json::from_str(trimmed)
            .map_err(|e| Error::InvalidCartanMatrix(format!("bad JSON document: {e}")))?;
        return build_system_from_cartan(&doc.cartan);
    }
    if let Some(path) = trimmed.strip_prefix('@') {
        let body = std::fs::read_to_string(path)?;
        let doc: CartanDoc = serde_json::from_str(&body)
            .map_err(|e| Error::InvalidCartanMatrix(format!("bad JSON document: {e}")))?;
        return build_system_from_cartan(&doc.cartan);
    }
    build_system(trimmed)
}
