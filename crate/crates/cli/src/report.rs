//! Report structures and emission. Reports are byte-deterministic for fixed
//! inputs: items are merged in corpus order and timings are included only on
//! request.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use bruhat_core::error::Result;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            _ => Err(format!("unknown format `{s}` (expected json or tsv)")),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub suite: String,
    #[serde(rename = "corpusDigest")]
    pub corpus_digest: String,
    pub status: &'static str,
    pub items: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Value>,
    #[serde(rename = "timingsMs", skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

fn scalar_to_tsv(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) if s.is_empty() => "\"\"".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl VerifyReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("suite\tgroup\tdetail\tstatus\tchecked\twitness\n");
        for item in &self.items {
            let group = item.get("group").map(scalar_to_tsv).unwrap_or_default();
            let detail = ["J", "k", "j", "kind"]
                .iter()
                .filter_map(|key| {
                    item.get(*key)
                        .map(|v| format!("{key}={}", scalar_to_tsv(v)))
                })
                .collect::<Vec<_>>()
                .join(",");
            let status = item.get("status").map(scalar_to_tsv).unwrap_or_default();
            let checked = item.get("checked").map(scalar_to_tsv).unwrap_or_default();
            let witness = item.get("witness").map(scalar_to_tsv).unwrap_or_default();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                self.suite,
                group,
                if detail.is_empty() { "-".into() } else { detail },
                status,
                if checked.is_empty() { "-".into() } else { checked },
                witness
            ));
        }
        out
    }
}

/// Serialize any report to its output bytes.
pub fn render<T: Serialize>(report: &T, format: Format, tsv: impl Fn() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serialization");
            s.push('\n');
            s
        }
        Format::Tsv => tsv(),
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
