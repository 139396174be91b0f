//! Command-line surface: group summaries, f-vectors, and the verification
//! suites. Exit codes: 0 = success, 1 = a verification found a violation
//! (or a required witness was not found), 2 = usage or input errors.

mod descriptor;
mod report;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use bruhat_core::bounds::CorpusSpec;
use bruhat_core::bruhat::{f_vector, BruhatCache};
use bruhat_core::coxeter::{ball_capped, format_word, parse_word, word_to_element};
use bruhat_core::error::Error;
use clap::{Parser, Subcommand};
use serde::Serialize;

use descriptor::build_descriptor;
use report::{emit, render, Format, VerifyReport};
use suites::{run_suite, Suite};

/// The corpus used when --corpus is not given; also shipped at
/// corpus/default.json.
const DEFAULT_CORPUS: &str = include_str!("../../../corpus/default.json");

#[derive(Parser)]
#[command(
    name = "bruhat",
    version,
    about = "Exact Bruhat-interval combinatorics for crystallographic Coxeter groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a group: rank, finiteness, order, Poincare level counts
    Group {
        /// Preset name ("A3", "C2~"), inline {"cartan": [[...]]}, or @file
        r#type: String,
        /// Enumerate lengths 0..=N (required for infinite groups)
        #[arg(long)]
        max_length: Option<usize>,
        /// Hard cap on enumerated elements
        #[arg(long, default_value_t = bruhat_core::coxeter::DEFAULT_ELEMENT_CAP)]
        cap: usize,
        #[arg(long, default_value = "json", value_parser = Format::from_str)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The f-vector of the interval [e,w]^J
    Fvector {
        /// Preset name ("A3", "C2~"), inline {"cartan": [[...]]}, or @file
        r#type: String,
        /// w as a comma-separated 1-based word; the empty string is the
        /// identity
        #[arg(long)]
        w: String,
        /// J as comma-separated 1-based generator indices
        #[arg(long = "J", visible_alias = "j")]
        j: Option<String>,
        #[arg(long, default_value = "json", value_parser = Format::from_str)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite over a corpus
    Verify {
        /// thmA | thmB | thmC | thmD | monotonicity | coatoms | tail |
        /// counterexamples
        #[arg(value_parser = Suite::from_str)]
        suite: Suite,
        /// Corpus JSON file (defaults to the built-in corpus)
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Worker threads; reports are byte-identical regardless
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory of per-system KL cache files (used by thmC and
        /// monotonicity; created on demand)
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value = "json", value_parser = Format::from_str)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock timings in the report payload
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Serialize)]
struct GroupReport {
    schema: &'static str,
    command: &'static str,
    r#type: String,
    rank: usize,
    finite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<u64>,
    #[serde(rename = "longestLength", skip_serializing_if = "Option::is_none")]
    longest_length: Option<usize>,
    poincare: Vec<usize>,
    saturated: bool,
}

impl GroupReport {
    fn to_tsv(&self) -> String {
        let poincare = self
            .poincare
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "type\trank\tfinite\torder\tlongestLength\tsaturated\tpoincare\n{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            self.r#type,
            self.rank,
            self.finite,
            self.order.map_or("-".into(), |o| o.to_string()),
            self.longest_length.map_or("-".into(), |l| l.to_string()),
            self.saturated,
            poincare
        )
    }
}

#[derive(Serialize)]
struct FvectorReport {
    schema: &'static str,
    command: &'static str,
    r#type: String,
    w: String,
    #[serde(rename = "J")]
    j: Vec<usize>,
    counts: Vec<u64>,
}

impl FvectorReport {
    fn to_tsv(&self) -> String {
        format!(
            "type\tw\tJ\tcounts\n{}\t{}\t{}\t{}\n",
            self.r#type,
            self.w,
            self.j
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(","),
            self.counts
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SearchExhausted(_) => 1,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Group {
            r#type,
            max_length,
            cap,
            format,
            out,
        } => {
            let system = build_descriptor(&r#type)?;
            let max_len = match (max_length, system.longest_length()) {
                (Some(m), _) => m,
                (None, Some(l)) => l,
                (None, None) => {
                    eprintln!("error: `{}` is infinite; pass --max-length", r#type);
                    return Ok(2);
                }
            };
            let b = ball_capped(&system, max_len, cap)?;
            let report = GroupReport {
                schema: "v1",
                command: "group",
                r#type: system.descriptor().to_string(),
                rank: system.rank(),
                finite: system.is_finite(),
                order: system.order(),
                longest_length: system.longest_length(),
                poincare: b.level_sizes(),
                saturated: b.saturated,
            };
            emit(&render(&report, format, || report.to_tsv()), out.as_deref())?;
            Ok(0)
        }
        Command::Fvector {
            r#type,
            w,
            j,
            format,
            out,
        } => {
            let system = build_descriptor(&r#type)?;
            let word = parse_word(&w)?;
            if let Some(&bad) = word.iter().find(|&&s| s >= system.rank()) {
                return Err(Error::BadGenerator {
                    index: bad + 1,
                    rank: system.rank(),
                });
            }
            let mut jset = match &j {
                Some(text) => parse_word(text)?,
                None => Vec::new(),
            };
            jset.sort_unstable();
            jset.dedup();
            if let Some(&bad) = jset.iter().find(|&&s| s >= system.rank()) {
                return Err(Error::BadGenerator {
                    index: bad + 1,
                    rank: system.rank(),
                });
            }
            let welem = word_to_element(&system, &word)?;
            let mut cache = BruhatCache::new(Arc::clone(&system));
            let f = f_vector(&mut cache, &welem, &jset)?;
            let report = FvectorReport {
                schema: "v1",
                command: "fvector",
                r#type: system.descriptor().to_string(),
                w: format_word(&welem.reduced_word()),
                j: jset.iter().map(|s| s + 1).collect(),
                counts: f.counts().to_vec(),
            };
            emit(&render(&report, format, || report.to_tsv()), out.as_deref())?;
            Ok(0)
        }
        Command::Verify {
            suite,
            corpus,
            jobs,
            cache,
            format,
            out,
            timings,
        } => {
            let corpus = match &corpus {
                Some(path) => CorpusSpec::from_path(path)?,
                None => CorpusSpec::from_json_str(DEFAULT_CORPUS)?,
            };
            let started = Instant::now();
            let run = run_suite(suite, &corpus, jobs, cache.as_deref())?;
            let elapsed = started.elapsed();
            let status = if run.failed { "fail" } else { "pass" };
            let timings_ms = timings.then(|| {
                let mut map = BTreeMap::new();
                map.insert("total".to_string(), elapsed.as_millis() as u64);
                map
            });
            let report = VerifyReport {
                schema: "v1",
                command: "verify",
                suite: suite.name().to_string(),
                corpus_digest: corpus.digest_hex(),
                status,
                items: run.items,
                alpha: run.alpha,
                timings_ms,
            };
            eprintln!(
                "{}: {} items, status {}, {:.2}s",
                suite.name(),
                report.items.len(),
                status,
                elapsed.as_secs_f64()
            );
            emit(&render(&report, format, || report.to_tsv()), out.as_deref())?;
            Ok(if run.failed { 1 } else { 0 })
        }
    }
}
