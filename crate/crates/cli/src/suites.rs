//! Verification suites over a corpus. Each suite visits a fixed envelope of
//! corpus entries (documented in the README), producing one deterministic
//! item per checked unit; items are merged in corpus order regardless of
//! --jobs.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use bruhat_core::bounds::{
    alpha_report, find_counterexamples, n_k, q_of_rank, verify_lemma_coatoms, verify_tail,
    verify_theorem_d, BoundTable, CorpusEntry, CorpusSpec,
};
use bruhat_core::bruhat::{gen_mask, BruhatCache, FVector, FVectorKind};
use bruhat_core::chains::verify_theorem_b;
use bruhat_core::coxeter::format_word;
use bruhat_core::error::{Error, Result};
use bruhat_core::kl::{check_theorem_c, check_monotonicity, kl_polynomial, KlTable};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ThmA,
    ThmB,
    ThmC,
    ThmD,
    Monotonicity,
    Coatoms,
    Tail,
    Counterexamples,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::ThmA => "thmA",
            Suite::ThmB => "thmB",
            Suite::ThmC => "thmC",
            Suite::ThmD => "thmD",
            Suite::Monotonicity => "monotonicity",
            Suite::Coatoms => "coatoms",
            Suite::Tail => "tail",
            Suite::Counterexamples => "counterexamples",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "thma" => Ok(Suite::ThmA),
            "thmb" => Ok(Suite::ThmB),
            "thmc" => Ok(Suite::ThmC),
            "thmd" => Ok(Suite::ThmD),
            "monotonicity" => Ok(Suite::Monotonicity),
            "coatoms" => Ok(Suite::Coatoms),
            "tail" => Ok(Suite::Tail),
            "counterexamples" => Ok(Suite::Counterexamples),
            _ => Err(format!(
                "unknown suite `{s}` (expected thmA, thmB, thmC, thmD, monotonicity, coatoms, tail, or counterexamples)"
            )),
        }
    }
}

pub struct SuiteRun {
    pub items: Vec<Value>,
    pub alpha: Option<Value>,
    pub failed: bool,
}

/// Render J as 1-based indices for reports.
fn j_wire(j: &[usize]) -> Vec<usize> {
    j.iter().map(|s| s + 1).collect()
}

fn item_status(items: &[Value]) -> bool {
    items
        .iter()
        .any(|item| item.get("status").and_then(Value::as_str) == Some("fail"))
}

pub fn run_suite(
    suite: Suite,
    corpus: &CorpusSpec,
    jobs: usize,
    cache_dir: Option<&Path>,
) -> Result<SuiteRun> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| match suite {
        Suite::ThmA => run_thm_a(corpus),
        Suite::ThmB => run_thm_b(corpus),
        Suite::ThmC => run_thm_c(corpus, cache_dir),
        Suite::ThmD => run_thm_d(corpus),
        Suite::Monotonicity => run_monotonicity(corpus, cache_dir),
        Suite::Coatoms => run_coatoms(corpus),
        Suite::Tail => run_tail(corpus),
        Suite::Counterexamples => run_counterexamples(corpus),
    })
}

fn collect_entry_items(
    entries: Vec<(&CorpusEntry, Vec<Vec<usize>>)>,
    work: impl Fn(&CorpusEntry, &[Vec<usize>]) -> Result<Vec<Value>> + Sync,
) -> Result<SuiteRun> {
    let results: Result<Vec<Vec<Value>>> = entries
        .par_iter()
        .map(|(entry, jsets)| work(entry, jsets))
        .collect();
    let items: Vec<Value> = results?.into_iter().flatten().collect();
    let failed = item_status(&items);
    Ok(SuiteRun {
        items,
        alpha: None,
        failed,
    })
}

/// Level-count monotonicity f^{w,J}_i <= f^{w,J}_j for 0 <= i < j <= l(w)-i,
/// over every corpus entry and its configured J sets.
fn run_thm_a(corpus: &CorpusSpec) -> Result<SuiteRun> {
    let entries: Vec<(&CorpusEntry, Vec<Vec<usize>>)> = corpus
        .entries
        .iter()
        .map(|e| {
            let system = e.descriptor.build()?;
            Ok((e, e.j_subsets(system.rank())?))
        })
        .collect::<Result<_>>()?;
    collect_entry_items(entries, |entry, jsets| {
        let system = entry.descriptor.build()?;
        let max_len = entry.effective_max_length(&system)?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(max_len)?;
        cache.build_downsets();
        let mut items = Vec::new();
        for j in jsets {
            let minrep = cache.minrep_bits(gen_mask(j));
            let mut checked = 0u64;
            let mut witness = None;
            for w in 0..cache.len() as u32 {
                if !minrep.get(w as usize) {
                    continue;
                }
                checked += 1;
                let lw = cache.length_of(w);
                let counts: Vec<u64> = (0..=lw)
                    .map(|k| {
                        let r = cache.ids_of_length(k);
                        cache.downset_bits(w).count_and_range(
                            &minrep,
                            r.start as usize,
                            r.end as usize,
                        ) as u64
                    })
                    .collect();
                let f = FVector::new(counts, FVectorKind::LowerQuotient);
                if let Some((i, jj)) = f.monotonicity_violation() {
                    witness = Some(json!({
                        "w": format_word(&cache.element(w).reduced_word()),
                        "i": i,
                        "j": jj,
                        "counts": f.counts(),
                    }));
                    break;
                }
            }
            items.push(json!({
                "group": entry.name(),
                "J": j_wire(j),
                "checked": checked,
                "status": if witness.is_none() { "pass" } else { "fail" },
                "witness": witness,
            }));
        }
        Ok(items)
    })
}

/// Disjoint-chain certificates: the suite envelope is A2/A3/B2 with their
/// configured J sets and B3/B4 with J = {} only.
fn run_thm_b(corpus: &CorpusSpec) -> Result<SuiteRun> {
    let mut entries: Vec<(&CorpusEntry, Vec<Vec<usize>>)> = Vec::new();
    for entry in &corpus.entries {
        let name = entry.name();
        if ["A2", "A3", "B2"].contains(&name.as_str()) {
            let system = entry.descriptor.build()?;
            entries.push((entry, entry.j_subsets(system.rank())?));
        } else if ["B3", "B4"].contains(&name.as_str()) {
            entries.push((entry, vec![Vec::new()]));
        }
    }
    collect_entry_items(entries, |entry, jsets| {
        let system = entry.descriptor.build()?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(system.longest_length().expect("finite envelope"))?;
        cache.build_downsets();
        let mut items = Vec::new();
        for j in jsets {
            let minrep = cache.minrep_bits(gen_mask(j));
            let mut checked = 0u64;
            let mut windows = 0u64;
            let mut witness = None;
            for wid in 0..cache.len() as u32 {
                if !minrep.get(wid as usize) {
                    continue;
                }
                checked += 1;
                let w = cache.element(wid).clone();
                let verdict = verify_theorem_b(&mut cache, &w, j)?;
                windows += verdict.windows as u64;
                if !verdict.ok {
                    let (i, flow, expected) = verdict.first_failure.unwrap();
                    witness = Some(json!({
                        "w": format_word(&w.reduced_word()),
                        "i": i,
                        "flow": flow,
                        "expected": expected,
                    }));
                    break;
                }
            }
            items.push(json!({
                "group": entry.name(),
                "J": j_wire(j),
                "checked": checked,
                "windows": windows,
                "status": if witness.is_none() { "pass" } else { "fail" },
                "witness": witness,
            }));
        }
        Ok(items)
    })
}

fn kl_cache_path(cache_dir: &Path, digest: &str) -> PathBuf {
    cache_dir.join(format!("{digest}.klcache"))
}

fn load_or_new_table(cache: &mut BruhatCache, cache_dir: Option<&Path>) -> Result<KlTable> {
    if let Some(dir) = cache_dir {
        let path = kl_cache_path(dir, cache.system().digest_hex());
        if path.exists() {
            return bruhat_core::kl::cache_load(cache, &path);
        }
    }
    Ok(KlTable::new(cache))
}

fn save_table(cache: &BruhatCache, table: &KlTable, cache_dir: Option<&Path>) -> Result<()> {
    if let Some(dir) = cache_dir {
        std::fs::create_dir_all(dir)?;
        let path = kl_cache_path(dir, cache.system().digest_hex());
        bruhat_core::kl::cache_save(cache, table, &path)?;
    }
    Ok(())
}

fn kl_envelope<'c>(corpus: &'c CorpusSpec) -> Vec<(&'c CorpusEntry, Vec<Vec<usize>>)> {
    corpus
        .entries
        .iter()
        .filter(|e| ["A3", "B3"].contains(&e.name().as_str()))
        .map(|e| (e, vec![Vec::new()]))
        .collect()
}

/// Symmetry/vanishing equivalence and the difference clause, for every w of
/// the envelope groups and every admissible k; the top case k = m must
/// reproduce the rational-smoothness criterion (full f-symmetry iff
/// P_{e,w} = 1).
fn run_thm_c(corpus: &CorpusSpec, cache_dir: Option<&Path>) -> Result<SuiteRun> {
    collect_entry_items(kl_envelope(corpus), |entry, _| {
        let system = entry.descriptor.build()?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(system.longest_length().expect("finite envelope"))?;
        cache.build_downsets();
        let mut table = load_or_new_table(&mut cache, cache_dir)?;
        let e = system.identity();
        let mut checked = 0u64;
        let mut witness = None;
        'scan: for wid in 0..cache.len() as u32 {
            let w = cache.element(wid).clone();
            if w.length() == 0 {
                continue;
            }
            let m = (w.length() - 1) / 2;
            for k in 0..=m {
                checked += 1;
                let v = check_theorem_c(&mut cache, &mut table, &w, k)?;
                let mut bad = v.a_holds != v.b_holds || v.c_matches == Some(false);
                if k == m {
                    let smooth = kl_polynomial(&mut cache, &mut table, &e, &w)?.is_one();
                    bad |= v.a_holds != smooth;
                }
                if bad {
                    witness = Some(json!({
                        "w": format_word(&w.reduced_word()),
                        "k": k,
                        "aHolds": v.a_holds,
                        "bHolds": v.b_holds,
                        "cMatches": v.c_matches,
                    }));
                    break 'scan;
                }
            }
        }
        save_table(&cache, &table, cache_dir)?;
        Ok(vec![json!({
            "group": entry.name(),
            "checked": checked,
            "status": if witness.is_none() { "pass" } else { "fail" },
            "witness": witness,
        })])
    })
}

/// Coefficientwise monotonicity of P_{.,z} over all of [e,z].
fn run_monotonicity(corpus: &CorpusSpec, cache_dir: Option<&Path>) -> Result<SuiteRun> {
    collect_entry_items(kl_envelope(corpus), |entry, _| {
        let system = entry.descriptor.build()?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(system.longest_length().expect("finite envelope"))?;
        cache.build_downsets();
        let mut table = load_or_new_table(&mut cache, cache_dir)?;
        let mut checked = 0u64;
        let mut witness = None;
        for zid in 0..cache.len() as u32 {
            checked += 1;
            let z = cache.element(zid).clone();
            let v = check_monotonicity(&mut cache, &mut table, &z)?;
            if !v.ok {
                let (x, y, idx) = v.violation.unwrap();
                witness = Some(json!({
                    "z": format_word(&z.reduced_word()),
                    "x": format_word(&x.reduced_word()),
                    "y": format_word(&y.reduced_word()),
                    "coefficient": idx,
                }));
                break;
            }
        }
        save_table(&cache, &table, cache_dir)?;
        Ok(vec![json!({
            "group": entry.name(),
            "checked": checked,
            "status": if witness.is_none() { "pass" } else { "fail" },
            "witness": witness,
        })])
    })
}

/// Both Theorem D vectors are M-sequences, for every w of the finite Weyl
/// envelope groups.
fn run_thm_d(corpus: &CorpusSpec) -> Result<SuiteRun> {
    let envelope = ["A2", "A3", "A4", "B2", "B3", "B4", "D4", "G2"];
    let entries: Vec<(&CorpusEntry, Vec<Vec<usize>>)> = corpus
        .entries
        .iter()
        .filter(|e| envelope.contains(&e.name().as_str()))
        .map(|e| (e, Vec::new()))
        .collect();
    collect_entry_items(entries, |entry, _| {
        let system = entry.descriptor.build()?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(system.longest_length().expect("finite envelope"))?;
        cache.build_downsets();
        let mut checked = 0u64;
        let mut witness = None;
        for wid in 0..cache.len() as u32 {
            checked += 1;
            let w = cache.element(wid).clone();
            let v = verify_theorem_d(&mut cache, &w)?;
            if !v.ok {
                witness = Some(json!({
                    "w": format_word(&w.reduced_word()),
                    "fVector": v.f_vector_verdict,
                    "differences": v.difference_verdict,
                }));
                break;
            }
        }
        Ok(vec![json!({
            "group": entry.name(),
            "checked": checked,
            "status": if witness.is_none() { "pass" } else { "fail" },
            "witness": witness,
        })])
    })
}

fn finite_entries(corpus: &CorpusSpec) -> Result<Vec<(&CorpusEntry, Vec<Vec<usize>>)>> {
    let mut out = Vec::new();
    for e in &corpus.entries {
        if e.descriptor.build()?.is_finite() {
            out.push((e, Vec::new()));
        }
    }
    Ok(out)
}

/// Coatom lemma: every w with l(w) > Q(j) has more than j coatoms, for each
/// finite corpus group and each j with Q(j) < l(w_0).
fn run_coatoms(corpus: &CorpusSpec) -> Result<SuiteRun> {
    collect_entry_items(finite_entries(corpus)?, |entry, _| {
        let system = entry.descriptor.build()?;
        let longest = system.longest_length().expect("finite entry") as u64;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        let mut items = Vec::new();
        for j in 1.. {
            if q_of_rank(j) >= longest {
                break;
            }
            let v = verify_lemma_coatoms(&mut cache, j)?;
            items.push(json!({
                "group": entry.name(),
                "j": j,
                "qJ": v.q_j,
                "checked": v.checked,
                "status": if v.ok { "pass" } else { "fail" },
                "vacuous": v.vacuous,
                "witness": v.first_violation,
            }));
        }
        Ok(items)
    })
}

/// Tail checks at the N_k thresholds for k = 1, 2, 3, with empirical minimal
/// thresholds reported; the exploratory tail-ratio report is attached.
fn run_tail(corpus: &CorpusSpec) -> Result<SuiteRun> {
    let table = BoundTable::new();
    let thresholds: Vec<(usize, u64)> = (1..=3)
        .map(|k| Ok((k, n_k(k, &table)?)))
        .collect::<Result<_>>()?;
    let mut run = collect_entry_items(finite_entries(corpus)?, |entry, _| {
        let system = entry.descriptor.build()?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        let mut items = Vec::new();
        for &(k, threshold) in &thresholds {
            let v = verify_tail(&mut cache, k, threshold)?;
            items.push(json!({
                "group": entry.name(),
                "k": k,
                "threshold": threshold,
                "checked": v.checked,
                "status": if v.ok { "pass" } else { "fail" },
                "vacuous": v.vacuous,
                "empiricalThreshold": v.empirical_threshold,
                "witness": v.first_violation,
            }));
        }
        Ok(items)
    })?;
    let finite_corpus = CorpusSpec {
        entries: corpus
            .entries
            .iter()
            .filter(|e| matches!(e.descriptor.build().map(|s| s.is_finite()), Ok(true)))
            .cloned()
            .collect(),
    };
    run.alpha = Some(serde_json::to_value(alpha_report(&finite_corpus)?).unwrap());
    Ok(run)
}

/// Recover both M-sequence counterexamples from the corpus.
fn run_counterexamples(corpus: &CorpusSpec) -> Result<SuiteRun> {
    let report = find_counterexamples(corpus)?;
    let items = vec![
        json!({
            "group": report.affine.group,
            "kind": "affine",
            "status": "pass",
            "witness": serde_json::to_value(&report.affine).unwrap(),
        }),
        json!({
            "group": report.relative.group,
            "kind": "relative",
            "status": "pass",
            "witness": serde_json::to_value(&report.relative).unwrap(),
        }),
    ];
    Ok(SuiteRun {
        items,
        alpha: None,
        failed: false,
    })
}
