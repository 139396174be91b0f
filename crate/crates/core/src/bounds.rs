//! Bound functions and tail behaviour: Q(s), corpus atom-count searches,
//! the N_k thresholds, the coatom lemma, the tail checks, the counterexample
//! searches, and the exploratory tail-ratio report.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bruhat::BruhatCache;
use crate::coxeter::{
    build_system, build_system_from_cartan, format_word, CoxeterSystem, IrreducibleType,
};
use crate::error::{Error, Result};
use crate::msequence::{is_m_sequence, MSequenceVerdict};

/// A system descriptor in a corpus file: a preset name or an inline Cartan
/// matrix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum SystemDescriptor {
    Preset(String),
    Cartan { cartan: Vec<Vec<i64>> },
}

impl SystemDescriptor {
    pub fn build(&self) -> Result<Arc<CoxeterSystem>> {
        match self {
            SystemDescriptor::Preset(name) => build_system(name),
            SystemDescriptor::Cartan { cartan } => build_system_from_cartan(cartan),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SystemDescriptor::Preset(name) => name.clone(),
            SystemDescriptor::Cartan { .. } => "cartan".to_string(),
        }
    }
}

/// Which parabolic subsets J a corpus entry asks for.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum JPolicy {
    /// "all" (all subsets) or "empty" (J = {} only).
    Named(String),
    /// Explicit list of J sets, 1-based generator indices.
    Listed(Vec<Vec<usize>>),
}

impl Default for JPolicy {
    fn default() -> Self {
        JPolicy::Named("empty".to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusEntry {
    #[serde(rename = "type")]
    pub descriptor: SystemDescriptor,
    #[serde(rename = "maxLength", default, skip_serializing_if = "Option::is_none")]
    pub max_length: Option<usize>,
    #[serde(rename = "J", default)]
    pub j_policy: JPolicy,
}

impl CorpusEntry {
    pub fn name(&self) -> String {
        self.descriptor.name()
    }

    /// The enumeration depth for this entry: the longest length for finite
    /// systems (or the configured truncation), maxLength for affine ones.
    pub fn effective_max_length(&self, system: &CoxeterSystem) -> Result<usize> {
        match (system.longest_length(), self.max_length) {
            (Some(l), Some(m)) => Ok(l.min(m)),
            (Some(l), None) => Ok(l),
            (None, Some(m)) => Ok(m),
            (None, None) => Err(Error::InvalidCorpus(format!(
                "affine entry `{}` requires maxLength",
                self.name()
            ))),
        }
    }

    /// The J sets of this entry as 0-based index lists.
    pub fn j_subsets(&self, rank: usize) -> Result<Vec<Vec<usize>>> {
        match &self.j_policy {
            JPolicy::Named(name) if name == "empty" => Ok(vec![Vec::new()]),
            JPolicy::Named(name) if name == "all" => Ok((0..1u32 << rank)
                .map(|m| (0..rank).filter(|&s| m >> s & 1 == 1).collect())
                .collect()),
            JPolicy::Named(name) => Err(Error::InvalidCorpus(format!(
                "unknown J policy `{name}` (expected \"all\", \"empty\", or a list)"
            ))),
            JPolicy::Listed(sets) => sets
                .iter()
                .map(|set| {
                    set.iter()
                        .map(|&s| {
                            if s == 0 || s > rank {
                                Err(Error::InvalidCorpus(format!(
                                    "J index {s} out of range 1..={rank}"
                                )))
                            } else {
                                Ok(s - 1)
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusSpec {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSpec {
    pub fn from_json_str(text: &str) -> Result<CorpusSpec> {
        let spec: CorpusSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidCorpus(e.to_string()))?;
        for entry in &spec.entries {
            let system = entry.descriptor.build()?;
            entry.effective_max_length(&system)?;
            entry.j_subsets(system.rank())?;
        }
        Ok(spec)
    }

    pub fn from_path(path: &std::path::Path) -> Result<CorpusSpec> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// SHA-256 hex of the canonical JSON serialization.
    pub fn digest_hex(&self) -> String {
        let canonical = serde_json::to_string(self).expect("corpus serialization cannot fail");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn find(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    pub fn require(&self, name: &str) -> Result<&CorpusEntry> {
        self.find(name)
            .ok_or_else(|| Error::CorpusMissingEntry(name.to_string()))
    }
}

/// Maximum number of positive roots among irreducible crystallographic
/// types of rank exactly s.
pub fn irreducible_max_longest(s: usize) -> u64 {
    let mut candidates: Vec<IrreducibleType> = Vec::new();
    if s >= 1 {
        candidates.push(IrreducibleType::A(s));
    }
    if s >= 2 {
        candidates.push(IrreducibleType::B(s));
    }
    if s >= 4 {
        candidates.push(IrreducibleType::D(s));
    }
    if (6..=8).contains(&s) {
        candidates.push(IrreducibleType::E(s));
    }
    if s == 4 {
        candidates.push(IrreducibleType::F4);
    }
    if s == 2 {
        candidates.push(IrreducibleType::G2);
    }
    candidates
        .iter()
        .map(|t| t.positive_roots() as u64)
        .max()
        .unwrap_or(0)
}

/// Maximum of l(w_0) over decompositions into irreducible components of
/// total rank s, for s <= 8.
pub fn reducible_max_longest(s: usize) -> u64 {
    let mut dp = vec![0u64; s + 1];
    for t in 1..=s {
        dp[t] = (1..=t)
            .map(|p| irreducible_max_longest(p) + dp[t - p])
            .max()
            .unwrap();
    }
    dp[s]
}

/// Q(s): the maximal l(w_0) over finite crystallographic systems of rank s.
/// For s <= 8 the exceptional types dominate every decomposition (checked in
/// tests); for s >= 9 the classification value s^2 (type B) is used.
///
/// Q is restricted to crystallographic groups here: over all finite Coxeter
/// groups the rank-2 value would be unbounded (dihedral groups of arbitrary
/// order), so the definition is read through its use for crystallographic
/// parabolic subgroups.
pub fn q_of_rank(s: usize) -> u64 {
    match s {
        0 => 0,
        1..=8 => irreducible_max_longest(s),
        _ => (s * s) as u64,
    }
}

/// Seeded table of atom bounds and Q values.
#[derive(Debug, Clone)]
pub struct BoundTable {
    mtilde: Vec<(usize, u64)>,
}

impl Default for BoundTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BoundTable {
    /// Atom bounds seeded from the known initial values
    /// M(1) = 1, M(2) = 2, M(3) = 4, M(4) = 8 (so MT = M on 1..=4).
    pub fn new() -> Self {
        BoundTable {
            mtilde: vec![(1, 1), (2, 2), (3, 4), (4, 8)],
        }
    }

    /// MT(k) = max_{t <= k} M(t); seeded for k <= 4, refused beyond.
    pub fn mtilde(&self, k: usize) -> Result<u64> {
        self.mtilde
            .iter()
            .find(|&&(kk, _)| kk == k)
            .map(|&(_, v)| v)
            .ok_or(Error::MissingMTilde(k))
    }

    pub fn q(&self, s: usize) -> u64 {
        q_of_rank(s)
    }
}

/// N_k = Q(MT(k) - 1) + k.
pub fn n_k(k: usize, table: &BoundTable) -> Result<u64> {
    let mt = table.mtilde(k)?;
    Ok(q_of_rank((mt - 1) as usize) + k as u64)
}

/// Result of the corpus-wide atom search for intervals of one length.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AtomSearchResult {
    pub r: usize,
    pub max_found: u64,
    pub witness: Option<AtomWitness>,
    /// Number of intervals scanned.
    pub intervals: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AtomWitness {
    pub group: String,
    pub u: String,
    pub v: String,
}

/// Scan every interval [u,v] of length r over the corpus groups (affine
/// entries truncated at maxLength) and report the maximal atom count
/// f^{u,v}_{l(u)+1} with one witness. This is a lower bound for the global
/// maximum over all finite Coxeter groups, never an exact computation of it.
pub fn search_max_atoms(corpus: &CorpusSpec, r: usize) -> Result<AtomSearchResult> {
    assert!(r >= 1, "interval length must be >= 1");
    if corpus.entries.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut best: u64 = 0;
    let mut witness = None;
    let mut intervals = 0u64;
    for entry in &corpus.entries {
        let system = entry.descriptor.build()?;
        let max_len = entry.effective_max_length(&system)?;
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(max_len)?;
        cache.build_downsets();
        for lu in 0..=max_len.saturating_sub(r) {
            let lv = lu + r;
            for v in cache.ids_of_length(lv) {
                for u in cache.ids_of_length(lu) {
                    if !cache.downset_bits(v).get(u as usize) {
                        continue;
                    }
                    intervals += 1;
                    let atoms_range = cache.ids_of_length(lu + 1);
                    let count = cache.upset_bits(u).count_and_range(
                        cache.downset_bits(v),
                        atoms_range.start as usize,
                        atoms_range.end as usize,
                    ) as u64;
                    if count > best {
                        best = count;
                        witness = Some(AtomWitness {
                            group: entry.name(),
                            u: format_word(&cache.element(u).reduced_word()),
                            v: format_word(&cache.element(v).reduced_word()),
                        });
                    }
                }
            }
        }
    }
    Ok(AtomSearchResult {
        r,
        max_found: best,
        witness,
        intervals,
    })
}

/// f-vector entries of [e,w] for an interned id, from the downset table.
fn f_counts(cache: &BruhatCache, w: u32) -> Vec<u64> {
    let lw = cache.length_of(w);
    (0..=lw)
        .map(|k| {
            let range = cache.ids_of_length(k);
            cache
                .downset_bits(w)
                .count_range(range.start as usize, range.end as usize) as u64
        })
        .collect()
}

/// Verdict of the coatom-count lemma over one finite group.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CoatomVerdict {
    pub j: usize,
    pub q_j: u64,
    pub checked: u64,
    pub vacuous: bool,
    pub ok: bool,
    pub first_violation: Option<String>,
}

/// Check that every w with l(w) > Q(j) has more than j coatoms.
pub fn verify_lemma_coatoms(cache: &mut BruhatCache, j: usize) -> Result<CoatomVerdict> {
    let system = Arc::clone(cache.system());
    let longest = system.longest_length().ok_or(Error::InfiniteGroup)?;
    cache.ensure_ball(longest)?;
    cache.build_downsets();
    let q_j = q_of_rank(j);
    let mut checked = 0u64;
    let mut first_violation = None;
    for len in 0..=longest {
        if (len as u64) <= q_j {
            continue;
        }
        let coatom_range = cache.ids_of_length(len - 1);
        for w in cache.ids_of_length(len) {
            checked += 1;
            let coatoms = cache.downset_bits(w).count_range(
                coatom_range.start as usize,
                coatom_range.end as usize,
            ) as u64;
            if coatoms <= j as u64 && first_violation.is_none() {
                first_violation = Some(format_word(&cache.element(w).reduced_word()));
            }
        }
    }
    Ok(CoatomVerdict {
        j,
        q_j,
        checked,
        vacuous: checked == 0,
        ok: first_violation.is_none(),
        first_violation,
    })
}

/// Verdict of the tail check f^w_{l(w)-k} >= ... >= f^w_{l(w)}.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TailVerdict {
    pub k: usize,
    pub threshold: u64,
    pub checked: u64,
    pub vacuous: bool,
    pub ok: bool,
    pub first_violation: Option<String>,
    /// Least t such that every w with l(w) >= t satisfies the tail chain.
    pub empirical_threshold: u64,
}

/// The length-k tail of the f-vector of [e,w] is non-increasing, i.e.
/// f_{max(0, l-k)} >= ... >= f_l.
fn tail_ok(counts: &[u64], k: usize) -> bool {
    let l = counts.len() - 1;
    let start = l.saturating_sub(k);
    counts[start..].windows(2).all(|w| w[0] >= w[1])
}

/// Check the tail condition for all w with l(w) >= threshold, and report the
/// empirically minimal threshold that would have sufficed group-wide.
pub fn verify_tail(cache: &mut BruhatCache, k: usize, threshold: u64) -> Result<TailVerdict> {
    assert!(k >= 1);
    let system = Arc::clone(cache.system());
    let longest = system.longest_length().ok_or(Error::InfiniteGroup)?;
    cache.ensure_ball(longest)?;
    cache.build_downsets();
    let mut checked = 0u64;
    let mut first_violation = None;
    let mut max_violating_len: Option<u64> = None;
    for w in 0..cache.len() as u32 {
        let lw = cache.length_of(w) as u64;
        let counts = f_counts(cache, w);
        let ok = tail_ok(&counts, k);
        if !ok {
            max_violating_len = Some(max_violating_len.map_or(lw, |m: u64| m.max(lw)));
        }
        if lw >= threshold {
            checked += 1;
            if !ok && first_violation.is_none() {
                first_violation = Some(format_word(&cache.element(w).reduced_word()));
            }
        }
    }
    Ok(TailVerdict {
        k,
        threshold,
        checked,
        vacuous: checked == 0,
        ok: first_violation.is_none(),
        first_violation,
        empirical_threshold: max_violating_len.map_or(0, |m| m + 1),
    })
}

/// Witnesses of the two M-sequence failures that the engine must recover.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub affine: AffineCounterexample,
    pub relative: RelativeCounterexample,
}

/// A minimal-length element of the affine group lying above every length-3
/// element; its f-vector starts (1, 3, 5, 8), which fails the M-sequence
/// test at k = 3.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AffineCounterexample {
    pub group: String,
    pub u: String,
    pub length: usize,
    pub f_head: Vec<u64>,
    pub m_sequence_failure_k: usize,
}

/// An element x of the rank-4 group whose relative interval up to w_0 has
/// level counts starting (1, 4, 11), which is not an M-sequence head.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RelativeCounterexample {
    pub group: String,
    pub x: String,
    pub head: Vec<u64>,
    pub witnesses: u64,
}

pub fn find_counterexamples(corpus: &CorpusSpec) -> Result<CounterexampleReport> {
    // (i) Affine C2: a minimal-length u above all eight length-3 elements.
    let affine_entry = corpus.require("C2~")?;
    let system = affine_entry.descriptor.build()?;
    let max_len = affine_entry.effective_max_length(&system)?;
    let mut cache = BruhatCache::new(Arc::clone(&system));
    cache.ensure_ball(max_len)?;
    cache.build_downsets();
    let level3: Vec<u32> = cache.ids_of_length(3).collect();
    let mut found = None;
    'search: for len in 3..=max_len {
        for u in cache.ids_of_length(len) {
            if level3
                .iter()
                .all(|&z| cache.downset_bits(u).get(z as usize))
            {
                found = Some(u);
                break 'search;
            }
        }
    }
    let u = found.ok_or_else(|| {
        Error::SearchExhausted(format!(
            "no element above all length-3 elements of C2~ within length {max_len}"
        ))
    })?;
    let counts = f_counts(&cache, u);
    let verdict: MSequenceVerdict =
        is_m_sequence(&counts.iter().map(|&c| c as i64).collect::<Vec<_>>())?;
    let m_fail = verdict.first_failure_k.ok_or_else(|| {
        Error::SearchExhausted(
            "affine witness unexpectedly passed the M-sequence test".to_string(),
        )
    })?;
    let affine = AffineCounterexample {
        group: affine_entry.name(),
        u: format_word(&cache.element(u).reduced_word()),
        length: cache.length_of(u),
        f_head: counts[..4.min(counts.len())].to_vec(),
        m_sequence_failure_k: m_fail,
    };

    // (ii) B4: a relative interval [x, w_0] with level counts (1, 4, 11, ...).
    let rel_entry = corpus.require("B4")?;
    let system = rel_entry.descriptor.build()?;
    let longest = system.longest_length().expect("B4 is finite");
    let mut cache = BruhatCache::new(Arc::clone(&system));
    cache.ensure_ball(longest)?;
    cache.build_downsets();
    let w0 = cache.ids_of_length(longest).start;
    let mut witnesses = 0u64;
    let mut first = None;
    for x in 0..cache.len() as u32 {
        let lx = cache.length_of(x);
        if longest - lx < 2 {
            continue;
        }
        let count_at = |k: usize| {
            let range = cache.ids_of_length(k);
            cache.upset_bits(x).count_and_range(
                cache.downset_bits(w0),
                range.start as usize,
                range.end as usize,
            ) as u64
        };
        if count_at(lx + 1) == 4 && count_at(lx + 2) == 11 {
            witnesses += 1;
            if first.is_none() {
                first = Some(x);
            }
        }
    }
    let x = first.ok_or_else(|| {
        Error::SearchExhausted("no relative interval with head (1, 4, 11) in B4".to_string())
    })?;
    let relative = RelativeCounterexample {
        group: rel_entry.name(),
        x: format_word(&cache.element(x).reduced_word()),
        head: vec![1, 4, 11],
        witnesses,
    };
    Ok(CounterexampleReport { affine, relative })
}

/// Exploratory tail-ratio report: for each w, t(w) is the least index from
/// which the f-vector of [e,w] is non-increasing; the report collects
/// max t(w)/l(w) per group. No property is asserted.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AlphaReport {
    pub groups: Vec<GroupAlpha>,
    pub overall_max_ratio: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GroupAlpha {
    pub group: String,
    pub max_t: usize,
    pub max_len: usize,
    pub ratio: f64,
    pub witness: String,
}

/// Least t with f_t >= f_{t+1} >= ... >= f_l.
fn descent_start(counts: &[u64]) -> usize {
    let mut t = 0;
    for i in 0..counts.len() - 1 {
        if counts[i] < counts[i + 1] {
            t = i + 1;
        }
    }
    t
}

pub fn alpha_report(corpus: &CorpusSpec) -> Result<AlphaReport> {
    let mut groups = Vec::new();
    let mut overall: f64 = 0.0;
    for entry in &corpus.entries {
        let system = entry.descriptor.build()?;
        if !system.is_finite() {
            continue;
        }
        let longest = system.longest_length().unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&system));
        cache.ensure_ball(longest)?;
        cache.build_downsets();
        let mut best: Option<(usize, usize, u32)> = None; // (t, len, id)
        for w in 0..cache.len() as u32 {
            let lw = cache.length_of(w);
            if lw == 0 {
                continue;
            }
            let t = descent_start(&f_counts(&cache, w));
            let better = match best {
                None => true,
                // Compare t/len by cross multiplication, exactly.
                Some((bt, bl, _)) => t * bl > bt * lw,
            };
            if better {
                best = Some((t, lw, w));
            }
        }
        if let Some((t, len, id)) = best {
            let ratio = t as f64 / len as f64;
            overall = overall.max(ratio);
            groups.push(GroupAlpha {
                group: entry.name(),
                max_t: t,
                max_len: len,
                ratio,
                witness: format_word(&cache.element(id).reduced_word()),
            });
        }
    }
    Ok(AlphaReport {
        groups,
        overall_max_ratio: overall,
    })
}

/// Theorem D: for w in a finite Weyl group, both the f-vector of [e,w] and
/// the difference vector (f_0, f_1-f_0, ..., f_mid - f_{mid-1}) are
/// M-sequences.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TheoremDVerdict {
    pub ok: bool,
    pub f_vector_verdict: MSequenceVerdict,
    pub difference_verdict: MSequenceVerdict,
}

pub fn verify_theorem_d(
    cache: &mut BruhatCache,
    w: &crate::coxeter::GroupElement,
) -> Result<TheoremDVerdict> {
    if !w.system().is_finite() {
        return Err(Error::InfiniteGroup);
    }
    let f = crate::bruhat::f_vector(cache, w, &[])?;
    let counts: Vec<i64> = f.counts().iter().map(|&c| c as i64).collect();
    let l = counts.len() - 1;
    let mid = l / 2;
    let mut diffs: Vec<i64> = vec![counts[0]];
    for i in 1..=mid {
        diffs.push(counts[i] - counts[i - 1]);
    }
    let f_vector_verdict = is_m_sequence(&counts)?;
    let difference_verdict = is_m_sequence(&diffs)?;
    Ok(TheoremDVerdict {
        ok: f_vector_verdict.ok && difference_verdict.ok,
        f_vector_verdict,
        difference_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{ball, longest_element};

    fn mini_corpus(names: &[&str], max_len: Option<usize>) -> CorpusSpec {
        CorpusSpec {
            entries: names
                .iter()
                .map(|n| CorpusEntry {
                    descriptor: SystemDescriptor::Preset(n.to_string()),
                    max_length: max_len,
                    j_policy: JPolicy::default(),
                })
                .collect(),
        }
    }

    #[test]
    fn q_values() {
        assert_eq!(q_of_rank(0), 0);
        assert_eq!(q_of_rank(1), 1);
        assert_eq!(q_of_rank(2), 6);
        assert_eq!(q_of_rank(3), 9);
        assert_eq!(q_of_rank(4), 24);
        assert_eq!(q_of_rank(5), 25);
        assert_eq!(q_of_rank(6), 36);
        assert_eq!(q_of_rank(7), 63);
        assert_eq!(q_of_rank(8), 120);
        assert_eq!(q_of_rank(9), 81);
        assert_eq!(q_of_rank(12), 144);
    }

    #[test]
    fn reducible_never_beats_irreducible_up_to_rank_8() {
        for s in 2..=8 {
            assert_eq!(reducible_max_longest(s), irreducible_max_longest(s), "{s}");
        }
    }

    #[test]
    fn q_matches_ball_enumeration_up_to_rank_4() {
        // Every irreducible crystallographic type of rank <= 4, checked by
        // exhaustive ball expansion.
        let types: &[(&str, usize)] = &[
            ("A1", 1),
            ("A2", 2),
            ("B2", 2),
            ("G2", 2),
            ("A3", 3),
            ("B3", 3),
            ("A4", 4),
            ("B4", 4),
            ("D4", 4),
            ("F4", 4),
        ];
        let mut max_by_rank = [0u64; 5];
        for &(name, rank) in types {
            let sys = build_system(name).unwrap();
            let b = ball(&sys, sys.longest_length().unwrap()).unwrap();
            assert!(b.saturated);
            assert_eq!(b.total() as u64, sys.order().unwrap(), "{name}");
            let enumerated_longest = (b.levels.len() - 1) as u64;
            assert_eq!(
                enumerated_longest,
                sys.longest_length().unwrap() as u64,
                "{name}"
            );
            max_by_rank[rank] = max_by_rank[rank].max(enumerated_longest);
        }
        for s in 1..=4 {
            assert_eq!(q_of_rank(s), max_by_rank[s], "rank {s}");
        }
    }

    #[test]
    fn n_k_values() {
        let table = BoundTable::new();
        assert_eq!(n_k(1, &table).unwrap(), 1);
        assert_eq!(n_k(2, &table).unwrap(), 3);
        assert_eq!(n_k(3, &table).unwrap(), 12);
        assert_eq!(n_k(4, &table).unwrap(), 67);
        assert!(matches!(n_k(5, &table), Err(Error::MissingMTilde(5))));
    }

    #[test]
    fn atom_search_r1_and_r2() {
        let corpus = mini_corpus(&["A3", "B3"], None);
        let r1 = search_max_atoms(&corpus, 1).unwrap();
        assert_eq!(r1.max_found, 1);
        let r2 = search_max_atoms(&corpus, 2).unwrap();
        assert_eq!(r2.max_found, 2);
        assert!(r2.witness.is_some());
        assert!(matches!(
            search_max_atoms(&CorpusSpec { entries: vec![] }, 2),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn coatom_lemma_small() {
        // A3 with j = 1: every w of length >= 2 has at least 2 coatoms.
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let v = verify_lemma_coatoms(&mut cache, 1).unwrap();
        assert!(v.ok && !v.vacuous);
        assert_eq!(v.q_j, 1);

        // G2 with j = 2 is vacuous: l(w_0) = 6 = Q(2).
        let g2 = build_system("G2").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&g2));
        let v = verify_lemma_coatoms(&mut cache, 2).unwrap();
        assert!(v.ok && v.vacuous);

        // B3 with j = 2: all w with l(w) >= 7 have at least 3 coatoms.
        let b3 = build_system("B3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&b3));
        let v = verify_lemma_coatoms(&mut cache, 2).unwrap();
        assert!(v.ok && !v.vacuous);

        let aff = build_system("C2~").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&aff));
        assert!(matches!(
            verify_lemma_coatoms(&mut cache, 1),
            Err(Error::InfiniteGroup)
        ));
    }

    #[test]
    fn tail_check_small() {
        let sys = build_system("B3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let table = BoundTable::new();
        let t = n_k(2, &table).unwrap();
        let v = verify_tail(&mut cache, 2, t).unwrap();
        assert!(v.ok, "first violation: {:?}", v.first_violation);
        assert!(!v.vacuous);
        // Vacuous when the threshold exceeds the longest length.
        let v = verify_tail(&mut cache, 2, 10).unwrap();
        assert!(v.ok && v.vacuous);
    }

    #[test]
    fn theorem_d_small() {
        let sys = build_system("A2").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let w0 = longest_element(&sys).unwrap();
        let v = verify_theorem_d(&mut cache, &w0).unwrap();
        assert!(v.ok);

        let aff = build_system("C2~").unwrap();
        let mut cache_aff = BruhatCache::new(Arc::clone(&aff));
        let e = aff.identity();
        assert!(matches!(
            verify_theorem_d(&mut cache_aff, &e),
            Err(Error::InfiniteGroup)
        ));
    }

    #[test]
    fn corpus_parsing() {
        let text = r#"{"entries":[{"type":"B4","J":"all"},{"type":"C2~","maxLength":8,"J":"empty"}]}"#;
        let spec = CorpusSpec::from_json_str(text).unwrap();
        assert_eq!(spec.entries.len(), 2);
        assert_eq!(spec.entries[0].name(), "B4");
        assert!(spec.find("C2~").is_some());
        assert!(spec.find("A7").is_none());
        assert!(matches!(
            spec.require("E6"),
            Err(Error::CorpusMissingEntry(_))
        ));
        let sys = spec.entries[1].descriptor.build().unwrap();
        assert_eq!(spec.entries[1].effective_max_length(&sys).unwrap(), 8);
        assert_eq!(
            spec.entries[0]
                .j_subsets(4)
                .unwrap()
                .len(),
            16
        );

        // Affine entry without maxLength is rejected.
        let bad = r#"{"entries":[{"type":"C2~","J":"empty"}]}"#;
        assert!(CorpusSpec::from_json_str(bad).is_err());

        // Listed J policy, 1-based.
        let listed = r#"{"entries":[{"type":"A2","J":[[],[2]]}]}"#;
        let spec = CorpusSpec::from_json_str(listed).unwrap();
        assert_eq!(
            spec.entries[0].j_subsets(2).unwrap(),
            vec![vec![], vec![1]]
        );

        // Inline Cartan matrix descriptor.
        let inline = r#"{"entries":[{"type":{"cartan":[[2,-1],[-1,2]]},"J":"empty"}]}"#;
        let spec = CorpusSpec::from_json_str(inline).unwrap();
        let sys = spec.entries[0].descriptor.build().unwrap();
        assert_eq!(sys.order(), Some(6));

        // Digest is stable.
        let a = CorpusSpec::from_json_str(text).unwrap().digest_hex();
        let b = CorpusSpec::from_json_str(text).unwrap().digest_hex();
        assert_eq!(a, b);
    }

    #[test]
    fn counterexamples_need_entries() {
        let corpus = mini_corpus(&["A2"], None);
        assert!(matches!(
            find_counterexamples(&corpus),
            Err(Error::CorpusMissingEntry(_))
        ));
    }

    #[test]
    fn alpha_report_shape() {
        let corpus = mini_corpus(&["A2", "B2"], None);
        let report = alpha_report(&corpus).unwrap();
        assert_eq!(report.groups.len(), 2);
        // In a dihedral group the worst ratio comes from a length-2 element
        // with f = (1, 2, 1): t = 1, ratio 1/2.
        assert_eq!(report.overall_max_ratio, 0.5);
        for g in &report.groups {
            assert!(g.ratio <= 0.5);
        }
    }

    #[test]
    fn descent_start_scan() {
        assert_eq!(descent_start(&[1]), 0);
        assert_eq!(descent_start(&[1, 1]), 0);
        assert_eq!(descent_start(&[1, 2, 1]), 1);
        assert_eq!(descent_start(&[1, 2, 2, 3, 1, 1]), 3);
    }
}
