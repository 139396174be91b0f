//! Kazhdan-Lusztig polynomials P_{x,w}, mu-coefficients, beta-vectors, the
//! generating polynomial F_w(q), and the symmetry/monotonicity checkers.
//!
//! P_{x,w} is computed by the classical descent recursion: with s the
//! smallest left descent of w and v = sw,
//!
//!   P_{x,w} = P_{sx,v} + q P_{x,v}
//!             - sum over { z : x <= z < v, sz < z } of
//!               mu(z, v) q^((l(w)-l(z))/2) P_{x,z}
//!
//! after first replacing x by sx whenever sx > x (which leaves P unchanged).
//! Base cases: P = 0 if x is not below w, and P = 1 when l(w) - l(x) <= 2
//! (the degree bound forces a constant with constant term 1). Every
//! intermediate result is memoized in a [`KlTable`].
//!
//! Tables are keyed by interned ids, which are deterministic per system
//! (ball enumeration order), so a table may be reused with any cache of the
//! same system.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::bruhat::BruhatCache;
use crate::coxeter::{format_word, parse_word, word_to_element, GroupElement, Side};
use crate::error::{Error, Result};

/// A dense integer-coefficient polynomial in q; the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlPolynomial {
    coeffs: Vec<i64>,
}

impl KlPolynomial {
    pub fn zero() -> Self {
        KlPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        KlPolynomial { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        KlPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// self += scale * q^shift * other.
    fn add_shifted(&mut self, other: &KlPolynomial, shift: usize, scale: i64) {
        if other.is_zero() || scale == 0 {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            self.coeffs[i + shift] += scale * c;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// Coefficientwise self >= other.
    pub fn dominates(&self, other: &KlPolynomial) -> bool {
        (0..other.coeffs.len().max(self.coeffs.len()))
            .all(|i| self.coeff(i) >= other.coeff(i))
    }
}

/// Memo table for P_{x,w} over interned id pairs, bound to one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlTable {
    digest_hex: String,
    map: HashMap<(u32, u32), KlPolynomial>,
}

impl KlTable {
    pub fn new(cache: &BruhatCache) -> Self {
        KlTable {
            digest_hex: cache.system().digest_hex().to_string(),
            map: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn digest_hex(&self) -> &str {
        &self.digest_hex
    }

    fn check_bound(&self, cache: &BruhatCache) -> Result<()> {
        if self.digest_hex != cache.system().digest_hex() {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }
}

fn kl_ids(cache: &mut BruhatCache, table: &mut KlTable, x: u32, w: u32) -> KlPolynomial {
    if !cache.leq_ids(x, w) {
        return KlPolynomial::zero();
    }
    let d = cache.length_of(w) - cache.length_of(x);
    if d <= 2 {
        return KlPolynomial::one();
    }
    if let Some(p) = table.map.get(&(x, w)) {
        return p.clone();
    }
    let we = cache.element(w).clone();
    let s = *we
        .descents(Side::Left)
        .first()
        .expect("non-identity element has a left descent");
    let xe = cache.element(x).clone();
    let result = if !xe.is_descent(s, Side::Left) {
        // sx > x and sw < w imply P_{x,w} = P_{sx,w}.
        let sx = cache
            .intern(&xe.apply_generator(s, Side::Left).expect("in-ball product"))
            .expect("sx stays within the enumerated ball");
        kl_ids(cache, table, sx, w)
    } else {
        let v = cache
            .intern(&we.apply_generator(s, Side::Left).expect("in-ball product"))
            .expect("sw stays within the enumerated ball");
        let sx = cache
            .intern(&xe.apply_generator(s, Side::Left).expect("in-ball product"))
            .expect("sx stays within the enumerated ball");
        let mut p = kl_ids(cache, table, sx, v);
        let q_part = kl_ids(cache, table, x, v);
        p.add_shifted(&q_part, 1, 1);
        let (lx, lv, lw) = (cache.length_of(x), cache.length_of(v), cache.length_of(w));
        for lz in lx..lv {
            if (lw - lz) % 2 != 0 {
                continue;
            }
            for z in cache.ids_of_length(lz) {
                if cache.element(z).is_descent(s, Side::Left)
                    && cache.leq_ids(x, z)
                    && cache.leq_ids(z, v)
                {
                    let m = mu_ids(cache, table, z, v);
                    if m != 0 {
                        let corr = kl_ids(cache, table, x, z);
                        p.add_shifted(&corr, (lw - lz) / 2, -(m as i64));
                    }
                }
            }
        }
        p
    };
    debug_assert!(result.coeff(0) == 1, "constant term must be 1");
    debug_assert!(
        result.degree().unwrap_or(0) <= (d - 1) / 2,
        "degree bound violated"
    );
    debug_assert!(result.coeffs().iter().all(|&c| c >= 0));
    table.map.insert((x, w), result.clone());
    result
}

fn mu_ids(cache: &mut BruhatCache, table: &mut KlTable, x: u32, w: u32) -> u64 {
    if x == w {
        return 0;
    }
    let (lx, lw) = (cache.length_of(x), cache.length_of(w));
    if lx >= lw || (lw - lx) % 2 == 0 || !cache.leq_ids(x, w) {
        return 0;
    }
    let p = kl_ids(cache, table, x, w);
    let c = p.coeff((lw - lx - 1) / 2);
    debug_assert!(c >= 0);
    c as u64
}

/// The Kazhdan-Lusztig polynomial P_{x,w}.
pub fn kl_polynomial(
    cache: &mut BruhatCache,
    table: &mut KlTable,
    x: &GroupElement,
    w: &GroupElement,
) -> Result<KlPolynomial> {
    if !x.same_system(w) || x.system().digest_hex() != cache.system().digest_hex() {
        return Err(Error::SystemMismatch);
    }
    table.check_bound(cache)?;
    if x.length() > w.length() {
        return Ok(KlPolynomial::zero());
    }
    let wi = cache.intern(w)?;
    let xi = cache.intern(x)?;
    Ok(kl_ids(cache, table, xi, wi))
}

/// The mu-coefficient: coefficient of q^((l(w)-l(x)-1)/2) in P_{x,w}, or 0
/// when that exponent is not a nonnegative integer or x is not below w.
pub fn mu(
    cache: &mut BruhatCache,
    table: &mut KlTable,
    x: &GroupElement,
    w: &GroupElement,
) -> Result<u64> {
    if !x.same_system(w) || x.system().digest_hex() != cache.system().digest_hex() {
        return Err(Error::SystemMismatch);
    }
    table.check_bound(cache)?;
    if x.length() >= w.length() {
        return Ok(0);
    }
    let wi = cache.intern(w)?;
    let xi = cache.intern(x)?;
    Ok(mu_ids(cache, table, xi, wi))
}

/// Coefficients beta_1..beta_m of P_{e,w}, with m = floor((l(w)-1)/2),
/// zero-padded. The constant term is asserted to be 1 (beta_0 = 0); the
/// vector is empty for l(w) <= 1.
pub fn beta_vector(
    cache: &mut BruhatCache,
    table: &mut KlTable,
    w: &GroupElement,
) -> Result<Vec<i64>> {
    table.check_bound(cache)?;
    if w.length() <= 1 {
        return Ok(Vec::new());
    }
    let m = (w.length() - 1) / 2;
    let e = w.system().identity();
    let p = kl_polynomial(cache, table, &e, w)?;
    assert_eq!(p.coeff(0), 1, "P_(e,w) must have constant term 1");
    Ok((1..=m).map(|i| p.coeff(i)).collect())
}

/// The generating polynomial F_w(q) = sum over x <= w of q^(l(x)) P_{x,w}.
/// Its coefficients satisfy a_i = a_(l(w)-i); a violation is an
/// implementation bug and is reported as an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FwPolynomial {
    coeffs: Vec<i64>,
}

impl FwPolynomial {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
}

pub fn fw_polynomial(
    cache: &mut BruhatCache,
    table: &mut KlTable,
    w: &GroupElement,
) -> Result<FwPolynomial> {
    table.check_bound(cache)?;
    let wi = cache.intern(w)?;
    let mut coeffs = vec![0i64; w.length() + 1];
    for x in cache.ids_up_to_length(w.length()) {
        if !cache.leq_ids(x, wi) {
            continue;
        }
        let p = kl_ids(cache, table, x, wi);
        let shift = cache.length_of(x);
        for (i, &c) in p.coeffs().iter().enumerate() {
            coeffs[shift + i] += c;
        }
    }
    let l = w.length();
    for i in 0..=l / 2 {
        if coeffs[i] != coeffs[l - i] {
            return Err(Error::SymmetryViolation(format!(
                "a_{i} = {} but a_{} = {} for w = {}",
                coeffs[i],
                l - i,
                coeffs[l - i],
                format_word(&w.reduced_word())
            )));
        }
    }
    Ok(FwPolynomial { coeffs })
}

/// Verdict of the symmetry/vanishing equivalence check at depth k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCVerdict {
    /// f_i = f_(l(w)-i) for i = 0..=k.
    pub a_holds: bool,
    /// beta_i = 0 for i = 1..=k.
    pub b_holds: bool,
    /// beta_(k+1), when k < m and b_holds.
    pub c_value: Option<i64>,
    /// beta_(k+1) = f_(l(w)-k-1) - f_(k+1), when c_value is present.
    pub c_matches: Option<bool>,
}

pub fn check_theorem_c(
    cache: &mut BruhatCache,
    table: &mut KlTable,
    w: &GroupElement,
    k: usize,
) -> Result<TheoremCVerdict> {
    table.check_bound(cache)?;
    if w.length() == 0 {
        return Err(Error::BadK(k));
    }
    let m = (w.length() - 1) / 2;
    if k > m {
        return Err(Error::BadK(k));
    }
    let f = crate::bruhat::f_vector(cache, w, &[])?;
    let beta = beta_vector(cache, table, w)?;
    let a_holds = f.symmetric_to(k);
    let b_holds = (1..=k).all(|i| beta[i - 1] == 0);
    let (c_value, c_matches) = if k < m && b_holds {
        let v = beta[k];
        let rhs = f.counts()[w.length() - k - 1] as i64 - f.counts()[k + 1] as i64;
        (Some(v), Some(v == rhs))
    } else {
        (None, None)
    };
    Ok(TheoremCVerdict {
        a_holds,
        b_holds,
        c_value,
        c_matches,
    })
}

/// Verdict of the coefficientwise monotonicity check over [e,z].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityVerdict {
    pub ok: bool,
    /// Witness (x, y, coefficient index) of the first violation found.
    pub violation: Option<(GroupElement, GroupElement, usize)>,
}

/// Verify P_{x,z} >= P_{y,z} coefficientwise for all x <= y <= z. A
/// violation signals a bug in the engine, never a property of the input.
pub fn check_monotonicity(
    cache: &mut BruhatCache,
    table: &mut KlTable,
    z: &GroupElement,
) -> Result<MonotonicityVerdict> {
    table.check_bound(cache)?;
    let zi = cache.intern(z)?;
    let interval: Vec<u32> = cache
        .ids_up_to_length(z.length())
        .filter(|&x| cache.leq_ids(x, zi))
        .collect();
    for &x in &interval {
        let px = kl_ids(cache, table, x, zi);
        for &y in &interval {
            if !cache.leq_ids(x, y) {
                continue;
            }
            let py = kl_ids(cache, table, y, zi);
            if !px.dominates(&py) {
                let idx = (0..py.coeffs().len())
                    .find(|&i| px.coeff(i) < py.coeff(i))
                    .unwrap();
                return Ok(MonotonicityVerdict {
                    ok: false,
                    violation: Some((
                        cache.element(x).clone(),
                        cache.element(y).clone(),
                        idx,
                    )),
                });
            }
        }
    }
    Ok(MonotonicityVerdict {
        ok: true,
        violation: None,
    })
}

/// Serialize a table to the cache text format:
/// a `#klcache v1 system=<digest>` header, then one sorted line per entry
/// `x=<word> w=<word> p=<c0,c1,...>` with words in ShortLex form.
pub fn cache_to_string(cache: &BruhatCache, table: &KlTable) -> String {
    let mut lines: Vec<String> = table
        .map
        .iter()
        .map(|(&(x, w), p)| {
            let coeffs = p
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!(
                "x={} w={} p={}",
                format_word(&cache.element(x).reduced_word()),
                format_word(&cache.element(w).reduced_word()),
                coeffs
            )
        })
        .collect();
    lines.sort_unstable();
    let mut out = format!("#klcache v1 system={}\n", table.digest_hex);
    for line in lines {
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn cache_save(cache: &BruhatCache, table: &KlTable, path: &Path) -> Result<()> {
    std::fs::write(path, cache_to_string(cache, table))?;
    Ok(())
}

/// Parse a cache file, verifying the digest against the cache's system.
pub fn cache_from_string(cache: &mut BruhatCache, text: &str) -> Result<KlTable> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::FormatError {
        line: 1,
        msg: "empty cache file".into(),
    })?;
    let digest = header
        .strip_prefix("#klcache v1 system=")
        .ok_or(Error::FormatError {
            line: 1,
            msg: "bad header; expected `#klcache v1 system=<digest>`".into(),
        })?
        .trim();
    if digest != cache.system().digest_hex() {
        return Err(Error::DigestMismatch {
            expected: cache.system().digest_hex().to_string(),
            found: digest.to_string(),
        });
    }
    let mut table = KlTable::new(cache);
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::FormatError {
            line: lineno,
            msg: msg.to_string(),
        };
        let rest = line.strip_prefix("x=").ok_or_else(|| bad("missing x="))?;
        let (xword, rest) = rest.split_once(" w=").ok_or_else(|| bad("missing w="))?;
        let (wword, coeffs) = rest.split_once(" p=").ok_or_else(|| bad("missing p="))?;
        let x = word_to_element(cache.system(), &parse_word(xword).map_err(|e| bad(&e.to_string()))?)?;
        let w = word_to_element(cache.system(), &parse_word(wword).map_err(|e| bad(&e.to_string()))?)?;
        let coeffs: Vec<i64> = if coeffs.trim().is_empty() {
            Vec::new()
        } else {
            coeffs
                .trim()
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad("bad coefficient")))
                .collect::<Result<_>>()?
        };
        let xi = cache.intern(&x)?;
        let wi = cache.intern(&w)?;
        table
            .map
            .insert((xi, wi), KlPolynomial::from_coeffs(coeffs));
    }
    Ok(table)
}

pub fn cache_load(cache: &mut BruhatCache, path: &Path) -> Result<KlTable> {
    let text = std::fs::read_to_string(path)?;
    cache_from_string(cache, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::f_vector;
    use crate::coxeter::{build_system, longest_element, word_to_element};
    use std::sync::Arc;

    #[test]
    fn dihedral_polynomials_are_one() {
        // Every interval in A2 and B2 has P = 1.
        for name in ["A2", "B2"] {
            let sys = build_system(name).unwrap();
            let mut cache = BruhatCache::new(Arc::clone(&sys));
            let mut table = KlTable::new(&cache);
            cache.ensure_ball(sys.longest_length().unwrap()).unwrap();
            for x in 0..cache.len() as u32 {
                for w in 0..cache.len() as u32 {
                    let (xe, we) = (cache.element(x).clone(), cache.element(w).clone());
                    let p = kl_polynomial(&mut cache, &mut table, &xe, &we).unwrap();
                    if cache.leq_ids(x, w) {
                        assert!(p.is_one(), "{name}");
                    } else {
                        assert!(p.is_zero(), "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn a3_singular_element() {
        // The classic length-4 singular element of A3: P_{e,w} = 1 + q
        // (frozen from the R-polynomial oracle; see the kl integration
        // tests for the live cross-check).
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let w = word_to_element(&sys, &[1, 0, 2, 1]).unwrap();
        assert_eq!(w.length(), 4);
        let e = sys.identity();
        let p = kl_polynomial(&mut cache, &mut table, &e, &w).unwrap();
        assert_eq!(p.coeffs(), &[1, 1]);

        // mu(e, w) is the coefficient of q^1 here... not an odd distance,
        // so mu = 0; the q-coefficient itself is beta_1 = 1.
        assert_eq!(mu(&mut cache, &mut table, &e, &w).unwrap(), 0);
        assert_eq!(beta_vector(&mut cache, &mut table, &w).unwrap(), vec![1]);
    }

    #[test]
    fn base_cases() {
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let w0 = longest_element(&sys).unwrap();
        assert!(kl_polynomial(&mut cache, &mut table, &w0, &w0)
            .unwrap()
            .is_one());
        let s1 = sys.generator(0).unwrap();
        let s2 = sys.generator(1).unwrap();
        // Distance <= 2 and comparable: P = 1.
        let s1s2 = word_to_element(&sys, &[0, 1]).unwrap();
        assert!(kl_polynomial(&mut cache, &mut table, &s1, &s1s2)
            .unwrap()
            .is_one());
        // Incomparable: P = 0.
        assert!(kl_polynomial(&mut cache, &mut table, &s1, &s2)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mu_basics() {
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let e = sys.identity();
        let s1 = sys.generator(0).unwrap();
        let s1s2 = word_to_element(&sys, &[0, 1]).unwrap();
        // Distance 1: mu = 1.
        assert_eq!(mu(&mut cache, &mut table, &s1, &s1s2).unwrap(), 1);
        assert_eq!(mu(&mut cache, &mut table, &e, &s1).unwrap(), 1);
        // Even distance: mu = 0.
        assert_eq!(mu(&mut cache, &mut table, &e, &s1s2).unwrap(), 0);
    }

    #[test]
    fn beta_vector_shapes() {
        let sys = build_system("A2").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let w0 = longest_element(&sys).unwrap();
        assert_eq!(beta_vector(&mut cache, &mut table, &w0).unwrap(), vec![0]);
        let e = sys.identity();
        assert!(beta_vector(&mut cache, &mut table, &e).unwrap().is_empty());
        let s1 = sys.generator(0).unwrap();
        assert!(beta_vector(&mut cache, &mut table, &s1).unwrap().is_empty());
    }

    #[test]
    fn fw_polynomial_values() {
        let sys = build_system("A2").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let w0 = longest_element(&sys).unwrap();
        assert_eq!(
            fw_polynomial(&mut cache, &mut table, &w0).unwrap().coeffs(),
            &[1, 2, 2, 1]
        );
        let e = sys.identity();
        assert_eq!(
            fw_polynomial(&mut cache, &mut table, &e).unwrap().coeffs(),
            &[1]
        );

        let sys3 = build_system("A3").unwrap();
        let mut cache3 = BruhatCache::new(Arc::clone(&sys3));
        let mut table3 = KlTable::new(&cache3);
        let w = word_to_element(&sys3, &[1, 0, 2, 1]).unwrap();
        let fw = fw_polynomial(&mut cache3, &mut table3, &w).unwrap();
        let c = fw.coeffs();
        assert_eq!(c[0], 1);
        assert_eq!(c[4], 1);
        for i in 0..c.len() {
            assert_eq!(c[i], c[c.len() - 1 - i]);
        }
    }

    #[test]
    fn theorem_c_spot_checks() {
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let w = word_to_element(&sys, &[1, 0, 2, 1]).unwrap();
        let v = check_theorem_c(&mut cache, &mut table, &w, 0).unwrap();
        // k = 0: both sides hold trivially, and clause (c) must match.
        assert!(v.a_holds && v.b_holds);
        assert_eq!(v.c_matches, Some(true));
        let f = f_vector(&mut cache, &w, &[]).unwrap();
        assert_eq!(
            v.c_value.unwrap(),
            f.counts()[3] as i64 - f.counts()[1] as i64
        );

        // Rationally smooth element: w_0 has all beta = 0 and a fully
        // symmetric f-vector.
        let w0 = longest_element(&sys).unwrap();
        let m = (w0.length() - 1) / 2;
        let v = check_theorem_c(&mut cache, &mut table, &w0, m).unwrap();
        assert!(v.a_holds && v.b_holds);

        assert!(matches!(
            check_theorem_c(&mut cache, &mut table, &w0, m + 1),
            Err(Error::BadK(_))
        ));
    }

    #[test]
    fn monotonicity_a3_exhaustive() {
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        cache.ensure_ball(6).unwrap();
        for id in 0..cache.len() as u32 {
            let z = cache.element(id).clone();
            let v = check_monotonicity(&mut cache, &mut table, &z).unwrap();
            assert!(v.ok, "violation under z = {z:?}: {:?}", v.violation);
        }
    }

    #[test]
    fn cache_roundtrip() {
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        let w0 = longest_element(&sys).unwrap();
        // Populate: all P_{x,w0} plus everything the recursion visits.
        fw_polynomial(&mut cache, &mut table, &w0).unwrap();
        let text = cache_to_string(&cache, &table);
        assert!(text.starts_with("#klcache v1 system="));
        let reloaded = cache_from_string(&mut cache, &text).unwrap();
        assert_eq!(reloaded, table);
        // Deterministic bytes on re-save.
        assert_eq!(cache_to_string(&cache, &reloaded), text);
    }

    #[test]
    fn cache_digest_mismatch() {
        let sys = build_system("A3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let other = build_system("B3").unwrap();
        let mut other_cache = BruhatCache::new(Arc::clone(&other));
        let table = KlTable::new(&other_cache);
        let text = cache_to_string(&other_cache, &table);
        assert!(matches!(
            cache_from_string(&mut cache, &text),
            Err(Error::DigestMismatch { .. })
        ));
        // And an empty table from the right system loads fine.
        let own = KlTable::new(&cache);
        let text = cache_to_string(&cache, &own);
        assert!(cache_from_string(&mut other_cache, &text).is_err());
        assert!(cache_from_string(&mut cache, &text).unwrap().is_empty());
    }

    #[test]
    fn cache_format_errors() {
        let sys = build_system("A2").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        assert!(matches!(
            cache_from_string(&mut cache, "nonsense"),
            Err(Error::FormatError { line: 1, .. })
        ));
        let text = format!(
            "#klcache v1 system={}\nx=1 w=1,2,1 q=1\n",
            sys.digest_hex()
        );
        assert!(matches!(
            cache_from_string(&mut cache, &text),
            Err(Error::FormatError { line: 2, .. })
        ));
    }

    #[test]
    fn table_mismatch_rejected() {
        let a3 = build_system("A3").unwrap();
        let b3 = build_system("B3").unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&a3));
        let other_cache = BruhatCache::new(Arc::clone(&b3));
        let mut foreign = KlTable::new(&other_cache);
        let e = a3.identity();
        assert!(matches!(
            kl_polynomial(&mut cache, &mut foreign, &e, &e),
            Err(Error::TableMismatch)
        ));
    }
}
