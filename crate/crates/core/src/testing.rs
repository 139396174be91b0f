//! Independent reference implementations used by the test harnesses.
//!
//! Everything here cross-checks the production path by a different route:
//! the Bruhat order via the subword property, Kazhdan-Lusztig polynomials via
//! R-polynomials and the triangular defining system, and M-sequences via a
//! brute-force search for a realizing order ideal of monomials. None of this
//! is compiled into default builds.

use std::collections::HashMap;

use crate::bruhat::BruhatCache;
use crate::coxeter::{word_to_element, GroupElement, Side};
use crate::error::Result;

/// Subword oracle for the Bruhat order: u <= w iff some subword of a fixed
/// reduced word of w multiplies to u. Exponential in l(w); small inputs only.
pub fn subword_leq(u: &GroupElement, w: &GroupElement) -> bool {
    let word = w.reduced_word();
    assert!(word.len() <= 20, "subword oracle is for small elements");
    let sys = w.system();
    for mask in 0u32..1 << word.len() {
        let sub: Vec<usize> = word
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &s)| s)
            .collect();
        if sub.len() != u.length() {
            continue;
        }
        if &word_to_element(sys, &sub).expect("small product") == u {
            return true;
        }
    }
    false
}

// --- dense integer polynomials (test-local helpers) ---

pub fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn coeff(p: &[i64], i: usize) -> i64 {
    p.get(i).copied().unwrap_or(0)
}

/// q^d * p(1/q) for deg p <= d.
fn mirror(p: &[i64], d: usize) -> Vec<i64> {
    assert!(p.len() <= d + 1);
    let mut out = vec![0; d + 1];
    for (i, &c) in p.iter().enumerate() {
        out[d - i] = c;
    }
    trim(out)
}

/// R-polynomials by their two-case recursion, on interned ids, with a local
/// memo. The zero polynomial is the empty vector.
fn r_poly(
    cache: &mut BruhatCache,
    memo: &mut HashMap<(u32, u32), Vec<i64>>,
    x: u32,
    w: u32,
) -> Result<Vec<i64>> {
    if x == w {
        return Ok(vec![1]);
    }
    if !cache.leq_ids(x, w) {
        return Ok(Vec::new());
    }
    if let Some(r) = memo.get(&(x, w)) {
        return Ok(r.clone());
    }
    let we = cache.element(w).clone();
    let s = *we
        .descents(Side::Left)
        .first()
        .expect("non-identity element has a left descent");
    let sw = cache.intern(&we.apply_generator(s, Side::Left)?)?;
    let xe = cache.element(x).clone();
    let res = if xe.is_descent(s, Side::Left) {
        let sx = cache.intern(&xe.apply_generator(s, Side::Left)?)?;
        r_poly(cache, memo, sx, sw)?
    } else {
        let sx = cache.intern(&xe.apply_generator(s, Side::Left)?)?;
        let a = r_poly(cache, memo, x, sw)?;
        let b = r_poly(cache, memo, sx, sw)?;
        poly_add(&poly_mul(&[-1, 1], &a), &poly_mul(&[0, 1], &b))
    };
    memo.insert((x, w), res.clone());
    Ok(res)
}

/// Kazhdan-Lusztig polynomials P_{x,w} for every x <= w, computed by solving
/// the triangular defining system
/// `q^(l(w)-l(x)) P_{x,w}(1/q) = sum_{x <= z <= w} R_{x,z}(q) P_{z,w}(q)`
/// downward from x = w, using only the degree bound. Entirely independent of
/// the production recursion.
pub fn kl_by_r_polynomials(
    cache: &mut BruhatCache,
    w: &GroupElement,
) -> Result<Vec<(GroupElement, Vec<i64>)>> {
    let wi = cache.intern(w)?;
    let mut interval: Vec<u32> = cache
        .ids_up_to_length(w.length())
        .filter(|&x| cache.leq_ids(x, wi))
        .collect();
    interval.sort_by_key(|&x| std::cmp::Reverse(cache.length_of(x)));
    let mut rmemo: HashMap<(u32, u32), Vec<i64>> = HashMap::new();
    let mut table: HashMap<u32, Vec<i64>> = HashMap::new();
    table.insert(wi, vec![1]);
    for &x in &interval {
        if x == wi {
            continue;
        }
        let d = w.length() - cache.length_of(x);
        let mut rhs: Vec<i64> = Vec::new();
        for &z in &interval {
            if z == x || !cache.leq_ids(x, z) {
                continue;
            }
            let r = r_poly(cache, &mut rmemo, x, z)?;
            rhs = poly_add(&rhs, &poly_mul(&r, &table[&z]));
        }
        let dmax = (d - 1) / 2;
        let p: Vec<i64> = trim((0..=dmax).map(|i| coeff(&rhs, d - i)).collect());
        // Self-check: the full defining identity must hold.
        let lhs = poly_add(&mirror(&p, d), &poly_mul(&[-1], &p));
        assert_eq!(lhs, rhs, "triangular solve inconsistent");
        table.insert(x, p);
    }
    let mut out: Vec<(GroupElement, Vec<i64>)> = interval
        .into_iter()
        .map(|x| (cache.element(x).clone(), table[&x].clone()))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Brute-force order-ideal oracle for short sequences: is there a family of
/// monomials closed under divisibility with exactly seq[k] members of degree
/// k? Supports length <= 4 (degrees 0..=3) and small entries.
pub fn order_ideal_realizable(seq: &[u64]) -> bool {
    assert!(seq.len() <= 4, "oracle supports length <= 4");
    assert!(
        seq.iter().all(|&m| m <= 12),
        "oracle supports small entries"
    );
    if seq.first() != Some(&1) {
        return false;
    }
    if seq.len() == 1 {
        return true;
    }
    let m1 = seq[1] as usize;
    if m1 == 0 {
        return seq[2..].iter().all(|&m| m == 0);
    }
    if seq.len() == 2 {
        return true;
    }
    // Degree-2 monomials on m1 variables: pairs i <= j. Any subset of them,
    // together with all variables and 1, is closed under divisibility.
    let quads: Vec<(usize, usize)> = (0..m1)
        .flat_map(|i| (i..m1).map(move |j| (i, j)))
        .collect();
    let m2 = seq[2] as usize;
    if m2 > quads.len() {
        return false;
    }
    if seq.len() == 3 {
        return true;
    }
    let m3 = seq[3] as usize;
    if m3 == 0 {
        return true;
    }
    if m2 == 0 {
        return false;
    }
    let quad_index: HashMap<(usize, usize), usize> = quads
        .iter()
        .enumerate()
        .map(|(idx, &q)| (q, idx))
        .collect();
    // Degree-3 monomials with the bitmask of their degree-2 divisors.
    let mut cubic_masks: Vec<u32> = Vec::new();
    for i in 0..m1 {
        for j in i..m1 {
            for k in j..m1 {
                let mut mask = 0u32;
                for div in [(i, j), (i, k), (j, k)] {
                    mask |= 1 << quad_index[&div];
                }
                cubic_masks.push(mask);
            }
        }
    }
    // Enumerate all degree-2 selections of size m2 (Gosper's hack) and check
    // whether enough cubics have all their divisors selected.
    let nq = quads.len();
    let mut s2: u32 = (1u32 << m2) - 1;
    loop {
        let candidates = cubic_masks.iter().filter(|&&m| m & !s2 == 0).count();
        if candidates >= m3 {
            return true;
        }
        // Next subset of the same popcount.
        let c = s2 & s2.wrapping_neg();
        let r = s2 + c;
        let next = (((r ^ s2) >> 2) / c) | r;
        if next >= 1u32 << nq {
            break;
        }
        s2 = next;
    }
    false
}

/// Small deterministic RNG (xorshift64*) for reproducible sampling in tests.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}
