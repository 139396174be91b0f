//! Macaulay binomial expansions, the boundary operator, and M-sequence
//! testing.
//!
//! For n, k >= 1 there is a unique expansion
//! `n = C(a_k, k) + C(a_{k-1}, k-1) + ... + C(a_i, i)` with
//! `a_k > a_{k-1} > ... > a_i >= i >= 1`, and the boundary operator is
//! `bd^k(n) = C(a_k - 1, k - 1) + ... + C(a_i - 1, i - 1)` with
//! `bd^k(0) = 0`. A sequence (1, m_1, m_2, ...) is an M-sequence when
//! `bd^k(m_k) <= m_{k-1}` for every k >= 1.

use serde::Serialize;

use crate::error::{Error, Result};

/// C(n, k) with overflow reported as an error.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 1..=k {
        // acc * (n - k + i) is divisible by i at every step.
        acc = acc
            .checked_mul(n - k + i)
            .ok_or(Error::Overflow("binomial"))?
            / i;
    }
    Ok(acc)
}

/// The unique Macaulay expansion of n with respect to k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacaulayExpansion {
    pub n: u64,
    pub k: u64,
    /// Pairs (a_j, j) with j descending from k; empty when n = 0.
    pub terms: Vec<(u64, u64)>,
}

pub fn macaulay_expansion(n: u64, k: u64) -> Result<MacaulayExpansion> {
    assert!(k >= 1, "expansion index k must be >= 1");
    let mut terms = Vec::new();
    let mut rem = n;
    let mut j = k;
    while rem > 0 {
        debug_assert!(j >= 1, "greedy expansion terminates at j >= 1");
        // Largest a with C(a, j) <= rem; search upward from a = j.
        let mut a = j;
        loop {
            match binomial(a + 1, j) {
                Ok(c) if c <= rem => a += 1,
                Ok(_) => break,
                Err(e) => {
                    // C(a + 1, j) overflowed u64, hence it exceeds rem.
                    if binomial(a, j)? <= rem {
                        break;
                    }
                    return Err(e);
                }
            }
        }
        rem -= binomial(a, j)?;
        terms.push((a, j));
        j -= 1;
    }
    debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
    debug_assert!(terms.last().is_none_or(|&(a, j)| a >= j && j >= 1));
    Ok(MacaulayExpansion { n, k, terms })
}

/// The Macaulay boundary operator applied to n with respect to k.
pub fn partial_k(n: u64, k: u64) -> Result<u64> {
    if n == 0 {
        return Ok(0);
    }
    let exp = macaulay_expansion(n, k)?;
    let mut acc: u64 = 0;
    for (a, j) in exp.terms {
        acc = acc
            .checked_add(binomial(a - 1, j - 1)?)
            .ok_or(Error::Overflow("partial_k"))?;
    }
    Ok(acc)
}

/// Verdict of the M-sequence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MSequenceVerdict {
    pub ok: bool,
    /// The first k with bd^k(m_k) > m_{k-1} (or 0 when the sequence does not
    /// start with 1), when not ok.
    pub first_failure_k: Option<usize>,
}

/// Test whether (m_0, m_1, ...) is an M-sequence: m_0 = 1 and
/// bd^k(m_k) <= m_{k-1} for all k >= 1.
pub fn is_m_sequence(seq: &[i64]) -> Result<MSequenceVerdict> {
    if let Some(pos) = seq.iter().position(|&m| m < 0) {
        return Err(Error::NegativeEntry(pos));
    }
    if seq.first() != Some(&1) {
        return Ok(MSequenceVerdict {
            ok: false,
            first_failure_k: Some(0),
        });
    }
    for k in 1..seq.len() {
        let bd = partial_k(seq[k] as u64, k as u64)?;
        if bd > seq[k - 1] as u64 {
            return Ok(MSequenceVerdict {
                ok: false,
                first_failure_k: Some(k),
            });
        }
    }
    Ok(MSequenceVerdict {
        ok: true,
        first_failure_k: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(4, 3).unwrap(), 4);
        assert_eq!(binomial(3, 2).unwrap(), 3);
        assert_eq!(binomial(1, 1).unwrap(), 1);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(5, 9).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424);
        assert!(binomial(200, 100).is_err());
    }

    #[test]
    fn expansion_of_8_wrt_3() {
        // 8 = C(4,3) + C(3,2) + C(1,1).
        let e = macaulay_expansion(8, 3).unwrap();
        assert_eq!(e.terms, vec![(4, 3), (3, 2), (1, 1)]);
    }

    #[test]
    fn expansion_of_zero_is_empty() {
        assert!(macaulay_expansion(0, 4).unwrap().terms.is_empty());
    }

    #[test]
    fn expansion_of_5_wrt_2() {
        // 5 = C(3,2) + C(2,1).
        let e = macaulay_expansion(5, 2).unwrap();
        assert_eq!(e.terms, vec![(3, 2), (2, 1)]);
    }

    #[test]
    fn expansion_roundtrip_sweep() {
        for k in 1..=6u64 {
            for n in (0..=1_000_000u64).step_by(997) {
                let e = macaulay_expansion(n, k).unwrap();
                let total: u64 = e.terms.iter().map(|&(a, j)| binomial(a, j).unwrap()).sum();
                assert_eq!(total, n, "n = {n}, k = {k}");
                // Strictly decreasing a_j with a_j >= j >= 1.
                assert!(e.terms.windows(2).all(|w| w[0].0 > w[1].0));
                assert!(e.terms.iter().all(|&(a, j)| a >= j && j >= 1));
            }
        }
    }

    #[test]
    fn partial_values() {
        assert_eq!(partial_k(8, 3).unwrap(), 6);
        assert_eq!(partial_k(0, 5).unwrap(), 0);
        for m in 1..=50u64 {
            assert_eq!(partial_k(m, 1).unwrap(), 1);
        }
    }

    #[test]
    fn partial_monotone_sweep() {
        for k in 1..=5u64 {
            let mut prev = 0;
            for n in 0..=10_000u64 {
                let cur = partial_k(n, k).unwrap();
                assert!(cur >= prev, "partial^{k} not monotone at n = {n}");
                prev = cur;
            }
        }
    }

    #[test]
    fn m_sequence_verdicts() {
        let v = is_m_sequence(&[1, 3, 5, 8]).unwrap();
        assert!(!v.ok);
        assert_eq!(v.first_failure_k, Some(3));

        assert!(is_m_sequence(&[1]).unwrap().ok);
        assert!(is_m_sequence(&[1, 2, 2, 1]).unwrap().ok);

        // The head (1, 4, 11) already fails: bd^2(11) = 5 > 4.
        let v = is_m_sequence(&[1, 4, 11]).unwrap();
        assert!(!v.ok);
        assert_eq!(v.first_failure_k, Some(2));

        let not_starting_at_one = is_m_sequence(&[2, 1]).unwrap();
        assert!(!not_starting_at_one.ok);
        assert_eq!(not_starting_at_one.first_failure_k, Some(0));

        assert!(matches!(
            is_m_sequence(&[1, -2]),
            Err(Error::NegativeEntry(1))
        ));

        // A zero forces zeros afterwards.
        assert!(is_m_sequence(&[1, 2, 0, 0]).unwrap().ok);
        let v = is_m_sequence(&[1, 2, 0, 1]).unwrap();
        assert!(!v.ok);
        assert_eq!(v.first_failure_k, Some(3));
    }
}
