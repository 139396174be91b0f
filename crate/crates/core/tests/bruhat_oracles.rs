//! Cross-checks of the Bruhat order engine against independent oracles: the
//! subword characterization, and the inversion model of symmetric groups.

use std::sync::Arc;

use bruhat_core::bruhat::{bruhat_leq, BruhatCache};
use bruhat_core::coxeter::{build_system, parse_word, word_to_element, Side};
use bruhat_core::testing::{subword_leq, TestRng};

use proptest::prelude::*;

#[test]
fn subword_oracle_agreement() {
    for name in ["A2", "B2", "A3"] {
        let sys = build_system(name).unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        cache.ensure_ball(sys.longest_length().unwrap()).unwrap();
        let n = cache.len() as u32;
        for u in 0..n {
            for w in 0..n {
                let (ue, we) = (cache.element(u).clone(), cache.element(w).clone());
                let expected = subword_leq(&ue, &we);
                assert_eq!(
                    bruhat_leq(&mut cache, &ue, &we).unwrap(),
                    expected,
                    "{name}: {ue:?} vs {we:?}"
                );
            }
        }
    }
}

#[test]
fn subword_oracle_sampled_in_b3() {
    let sys = build_system("B3").unwrap();
    let mut cache = BruhatCache::new(Arc::clone(&sys));
    cache.ensure_ball(9).unwrap();
    let n = cache.len();
    let mut rng = TestRng::new(0xB3B3);
    for _ in 0..500 {
        let u = cache.element(rng.below(n) as u32).clone();
        let w = cache.element(rng.below(n) as u32).clone();
        assert_eq!(
            bruhat_leq(&mut cache, &u, &w).unwrap(),
            subword_leq(&u, &w),
            "{u:?} vs {w:?}"
        );
    }
}

/// Length in the symmetric group model: multiply adjacent transpositions and
/// count inversions.
fn permutation_length(n: usize, word: &[usize]) -> usize {
    let mut p: Vec<usize> = (0..n).collect();
    for &s in word {
        p.swap(s, s + 1);
    }
    let mut inv = 0;
    for i in 0..n {
        for j in i + 1..n {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv
}

#[test]
fn a3_lengths_match_inversion_counts() {
    let sys = build_system("A3").unwrap();
    let mut cache = BruhatCache::new(Arc::clone(&sys));
    cache.ensure_ball(6).unwrap();
    for id in 0..cache.len() as u32 {
        let w = cache.element(id).clone();
        assert_eq!(w.length(), permutation_length(4, &w.reduced_word()));
    }
}

proptest! {
    #[test]
    fn random_words_reduce_consistently(
        name in prop::sample::select(vec!["A3", "B3", "C2~", "G2"]),
        raw in prop::collection::vec(0usize..3, 0..12),
    ) {
        let sys = build_system(name).unwrap();
        let word: Vec<usize> = raw.into_iter().map(|s| s % sys.rank()).collect();
        let u = word_to_element(&sys, &word).unwrap();
        // Length parity matches the word, and never exceeds its length.
        prop_assert_eq!(u.length() % 2, word.len() % 2);
        prop_assert!(u.length() <= word.len());
        // The ShortLex reduced word reproduces the element.
        let reduced = u.reduced_word();
        prop_assert_eq!(reduced.len(), u.length());
        prop_assert_eq!(&word_to_element(&sys, &reduced).unwrap(), &u);
        // Inverse has the same length and the reversed reduced word is valid.
        let inv = u.inverse();
        prop_assert_eq!(inv.length(), u.length());
        let back: Vec<usize> = reduced.iter().rev().copied().collect();
        prop_assert_eq!(&word_to_element(&sys, &back).unwrap(), &inv);
        // Descent tests agree with actual length changes on both sides.
        for s in 0..sys.rank() {
            let right = u.apply_generator(s, Side::Right).unwrap();
            prop_assert_eq!(
                right.length() + 1 == u.length(),
                u.is_descent(s, Side::Right)
            );
            let left = u.apply_generator(s, Side::Left).unwrap();
            prop_assert_eq!(
                left.length() + 1 == u.length(),
                u.is_descent(s, Side::Left)
            );
        }
    }

    #[test]
    fn word_format_roundtrip(word in prop::collection::vec(0usize..6, 0..10)) {
        let text = bruhat_core::coxeter::format_word(&word);
        prop_assert_eq!(parse_word(&text).unwrap(), word);
    }
}
