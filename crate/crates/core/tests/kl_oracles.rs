//! Cross-checks of the Kazhdan-Lusztig recursion against the R-polynomial
//! triangular-solve oracle, plus the coefficient invariants.

use std::sync::Arc;

use bruhat_core::bruhat::BruhatCache;
use bruhat_core::coxeter::{build_system, word_to_element};
use bruhat_core::kl::{beta_vector, fw_polynomial, kl_polynomial, KlTable};
use bruhat_core::testing::kl_by_r_polynomials;

#[test]
fn recursion_matches_r_polynomial_oracle() {
    for name in ["A2", "B2", "A3"] {
        let sys = build_system(name).unwrap();
        let mut cache = BruhatCache::new(Arc::clone(&sys));
        let mut table = KlTable::new(&cache);
        cache.ensure_ball(sys.longest_length().unwrap()).unwrap();
        for id in 0..cache.len() as u32 {
            let w = cache.element(id).clone();
            for (x, expected) in kl_by_r_polynomials(&mut cache, &w).unwrap() {
                let p = kl_polynomial(&mut cache, &mut table, &x, &w).unwrap();
                assert_eq!(
                    p.coeffs(),
                    &expected[..],
                    "{name}: P for x = {x:?}, w = {w:?}"
                );
            }
        }
    }
}

#[test]
fn frozen_singular_value_matches_oracle() {
    let sys = build_system("A3").unwrap();
    let mut cache = BruhatCache::new(Arc::clone(&sys));
    let w = word_to_element(&sys, &[1, 0, 2, 1]).unwrap();
    let e = sys.identity();
    let oracle = kl_by_r_polynomials(&mut cache, &w).unwrap();
    let (_, p) = oracle.iter().find(|(x, _)| *x == e).unwrap();
    assert_eq!(p, &vec![1, 1]);
}

#[test]
fn coefficient_invariants_a3() {
    let sys = build_system("A3").unwrap();
    let mut cache = BruhatCache::new(Arc::clone(&sys));
    let mut table = KlTable::new(&cache);
    cache.ensure_ball(6).unwrap();
    for wid in 0..cache.len() as u32 {
        let w = cache.element(wid).clone();
        for xid in 0..cache.len() as u32 {
            let x = cache.element(xid).clone();
            let p = kl_polynomial(&mut cache, &mut table, &x, &w).unwrap();
            if p.is_zero() {
                continue;
            }
            assert_eq!(p.coeff(0), 1, "constant term");
            assert!(p.coeffs().iter().all(|&c| c >= 0), "nonnegativity");
            if x != w {
                let d = w.length() - x.length();
                assert!(p.degree().unwrap() <= (d - 1) / 2, "degree bound");
            }
        }
        // beta_0 = 0 and the generating polynomial is symmetric (the call
        // itself errors on a violation).
        beta_vector(&mut cache, &mut table, &w).unwrap();
        fw_polynomial(&mut cache, &mut table, &w).unwrap();
    }
}
