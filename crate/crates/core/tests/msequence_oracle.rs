//! The Macaulay inequality test agrees with a brute-force search for a
//! realizing order ideal of monomials, for all short small sequences.

use bruhat_core::msequence::is_m_sequence;
use bruhat_core::testing::order_ideal_realizable;

#[test]
fn boundary_test_matches_order_ideal_search() {
    let mut checked = 0u32;
    for len in 1..=4usize {
        let mut seq = vec![0u64; len];
        seq[0] = 1;
        loop {
            let as_i64: Vec<i64> = seq.iter().map(|&m| m as i64).collect();
            assert_eq!(
                is_m_sequence(&as_i64).unwrap().ok,
                order_ideal_realizable(&seq),
                "sequence {seq:?}"
            );
            checked += 1;
            // Next sequence: odometer over positions 1.. with digits 0..=6.
            let mut pos = len - 1;
            loop {
                if pos == 0 {
                    break;
                }
                if seq[pos] < 6 {
                    seq[pos] += 1;
                    break;
                }
                seq[pos] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    assert_eq!(checked, 1 + 7 + 49 + 343);
}
