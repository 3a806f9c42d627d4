//! Randomized-corpus checks of the transition-table machinery: incremental
//! extension agrees with direct computation, the table sequence really is the
//! sequence, and conversions agree with the simulator on bounded words.

mod common;

use fla::sim::{accepts_fla, accepts_oneway};
use fla::tables::{compute_table, extend_table, fla_to_dfa, table_sequence};
use fla::words::first_disagreement;

#[test]
fn extension_matches_direct_computation() {
    for m in common::corpus(4) {
        let mut prev = compute_table(&m, 0).unwrap();
        for seg in 1..=30usize {
            let direct = compute_table(&m, seg).unwrap();
            let extended = extend_table(&m, &prev).unwrap();
            assert_eq!(direct, extended, "segment length {seg}");
            prev = direct;
        }
    }
}

#[test]
fn table_sequence_indexes_the_true_tables() {
    for m in common::corpus(3) {
        let seq = table_sequence(&m).unwrap();
        for seg in 0..=(seq.lambda + 2 * seq.rho + 3) {
            assert_eq!(*seq.table(seg), compute_table(&m, seg).unwrap());
        }
    }
}

#[test]
fn dfa_conversion_agrees_with_the_simulator() {
    let alphabet = common::alphabet();
    for m in common::corpus(3) {
        let dfa = fla_to_dfa(&m).unwrap();
        assert!(dfa.deterministic && dfa.is_complete());
        assert!(dfa.validate().is_empty(), "{:?}", dfa.validate());
        let disagree = first_disagreement(
            &alphabet,
            10,
            |w| accepts_fla(&m, w).unwrap(),
            |w| accepts_oneway(&dfa, w).unwrap(),
        );
        assert!(disagree.is_none(), "disagrees on {disagree:?}");
    }
}
