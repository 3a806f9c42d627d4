//! Property tests: the `.mach` format round-trips bit-exactly, and state
//! renumbering neither changes the language nor the minimized form.

mod common;

use proptest::prelude::*;

use fla::classical::{determinize, equivalent, isomorphic, minimize};
use fla::file::{parse, serialize};
use fla::model::{Machine, OneWayFa};
use fla::tables::fla_to_dfa;

/// Renumbers the states of a one-way automaton by `perm` (old -> new).
fn permute(m: &OneWayFa, perm: &[usize]) -> OneWayFa {
    let mut out = OneWayFa::new(
        m.states,
        m.alphabet.clone(),
        perm[m.initial],
        m.deterministic,
    );
    for (q, row) in m.delta.iter().enumerate() {
        for (s, set) in row.iter().enumerate() {
            for &t in set {
                out.add(perm[q], s, perm[t]);
            }
        }
    }
    out.finals = m.finals.iter().map(|&f| perm[f]).collect();
    out
}

fn permutation_from_seed(n: usize, seed: u64) -> Vec<usize> {
    // Fisher-Yates driven by a splitmix-style stream; deterministic per seed.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    for i in (1..n).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let j = (state % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fla_serialization_round_trips(seed in any::<u64>(), n in 1usize..=4, det in any::<bool>()) {
        // serialize() emits moves in canonical order, so parsing is a
        // structural fixed point after one pass and byte-stable thereafter.
        let m = Machine::Fla(common::random_fla(seed, n, det));
        let text = serialize(&m);
        let back = parse(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(&parse(&serialize(&back)).unwrap(), &back);
    }

    #[test]
    fn converted_dfa_round_trips(seed in any::<u64>(), n in 1usize..=3) {
        let dfa = fla_to_dfa(&common::random_fla(seed, n, false)).unwrap();
        let m = Machine::OneWay(dfa);
        let text = serialize(&m);
        prop_assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn renumbering_preserves_language_and_minimal_form(seed in any::<u64>(), n in 1usize..=3, pseed in any::<u64>()) {
        let dfa = fla_to_dfa(&common::random_fla(seed, n, false)).unwrap();
        let perm = permutation_from_seed(dfa.states, pseed);
        let shuffled = permute(&dfa, &perm);
        prop_assert!(shuffled.validate().is_empty());
        let (eq, witness) = equivalent(&dfa, &shuffled).unwrap();
        prop_assert!(eq, "renumbering changed the language: {witness:?}");
        let a = minimize(&determinize(&dfa)).unwrap();
        let b = minimize(&determinize(&shuffled)).unwrap();
        prop_assert!(isomorphic(&a, &b).unwrap(), "minimal forms differ");
    }
}
