//! Shared helpers for the integration suites: a seeded generator of random
//! valid forgetting machines over {a, b}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fla::model::{Alphabet, Dir, FlaSym, ForgettingLa};

fn random_dir(rng: &mut ChaCha8Rng) -> Dir {
    if rng.gen_bool(0.5) {
        Dir::Left
    } else {
        Dir::Right
    }
}

/// A random structurally valid forgetting machine with `n` states. The
/// distribution leaves some slots empty (dead ends) and, for nondeterministic
/// machines, gives some slots two moves.
pub fn random_fla(seed: u64, n: usize, deterministic: bool) -> ForgettingLa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = Alphabet::ab();
    let mut m = ForgettingLa::new(n, alphabet, rng.gen_range(0..n), deterministic);
    let max_moves = if deterministic { 1 } else { 2 };
    for q in 0..n {
        for sym in 0..2 {
            for _ in 0..rng.gen_range(0..=max_moves) {
                m.add_input(q, sym, rng.gen_range(0..n), random_dir(&mut rng));
            }
        }
        for _ in 0..rng.gen_range(0..=max_moves) {
            m.add_z(q, rng.gen_range(0..n), random_dir(&mut rng));
        }
        for _ in 0..rng.gen_range(0..=max_moves) {
            m.add_lend(q, rng.gen_range(0..n));
        }
        for _ in 0..rng.gen_range(0..=max_moves) {
            m.add_rend(q, rng.gen_range(0..n), random_dir(&mut rng));
        }
    }
    for q in 0..n {
        if rng.gen_bool(0.4) {
            m.finals.insert(q);
        }
    }
    debug_assert!(m.validate().is_empty(), "{:?}", m.validate());
    m
}

/// The corpus used by the conversion and periodicity suites: a deterministic
/// seeded mix of nondeterministic and deterministic machines with up to
/// `max_states` states.
#[allow(dead_code)]
pub fn corpus(max_states: usize) -> Vec<ForgettingLa> {
    let mut out = Vec::new();
    for n in 1..=max_states {
        for seed in 0..6u64 {
            out.push(random_fla(1000 * n as u64 + seed, n, false));
            out.push(random_fla(2000 * n as u64 + seed, n, true));
        }
    }
    out
}

#[allow(dead_code)]
pub fn alphabet() -> Alphabet {
    Alphabet::ab()
}

#[allow(dead_code)]
pub fn is_pass_move(m: &ForgettingLa, q: usize) -> bool {
    m.moves(q, FlaSym::Rend)
        .iter()
        .any(|mv| mv.dir == Dir::Right)
}
