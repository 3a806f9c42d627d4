//! Word enumeration and exhaustive predicate comparison.
//!
//! The exhaustive sweeps (oracle-agreement checks over all words up to a
//! length bound) are data-parallel; with the `parallel` feature (default)
//! they run on rayon, otherwise sequentially. Both paths are exposed so the
//! bench suite can compare them.

use crate::model::Alphabet;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// All words over `alphabet` of length at most `max_len`, shortest first,
/// lexicographic within a length.
pub fn all_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<String> {
    let k = alphabet.len();
    let mut total = 1usize;
    let mut pow = 1usize;
    for _ in 0..max_len {
        pow *= k;
        total += pow;
    }
    let mut out = Vec::with_capacity(total);
    out.push(String::new());
    let mut level: Vec<String> = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * k);
        for w in &level {
            for &c in alphabet.symbols() {
                let mut ext = String::with_capacity(w.len() + 1);
                ext.push_str(w);
                ext.push(c);
                next.push(ext);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Sequential scan: first word up to `max_len` on which the two predicates
/// disagree, or `None` when they agree everywhere.
pub fn first_disagreement_seq<F, G>(
    alphabet: &Alphabet,
    max_len: usize,
    lhs: F,
    rhs: G,
) -> Option<String>
where
    F: Fn(&str) -> bool,
    G: Fn(&str) -> bool,
{
    all_up_to(alphabet, max_len)
        .into_iter()
        .find(|w| lhs(w) != rhs(w))
}

/// Parallel scan over all words up to `max_len`; returns the first
/// disagreement in enumeration order.
#[cfg(feature = "parallel")]
pub fn first_disagreement_par<F, G>(
    alphabet: &Alphabet,
    max_len: usize,
    lhs: F,
    rhs: G,
) -> Option<String>
where
    F: Fn(&str) -> bool + Sync,
    G: Fn(&str) -> bool + Sync,
{
    let words = all_up_to(alphabet, max_len);
    let pos = words.par_iter().position_first(|w| lhs(w) != rhs(w))?;
    Some(words[pos].clone())
}

/// Dispatches to the parallel scan when the `parallel` feature is enabled.
pub fn first_disagreement<F, G>(
    alphabet: &Alphabet,
    max_len: usize,
    lhs: F,
    rhs: G,
) -> Option<String>
where
    F: Fn(&str) -> bool + Sync,
    G: Fn(&str) -> bool + Sync,
{
    #[cfg(feature = "parallel")]
    {
        first_disagreement_par(alphabet, max_len, lhs, rhs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        first_disagreement_seq(alphabet, max_len, lhs, rhs)
    }
}
