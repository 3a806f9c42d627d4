//! Exact membership deciders via configuration-graph reachability.
//!
//! All deciders terminate on every input: configuration graphs are finite
//! (`n * (|w|+2)` pairs for two-way automata, at most `n * (|w|+2)^2` for
//! forgetting machines) and forward reachability is immune to livelock.
//! Infinite loops simply contribute no accepting path.

use std::collections::VecDeque;

use crate::families;
use crate::model::{Dir, FlaSym, ForgettingLa, OneWayFa, TwoSym, TwoWayFa};
use crate::Result;

/// One-way acceptance: some run consumes `w` ending in a final state.
pub fn accepts_oneway(m: &OneWayFa, w: &str) -> Result<bool> {
    let word = m.alphabet.encode(w)?;
    let mut current = vec![false; m.states];
    current[m.initial] = true;
    for &sym in &word {
        let mut next = vec![false; m.states];
        for (q, &live) in current.iter().enumerate() {
            if live {
                for &t in &m.delta[q][sym] {
                    next[t] = true;
                }
            }
        }
        current = next;
    }
    Ok(current
        .iter()
        .enumerate()
        .any(|(q, &live)| live && m.finals.contains(&q)))
}

/// Tape symbol of a two-way machine at `pos` on input `word`
/// (0 = left end-marker, `|w|+1` = right end-marker).
fn two_sym_at(word: &[usize], pos: usize) -> TwoSym {
    if pos == 0 {
        TwoSym::Lend
    } else if pos == word.len() + 1 {
        TwoSym::Rend
    } else {
        TwoSym::Input(word[pos - 1])
    }
}

/// Two-way acceptance: a configuration reachable from the start performs the
/// pass move from the right end-marker into a final state. On empty input
/// the head starts directly on the right end-marker.
pub fn accepts_twoway(m: &TwoWayFa, w: &str) -> Result<bool> {
    let word = m.alphabet.encode(w)?;
    let rend = word.len() + 1;
    let idx = |q: usize, pos: usize| q * (rend + 1) + pos;
    let mut seen = vec![false; m.states * (rend + 1)];
    let mut queue = VecDeque::new();
    let start = (m.initial, 1.min(rend));
    seen[idx(start.0, start.1)] = true;
    queue.push_back(start);
    while let Some((q, pos)) = queue.pop_front() {
        let sym = two_sym_at(&word, pos);
        for &(t, dir) in m.moves(q, sym) {
            match (dir, pos) {
                (Dir::Right, p) if p == rend => {
                    // pass move
                    if m.finals.contains(&t) {
                        return Ok(true);
                    }
                }
                (Dir::Right, p) => {
                    if !seen[idx(t, p + 1)] {
                        seen[idx(t, p + 1)] = true;
                        queue.push_back((t, p + 1));
                    }
                }
                (Dir::Left, 0) => {} // forbidden by validation; dead end here
                (Dir::Left, p) => {
                    if !seen[idx(t, p - 1)] {
                        seen[idx(t, p - 1)] = true;
                        queue.push_back((t, p - 1));
                    }
                }
            }
        }
    }
    Ok(false)
}

/// A configuration of a forgetting 1-limited automaton. The tape content is
/// fully determined by the frozen-prefix length: `< Z^frozen w[frozen..] >`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlaConfiguration {
    pub state: usize,
    /// Head position: 0 is the left end-marker, `|w|+1` the right one.
    pub pos: usize,
    /// Number of leading input cells already rewritten to `Z`.
    pub frozen: usize,
}

/// F-1-LA acceptance by reachability over [`FlaConfiguration`]s. The frozen
/// counter advances exactly when a transition executes on the frontier cell.
pub fn accepts_fla(m: &ForgettingLa, w: &str) -> Result<bool> {
    let word = m.alphabet.encode(w)?;
    let len = word.len();
    let rend = len + 1;
    let idx = |c: &FlaConfiguration| (c.state * (rend + 1) + c.pos) * (len + 1) + c.frozen;
    let mut seen = vec![false; m.states * (rend + 1) * (len + 1)];
    let mut queue = VecDeque::new();
    let start = FlaConfiguration {
        state: m.initial,
        pos: 1.min(rend),
        frozen: 0,
    };
    seen[idx(&start)] = true;
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        let (sym, freezes) = if c.pos == 0 {
            (FlaSym::Lend, false)
        } else if c.pos == rend {
            (FlaSym::Rend, false)
        } else if c.pos <= c.frozen {
            (FlaSym::Z, false)
        } else {
            // frontier cell: first visit, still holds the input symbol
            (FlaSym::Input(word[c.pos - 1]), true)
        };
        for mv in m.moves(c.state, sym) {
            let frozen = if freezes { c.frozen + 1 } else { c.frozen };
            match (mv.dir, c.pos) {
                (Dir::Right, p) if p == rend => {
                    if m.finals.contains(&mv.to) {
                        return Ok(true);
                    }
                }
                (Dir::Right, p) => {
                    let next = FlaConfiguration {
                        state: mv.to,
                        pos: p + 1,
                        frozen,
                    };
                    if !seen[idx(&next)] {
                        seen[idx(&next)] = true;
                        queue.push_back(next);
                    }
                }
                (Dir::Left, 0) => {}
                (Dir::Left, p) => {
                    let next = FlaConfiguration {
                        state: mv.to,
                        pos: p - 1,
                        frozen,
                    };
                    if !seen[idx(&next)] {
                        seen[idx(&next)] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Definitional membership in `L_{n,l}`: the Meyer-Fischer language
/// intersected with the words of length divisible by `l`.
pub fn predicate_l(n: usize, ell: usize, w: &str) -> Result<bool> {
    let mf = families::build_mf(n)?;
    Ok(w.len().is_multiple_of(ell) && accepts_oneway(&mf, w)?)
}

/// Membership closure for `L_{n,l}`, for use as a fooling-set oracle.
pub fn l_oracle(n: usize, ell: usize) -> Result<impl Fn(&str) -> bool + Send + Sync> {
    let mf = families::build_mf(n)?;
    Ok(move |w: &str| w.len().is_multiple_of(ell) && accepts_oneway(&mf, w).unwrap_or(false))
}

/// Membership in `J_{n,l}`: number of `a`s divisible by `n`, length
/// divisible by `l`.
pub fn predicate_j(n: usize, ell: usize, w: &str) -> bool {
    let a_count = w.chars().filter(|&c| c == 'a').count();
    a_count % n == 0 && w.len().is_multiple_of(ell)
}

/// Membership in `H_{n,l}`: some prefix `u` ending in `a` with `|u|_a` a
/// multiple of `n` and `|u|` a multiple of `l` is followed by `b^n`.
pub fn predicate_h(n: usize, ell: usize, w: &str) -> bool {
    let chars: Vec<char> = w.chars().collect();
    let mut a_count = 0usize;
    for (i, &c) in chars.iter().enumerate() {
        if c == 'a' {
            a_count += 1;
            let u_len = i + 1;
            if a_count.is_multiple_of(n)
                && u_len % ell == 0
                && chars.len() >= u_len + n
                && chars[u_len..u_len + n].iter().all(|&x| x == 'b')
            {
                return true;
            }
        }
    }
    false
}

/// Membership in `E_n`: the prefix and the suffix of length `n` are equal.
pub fn predicate_e(n: usize, w: &str) -> bool {
    let chars: Vec<char> = w.chars().collect();
    chars.len() >= n && chars[..n] == chars[chars.len() - n..]
}
