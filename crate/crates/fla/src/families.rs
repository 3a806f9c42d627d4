//! Builders for the witness language families and their machines.
//!
//! Everything here is over the binary alphabet `{a, b}`.
//!
//! - `L_{n,l}`: the Meyer-Fischer language intersected with `({a,b}^l)*`.
//! - `J_{n,l}`: words with `|w|_a` divisible by `n` and `|w|` divisible by `l`.
//! - `H_{n,l}`: words `u b^n v` where `u` ends in `a`, `|u|_a` is divisible by
//!   `n` and `|u|` by `l`.
//! - `E_n`: words whose length-`n` prefix equals their length-`n` suffix.
//!
//! The two-way and forgetting machines built here all follow the same sweep
//! discipline: a first left-to-right pass handles the `a`-structure, then a
//! chain of alternating sweeps checks divisibility of the input length by
//! each prime-power part of `l`.

use std::collections::BTreeSet;

use crate::classical::{determinize, minimize, reverse};
use crate::model::{Alphabet, Dir, ForgettingLa, OneWayFa, TwoSym, TwoWayFa};
use crate::numtheory::{crt_witness, factorize, landau};
use crate::{Error, Result};

const A: usize = 0;
const B: usize = 1;

/// Prime-power parts of `l` in increasing prime order, as sweep moduli.
pub fn prime_power_parts(ell: usize) -> Vec<usize> {
    factorize(ell as u64)
        .parts()
        .iter()
        .map(|&p| p as usize)
        .collect()
}

fn check_positive(name: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::BadParameter(format!("{name} must be positive")));
    }
    Ok(())
}

/// The Meyer-Fischer NFA `A_MF_n`: on `a` a cyclic successor, on `b` every
/// state except `q_0` may stay put or jump back to `q_0`. Initial and unique
/// final state `q_0`. Its minimal DFA has `2^n` states.
pub fn build_mf(n: usize) -> Result<OneWayFa> {
    if n < 2 {
        return Err(Error::BadParameter(
            "the Meyer-Fischer family needs n >= 2".into(),
        ));
    }
    let mut m = OneWayFa::new(n, Alphabet::ab(), 0, false);
    for i in 0..n {
        m.add(i, A, (i + 1) % n);
        if i >= 1 {
            m.add(i, B, i);
            m.add(i, B, 0);
        }
    }
    m.finals.insert(0);
    Ok(m)
}

/// NFA for `L_{n,l}`: the Meyer-Fischer automaton in product with a length
/// counter modulo `l`. Exactly `n * l` states.
pub fn build_lnl_nfa(n: usize, ell: usize) -> Result<OneWayFa> {
    check_positive("l", ell)?;
    let mf = build_mf(n)?;
    let mut m = OneWayFa::new(n * ell, Alphabet::ab(), 0, false);
    let idx = |q: usize, c: usize| q * ell + c;
    for q in 0..n {
        for c in 0..ell {
            for s in [A, B] {
                for &t in &mf.delta[q][s] {
                    m.add(idx(q, c), s, idx(t, (c + 1) % ell));
                }
            }
        }
    }
    m.finals.insert(idx(0, 0));
    Ok(m)
}

/// DFA for `L_{n,l}` built directly on (nonempty subset of MF states, length
/// mod `l`) pairs plus a single dead state: exactly `(2^n - 1) * l + 1`
/// states, matching the lower bound when `gcd(n, l) = 1`.
pub fn build_lnl_dfa(n: usize, ell: usize) -> Result<OneWayFa> {
    check_positive("l", ell)?;
    let mf = build_mf(n)?;
    let masks = (1usize << n) - 1;
    let states = masks
        .checked_mul(ell)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("subset automaton size"))?;
    if states > 2_000_000 {
        return Err(Error::TooManyStates(states));
    }
    let sink = masks * ell;
    let idx = |mask: usize, c: usize| (mask - 1) * ell + c;
    let mut m = OneWayFa::new(states, Alphabet::ab(), idx(1, 0), true);
    for mask in 1..=masks {
        for c in 0..ell {
            for s in [A, B] {
                let mut next = 0usize;
                for q in 0..n {
                    if mask & (1 << q) != 0 {
                        for &t in &mf.delta[q][s] {
                            next |= 1 << t;
                        }
                    }
                }
                let target = if next == 0 {
                    sink
                } else {
                    idx(next, (c + 1) % ell)
                };
                m.add(idx(mask, c), s, target);
            }
            if mask & 1 != 0 && c == 0 {
                m.finals.insert(idx(mask, c));
            }
        }
    }
    for s in [A, B] {
        m.add(sink, s, sink);
    }
    Ok(m)
}

/// DFA for `J_{n,l}`: the full two-counter product, `n * l` states, complete
/// and already minimal when `gcd(n, l) = 1`.
pub fn build_j_dfa(n: usize, ell: usize) -> Result<OneWayFa> {
    check_positive("n", n)?;
    check_positive("l", ell)?;
    let mut m = OneWayFa::new(n * ell, Alphabet::ab(), 0, true);
    let idx = |i: usize, c: usize| i * ell + c;
    for i in 0..n {
        for c in 0..ell {
            m.add(idx(i, c), A, idx((i + 1) % n, (c + 1) % ell));
            m.add(idx(i, c), B, idx(i, (c + 1) % ell));
        }
    }
    m.finals.insert(0);
    Ok(m)
}

/// Sweep plan shared by the two-way chain machines: blocks of fresh states,
/// one per prime-power part of `l`, alternating right-to-left and
/// left-to-right, entered from `dispatch` on the right end-marker. Adds
/// `sum(parts) + (r mod 2)` states starting at `next` and marks the final
/// state. Counts every tape cell, so it checks divisibility of `|w|`.
fn attach_twoway_chain(m: &mut TwoWayFa, dispatch: usize, parts: &[usize], mut next: usize) {
    let r = parts.len();
    if r == 0 {
        m.add(dispatch, TwoSym::Rend, dispatch, Dir::Right);
        m.finals.insert(dispatch);
        return;
    }
    let mut rend_dispatch = dispatch;
    let mut lend_dispatch = None;
    for (s, &p) in parts.iter().enumerate() {
        let block: Vec<usize> = (next..next + p).collect();
        next += p;
        let dir = if s % 2 == 0 { Dir::Left } else { Dir::Right };
        for j in 0..p {
            for sym in [A, B] {
                m.add(block[j], TwoSym::Input(sym), block[(j + 1) % p], dir);
            }
        }
        if s % 2 == 0 {
            m.add(rend_dispatch, TwoSym::Rend, block[0], Dir::Left);
            lend_dispatch = Some(block[0]);
        } else {
            m.add(
                lend_dispatch.take().unwrap(),
                TwoSym::Lend,
                block[0],
                Dir::Right,
            );
            rend_dispatch = block[0];
        }
    }
    if r % 2 == 1 {
        // the last sweep ended on the left end-marker: one traversal state
        let t = next;
        m.add(lend_dispatch.unwrap(), TwoSym::Lend, t, Dir::Right);
        for sym in [A, B] {
            m.add(t, TwoSym::Input(sym), t, Dir::Right);
        }
        m.add(t, TwoSym::Rend, t, Dir::Right);
        m.finals.insert(t);
    } else {
        m.add(rend_dispatch, TwoSym::Rend, rend_dispatch, Dir::Right);
        m.finals.insert(rend_dispatch);
    }
}

/// Sweeping 2NFA for `L_{n,l}` with `n + sum(parts) + (r mod 2)` states: a
/// Meyer-Fischer sweep, then the divisibility chain entered from `q_0`.
pub fn build_lnl_2nfa(n: usize, ell: usize) -> Result<TwoWayFa> {
    check_positive("l", ell)?;
    let mf = build_mf(n)?;
    let parts = prime_power_parts(ell);
    let states = n + parts.iter().sum::<usize>() + parts.len() % 2;
    let mut m = TwoWayFa::new(states, Alphabet::ab(), 0, false, true);
    for q in 0..n {
        for s in [A, B] {
            for &t in &mf.delta[q][s] {
                m.add(q, TwoSym::Input(s), t, Dir::Right);
            }
        }
    }
    attach_twoway_chain(&mut m, 0, &parts, n);
    Ok(m)
}

/// Sweeping 2DFA for `L_{n,l}`. The first sweep counts the length modulo the
/// first prime-power part; the second simulates a DFA for the reversal of
/// the Meyer-Fischer language (at most `2n` states, padded to exactly `2n`);
/// the remaining parts are checked by further sweeps. For `l >= 2` this gives
/// `2n + sum(parts) + (r mod 2)` states; for `l = 1` an initial traversal is
/// needed instead of the counting sweep, giving `2n + 2`.
pub fn build_lnl_2dfa(n: usize, ell: usize) -> Result<TwoWayFa> {
    check_positive("l", ell)?;
    let rev = minimize(&determinize(&reverse(&build_mf(n)?)))?;
    if rev.states > 2 * n {
        return Err(Error::InvalidMachine(format!(
            "reversal DFA has {} states, expected at most {}",
            rev.states,
            2 * n
        )));
    }
    let parts = prime_power_parts(ell);
    let r = parts.len();
    let (first, rest) = match parts.split_first() {
        Some((&first, rest)) => (first, rest),
        // l = 1: a plain traversal stands in for the counting sweep
        None => (1, &[][..]),
    };
    let o = if r == 0 { 1 } else { r % 2 };
    let states = first + 2 * n + rest.iter().sum::<usize>() + o;
    let mut m = TwoWayFa::new(states, Alphabet::ab(), 0, true, true);

    // sweep 1, left to right: length modulo `first` (or a traversal if l = 1)
    let block1: Vec<usize> = (0..first).collect();
    for j in 0..first {
        for s in [A, B] {
            m.add(
                block1[j],
                TwoSym::Input(s),
                block1[(j + 1) % first],
                Dir::Right,
            );
        }
    }

    // sweep 2, right to left: the reversal DFA, entered on success of sweep 1
    let rev_base = first;
    m.add(block1[0], TwoSym::Rend, rev_base + rev.initial, Dir::Left);
    for q in 0..rev.states {
        for s in [A, B] {
            for &t in &rev.delta[q][s] {
                m.add(rev_base + q, TwoSym::Input(s), rev_base + t, Dir::Left);
            }
        }
    }

    // remaining sweeps: parts 2..r, alternating, entered from the reversal
    // finals on the left end-marker
    let mut next = rev_base + 2 * n;
    let mut lend_dispatchers: Vec<usize> = rev.finals.iter().map(|&f| rev_base + f).collect();
    let mut rend_dispatch = None;
    for (k, &p) in rest.iter().enumerate() {
        let s = k + 2; // sweep index within the chain; even sweeps go right
        let block: Vec<usize> = (next..next + p).collect();
        next += p;
        let dir = if s % 2 == 0 { Dir::Right } else { Dir::Left };
        for j in 0..p {
            for sym in [A, B] {
                m.add(block[j], TwoSym::Input(sym), block[(j + 1) % p], dir);
            }
        }
        if s % 2 == 0 {
            for d in lend_dispatchers.drain(..) {
                m.add(d, TwoSym::Lend, block[0], Dir::Right);
            }
            rend_dispatch = Some(block[0]);
        } else {
            m.add(
                rend_dispatch.take().unwrap(),
                TwoSym::Rend,
                block[0],
                Dir::Left,
            );
            lend_dispatchers = vec![block[0]];
        }
    }

    if o == 1 {
        // the last sweep ended on the left end-marker
        let t = next;
        for d in lend_dispatchers.drain(..) {
            m.add(d, TwoSym::Lend, t, Dir::Right);
        }
        for sym in [A, B] {
            m.add(t, TwoSym::Input(sym), t, Dir::Right);
        }
        m.add(t, TwoSym::Rend, t, Dir::Right);
        m.finals.insert(t);
    } else {
        let d = rend_dispatch.unwrap();
        m.add(d, TwoSym::Rend, d, Dir::Right);
        m.finals.insert(d);
    }
    Ok(m)
}

/// Sweeping 2DFA for `J_{n,l}` with `n + sum(parts) + (r mod 2)` states: an
/// `a`-counter sweep, then the divisibility chain.
pub fn build_j_2dfa(n: usize, ell: usize) -> Result<TwoWayFa> {
    check_positive("n", n)?;
    check_positive("l", ell)?;
    let parts = prime_power_parts(ell);
    let states = n + parts.iter().sum::<usize>() + parts.len() % 2;
    let mut m = TwoWayFa::new(states, Alphabet::ab(), 0, true, true);
    for c in 0..n {
        m.add(c, TwoSym::Input(A), (c + 1) % n, Dir::Right);
        m.add(c, TwoSym::Input(B), c, Dir::Right);
    }
    attach_twoway_chain(&mut m, 0, &parts, n);
    Ok(m)
}

/// State budget of the forgetting chain machines for `L_{n,l}` and
/// `J_{n,l}`: the right-to-left sweeps reuse first-sweep states, each
/// left-to-right sweep needs one fresh state (its success state doubles as
/// the accepting dispatch and must be unreachable during the first sweep),
/// and an odd number of sweeps needs one fresh traversal state.
pub fn fla_state_count(n: usize, parts: &[usize]) -> usize {
    let r = parts.len();
    if r == 0 {
        n
    } else {
        let sum: usize = parts.iter().sum();
        n.max(sum - r / 2) + r.div_ceil(2)
    }
}

/// Divisibility chain over the frozen tape, shared by the forgetting
/// machines for `L` and `J`. Low state indices (from 0) are reused for
/// sweep counters; only the left-to-right success states and the final
/// traversal state take fresh indices at `fresh_start` and up, because a
/// state with a right move on the right end-marker into a final state must
/// not be reachable when the head first arrives there.
fn attach_fla_chain(m: &mut ForgettingLa, dispatch: usize, parts: &[usize], fresh_start: usize) {
    let r = parts.len();
    if r == 0 {
        m.add_rend(dispatch, dispatch, Dir::Right);
        m.finals.insert(dispatch);
        return;
    }
    let mut low_next = 0usize;
    let mut fresh_next = fresh_start;
    let mut rend_dispatch = dispatch;
    let mut lend_dispatch = None;
    for (s, &p) in parts.iter().enumerate() {
        if s % 2 == 0 {
            // right-to-left sweep on shared low states
            let members: Vec<usize> = (low_next..low_next + p).collect();
            low_next += p;
            m.add_rend(rend_dispatch, members[0], Dir::Left);
            for j in 0..p {
                m.add_z(members[j], members[(j + 1) % p], Dir::Left);
            }
            lend_dispatch = Some(members[0]);
        } else {
            // left-to-right sweep: fresh success state plus shared members
            let succ = fresh_next;
            fresh_next += 1;
            let mut cycle = vec![succ];
            cycle.extend(low_next..low_next + p - 1);
            low_next += p - 1;
            for j in 0..p {
                m.add_z(cycle[j], cycle[(j + 1) % p], Dir::Right);
            }
            m.add_lend(lend_dispatch.take().unwrap(), succ);
            rend_dispatch = succ;
        }
    }
    if r % 2 == 1 {
        let t = fresh_next;
        m.add_lend(lend_dispatch.unwrap(), t);
        m.add_z(t, t, Dir::Right);
        m.add_rend(t, t, Dir::Right);
        m.finals.insert(t);
    } else {
        m.add_rend(rend_dispatch, rend_dispatch, Dir::Right);
        m.finals.insert(rend_dispatch);
    }
}

/// F-1-LA for `L_{n,l}`: a Meyer-Fischer sweep freezing the tape, then the
/// divisibility chain. Uses [`fla_state_count`] states, at most `n + 1` when
/// `l` is a maximal prime-power product for weight `n`.
pub fn build_lnl_fla(n: usize, ell: usize) -> Result<ForgettingLa> {
    check_positive("l", ell)?;
    let mf = build_mf(n)?;
    let parts = prime_power_parts(ell);
    let states = fla_state_count(n, &parts);
    let fresh_start = states - parts.len().div_ceil(2).min(states);
    let mut m = ForgettingLa::new(states, Alphabet::ab(), 0, false);
    for q in 0..n {
        for s in [A, B] {
            for &t in &mf.delta[q][s] {
                m.add_input(q, s, t, Dir::Right);
            }
        }
    }
    attach_fla_chain(&mut m, 0, &parts, fresh_start);
    Ok(m)
}

/// Deterministic F-1-LA for `J_{n,l}`: an `a`-counter sweep, then the
/// divisibility chain. Uses [`fla_state_count`] states.
pub fn build_j_dfla(n: usize, ell: usize) -> Result<ForgettingLa> {
    check_positive("n", n)?;
    check_positive("l", ell)?;
    let parts = prime_power_parts(ell);
    let states = fla_state_count(n, &parts);
    let fresh_start = states - parts.len().div_ceil(2).min(states);
    let mut m = ForgettingLa::new(states, Alphabet::ab(), 0, true);
    for c in 0..n {
        m.add_input(c, A, (c + 1) % n, Dir::Right);
        m.add_input(c, B, c, Dir::Right);
    }
    attach_fla_chain(&mut m, 0, &parts, fresh_start);
    Ok(m)
}

/// 2DFA for `E_n` with exactly `9n` states. Phase `i` (for `i = 1..n`) reads
/// prefix cell `i`, walks back to the left end-marker counting the distance
/// to recover `i`, crosses to the right end-marker, locates the suffix cell
/// at distance `n - i + 1`, compares, and returns to the right end-marker
/// counting again to recover `i`.
pub fn build_en_2dfa(n: usize) -> Result<TwoWayFa> {
    check_positive("n", n)?;
    // index layout within the 9n states
    let seek = |d: usize| d - 1; // d in 1..=n
    let back = |s: usize, c: usize| n + s * n + c; // c in 0..n
    let cross = |s: usize, i: usize| 3 * n + s * n + (i - 1); // i in 1..=n
    let seekr = |s: usize, d: usize| 5 * n + s * n + (d - 1); // d in 1..=n
    let backr = |c: usize| 7 * n + c; // c in 0..n
    let crossl = |j: usize| 8 * n + (j - 2); // j in 2..=n
    let acc = 9 * n - 1;
    let mut m = TwoWayFa::new(9 * n, Alphabet::ab(), seek(1), true, false);
    for s in [A, B] {
        for d in 2..=n {
            m.add(seek(d), TwoSym::Input(s), seek(d - 1), Dir::Right);
        }
        // the target prefix cell: remember its symbol and walk back
        m.add(seek(1), TwoSym::Input(s), back(s, 1 % n), Dir::Left);
        for c in 0..n {
            let t = if c == 0 { n } else { c };
            m.add(
                back(s, c),
                TwoSym::Input(A),
                back(s, (c + 1) % n),
                Dir::Left,
            );
            m.add(
                back(s, c),
                TwoSym::Input(B),
                back(s, (c + 1) % n),
                Dir::Left,
            );
            m.add(back(s, c), TwoSym::Lend, cross(s, t), Dir::Right);
        }
        for i in 1..=n {
            m.add(cross(s, i), TwoSym::Input(A), cross(s, i), Dir::Right);
            m.add(cross(s, i), TwoSym::Input(B), cross(s, i), Dir::Right);
            m.add(cross(s, i), TwoSym::Rend, seekr(s, n - i + 1), Dir::Left);
        }
        for d in 2..=n {
            m.add(seekr(s, d), TwoSym::Input(A), seekr(s, d - 1), Dir::Left);
            m.add(seekr(s, d), TwoSym::Input(B), seekr(s, d - 1), Dir::Left);
        }
        // the suffix cell must carry the remembered symbol
        m.add(seekr(s, 1), TwoSym::Input(s), backr(0), Dir::Right);
    }
    for c in 0..n {
        m.add(backr(c), TwoSym::Input(A), backr((c + 1) % n), Dir::Right);
        m.add(backr(c), TwoSym::Input(B), backr((c + 1) % n), Dir::Right);
    }
    // at the right end-marker the count identifies the finished phase
    m.add(backr(0), TwoSym::Rend, acc, Dir::Right);
    for c in 1..n {
        m.add(backr(c), TwoSym::Rend, crossl(n - c + 1), Dir::Left);
    }
    for j in 2..=n {
        m.add(crossl(j), TwoSym::Input(A), crossl(j), Dir::Left);
        m.add(crossl(j), TwoSym::Input(B), crossl(j), Dir::Left);
        m.add(crossl(j), TwoSym::Lend, seek(j), Dir::Right);
    }
    m.finals.insert(acc);
    Ok(m)
}

/// Deterministic F-1-LA for `H_{n,F(n)}` with at most `5n` states.
///
/// The main loop counts `a`s modulo `n`; every `n`-th `a` ends a candidate
/// prefix `u`, whose length is then checked against each prime-power part of
/// `F(n)` by sweeps over the frozen segment. Every left-to-right sweep
/// consumes one unread cell, which must be a `b` of the following `b`-run;
/// the sweep targets account for those extra frozen cells. On success the
/// remaining `b`s are counted down and the machine commits to accepting.
pub fn build_h_dfla(n: usize) -> Result<ForgettingLa> {
    check_positive("n", n)?;
    let (ell, dec) = landau(n)?;
    let ell = usize::try_from(ell).map_err(|_| Error::Overflow("landau"))?;
    let parts: Vec<usize> = dec.parts().iter().map(|&p| p as usize).collect();
    let r = parts.len();
    let sum: usize = parts.iter().sum();
    debug_assert!(ell == 1 || sum <= n);
    let needed = n - r / 2; // b-run cells not consumed by sweeps

    // index layout
    let c_state = |c: usize| c; // a-counter, 0..n
    let block_base: Vec<usize> = parts
        .iter()
        .scan(n, |acc, &p| {
            let base = *acc;
            *acc += p;
            Some(base)
        })
        .collect();
    let mut next = n + sum;
    let x_state = if r % 2 == 1 {
        let x = next;
        next += 1;
        Some(x)
    } else {
        None
    };
    let resume = if r >= 1 {
        let s = next;
        next += 1;
        Some(s)
    } else {
        None
    };
    let needb = |k: usize| next + k - 1; // k in 1..=needed
    let acc_state = next + needed;
    let states = acc_state + 1;
    debug_assert!(states <= 5 * n, "H machine for n={n} has {states} states");

    let mut m = ForgettingLa::new(states, Alphabet::ab(), c_state(0), true);

    // a candidate ends here: enter the first sweep (counting this cell as
    // one) or, if there is nothing to check, start the b-run count
    let candidate = if r == 0 {
        (needb(n), Dir::Right)
    } else {
        (block_base[0] + 1 % parts[0], Dir::Left)
    };
    // an `a` read while off the main loop restarts the count at one; for
    // n = 1 that very cell is already a new candidate
    let abort_a = if n == 1 {
        candidate
    } else {
        (c_state(1), Dir::Right)
    };

    for c in 0..n {
        if c + 1 == n {
            m.add_input(c, A, candidate.0, candidate.1);
        } else {
            m.add_input(c, A, c_state(c + 1), Dir::Right);
        }
        m.add_input(c, B, c_state(c), Dir::Right);
    }

    for (s, &p) in parts.iter().enumerate() {
        let sweep = s + 1; // 1-based; odd sweeps go right to left
        let block: Vec<usize> = (block_base[s]..block_base[s] + p).collect();
        let target = (sweep - 1) / 2 % p; // extra cells frozen before this sweep
        if sweep % 2 == 1 {
            #[allow(clippy::needless_range_loop)]
            for j in 0..p {
                m.add_z(block[j], block[(j + 1) % p], Dir::Left);
            }
            #[allow(clippy::needless_range_loop)]
            for j in 0..p {
                if j == target {
                    let to = if sweep < r {
                        block_base[s + 1]
                    } else {
                        x_state.unwrap()
                    };
                    m.add_lend(block[j], to);
                } else {
                    m.add_lend(block[j], resume.unwrap());
                }
            }
        } else {
            #[allow(clippy::needless_range_loop)]
            for j in 0..p {
                m.add_z(block[j], block[(j + 1) % p], Dir::Right);
            }
            #[allow(clippy::needless_range_loop)]
            for j in 0..p {
                m.add_input(block[j], A, abort_a.0, abort_a.1);
                if j == target {
                    let (to, dir) = if sweep < r {
                        (block_base[s + 1] + 1 % parts[s + 1], Dir::Left)
                    } else if needed == 1 {
                        (acc_state, Dir::Right)
                    } else {
                        (needb(needed - 1), Dir::Right)
                    };
                    m.add_input(block[j], B, to, dir);
                } else {
                    m.add_input(block[j], B, c_state(0), Dir::Right);
                }
            }
        }
    }

    if let Some(x) = x_state {
        m.add_z(x, x, Dir::Right);
        m.add_input(x, A, abort_a.0, abort_a.1);
        let to = if needed == 1 {
            acc_state
        } else {
            needb(needed - 1)
        };
        m.add_input(x, B, to, Dir::Right);
    }
    if let Some(s) = resume {
        m.add_z(s, s, Dir::Right);
        m.add_input(s, A, abort_a.0, abort_a.1);
        m.add_input(s, B, c_state(0), Dir::Right);
    }
    for k in 1..=needed {
        m.add_input(needb(k), A, abort_a.0, abort_a.1);
        let to = if k == 1 { acc_state } else { needb(k - 1) };
        m.add_input(needb(k), B, to, Dir::Right);
    }
    m.add_input(acc_state, A, acc_state, Dir::Right);
    m.add_input(acc_state, B, acc_state, Dir::Right);
    m.add_rend(acc_state, acc_state, Dir::Right);
    m.finals.insert(acc_state);
    Ok(m)
}

/// `l = F(n)` and the machine for `H_{n,F(n)}`, bundled for the harness.
pub fn build_h_family(n: usize) -> Result<(ForgettingLa, usize)> {
    let (ell, _) = landau(n)?;
    let ell = usize::try_from(ell).map_err(|_| Error::Overflow("landau"))?;
    Ok((build_h_dfla(n)?, ell))
}

fn check_subset(n: usize, s: &BTreeSet<usize>) -> Result<()> {
    if let Some(&q) = s.iter().next_back() {
        if q >= n {
            return Err(Error::BadParameter(format!("state q_{q} outside Q_{n}")));
        }
    }
    Ok(())
}

/// The string `w_S` with `delta(q_0, w_S) = S` in the Meyer-Fischer
/// automaton: `b` for the empty set, `a^i` for a singleton `{q_i}`, and
/// otherwise descending `a`-runs separated by single `b`s.
pub fn witness_w_s(n: usize, s: &BTreeSet<usize>) -> Result<String> {
    check_subset(n, s)?;
    let e: Vec<usize> = s.iter().copied().collect();
    match e.len() {
        0 => Ok("b".into()),
        1 => Ok("a".repeat(e[0])),
        k => {
            let mut w = String::new();
            for t in (1..k).rev() {
                w.push_str(&"a".repeat(e[t] - e[t - 1]));
                w.push('b');
            }
            w.push_str(&"a".repeat(e[0]));
            Ok(w)
        }
    }
}

/// The padded string `w_{S,j}`: still reaches exactly `S`, but has length
/// congruent to `j` modulo `l`. Singletons use the CRT witness; larger sets
/// replace the rightmost `b` of `w_S` by a block `b^(H*l - k - e_k + 2 + j)`
/// where `H` is the least integer with `H*l > 2n`. Requires `gcd(n, l) = 1`.
pub fn witness_w_sj(n: usize, ell: usize, s: &BTreeSet<usize>, j: usize) -> Result<String> {
    check_subset(n, s)?;
    check_positive("l", ell)?;
    if s.is_empty() {
        return Err(Error::BadParameter(
            "w_{S,j} is defined for nonempty S only".into(),
        ));
    }
    if j >= ell {
        return Err(Error::BadParameter(format!(
            "residue {j} must be below l = {ell}"
        )));
    }
    let e: Vec<usize> = s.iter().copied().collect();
    let k = e.len();
    if k == 1 {
        let x = crt_witness(e[0] as u64, j as u64, n as u64, ell as u64)?;
        return Ok("a".repeat(x as usize));
    }
    let h = 2 * n / ell + 1; // least H with H*l > 2n
    let run = h * ell - k - e[k - 1] + 2 + j;
    let mut w = String::new();
    for t in (2..k).rev() {
        w.push_str(&"a".repeat(e[t] - e[t - 1]));
        w.push('b');
    }
    w.push_str(&"a".repeat(e[1] - e[0]));
    w.push_str(&"b".repeat(run));
    w.push_str(&"a".repeat(e[0]));
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::landau_value;
    use crate::sim::{
        accepts_fla, accepts_oneway, accepts_twoway, predicate_e, predicate_h, predicate_j,
        predicate_l,
    };
    use crate::words::all_up_to;

    fn assert_valid<T>(name: &str, violations: Vec<String>, m: T) -> T {
        assert!(violations.is_empty(), "{name}: {violations:?}");
        m
    }

    fn mf_reach(mf: &OneWayFa, w: &str) -> BTreeSet<usize> {
        let mut cur = BTreeSet::from([mf.initial]);
        for sym in mf.alphabet.encode(w).unwrap() {
            cur = cur
                .iter()
                .flat_map(|&q| mf.delta[q][sym].iter().copied())
                .collect();
        }
        cur
    }

    #[test]
    fn builders_produce_valid_machines() {
        for (n, ell) in [(2, 2), (3, 2), (2, 6), (5, 6), (2, 1), (3, 1)] {
            assert_valid("mf", build_mf(n).unwrap().validate(), ());
            assert_valid("lnl_nfa", build_lnl_nfa(n, ell).unwrap().validate(), ());
            assert_valid("lnl_dfa", build_lnl_dfa(n, ell).unwrap().validate(), ());
            assert_valid("lnl_2nfa", build_lnl_2nfa(n, ell).unwrap().validate(), ());
            assert_valid("lnl_2dfa", build_lnl_2dfa(n, ell).unwrap().validate(), ());
            assert_valid("lnl_fla", build_lnl_fla(n, ell).unwrap().validate(), ());
            assert_valid("j_dfa", build_j_dfa(n, ell).unwrap().validate(), ());
            assert_valid("j_2dfa", build_j_2dfa(n, ell).unwrap().validate(), ());
            assert_valid("j_dfla", build_j_dfla(n, ell).unwrap().validate(), ());
        }
        for n in 1..=5 {
            assert_valid("en_2dfa", build_en_2dfa(n).unwrap().validate(), ());
            assert_valid("h_dfla", build_h_dfla(n).unwrap().validate(), ());
        }
    }

    #[test]
    fn exact_state_counts() {
        assert_eq!(build_lnl_dfa(3, 2).unwrap().states, 15);
        assert_eq!(build_lnl_dfa(5, 6).unwrap().states, 187);
        assert_eq!(build_lnl_nfa(3, 2).unwrap().states, 6);
        assert_eq!(build_lnl_2nfa(3, 2).unwrap().states, 6);
        assert_eq!(build_lnl_2nfa(2, 6).unwrap().states, 7);
        assert_eq!(build_lnl_2dfa(3, 2).unwrap().states, 9);
        assert_eq!(build_lnl_fla(5, 6).unwrap().states, 6);
        assert_eq!(build_lnl_fla(3, 2).unwrap().states, 4);
        assert_eq!(build_j_dfa(5, 6).unwrap().states, 30);
        assert_eq!(build_j_2dfa(5, 6).unwrap().states, 10);
        assert_eq!(build_j_dfla(2, 3).unwrap().states, 4);
        assert_eq!(build_j_dfla(5, 6).unwrap().states, 6);
        for n in 1..=6 {
            assert_eq!(build_en_2dfa(n).unwrap().states, 9 * n);
        }
        assert_eq!(build_h_dfla(2).unwrap().states, 9);
        for n in 1..=8 {
            assert!(build_h_dfla(n).unwrap().states <= 5 * n, "n={n}");
        }
    }

    #[test]
    fn fla_counts_meet_the_target_bound() {
        // when l = F(n) has at most two prime-power parts the forgetting
        // machines stay within n + 1 states; each further part past the
        // second costs at most one extra state
        for n in [5usize, 7, 11, 13] {
            let ell = landau_value(n).unwrap();
            let parts = prime_power_parts(ell);
            let slack = 1 + parts.len().saturating_sub(2).div_ceil(2);
            let l = build_lnl_fla(n, ell).unwrap().states;
            let j = build_j_dfla(n, ell).unwrap().states;
            assert_eq!(l, fla_state_count(n, &parts), "L n={n}");
            assert_eq!(j, fla_state_count(n, &parts), "J n={n}");
            assert!(l <= n + slack, "L n={n}: {l} > {} + {slack}", n);
            if parts.len() <= 2 {
                assert!(l <= n + 1, "L n={n}");
                assert!(j <= n + 1, "J n={n}");
            }
        }
    }

    #[test]
    fn l_machines_agree_with_the_definition() {
        for (n, ell, max_len) in [(2, 2, 7), (3, 2, 7), (2, 3, 7), (2, 1, 5)] {
            let nfa = build_lnl_nfa(n, ell).unwrap();
            let dfa = build_lnl_dfa(n, ell).unwrap();
            let two_n = build_lnl_2nfa(n, ell).unwrap();
            let two_d = build_lnl_2dfa(n, ell).unwrap();
            let fla = build_lnl_fla(n, ell).unwrap();
            for w in all_up_to(&Alphabet::ab(), max_len) {
                let want = predicate_l(n, ell, &w).unwrap();
                assert_eq!(
                    accepts_oneway(&nfa, &w).unwrap(),
                    want,
                    "nfa {n},{ell} {w:?}"
                );
                assert_eq!(
                    accepts_oneway(&dfa, &w).unwrap(),
                    want,
                    "dfa {n},{ell} {w:?}"
                );
                assert_eq!(
                    accepts_twoway(&two_n, &w).unwrap(),
                    want,
                    "2nfa {n},{ell} {w:?}"
                );
                assert_eq!(
                    accepts_twoway(&two_d, &w).unwrap(),
                    want,
                    "2dfa {n},{ell} {w:?}"
                );
                assert_eq!(accepts_fla(&fla, &w).unwrap(), want, "fla {n},{ell} {w:?}");
            }
        }
    }

    #[test]
    fn j_machines_agree_with_the_definition() {
        for (n, ell, max_len) in [(2, 3, 8), (3, 2, 8), (5, 6, 9), (2, 1, 5), (1, 2, 5)] {
            let dfa = build_j_dfa(n, ell).unwrap();
            let two_d = build_j_2dfa(n, ell).unwrap();
            let dfla = build_j_dfla(n, ell).unwrap();
            for w in all_up_to(&Alphabet::ab(), max_len) {
                let want = predicate_j(n, ell, &w);
                assert_eq!(
                    accepts_oneway(&dfa, &w).unwrap(),
                    want,
                    "dfa {n},{ell} {w:?}"
                );
                assert_eq!(
                    accepts_twoway(&two_d, &w).unwrap(),
                    want,
                    "2dfa {n},{ell} {w:?}"
                );
                assert_eq!(
                    accepts_fla(&dfla, &w).unwrap(),
                    want,
                    "dfla {n},{ell} {w:?}"
                );
            }
        }
    }

    #[test]
    fn e_machine_agrees_with_the_definition() {
        for n in 1..=3 {
            let m = build_en_2dfa(n).unwrap();
            for w in all_up_to(&Alphabet::ab(), 7) {
                assert_eq!(
                    accepts_twoway(&m, &w).unwrap(),
                    predicate_e(n, &w),
                    "n={n} {w:?}"
                );
            }
        }
    }

    #[test]
    fn h_machine_agrees_with_the_definition() {
        for n in 1..=3 {
            let (m, ell) = build_h_family(n).unwrap();
            for w in all_up_to(&Alphabet::ab(), 9) {
                assert_eq!(
                    accepts_fla(&m, &w).unwrap(),
                    predicate_h(n, ell, &w),
                    "n={n} l={ell} {w:?}"
                );
            }
        }
    }

    #[test]
    fn witness_w_s_reaches_exactly_s() {
        assert_eq!(witness_w_s(3, &BTreeSet::from([0, 2])).unwrap(), "aab");
        let mf = build_mf(3).unwrap();
        for mask in 0usize..8 {
            let s: BTreeSet<usize> = (0..3).filter(|q| mask & (1 << q) != 0).collect();
            let w = witness_w_s(3, &s).unwrap();
            assert_eq!(mf_reach(&mf, &w), s, "mask {mask} word {w:?}");
        }
    }

    #[test]
    fn witness_w_sj_reaches_s_with_the_right_length() {
        for (n, ell) in [(3usize, 2usize), (2, 3), (5, 6)] {
            let mf = build_mf(n).unwrap();
            for mask in 1usize..1 << n {
                let s: BTreeSet<usize> = (0..n).filter(|q| mask & (1 << q) != 0).collect();
                for j in 0..ell {
                    let w = witness_w_sj(n, ell, &s, j).unwrap();
                    assert_eq!(mf_reach(&mf, &w), s, "n={n} l={ell} mask={mask} j={j}");
                    assert_eq!(w.len() % ell, j, "n={n} l={ell} mask={mask} j={j} w={w:?}");
                }
            }
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(build_mf(1).is_err());
        assert!(build_lnl_nfa(3, 0).is_err());
        assert!(build_j_dfa(0, 2).is_err());
        assert!(witness_w_s(3, &BTreeSet::from([5])).is_err());
        assert!(witness_w_sj(3, 2, &BTreeSet::new(), 0).is_err());
        assert!(witness_w_sj(3, 2, &BTreeSet::from([0]), 2).is_err());
        assert!(witness_w_sj(4, 6, &BTreeSet::from([0]), 1).is_err());
    }
}
