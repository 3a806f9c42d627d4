//! Transition tables of frozen segments and the conversions from forgetting
//! 1-limited automata to one-way automata.
//!
//! For a machine with states `Q` and a segment length `m`, the table `tau_m`
//! is the relation containing `(p, q)` iff the machine, entering the frozen
//! zone `< Z^m` from the right in state `p`, eventually leaves it to the
//! right in state `q`. The sequence `tau_0, tau_1, ...` is ultimately
//! periodic; once the preperiod and period are known, the machine's behavior
//! on any frozen prefix is captured by finitely many tables, which yields
//! one-way simulations by pairing a table index with a machine state.

use std::collections::{HashMap, VecDeque};

use crate::model::{Dir, FlaSym, ForgettingLa, OneWayFa};
use crate::numtheory::landau_value;
use crate::{Error, Result};

/// Hard ceiling on the number of states a conversion may materialize.
const CONVERSION_CAP: usize = 5_000_000;

/// A binary relation on machine states, stored as one bitmask row per
/// source state. Limited to machines with at most 64 states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionTable {
    n: usize,
    rows: Vec<u64>,
}

impl TransitionTable {
    pub fn new(n: usize) -> Self {
        TransitionTable {
            n,
            rows: vec![0; n],
        }
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> bool {
        self.rows[p] & (1 << q) != 0
    }

    pub fn set(&mut self, p: usize, q: usize) {
        self.rows[p] |= 1 << q;
    }

    /// Bitmask of all `q` with `(p, q)` in the relation.
    pub fn row(&self, p: usize) -> u64 {
        self.rows[p]
    }

    /// Image of a set of states given as a bitmask.
    pub fn apply(&self, mask: u64) -> u64 {
        let mut out = 0;
        for p in iter_bits(mask) {
            out |= self.rows[p];
        }
        out
    }

    /// Number of pairs in the relation.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }
}

fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

fn check_size(m: &ForgettingLa) -> Result<()> {
    if m.states == 0 || m.states > 64 {
        return Err(Error::TooManyStates(m.states));
    }
    Ok(())
}

/// `tau_m` by direct reachability over (state, position) pairs — the
/// reference implementation, independent of [`extend_table`].
pub fn compute_table(m: &ForgettingLa, seg_len: usize) -> Result<TransitionTable> {
    check_size(m)?;
    let mut table = TransitionTable::new(m.states);
    for p in 0..m.states {
        // positions: 0 is the left end-marker, 1..=seg_len are frozen cells
        let mut seen = vec![false; m.states * (seg_len + 1)];
        let mut queue = VecDeque::new();
        let start = (p, seg_len);
        seen[p * (seg_len + 1) + seg_len] = true;
        queue.push_back(start);
        while let Some((s, pos)) = queue.pop_front() {
            let sym = if pos == 0 { FlaSym::Lend } else { FlaSym::Z };
            for mv in m.moves(s, sym) {
                match mv.dir {
                    Dir::Right if pos == seg_len => table.set(p, mv.to),
                    Dir::Right => {
                        if !seen[mv.to * (seg_len + 1) + pos + 1] {
                            seen[mv.to * (seg_len + 1) + pos + 1] = true;
                            queue.push_back((mv.to, pos + 1));
                        }
                    }
                    Dir::Left if pos == 0 => {} // rejected by validation
                    Dir::Left => {
                        if !seen[mv.to * (seg_len + 1) + pos - 1] {
                            seen[mv.to * (seg_len + 1) + pos - 1] = true;
                            queue.push_back((mv.to, pos - 1));
                        }
                    }
                }
            }
        }
    }
    Ok(table)
}

/// Exit states of a run sitting on the rightmost cell of a frozen segment
/// whose remainder to the left behaves like `tau` (one cell more than `tau`
/// covers). Left moves are resolved through `tau`; right moves exit.
fn z_closure(m: &ForgettingLa, tau: &TransitionTable, start: u64) -> u64 {
    let mut at_cell = start;
    let mut frontier = start;
    let mut exits = 0u64;
    while frontier != 0 {
        let mut new = 0u64;
        for s in iter_bits(frontier) {
            for mv in m.moves(s, FlaSym::Z) {
                match mv.dir {
                    Dir::Right => exits |= 1 << mv.to,
                    Dir::Left => new |= tau.row(mv.to),
                }
            }
        }
        frontier = new & !at_cell;
        at_cell |= new;
    }
    exits
}

/// `tau_{m+1}` from `tau_m`: entering the longer segment means acting on its
/// rightmost cell, with everything further left summarized by `tau_m`.
pub fn extend_table(m: &ForgettingLa, prev: &TransitionTable) -> Result<TransitionTable> {
    check_size(m)?;
    let mut table = TransitionTable::new(m.states);
    for p in 0..m.states {
        table.rows[p] = z_closure(m, prev, 1 << p);
    }
    Ok(table)
}

/// The first-visit relation: entering the frontier cell holding input
/// symbol `sym` in state `p` (with `tau` summarizing the frozen prefix),
/// which states can exit to the right of that cell.
pub fn entry_relation(m: &ForgettingLa, tau: &TransitionTable, sym: usize) -> TransitionTable {
    let mut table = TransitionTable::new(m.states);
    for p in 0..m.states {
        let mut exits = 0u64;
        let mut returned = 0u64;
        for mv in m.moves(p, FlaSym::Input(sym)) {
            match mv.dir {
                Dir::Right => exits |= 1 << mv.to,
                // the cell is frozen now; the run comes back to it reading Z
                Dir::Left => returned |= tau.row(mv.to),
            }
        }
        if returned != 0 {
            exits |= z_closure(m, tau, returned);
        }
        table.rows[p] = exits;
    }
    table
}

/// Whether the machine accepts from state `q` standing on the right
/// end-marker, with the whole (frozen) input summarized by `tau`.
pub fn accepts_from_rend(m: &ForgettingLa, tau: &TransitionTable, q: usize) -> bool {
    let mut at_rend = 1u64 << q;
    let mut frontier = at_rend;
    while frontier != 0 {
        let mut new = 0u64;
        for s in iter_bits(frontier) {
            for mv in m.moves(s, FlaSym::Rend) {
                match mv.dir {
                    Dir::Right => {
                        if m.finals.contains(&mv.to) {
                            return true;
                        }
                    }
                    Dir::Left => new |= tau.row(mv.to),
                }
            }
        }
        frontier = new & !at_rend;
        at_rend |= new;
    }
    false
}

/// The ultimately periodic table sequence: `tables` holds
/// `tau_0 .. tau_{lambda+rho-1}`, and `tau_m = tau_{lambda + (m - lambda) mod rho}`
/// for every `m >= lambda`.
#[derive(Debug, Clone)]
pub struct TableSequence {
    pub tables: Vec<TransitionTable>,
    pub lambda: usize,
    pub rho: usize,
}

impl TableSequence {
    /// Index into `tables` of `tau_m`.
    pub fn index_of(&self, m: usize) -> usize {
        if m < self.tables.len() {
            m
        } else {
            self.lambda + (m - self.lambda) % self.rho
        }
    }

    /// Index of `tau_{m+1}` given the index of `tau_m`.
    pub fn successor(&self, idx: usize) -> usize {
        if idx + 1 == self.tables.len() {
            self.lambda
        } else {
            idx + 1
        }
    }

    pub fn table(&self, m: usize) -> &TransitionTable {
        &self.tables[self.index_of(m)]
    }
}

/// Computes tables until the first repetition, giving the exact preperiod
/// and period. The iteration cap `5n^2 + F(n) + 2` follows from the proven
/// bounds; exceeding it indicates a bug.
pub fn table_sequence(m: &ForgettingLa) -> Result<TableSequence> {
    check_size(m)?;
    let n = m.states;
    let cap = 5 * n * n + landau_value(n)? + 2;
    let first = compute_table(m, 0)?;
    let mut seen: HashMap<TransitionTable, usize> = HashMap::new();
    seen.insert(first.clone(), 0);
    let mut tables = vec![first];
    loop {
        let next = extend_table(m, tables.last().unwrap())?;
        if let Some(&j) = seen.get(&next) {
            let rho = tables.len() - j;
            return Ok(TableSequence {
                tables,
                lambda: j,
                rho,
            });
        }
        if tables.len() >= cap {
            return Err(Error::PeriodCapExceeded(cap));
        }
        seen.insert(next.clone(), tables.len());
        tables.push(next);
    }
}

/// Keeps only the states reachable from the initial one, renumbered in
/// discovery order.
fn prune_reachable(m: &OneWayFa) -> OneWayFa {
    let k = m.alphabet.len();
    let mut index = vec![usize::MAX; m.states];
    let mut order = vec![m.initial];
    index[m.initial] = 0;
    let mut head = 0;
    while head < order.len() {
        let q = order[head];
        head += 1;
        for s in 0..k {
            for &t in &m.delta[q][s] {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                }
            }
        }
    }
    let mut out = OneWayFa::new(order.len(), m.alphabet.clone(), 0, m.deterministic);
    for (new_q, &q) in order.iter().enumerate() {
        for s in 0..k {
            for &t in &m.delta[q][s] {
                out.add(new_q, s, index[t]);
            }
        }
        if m.finals.contains(&q) {
            out.finals.insert(new_q);
        }
    }
    out
}

/// Equivalent NFA over (table index, exit state) pairs: the NFA state
/// `(i, q)` means the forgetting machine reaches the frontier cell after
/// `m` frozen cells (`i` indexing `tau_m`) for the first time in state `q`.
/// Unreachable pairs are pruned.
pub fn fla_to_nfa(m: &ForgettingLa) -> Result<OneWayFa> {
    let seq = table_sequence(m)?;
    let n = m.states;
    let len = seq.tables.len();
    let states = len
        .checked_mul(n)
        .filter(|&v| v <= CONVERSION_CAP)
        .ok_or(Error::TooManyStates(len.saturating_mul(n)))?;
    let k = m.alphabet.len();
    let idx = |i: usize, q: usize| i * n + q;
    let mut out = OneWayFa::new(states, m.alphabet.clone(), idx(0, m.initial), false);
    for i in 0..len {
        let next_i = seq.successor(i);
        for sym in 0..k {
            let rel = entry_relation(m, &seq.tables[i], sym);
            for q in 0..n {
                for t in iter_bits(rel.row(q)) {
                    out.add(idx(i, q), sym, idx(next_i, t));
                }
            }
        }
        for q in 0..n {
            if accepts_from_rend(m, &seq.tables[i], q) {
                out.finals.insert(idx(i, q));
            }
        }
    }
    Ok(prune_reachable(&out))
}

/// Equivalent complete DFA over (table index, set of exit states) pairs,
/// built lazily from the initial pair; the empty set becomes a sink.
pub fn fla_to_dfa(m: &ForgettingLa) -> Result<OneWayFa> {
    let seq = table_sequence(m)?;
    let n = m.states;
    let len = seq.tables.len();
    let k = m.alphabet.len();
    // per index and symbol: the first-visit relation; per index: acceptance
    let mut relations = Vec::with_capacity(len);
    let mut accepting_mask = Vec::with_capacity(len);
    for tau in &seq.tables {
        let rels: Vec<TransitionTable> = (0..k).map(|sym| entry_relation(m, tau, sym)).collect();
        relations.push(rels);
        let mut mask = 0u64;
        for q in 0..n {
            if accepts_from_rend(m, tau, q) {
                mask |= 1 << q;
            }
        }
        accepting_mask.push(mask);
    }

    // lazy subset construction; SINK marks edges into the (future) sink
    const SINK: usize = usize::MAX;
    let mut ids: HashMap<(usize, u64), usize> = HashMap::new();
    let mut order: Vec<(usize, u64)> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let start = (0usize, 1u64 << m.initial);
    ids.insert(start, 0);
    order.push(start);
    let mut head = 0;
    while head < order.len() {
        let (i, mask) = order[head];
        head += 1;
        let mut row = Vec::with_capacity(k);
        #[allow(clippy::needless_range_loop)]
        for sym in 0..k {
            let next_mask = relations[i][sym].apply(mask);
            let target = if next_mask == 0 {
                SINK
            } else {
                let key = (seq.successor(i), next_mask);
                *ids.entry(key).or_insert_with(|| {
                    order.push(key);
                    order.len() - 1
                })
            };
            row.push(target);
        }
        edges.push(row);
        if order.len() > CONVERSION_CAP {
            return Err(Error::TooManyStates(order.len()));
        }
    }
    let needs_sink = edges.iter().flatten().any(|&t| t == SINK);
    let sink_id = order.len();
    let states = order.len() + usize::from(needs_sink);
    let mut out = OneWayFa::new(states, m.alphabet.clone(), 0, true);
    for (q, row) in edges.iter().enumerate() {
        for (sym, &raw) in row.iter().enumerate() {
            out.add(q, sym, if raw == SINK { sink_id } else { raw });
        }
    }
    if needs_sink {
        for sym in 0..k {
            out.add(sink_id, sym, sink_id);
        }
    }
    for (id, &(i, mask)) in order.iter().enumerate() {
        if mask & accepting_mask[i] != 0 {
            out.finals.insert(id);
        }
    }
    Ok(out)
}

/// Complete DFA from a deterministic forgetting machine; the subset pairs
/// stay singletons, giving the tighter (index, state) construction.
pub fn dfla_to_dfa(m: &ForgettingLa) -> Result<OneWayFa> {
    if !m.deterministic {
        return Err(Error::NotDeterministic);
    }
    fla_to_dfa(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_h_dfla, build_j_dfla, build_lnl_fla};
    use crate::model::Alphabet;
    use crate::sim::accepts_fla;
    use crate::sim::accepts_oneway;
    use crate::words::all_up_to;

    #[test]
    fn tau_0_is_the_lend_step() {
        let m = build_j_dfla(2, 3).unwrap();
        let t0 = compute_table(&m, 0).unwrap();
        // only the traversal dispatch (0, LEND) -> 3 exists
        assert!(t0.get(0, 3));
        assert_eq!(t0.len(), 1);
    }

    #[test]
    fn extend_matches_direct_computation() {
        for m in [
            build_j_dfla(2, 3).unwrap(),
            build_lnl_fla(3, 2).unwrap(),
            build_h_dfla(2).unwrap(),
            build_h_dfla(3).unwrap(),
        ] {
            let mut tau = compute_table(&m, 0).unwrap();
            for seg in 1..=12 {
                tau = extend_table(&m, &tau).unwrap();
                assert_eq!(tau, compute_table(&m, seg).unwrap(), "segment {seg}");
            }
        }
    }

    #[test]
    fn period_bounds_hold_for_the_families() {
        for (m, det) in [
            (build_j_dfla(2, 3).unwrap(), true),
            (build_j_dfla(5, 6).unwrap(), true),
            (build_lnl_fla(3, 2).unwrap(), false),
            (build_h_dfla(3).unwrap(), true),
        ] {
            let n = m.states;
            let seq = table_sequence(&m).unwrap();
            assert!(seq.lambda <= landau_value(n).unwrap(), "lambda n={n}");
            assert!(seq.rho <= 5 * n * n + 1, "rho n={n}");
            if det {
                assert!(seq.rho <= n + 1, "deterministic rho n={n}");
            }
            // spot-check the index arithmetic
            for m_idx in 0..seq.tables.len() + 3 * seq.rho {
                let i = seq.index_of(m_idx);
                assert_eq!(
                    seq.tables[seq.successor(i)],
                    *seq.table(m_idx + 1),
                    "m={m_idx}"
                );
            }
        }
    }

    #[test]
    fn conversions_preserve_the_language() {
        for m in [
            build_j_dfla(2, 3).unwrap(),
            build_lnl_fla(3, 2).unwrap(),
            build_h_dfla(2).unwrap(),
        ] {
            let nfa = fla_to_nfa(&m).unwrap();
            let dfa = fla_to_dfa(&m).unwrap();
            assert!(dfa.is_complete());
            assert!(dfa.validate().is_empty());
            assert!(nfa.validate().is_empty());
            for w in all_up_to(&Alphabet::ab(), 9) {
                let want = accepts_fla(&m, &w).unwrap();
                assert_eq!(accepts_oneway(&nfa, &w).unwrap(), want, "nfa {w:?}");
                assert_eq!(accepts_oneway(&dfa, &w).unwrap(), want, "dfa {w:?}");
            }
        }
    }

    #[test]
    fn conversion_sizes_respect_the_bounds() {
        for m in [build_j_dfla(2, 3).unwrap(), build_j_dfla(5, 6).unwrap()] {
            let n = m.states;
            let f = landau_value(n).unwrap();
            let nfa = fla_to_nfa(&m).unwrap();
            assert!(nfa.states <= n * (5 * n * n + f) + 1, "nfa n={n}");
            let dfa = dfla_to_dfa(&m).unwrap();
            assert!(dfa.states <= n * (n + f) + 2, "dfa n={n}");
        }
        let m = build_lnl_fla(3, 2).unwrap();
        let n = m.states;
        let f = landau_value(n).unwrap();
        let dfa = fla_to_dfa(&m).unwrap();
        assert!(dfa.states <= ((1usize << n) - 1) * (5 * n * n + f) + 2);
    }

    #[test]
    fn oversized_machines_are_rejected() {
        let m = ForgettingLa::new(65, Alphabet::ab(), 0, true);
        assert!(matches!(table_sequence(&m), Err(Error::TooManyStates(65))));
        assert!(matches!(
            dfla_to_dfa(&ForgettingLa::new(3, Alphabet::ab(), 0, false)),
            Err(Error::NotDeterministic)
        ));
    }
}
