//! Standard one-way automata algorithms: subset construction, product,
//! partition-refinement minimization, reversal, exact equivalence, and
//! canonical isomorphism checking.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::model::OneWayFa;
use crate::{Error, Result};

/// Subset construction. The result is deterministic and complete (the empty
/// subset acts as a sink when reachable).
pub fn determinize(m: &OneWayFa) -> OneWayFa {
    let k = m.alphabet.len();
    let start: BTreeSet<usize> = [m.initial].into();
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
    let mut trans: Vec<Vec<usize>> = Vec::new();
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut next_unprocessed = 0;
    while next_unprocessed < subsets.len() {
        let current = subsets[next_unprocessed].clone();
        let mut row = Vec::with_capacity(k);
        for sym in 0..k {
            let mut succ = BTreeSet::new();
            for &q in &current {
                succ.extend(m.delta[q][sym].iter().copied());
            }
            let id = *index.entry(succ.clone()).or_insert_with(|| {
                subsets.push(succ);
                subsets.len() - 1
            });
            row.push(id);
        }
        trans.push(row);
        next_unprocessed += 1;
    }
    let mut out = OneWayFa::new(subsets.len(), m.alphabet.clone(), 0, true);
    for (q, row) in trans.iter().enumerate() {
        for (sym, &t) in row.iter().enumerate() {
            out.add(q, sym, t);
        }
    }
    for (id, subset) in subsets.iter().enumerate() {
        if subset.iter().any(|q| m.finals.contains(q)) {
            out.finals.insert(id);
        }
    }
    out
}

/// Full product construction for intersection: `n1 * n2` states before any
/// pruning, accepting `L(m1) ∩ L(m2)`.
pub fn product_intersect(m1: &OneWayFa, m2: &OneWayFa) -> Result<OneWayFa> {
    if m1.alphabet != m2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let k = m1.alphabet.len();
    let n2 = m2.states;
    let pair = |q1: usize, q2: usize| q1 * n2 + q2;
    let mut out = OneWayFa::new(
        m1.states * n2,
        m1.alphabet.clone(),
        pair(m1.initial, m2.initial),
        m1.deterministic && m2.deterministic,
    );
    for q1 in 0..m1.states {
        for q2 in 0..n2 {
            for sym in 0..k {
                for &t1 in &m1.delta[q1][sym] {
                    for &t2 in &m2.delta[q2][sym] {
                        out.add(pair(q1, q2), sym, pair(t1, t2));
                    }
                }
            }
        }
    }
    for &f1 in &m1.finals {
        for &f2 in &m2.finals {
            out.finals.insert(pair(f1, f2));
        }
    }
    Ok(out)
}

/// Restricts to reachable states and adds a sink if the DFA is partial.
fn reachable_complete(m: &OneWayFa) -> OneWayFa {
    let k = m.alphabet.len();
    let mut order = vec![m.initial];
    let mut seen = vec![false; m.states];
    seen[m.initial] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for sym in 0..k {
            for &t in &m.delta[q][sym] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        i += 1;
    }
    let needs_sink = order
        .iter()
        .any(|&q| (0..k).any(|s| m.delta[q][s].is_empty()));
    let mut relabel = vec![usize::MAX; m.states];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let n = order.len() + usize::from(needs_sink);
    let sink = order.len();
    let mut out = OneWayFa::new(n, m.alphabet.clone(), 0, true);
    for (new, &old) in order.iter().enumerate() {
        for sym in 0..k {
            match m.delta[old][sym].first() {
                Some(&t) => out.add(new, sym, relabel[t]),
                None => out.add(new, sym, sink),
            }
        }
        if m.finals.contains(&old) {
            out.finals.insert(new);
        }
    }
    if needs_sink {
        for sym in 0..k {
            out.add(sink, sym, sink);
        }
    }
    out
}

/// Renumbers states in BFS order from the initial state, visiting symbols in
/// alphabet order. For a minimal complete DFA this numbering is canonical.
fn canonical_renumber(m: &OneWayFa) -> OneWayFa {
    let k = m.alphabet.len();
    let mut order = vec![m.initial];
    let mut relabel = vec![usize::MAX; m.states];
    relabel[m.initial] = 0;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for sym in 0..k {
            for &t in &m.delta[q][sym] {
                if relabel[t] == usize::MAX {
                    relabel[t] = order.len();
                    order.push(t);
                }
            }
        }
        i += 1;
    }
    let mut out = OneWayFa::new(order.len(), m.alphabet.clone(), 0, m.deterministic);
    for (new, &old) in order.iter().enumerate() {
        for sym in 0..k {
            for &t in &m.delta[old][sym] {
                out.add(new, sym, relabel[t]);
            }
        }
        if m.finals.contains(&old) {
            out.finals.insert(new);
        }
    }
    out
}

/// Moore-style partition refinement. Input must be deterministic; it is
/// restricted to reachable states and completed on entry. The result is the
/// unique minimal complete DFA in canonical BFS numbering.
pub fn minimize(m: &OneWayFa) -> Result<OneWayFa> {
    if !m.deterministic {
        return Err(Error::NotDeterministic);
    }
    let m = reachable_complete(m);
    let k = m.alphabet.len();
    let n = m.states;
    let step = |q: usize, sym: usize| *m.delta[q][sym].first().expect("complete");

    let mut block: Vec<usize> = (0..n).map(|q| usize::from(m.finals.contains(&q))).collect();
    loop {
        // signature of a state: its block plus the blocks of its successors;
        // relabel by first encounter, stop at the fixpoint
        let mut sig_index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next_block = vec![0usize; n];
        for q in 0..n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(block[q]);
            for sym in 0..k {
                sig.push(block[step(q, sym)]);
            }
            let id = sig_index.len();
            next_block[q] = *sig_index.entry(sig).or_insert(id);
        }
        if next_block == block {
            break;
        }
        block = next_block;
    }
    let blocks = block.iter().copied().collect::<BTreeSet<_>>().len();
    let mut out = OneWayFa::new(blocks, m.alphabet.clone(), block[m.initial], true);
    for q in 0..n {
        for sym in 0..k {
            out.add(block[q], sym, block[step(q, sym)]);
        }
        if m.finals.contains(&q) {
            out.finals.insert(block[q]);
        }
    }
    Ok(canonical_renumber(&out))
}

/// NFA for the reversal: edges inverted, finals become the start (merged via
/// a fresh initial when there are several), the old initial becomes final.
pub fn reverse(m: &OneWayFa) -> OneWayFa {
    let k = m.alphabet.len();
    let mut inverted: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new(); k]; m.states];
    for q in 0..m.states {
        #[allow(clippy::needless_range_loop)]
        for sym in 0..k {
            for &t in &m.delta[q][sym] {
                inverted[t][sym].insert(q);
            }
        }
    }
    if m.finals.len() == 1 {
        let start = *m.finals.iter().next().unwrap();
        let mut out = OneWayFa::new(m.states, m.alphabet.clone(), start, false);
        out.delta = inverted;
        out.finals.insert(m.initial);
        out
    } else {
        let fresh = m.states;
        let mut out = OneWayFa::new(m.states + 1, m.alphabet.clone(), fresh, false);
        for (q, row) in inverted.iter().enumerate() {
            for (sym, set) in row.iter().enumerate() {
                for &t in set {
                    out.add(q, sym, t);
                }
            }
        }
        for &f in &m.finals {
            #[allow(clippy::needless_range_loop)]
            for sym in 0..k {
                for &t in inverted[f][sym].clone().iter() {
                    out.add(fresh, sym, t);
                }
            }
        }
        out.finals.insert(m.initial);
        if m.finals.contains(&m.initial) {
            out.finals.insert(fresh);
        }
        out
    }
}

/// True when both minimal complete DFAs are isomorphic respecting initial
/// state, finals, and labels; decided by canonical BFS renumbering.
pub fn isomorphic(m1: &OneWayFa, m2: &OneWayFa) -> Result<bool> {
    if !m1.deterministic || !m2.deterministic {
        return Err(Error::NotDeterministic);
    }
    if m1.alphabet != m2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let c1 = canonical_renumber(m1);
    let c2 = canonical_renumber(m2);
    Ok(c1.states == c2.states && c1.delta == c2.delta && c1.finals == c2.finals)
}

/// Exact language equivalence: minimize both after determinization and test
/// isomorphism; on failure, return a shortest distinguishing word found by
/// breadth-first search over the product of the two minimal DFAs.
pub fn equivalent(m1: &OneWayFa, m2: &OneWayFa) -> Result<(bool, Option<String>)> {
    if m1.alphabet != m2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let d1 = minimize(&determinize(m1))?;
    let d2 = minimize(&determinize(m2))?;
    if isomorphic(&d1, &d2)? {
        return Ok((true, None));
    }
    let k = d1.alphabet.len();
    let step = |m: &OneWayFa, q: usize, sym: usize| *m.delta[q][sym].first().expect("complete");
    let mut seen = vec![false; d1.states * d2.states];
    let mut queue = VecDeque::new();
    seen[d1.initial * d2.states + d2.initial] = true;
    queue.push_back((d1.initial, d2.initial, String::new()));
    while let Some((q1, q2, word)) = queue.pop_front() {
        if d1.finals.contains(&q1) != d2.finals.contains(&q2) {
            return Ok((false, Some(word)));
        }
        for sym in 0..k {
            let (t1, t2) = (step(&d1, q1, sym), step(&d2, q2, sym));
            if !seen[t1 * d2.states + t2] {
                seen[t1 * d2.states + t2] = true;
                let mut next = word.clone();
                next.push(d1.alphabet.symbol(sym));
                queue.push_back((t1, t2, next));
            }
        }
    }
    // minimal DFAs differ but no distinguishing word found: unreachable
    Ok((false, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Alphabet;
    use crate::sim::accepts_oneway;

    fn universal() -> OneWayFa {
        let mut m = OneWayFa::new(1, Alphabet::ab(), 0, true);
        m.add(0, 0, 0);
        m.add(0, 1, 0);
        m.finals.insert(0);
        m
    }

    fn empty_lang() -> OneWayFa {
        OneWayFa::new(1, Alphabet::ab(), 0, true)
    }

    #[test]
    fn minimize_collapses_duplicate_universal_states() {
        let mut m = OneWayFa::new(3, Alphabet::ab(), 0, true);
        for q in 0..3 {
            m.add(q, 0, (q + 1) % 3);
            m.add(q, 1, (q + 2) % 3);
            m.finals.insert(q);
        }
        let min = minimize(&m).unwrap();
        assert_eq!(min.states, 1);
    }

    #[test]
    fn equivalent_self_and_counterexample() {
        let u = universal();
        let (eq, _) = equivalent(&u, &u).unwrap();
        assert!(eq);
        let (eq, ce) = equivalent(&u, &empty_lang()).unwrap();
        assert!(!eq);
        assert_eq!(ce.as_deref(), Some(""));
    }

    #[test]
    fn determinize_preserves_membership() {
        let mf = crate::families::build_mf(3).unwrap();
        let det = determinize(&mf);
        for w in crate::words::all_up_to(&mf.alphabet, 8) {
            assert_eq!(
                accepts_oneway(&mf, &w).unwrap(),
                accepts_oneway(&det, &w).unwrap(),
                "{w:?}"
            );
        }
    }

    #[test]
    fn product_with_universal_is_identity_on_language() {
        let mf = crate::families::build_mf(3).unwrap();
        let p = product_intersect(&mf, &universal()).unwrap();
        assert_eq!(p.states, mf.states);
        let (eq, _) = equivalent(&p, &mf).unwrap();
        assert!(eq);
    }

    #[test]
    fn reverse_twice_preserves_language() {
        let mf = crate::families::build_mf(3).unwrap();
        let rr = reverse(&reverse(&mf));
        for w in crate::words::all_up_to(&mf.alphabet, 8) {
            assert_eq!(
                accepts_oneway(&mf, &w).unwrap(),
                accepts_oneway(&rr, &w).unwrap(),
                "{w:?}"
            );
        }
    }

    #[test]
    fn reverse_accepts_reversed_words() {
        let mf = crate::families::build_mf(3).unwrap();
        let rev = reverse(&mf);
        for w in crate::words::all_up_to(&mf.alphabet, 8) {
            let wr: String = w.chars().rev().collect();
            assert_eq!(
                accepts_oneway(&mf, &w).unwrap(),
                accepts_oneway(&rev, &wr).unwrap(),
                "{w:?}"
            );
        }
    }

    #[test]
    fn minimize_is_idempotent() {
        let mf = crate::families::build_mf(4).unwrap();
        let m1 = minimize(&determinize(&mf)).unwrap();
        let m2 = minimize(&m1).unwrap();
        assert!(isomorphic(&m1, &m2).unwrap());
        assert_eq!(m1.states, m2.states);
    }
}
