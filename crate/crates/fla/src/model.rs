//! Machine types and well-formedness validation.
//!
//! All machines use 0-based integer states. The three reserved symbols are
//! spelled `Z` (the forgetting symbol), `<` (left end-marker) and `>` (right
//! end-marker); they are forbidden in input alphabets.
//!
//! Acceptance, for two-way machines and F-1-LAs, is by the *pass move*: a
//! right move executed on the right end-marker leaves the tape and accepts
//! iff the state it enters is final. There is no cell beyond the right
//! end-marker; the pass move is atomic.

use std::collections::BTreeSet;

use crate::{Error, Result};

pub const Z_CHAR: char = 'Z';
pub const LEND_CHAR: char = '<';
pub const REND_CHAR: char = '>';

fn reserved(c: char) -> bool {
    c == Z_CHAR || c == LEND_CHAR || c == REND_CHAR
}

/// Input alphabet: an ordered list of distinct printable characters, none of
/// which is one of the reserved symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::BadAlphabet("alphabet must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for &c in &symbols {
            if reserved(c) {
                return Err(Error::BadAlphabet(format!("{c:?} is reserved")));
            }
            if !c.is_ascii_graphic() {
                return Err(Error::BadAlphabet(format!("{c:?} is not printable")));
            }
            if !seen.insert(c) {
                return Err(Error::BadAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The binary alphabet `{a, b}` used by all witness families.
    pub fn ab() -> Self {
        Alphabet {
            symbols: vec!['a', 'b'],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty alphabets
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn symbol(&self, idx: usize) -> char {
        self.symbols[idx]
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Converts a word to symbol indices, rejecting foreign characters.
    pub fn encode(&self, w: &str) -> Result<Vec<usize>> {
        w.chars()
            .map(|c| self.index_of(c).ok_or(Error::SymbolNotInAlphabet(c)))
            .collect()
    }
}

/// Head direction. In files this is the token `-1` or `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Left,
    Right,
}

/// Tape symbol of a two-way finite automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoSym {
    Input(usize),
    Lend,
    Rend,
}

/// Tape symbol of a forgetting 1-limited automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlaSym {
    Input(usize),
    Z,
    Lend,
    Rend,
}

impl FlaSym {
    pub fn display(self, alphabet: &Alphabet) -> char {
        match self {
            FlaSym::Input(i) => alphabet.symbol(i),
            FlaSym::Z => Z_CHAR,
            FlaSym::Lend => LEND_CHAR,
            FlaSym::Rend => REND_CHAR,
        }
    }
}

/// One-way finite automaton (NFA or DFA by the `deterministic` flag).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneWayFa {
    pub alphabet: Alphabet,
    pub states: usize,
    /// delta[state][symbol index] = set of successor states.
    pub delta: Vec<Vec<BTreeSet<usize>>>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub deterministic: bool,
}

impl OneWayFa {
    pub fn new(states: usize, alphabet: Alphabet, initial: usize, deterministic: bool) -> Self {
        let k = alphabet.len();
        OneWayFa {
            alphabet,
            states,
            delta: vec![vec![BTreeSet::new(); k]; states],
            initial,
            finals: BTreeSet::new(),
            deterministic,
        }
    }

    pub fn add(&mut self, from: usize, sym: usize, to: usize) {
        self.delta[from][sym].insert(to);
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.initial >= self.states {
            v.push(format!("initial state {} out of range", self.initial));
        }
        for &f in &self.finals {
            if f >= self.states {
                v.push(format!("final state {f} out of range"));
            }
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (s, set) in row.iter().enumerate() {
                for &t in set {
                    if t >= self.states {
                        v.push(format!(
                            "transition ({q}, {:?}) -> {t}: target out of range",
                            self.alphabet.symbol(s)
                        ));
                    }
                }
                if self.deterministic && set.len() > 1 {
                    v.push(format!(
                        "determinism violated at ({q}, {:?}): {} targets",
                        self.alphabet.symbol(s),
                        set.len()
                    ));
                }
            }
        }
        v
    }

    /// True when every (state, symbol) pair has exactly one successor.
    pub fn is_complete(&self) -> bool {
        self.delta
            .iter()
            .all(|row| row.iter().all(|s| !s.is_empty()))
    }
}

/// Two-way finite automaton. Tape symbols range over the input alphabet plus
/// the end-markers. The accepting exit is a right move from the right
/// end-marker into a final state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWayFa {
    pub alphabet: Alphabet,
    pub states: usize,
    /// delta[state][slot] where slot 0..k are input symbols, k is LEND,
    /// k+1 is REND.
    pub delta: Vec<Vec<Vec<(usize, Dir)>>>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub deterministic: bool,
    pub sweeping: bool,
}

impl TwoWayFa {
    pub fn new(
        states: usize,
        alphabet: Alphabet,
        initial: usize,
        deterministic: bool,
        sweeping: bool,
    ) -> Self {
        let slots = alphabet.len() + 2;
        TwoWayFa {
            alphabet,
            states,
            delta: vec![vec![Vec::new(); slots]; states],
            initial,
            finals: BTreeSet::new(),
            deterministic,
            sweeping,
        }
    }

    pub fn slot(&self, sym: TwoSym) -> usize {
        match sym {
            TwoSym::Input(i) => i,
            TwoSym::Lend => self.alphabet.len(),
            TwoSym::Rend => self.alphabet.len() + 1,
        }
    }

    pub fn add(&mut self, from: usize, sym: TwoSym, to: usize, dir: Dir) {
        let slot = self.slot(sym);
        if !self.delta[from][slot].contains(&(to, dir)) {
            self.delta[from][slot].push((to, dir));
        }
    }

    pub fn moves(&self, from: usize, sym: TwoSym) -> &[(usize, Dir)] {
        &self.delta[from][self.slot(sym)]
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.initial >= self.states {
            v.push(format!("initial state {} out of range", self.initial));
        }
        for &f in &self.finals {
            if f >= self.states {
                v.push(format!("final state {f} out of range"));
            }
        }
        let k = self.alphabet.len();
        for (q, row) in self.delta.iter().enumerate() {
            for (slot, moves) in row.iter().enumerate() {
                for &(t, dir) in moves {
                    if t >= self.states {
                        v.push(format!(
                            "transition from state {q} slot {slot}: target {t} out of range"
                        ));
                    }
                    if slot == k && dir == Dir::Left {
                        v.push(format!("state {q}: left move on the left end-marker"));
                    }
                }
                if self.deterministic && moves.len() > 1 {
                    v.push(format!(
                        "determinism violated at (state {q}, slot {slot}): {} moves",
                        moves.len()
                    ));
                }
            }
            if self.sweeping {
                // Mid-tape moves of a sweeping machine must all share one
                // direction per state; reversals happen on end-markers only.
                let mut dirs: BTreeSet<bool> = BTreeSet::new();
                for moves in row.iter().take(k) {
                    for &(_, dir) in moves {
                        dirs.insert(dir == Dir::Right);
                    }
                }
                if dirs.len() > 1 {
                    v.push(format!(
                        "state {q}: sweeping machine changes direction off the end-markers"
                    ));
                }
            }
        }
        v
    }
}

/// A move of a forgetting 1-limited automaton: successor state, symbol
/// written into the current cell, head direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlaMove {
    pub to: usize,
    pub write: FlaSym,
    pub dir: Dir,
}

/// Forgetting 1-limited automaton. On the first visit to an input cell the
/// symbol is replaced by `Z`; frozen cells and end-markers are never changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgettingLa {
    pub alphabet: Alphabet,
    pub states: usize,
    /// delta[state][slot] where slot 0..k are input symbols, k is Z,
    /// k+1 is LEND, k+2 is REND.
    pub delta: Vec<Vec<Vec<FlaMove>>>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub deterministic: bool,
}

impl ForgettingLa {
    pub fn new(states: usize, alphabet: Alphabet, initial: usize, deterministic: bool) -> Self {
        let slots = alphabet.len() + 3;
        ForgettingLa {
            alphabet,
            states,
            delta: vec![vec![Vec::new(); slots]; states],
            initial,
            finals: BTreeSet::new(),
            deterministic,
        }
    }

    pub fn slot(&self, sym: FlaSym) -> usize {
        let k = self.alphabet.len();
        match sym {
            FlaSym::Input(i) => i,
            FlaSym::Z => k,
            FlaSym::Lend => k + 1,
            FlaSym::Rend => k + 2,
        }
    }

    pub fn add(&mut self, from: usize, sym: FlaSym, mv: FlaMove) {
        let slot = self.slot(sym);
        if !self.delta[from][slot].contains(&mv) {
            self.delta[from][slot].push(mv);
        }
    }

    /// Adds a transition reading an input symbol; the write is forced to `Z`.
    pub fn add_input(&mut self, from: usize, sym: usize, to: usize, dir: Dir) {
        self.add(
            from,
            FlaSym::Input(sym),
            FlaMove {
                to,
                write: FlaSym::Z,
                dir,
            },
        );
    }

    pub fn add_z(&mut self, from: usize, to: usize, dir: Dir) {
        self.add(
            from,
            FlaSym::Z,
            FlaMove {
                to,
                write: FlaSym::Z,
                dir,
            },
        );
    }

    pub fn add_lend(&mut self, from: usize, to: usize) {
        self.add(
            from,
            FlaSym::Lend,
            FlaMove {
                to,
                write: FlaSym::Lend,
                dir: Dir::Right,
            },
        );
    }

    pub fn add_rend(&mut self, from: usize, to: usize, dir: Dir) {
        self.add(
            from,
            FlaSym::Rend,
            FlaMove {
                to,
                write: FlaSym::Rend,
                dir,
            },
        );
    }

    pub fn moves(&self, from: usize, sym: FlaSym) -> &[FlaMove] {
        &self.delta[from][self.slot(sym)]
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.initial >= self.states {
            v.push(format!("initial state {} out of range", self.initial));
        }
        for &f in &self.finals {
            if f >= self.states {
                v.push(format!("final state {f} out of range"));
            }
        }
        let k = self.alphabet.len();
        for (q, row) in self.delta.iter().enumerate() {
            for (slot, moves) in row.iter().enumerate() {
                let read = if slot < k {
                    FlaSym::Input(slot)
                } else if slot == k {
                    FlaSym::Z
                } else if slot == k + 1 {
                    FlaSym::Lend
                } else {
                    FlaSym::Rend
                };
                for mv in moves {
                    if mv.to >= self.states {
                        v.push(format!(
                            "transition from state {q}: target {} out of range",
                            mv.to
                        ));
                    }
                    match read {
                        FlaSym::Input(i) => {
                            if mv.write != FlaSym::Z {
                                v.push(format!(
                                    "forgetting rule violated: reading {:?} in state {q} writes {:?} instead of Z",
                                    self.alphabet.symbol(i),
                                    mv.write.display(&self.alphabet)
                                ));
                            }
                        }
                        FlaSym::Z => {
                            if mv.write != FlaSym::Z {
                                v.push(format!(
                                    "frozen cell rewritten: reading Z in state {q} writes {:?}",
                                    mv.write.display(&self.alphabet)
                                ));
                            }
                        }
                        FlaSym::Lend => {
                            if mv.write != FlaSym::Lend {
                                v.push(format!("state {q}: left end-marker rewritten"));
                            }
                            if mv.dir == Dir::Left {
                                v.push(format!("state {q}: left move on the left end-marker"));
                            }
                        }
                        FlaSym::Rend => {
                            if mv.write != FlaSym::Rend {
                                v.push(format!("state {q}: right end-marker rewritten"));
                            }
                        }
                    }
                }
                if self.deterministic && moves.len() > 1 {
                    v.push(format!(
                        "determinism violated at (state {q}, {:?}): {} moves",
                        read.display(&self.alphabet),
                        moves.len()
                    ));
                }
            }
        }
        v
    }
}

/// Any machine the workbench handles, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    OneWay(OneWayFa),
    TwoWay(TwoWayFa),
    Fla(ForgettingLa),
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::OneWay(m) => {
                if m.deterministic {
                    "dfa"
                } else {
                    "nfa"
                }
            }
            Machine::TwoWay(m) => {
                if m.deterministic {
                    "2dfa"
                } else {
                    "2nfa"
                }
            }
            Machine::Fla(m) => {
                if m.deterministic {
                    "dfla"
                } else {
                    "fla"
                }
            }
        }
    }

    pub fn states(&self) -> usize {
        match self {
            Machine::OneWay(m) => m.states,
            Machine::TwoWay(m) => m.states,
            Machine::Fla(m) => m.states,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::OneWay(m) => &m.alphabet,
            Machine::TwoWay(m) => &m.alphabet,
            Machine::Fla(m) => &m.alphabet,
        }
    }

    pub fn validate(&self) -> Vec<String> {
        match self {
            Machine::OneWay(m) => m.validate(),
            Machine::TwoWay(m) => m.validate(),
            Machine::Fla(m) => m.validate(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_reserved_and_duplicates() {
        assert!(Alphabet::new(['a', 'Z']).is_err());
        assert!(Alphabet::new(['<']).is_err());
        assert!(Alphabet::new(['a', 'a']).is_err());
        assert!(Alphabet::new([]).is_err());
        assert!(Alphabet::new(['a', 'b', 'c']).is_ok());
    }

    #[test]
    fn fla_forgetting_rule_violation_is_reported() {
        let mut m = ForgettingLa::new(1, Alphabet::ab(), 0, true);
        m.add(
            0,
            FlaSym::Input(0),
            FlaMove {
                to: 0,
                write: FlaSym::Input(0),
                dir: Dir::Right,
            },
        );
        let v = m.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("forgetting rule"), "{v:?}");
    }

    #[test]
    fn determinism_violation_is_reported() {
        let mut m = OneWayFa::new(2, Alphabet::ab(), 0, true);
        m.add(0, 0, 0);
        m.add(0, 0, 1);
        let v = m.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("determinism"), "{v:?}");
    }

    #[test]
    fn degenerate_machines_are_valid() {
        // no finals, unreachable state
        let m = OneWayFa::new(3, Alphabet::ab(), 0, false);
        assert!(m.validate().is_empty());
    }
}
