//! Workbench for forgetting 1-limited automata (F-1-LA).
//!
//! A forgetting 1-limited automaton is a single-tape Turing machine that may
//! rewrite each tape cell only during the first visit, and the only symbol it
//! can write is a fixed `Z`. These devices accept exactly the regular
//! languages; the interesting question is how many states the equivalent
//! one-way automata need. This crate provides:
//!
//! - machine types and an on-disk interchange format ([`model`], [`file`]),
//! - exact membership deciders via configuration-graph reachability ([`sim`]),
//! - the transition-table pipeline converting F-1-LAs to one-way automata,
//!   with exact preperiod/period detection ([`tables`]),
//! - standard automata algorithms: determinization, product, minimization,
//!   reversal, equivalence ([`classical`]),
//! - Landau's function and CRT utilities ([`numtheory`]),
//! - builders for the witness language families `L`, `J`, `H`, `E` and the
//!   Meyer-Fischer automaton ([`families`]),
//! - fooling-set lower-bound certificate checkers ([`bounds`]),
//! - an experiment harness reproducing the state-count claims at desk scale
//!   ([`report`]).

pub mod bounds;
pub mod classical;
pub mod families;
pub mod file;
pub mod model;
pub mod numtheory;
pub mod report;
pub mod sim;
pub mod tables;
pub mod words;

pub use model::{Alphabet, Dir, FlaSym, ForgettingLa, Machine, OneWayFa, TwoSym, TwoWayFa};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("symbol {0:?} is not in the input alphabet")]
    SymbolNotInAlphabet(char),
    #[error("invalid alphabet: {0}")]
    BadAlphabet(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("expected a deterministic machine")]
    NotDeterministic,
    #[error("machine has {0} states; transition tables support at most 64")]
    TooManyStates(usize),
    #[error(
        "table sequence exceeded the cap of {0} iterations; this contradicts \
             the periodicity bound and indicates a bug"
    )]
    PeriodCapExceeded(usize),
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
