//! The `.mach` interchange format: UTF-8 JSON with a canonical field and
//! transition order, so that serialize/parse round-trips bit-exactly.
//!
//! Reserved symbols are spelled `"Z"`, `"<"`, `">"` in files. Directions are
//! the tokens `-1` and `1`. One-way machines carry neither `dir` nor `write`;
//! two-way machines carry `dir`; forgetting machines carry both.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::model::{
    Alphabet, Dir, FlaMove, FlaSym, ForgettingLa, Machine, OneWayFa, TwoSym, TwoWayFa, LEND_CHAR,
    REND_CHAR, Z_CHAR,
};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TransitionDto {
    from: usize,
    read: String,
    to: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    write: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dir: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MachineDto {
    #[serde(rename = "format-version")]
    format_version: Option<u32>,
    kind: Option<String>,
    symbols: Vec<String>,
    states: Vec<usize>,
    initial: usize,
    finals: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweeping: Option<bool>,
    transitions: Vec<TransitionDto>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn dir_to_token(d: Dir) -> i64 {
    match d {
        Dir::Left => -1,
        Dir::Right => 1,
    }
}

fn token_to_dir(t: i64, idx: usize) -> Result<Dir> {
    match t {
        -1 => Ok(Dir::Left),
        1 => Ok(Dir::Right),
        other => Err(parse_err(format!(
            "transition #{idx}: direction token {other} outside {{-1, 1}}"
        ))),
    }
}

fn sym_to_string(sym: FlaSym, alphabet: &Alphabet) -> String {
    sym.display(alphabet).to_string()
}

fn parse_char_field(s: &str, idx: usize, field: &str) -> Result<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(parse_err(format!(
            "transition #{idx}: field {field:?} must be a single character, got {s:?}"
        ))),
    }
}

fn parse_fla_sym(s: &str, alphabet: &Alphabet, idx: usize, field: &str) -> Result<FlaSym> {
    let c = parse_char_field(s, idx, field)?;
    match c {
        Z_CHAR => Ok(FlaSym::Z),
        LEND_CHAR => Ok(FlaSym::Lend),
        REND_CHAR => Ok(FlaSym::Rend),
        other => alphabet.index_of(other).map(FlaSym::Input).ok_or_else(|| {
            parse_err(format!(
                "transition #{idx}: unknown symbol {other:?} in {field}"
            ))
        }),
    }
}

/// Serializes a machine to its canonical textual form.
pub fn serialize(machine: &Machine) -> String {
    let alphabet = machine.alphabet();
    let symbols: Vec<String> = alphabet.symbols().iter().map(|c| c.to_string()).collect();
    let states: Vec<usize> = (0..machine.states()).collect();
    let mut transitions = Vec::new();
    let mut sweeping = None;
    let (initial, finals) = match machine {
        Machine::OneWay(m) => {
            for (q, row) in m.delta.iter().enumerate() {
                for (s, set) in row.iter().enumerate() {
                    for &t in set {
                        transitions.push(TransitionDto {
                            from: q,
                            read: alphabet.symbol(s).to_string(),
                            to: t,
                            write: None,
                            dir: None,
                        });
                    }
                }
            }
            (m.initial, &m.finals)
        }
        Machine::TwoWay(m) => {
            sweeping = Some(m.sweeping);
            let k = alphabet.len();
            for (q, row) in m.delta.iter().enumerate() {
                for (slot, moves) in row.iter().enumerate() {
                    let read = if slot < k {
                        alphabet.symbol(slot).to_string()
                    } else if slot == k {
                        LEND_CHAR.to_string()
                    } else {
                        REND_CHAR.to_string()
                    };
                    let mut moves = moves.clone();
                    moves.sort_by_key(|&(t, d)| (t, dir_to_token(d)));
                    for (t, d) in moves {
                        transitions.push(TransitionDto {
                            from: q,
                            read: read.clone(),
                            to: t,
                            write: None,
                            dir: Some(dir_to_token(d)),
                        });
                    }
                }
            }
            (m.initial, &m.finals)
        }
        Machine::Fla(m) => {
            let k = alphabet.len();
            for (q, row) in m.delta.iter().enumerate() {
                for (slot, moves) in row.iter().enumerate() {
                    let read = if slot < k {
                        alphabet.symbol(slot).to_string()
                    } else if slot == k {
                        Z_CHAR.to_string()
                    } else if slot == k + 1 {
                        LEND_CHAR.to_string()
                    } else {
                        REND_CHAR.to_string()
                    };
                    let mut moves = moves.clone();
                    moves.sort_by_key(|mv| {
                        (
                            mv.to,
                            sym_to_string(mv.write, alphabet),
                            dir_to_token(mv.dir),
                        )
                    });
                    for mv in moves {
                        transitions.push(TransitionDto {
                            from: q,
                            read: read.clone(),
                            to: mv.to,
                            write: Some(sym_to_string(mv.write, alphabet)),
                            dir: Some(dir_to_token(mv.dir)),
                        });
                    }
                }
            }
            (m.initial, &m.finals)
        }
    };
    let dto = MachineDto {
        format_version: Some(FORMAT_VERSION),
        kind: Some(machine.kind().to_string()),
        symbols,
        states,
        initial,
        finals: finals.iter().copied().collect(),
        sweeping,
        transitions,
    };
    let mut out = serde_json::to_string_pretty(&dto).expect("machine serialization cannot fail");
    out.push('\n');
    out
}

/// Parses the canonical textual form back into a machine.
pub fn parse(text: &str) -> Result<Machine> {
    let dto: MachineDto = serde_json::from_str(text).map_err(|e| parse_err(format!("{e}")))?;
    let version = dto
        .format_version
        .ok_or_else(|| parse_err("missing format-version"))?;
    if version != FORMAT_VERSION {
        return Err(parse_err(format!("unsupported format-version {version}")));
    }
    let kind = dto.kind.ok_or_else(|| parse_err("missing kind"))?;

    let mut chars = Vec::new();
    for s in &dto.symbols {
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => chars.push(c),
            _ => {
                return Err(parse_err(format!(
                    "alphabet symbol {s:?} must be a single character"
                )))
            }
        }
    }
    let alphabet = Alphabet::new(chars).map_err(|e| parse_err(e.to_string()))?;

    let n = dto.states.len();
    let mut seen = BTreeSet::new();
    for &s in &dto.states {
        if !seen.insert(s) {
            return Err(parse_err(format!("duplicate state index {s}")));
        }
        if s >= n {
            return Err(parse_err(format!("state index {s} not in 0..{n}")));
        }
    }

    let finals: BTreeSet<usize> = dto.finals.iter().copied().collect();
    let deterministic = matches!(kind.as_str(), "dfa" | "2dfa" | "dfla");

    let machine = match kind.as_str() {
        "nfa" | "dfa" => {
            let mut m = OneWayFa::new(n, alphabet, dto.initial, deterministic);
            m.finals = finals;
            for (idx, t) in dto.transitions.iter().enumerate() {
                if t.dir.is_some() || t.write.is_some() {
                    return Err(parse_err(format!(
                        "transition #{idx}: one-way machines take neither dir nor write"
                    )));
                }
                let c = parse_char_field(&t.read, idx, "read")?;
                let sym = m
                    .alphabet
                    .index_of(c)
                    .ok_or_else(|| parse_err(format!("transition #{idx}: unknown symbol {c:?}")))?;
                if t.from >= n || t.to >= n {
                    return Err(parse_err(format!("transition #{idx}: state out of range")));
                }
                m.add(t.from, sym, t.to);
            }
            Machine::OneWay(m)
        }
        "2nfa" | "2dfa" => {
            let mut m = TwoWayFa::new(
                n,
                alphabet,
                dto.initial,
                deterministic,
                dto.sweeping.unwrap_or(false),
            );
            m.finals = finals;
            for (idx, t) in dto.transitions.iter().enumerate() {
                if t.write.is_some() {
                    return Err(parse_err(format!(
                        "transition #{idx}: two-way machines take no write"
                    )));
                }
                let dir = token_to_dir(
                    t.dir
                        .ok_or_else(|| parse_err(format!("transition #{idx}: missing dir")))?,
                    idx,
                )?;
                let c = parse_char_field(&t.read, idx, "read")?;
                let sym = match c {
                    LEND_CHAR => TwoSym::Lend,
                    REND_CHAR => TwoSym::Rend,
                    other => TwoSym::Input(m.alphabet.index_of(other).ok_or_else(|| {
                        parse_err(format!("transition #{idx}: unknown symbol {other:?}"))
                    })?),
                };
                if t.from >= n || t.to >= n {
                    return Err(parse_err(format!("transition #{idx}: state out of range")));
                }
                m.add(t.from, sym, t.to, dir);
            }
            Machine::TwoWay(m)
        }
        "fla" | "dfla" => {
            let mut m = ForgettingLa::new(n, alphabet, dto.initial, deterministic);
            m.finals = finals;
            for (idx, t) in dto.transitions.iter().enumerate() {
                let dir = token_to_dir(
                    t.dir
                        .ok_or_else(|| parse_err(format!("transition #{idx}: missing dir")))?,
                    idx,
                )?;
                let read = parse_fla_sym(&t.read, &m.alphabet, idx, "read")?;
                let write = parse_fla_sym(
                    t.write
                        .as_deref()
                        .ok_or_else(|| parse_err(format!("transition #{idx}: missing write")))?,
                    &m.alphabet,
                    idx,
                    "write",
                )?;
                if t.from >= n || t.to >= n {
                    return Err(parse_err(format!("transition #{idx}: state out of range")));
                }
                m.add(
                    t.from,
                    read,
                    FlaMove {
                        to: t.to,
                        write,
                        dir,
                    },
                );
            }
            Machine::Fla(m)
        }
        other => return Err(parse_err(format!("unknown kind {other:?}"))),
    };
    Ok(machine)
}
