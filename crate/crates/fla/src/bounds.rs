//! Lower-bound certificates: fooling sets and pairwise distinguishability.
//!
//! A certificate never proves anything by itself — it is checked against a
//! membership oracle (usually a definitional predicate, so the check is
//! independent of the machines whose size it bounds). A valid fooling set of
//! `m` pairs bounds NFA size (or F-1-LA size, for the variant with aligned
//! left parts) from below by `m`; a family of `m` pairwise distinguishable
//! words bounds DFA size from below by `m`.

use std::collections::BTreeSet;

use crate::model::Alphabet;
use crate::numtheory::crt_witness;
use crate::words::all_up_to;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which lower bound a fooling set certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoolingKind {
    /// `x_i y_i` in `L`, `x_i y_j` not in `L` for all `i != j`: NFA bound.
    Standard,
    /// `x_i y_i` in `L` and, for `i != j`, `x_i y_j` or `x_j y_i` outside
    /// `L`: NFA bound.
    Extended,
    /// Extended conditions plus equal `|x_i|`: F-1-LA bound. With all left
    /// parts of one length, the frozen tape left of the head looks the same
    /// in every pair, so crossing states must differ.
    FlaFooling,
}

impl FoolingKind {
    pub fn name(self) -> &'static str {
        match self {
            FoolingKind::Standard => "standard",
            FoolingKind::Extended => "extended",
            FoolingKind::FlaFooling => "fla",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FoolingSet {
    pub kind: FoolingKind,
    pub pairs: Vec<(String, String)>,
}

/// Result of checking a certificate against an oracle.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub valid: bool,
    /// The certified lower bound: the certificate size if valid, else 0.
    pub bound: usize,
    /// Human-readable description of the first violated condition.
    pub violation: Option<String>,
}

impl CheckOutcome {
    fn ok(bound: usize) -> Self {
        CheckOutcome {
            valid: true,
            bound,
            violation: None,
        }
    }

    fn fail(violation: String) -> Self {
        CheckOutcome {
            valid: false,
            bound: 0,
            violation: Some(violation),
        }
    }
}

fn fooling_row_violation<F>(set: &FoolingSet, oracle: &F, i: usize) -> Option<String>
where
    F: Fn(&str) -> bool + Sync,
{
    let (xi, yi) = &set.pairs[i];
    if !oracle(&format!("{xi}{yi}")) {
        return Some(format!("pair #{i}: x.y is not in the language"));
    }
    for (j, (xj, yj)) in set.pairs.iter().enumerate() {
        if i == j {
            continue;
        }
        let ij = oracle(&format!("{xi}{yj}"));
        match set.kind {
            FoolingKind::Standard => {
                if ij {
                    return Some(format!("pairs #{i}, #{j}: x_{i}.y_{j} is in the language"));
                }
            }
            FoolingKind::Extended | FoolingKind::FlaFooling => {
                if j > i && ij && oracle(&format!("{xj}{yi}")) {
                    return Some(format!(
                        "pairs #{i}, #{j}: both cross-concatenations are in the language"
                    ));
                }
            }
        }
    }
    None
}

/// Checks every condition of the fooling set against the oracle. The
/// reported violation is the first one in pair order.
pub fn check_fooling<F>(set: &FoolingSet, oracle: F) -> CheckOutcome
where
    F: Fn(&str) -> bool + Sync,
{
    if set.kind == FoolingKind::FlaFooling {
        let len = set.pairs.first().map_or(0, |(x, _)| x.len());
        if let Some(i) = set.pairs.iter().position(|(x, _)| x.len() != len) {
            return CheckOutcome::fail(format!(
                "pair #{i}: |x| = {} differs from |x_0| = {len}",
                set.pairs[i].0.len()
            ));
        }
    }
    let m = set.pairs.len();
    #[cfg(feature = "parallel")]
    let first_bad = (0..m)
        .into_par_iter()
        .find_first(|&i| fooling_row_violation(set, &oracle, i).is_some());
    #[cfg(not(feature = "parallel"))]
    let first_bad = (0..m).find(|&i| fooling_row_violation(set, &oracle, i).is_some());
    match first_bad {
        Some(i) => CheckOutcome::fail(fooling_row_violation(set, &oracle, i).unwrap()),
        None => CheckOutcome::ok(m),
    }
}

/// The smallest multiple of `l` strictly greater than `l + n`, the padding
/// parameter used by the `J` and `H` fooling sets.
pub fn default_h(n: usize, ell: usize) -> usize {
    (1 + (ell + n) / ell) * ell
}

/// Standard fooling set of size `n * l` for `L_{n,l}`: the pairs
/// `(a^i, a^(n*l - i))`.
pub fn l_fooling_set(n: usize, ell: usize) -> FoolingSet {
    let m = n * ell;
    let pairs = (0..m).map(|i| ("a".repeat(i), "a".repeat(m - i))).collect();
    FoolingSet {
        kind: FoolingKind::Standard,
        pairs,
    }
}

fn j_pairs(n: usize, ell: usize) -> Result<Vec<(String, String)>> {
    if n == 0 || ell == 0 {
        return Err(Error::BadParameter("n and l must be positive".into()));
    }
    let h = default_h(n, ell);
    let mut pairs = Vec::with_capacity(n * ell);
    for i in 1..=ell {
        for j in 0..n {
            let x = format!("{}{}", "a".repeat(j), "b".repeat(h + i - j));
            let y = format!("{}{}", "b".repeat(h - i - n + j), "a".repeat(n - j));
            pairs.push((x, y));
        }
    }
    Ok(pairs)
}

/// Extended fooling set of size `n * l` for `J_{n,l}`: left parts
/// `a^j b^(H+i-j)`, right parts `b^(H-i-n+j) a^(n-j)`.
pub fn j_fooling_set(n: usize, ell: usize) -> Result<FoolingSet> {
    Ok(FoolingSet {
        kind: FoolingKind::Extended,
        pairs: j_pairs(n, ell)?,
    })
}

/// Extended fooling set of size `n * l` for `H_{n,l}`: the `J` pairs with
/// `b^n` appended to each right part.
pub fn h_fooling_set(n: usize, ell: usize) -> Result<FoolingSet> {
    let pairs = j_pairs(n, ell)?
        .into_iter()
        .map(|(x, y)| (x, format!("{y}{}", "b".repeat(n))))
        .collect();
    Ok(FoolingSet {
        kind: FoolingKind::Extended,
        pairs,
    })
}

/// F-1-LA fooling set of size `2^n` for `E_n`: the pairs `(x, x)` over all
/// `x` of length `n`.
pub fn e_fooling_set(n: usize) -> Result<FoolingSet> {
    if n > 20 {
        return Err(Error::TooManyStates(1 << n));
    }
    let pairs = all_up_to(&Alphabet::ab(), n)
        .into_iter()
        .filter(|w| w.len() == n)
        .map(|w| (w.clone(), w))
        .collect();
    Ok(FoolingSet {
        kind: FoolingKind::FlaFooling,
        pairs,
    })
}

/// A family of words to be shown pairwise distinguishable, with an optional
/// per-pair separator hint taken from the proof; pairs without a hint fall
/// back to an exhaustive search over separators up to `fallback_len`.
pub struct DistinguishSet {
    pub words: Vec<String>,
    hints: Vec<Option<(BTreeSet<usize>, usize)>>,
    n: usize,
    ell: usize,
}

impl DistinguishSet {
    /// Separator expected to tell `words[i]` and `words[k]` apart.
    pub fn hint(&self, i: usize, k: usize) -> Option<String> {
        let (s, j) = match (&self.hints[i], &self.hints[k]) {
            (Some((s, j)), None) | (None, Some((s, j))) => (*s.iter().next()?, *j),
            (Some((s_set, j)), Some((t_set, h))) => {
                if s_set == t_set {
                    (*s_set.iter().next()?, *j)
                } else if let Some(&s) = s_set.difference(t_set).next() {
                    (s, *j)
                } else {
                    (*t_set.difference(s_set).next()?, *h)
                }
            }
            (None, None) => return None,
        };
        let z = crt_witness(
            ((self.n - s) % self.n) as u64,
            ((self.ell - j) % self.ell) as u64,
            self.n as u64,
            self.ell as u64,
        )
        .ok()?;
        Some("a".repeat(z as usize))
    }
}

/// The `(2^n - 1) * l + 1` words witnessing the DFA lower bound for
/// `L_{n,l}`: the string `b` plus, for every nonempty subset `S` of the
/// Meyer-Fischer states and every residue `j`, the padded word `w_{S,j}`.
/// Requires `gcd(n, l) = 1`.
pub fn l_distinguish_set(n: usize, ell: usize) -> Result<DistinguishSet> {
    if n == 0 || n > 20 {
        return Err(Error::BadParameter(format!(
            "n = {n} outside the supported range 1..=20"
        )));
    }
    crt_witness(0, 0, n as u64, ell as u64)?; // validates coprimality
    let mut words = vec!["b".to_string()];
    let mut hints = vec![None];
    for mask in 1usize..1 << n {
        let s: BTreeSet<usize> = (0..n).filter(|q| mask & (1 << q) != 0).collect();
        for j in 0..ell {
            words.push(crate::families::witness_w_sj(n, ell, &s, j)?);
            hints.push(Some((s.clone(), j)));
        }
    }
    Ok(DistinguishSet {
        words,
        hints,
        n,
        ell,
    })
}

fn separates<F: Fn(&str) -> bool>(oracle: &F, x: &str, y: &str, z: &str) -> bool {
    oracle(&format!("{x}{z}")) != oracle(&format!("{y}{z}"))
}

fn distinguish_row_violation<F>(
    set: &DistinguishSet,
    oracle: &F,
    alphabet: &Alphabet,
    fallback_len: usize,
    i: usize,
) -> Option<String>
where
    F: Fn(&str) -> bool + Sync,
{
    for k in i + 1..set.words.len() {
        let (x, y) = (&set.words[i], &set.words[k]);
        if let Some(z) = set.hint(i, k) {
            if separates(oracle, x, y, &z) {
                continue;
            }
        }
        if !all_up_to(alphabet, fallback_len)
            .iter()
            .any(|z| separates(oracle, x, y, z))
        {
            return Some(format!(
                "words #{i} and #{k} are not distinguished (searched |z| <= {fallback_len})"
            ));
        }
    }
    None
}

/// Verifies that all words are pairwise distinguishable with respect to the
/// oracle, using the proof-supplied separators first.
pub fn check_distinguishable<F>(
    set: &DistinguishSet,
    oracle: F,
    alphabet: &Alphabet,
    fallback_len: usize,
) -> CheckOutcome
where
    F: Fn(&str) -> bool + Sync,
{
    let m = set.words.len();
    #[cfg(feature = "parallel")]
    let first_bad = (0..m).into_par_iter().find_first(|&i| {
        distinguish_row_violation(set, &oracle, alphabet, fallback_len, i).is_some()
    });
    #[cfg(not(feature = "parallel"))]
    let first_bad = (0..m)
        .find(|&i| distinguish_row_violation(set, &oracle, alphabet, fallback_len, i).is_some());
    match first_bad {
        Some(i) => CheckOutcome::fail(
            distinguish_row_violation(set, &oracle, alphabet, fallback_len, i).unwrap(),
        ),
        None => CheckOutcome::ok(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{l_oracle, predicate_e, predicate_h, predicate_j};

    #[test]
    fn default_h_is_the_least_valid_multiple() {
        assert_eq!(default_h(5, 6), 12);
        assert_eq!(default_h(2, 3), 6);
        assert_eq!(default_h(1, 1), 3);
        for (n, ell) in [(5usize, 6usize), (2, 3), (3, 2)] {
            let h = default_h(n, ell);
            assert_eq!(h % ell, 0);
            assert!(h > ell + n);
            assert!(h - ell <= ell + n);
        }
    }

    #[test]
    fn l_fooling_set_is_valid() {
        for (n, ell) in [(3usize, 2usize), (5, 6)] {
            let set = l_fooling_set(n, ell);
            let out = check_fooling(&set, l_oracle(n, ell).unwrap());
            assert!(out.valid, "{:?}", out.violation);
            assert_eq!(out.bound, n * ell);
        }
    }

    #[test]
    fn j_fooling_set_is_valid() {
        for (n, ell) in [(2usize, 3usize), (5, 6), (3, 4)] {
            let set = j_fooling_set(n, ell).unwrap();
            let out = check_fooling(&set, |w| predicate_j(n, ell, w));
            assert!(out.valid, "n={n} l={ell}: {:?}", out.violation);
            assert_eq!(out.bound, n * ell);
        }
    }

    #[test]
    fn h_fooling_set_is_valid() {
        for (n, ell) in [(2usize, 2usize), (5, 6)] {
            let set = h_fooling_set(n, ell).unwrap();
            let out = check_fooling(&set, |w| predicate_h(n, ell, w));
            assert!(out.valid, "n={n} l={ell}: {:?}", out.violation);
            assert_eq!(out.bound, n * ell);
        }
    }

    #[test]
    fn e_fooling_set_is_valid() {
        for n in [2usize, 4] {
            let set = e_fooling_set(n).unwrap();
            assert_eq!(set.pairs.len(), 1 << n);
            let out = check_fooling(&set, |w| predicate_e(n, w));
            assert!(out.valid, "n={n}: {:?}", out.violation);
        }
    }

    #[test]
    fn broken_certificates_are_reported() {
        let mut set = l_fooling_set(3, 2);
        set.pairs[2].1 = "b".into(); // x_2.y_2 = "aab" has length 3
        let out = check_fooling(&set, l_oracle(3, 2).unwrap());
        assert!(!out.valid);
        assert!(out.violation.unwrap().contains("#2"), "wrong violation");

        let mut set = e_fooling_set(2).unwrap();
        set.pairs[0].0 = "aaa".into();
        let out = check_fooling(&set, |w| predicate_e(2, w));
        assert!(!out.valid);
        assert!(out.violation.unwrap().contains("|x|"), "wrong violation");
    }

    #[test]
    fn l_distinguish_set_is_valid() {
        for (n, ell) in [(3usize, 2usize), (2, 3)] {
            let set = l_distinguish_set(n, ell).unwrap();
            assert_eq!(set.words.len(), ((1 << n) - 1) * ell + 1);
            let out = check_distinguishable(&set, l_oracle(n, ell).unwrap(), &Alphabet::ab(), 6);
            assert!(out.valid, "n={n} l={ell}: {:?}", out.violation);
            assert_eq!(out.bound, ((1 << n) - 1) * ell + 1);
        }
    }

    #[test]
    fn indistinguishable_words_are_caught() {
        let mut set = l_distinguish_set(2, 1).unwrap();
        set.words.push(set.words[1].clone());
        set.hints.push(set.hints[1].clone());
        let out = check_distinguishable(&set, l_oracle(2, 1).unwrap(), &Alphabet::ab(), 4);
        assert!(!out.valid);
    }

    #[test]
    fn coprimality_is_required() {
        assert!(l_distinguish_set(4, 6).is_err());
    }
}
