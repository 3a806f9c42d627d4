//! Landau's function, prime-power machinery, and the CRT witness function.

use num_integer::Integer;

use crate::{Error, Result};

/// A product of prime powers with strictly increasing primes. `value` is the
/// product, `weight` the sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerDecomposition {
    pub factors: Vec<(u64, u32)>,
}

impl PrimePowerDecomposition {
    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, k)| (p as u128).pow(k))
            .product()
    }

    pub fn weight(&self) -> u128 {
        self.factors.iter().map(|&(p, k)| (p as u128).pow(k)).sum()
    }

    /// The prime-power parts `p_i^{k_i}` in increasing prime order.
    pub fn parts(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, k)| p.pow(k)).collect()
    }
}

impl std::fmt::Display for PrimePowerDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, k)| {
                if k == 1 {
                    format!("{p}")
                } else {
                    format!("{p}^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Factorizes `n >= 1` into prime powers by trial division.
pub fn factorize(mut n: u64) -> PrimePowerDecomposition {
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            factors.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    PrimePowerDecomposition { factors }
}

fn primes_up_to(n: usize) -> Vec<u64> {
    let mut sieve = vec![true; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
    }
    primes
}

/// Landau's function `F(n)`: the maximum product of powers of distinct
/// primes whose sum is at most `n`, together with a decomposition achieving
/// it. Equivalently, the maximum lcm over all partitions of `n`.
///
/// Computed by dynamic programming over primes `<= n`, choosing at most one
/// power per prime under the weight budget `n`.
pub fn landau(n: usize) -> Result<(u128, PrimePowerDecomposition)> {
    if n == 0 {
        return Err(Error::BadParameter("landau requires n >= 1".into()));
    }
    let primes = primes_up_to(n);
    // best[w] = max product with weight <= w; choice[i][w] = exponent of
    // primes[i] in an optimum for the first i+1 primes at budget w.
    let mut best: Vec<u128> = vec![1; n + 1];
    let mut choice: Vec<Vec<u32>> = Vec::with_capacity(primes.len());
    for &p in &primes {
        let mut chosen = vec![0u32; n + 1];
        let prev = best.clone();
        for w in 1..=n {
            let mut pk: u128 = 1;
            let mut k = 0u32;
            loop {
                pk = pk.checked_mul(p as u128).ok_or(Error::Overflow("landau"))?;
                k += 1;
                if pk > n as u128 {
                    break;
                }
                let weight = pk as usize;
                if weight <= w {
                    let cand = prev[w - weight]
                        .checked_mul(pk)
                        .ok_or(Error::Overflow("landau"))?;
                    if cand > best[w] {
                        best[w] = cand;
                        chosen[w] = k;
                    }
                }
            }
        }
        choice.push(chosen);
    }
    // reconstruct the witness
    let mut factors = Vec::new();
    let mut w = n;
    for (i, &p) in primes.iter().enumerate().rev() {
        // find the budget at which this prime's choice was recorded: the DP
        // fills best[w] monotonically, so walk down while the value persists
        let k = choice[i][w];
        if k > 0 {
            factors.push((p, k));
            w -= (p as u128).pow(k) as usize;
        }
    }
    factors.reverse();
    let dec = PrimePowerDecomposition { factors };
    debug_assert_eq!(dec.value(), best[n]);
    Ok((best[n], dec))
}

/// Convenience accessor returning `F(n)` as a `usize`; errors if it does not
/// fit (far beyond desk scale).
pub fn landau_value(n: usize) -> Result<usize> {
    let (v, _) = landau(n)?;
    usize::try_from(v).map_err(|_| Error::Overflow("landau"))
}

/// Brute-force oracle for `F(n)`: maximum lcm over all integer partitions
/// of `n`, by enumeration. Limited to `n <= 30`.
pub fn landau_bruteforce(n: usize) -> Result<u128> {
    if n == 0 || n > 30 {
        return Err(Error::BadParameter(
            "landau_bruteforce supports 1 <= n <= 30".into(),
        ));
    }
    fn go(remaining: usize, min_part: usize, acc: u128, best: &mut u128) {
        if remaining == 0 {
            *best = (*best).max(acc);
            return;
        }
        for part in min_part..=remaining {
            go(remaining - part, part, acc.lcm(&(part as u128)), best);
        }
    }
    let mut best = 1u128;
    go(n, 1, 1, &mut best);
    Ok(best)
}

/// The unique `x` in `[0, n*l)` with `x = i (mod n)` and `x = j (mod l)`.
pub fn crt_witness(i: u64, j: u64, n: u64, ell: u64) -> Result<u64> {
    if n == 0 || ell == 0 {
        return Err(Error::BadParameter("crt moduli must be positive".into()));
    }
    if n.gcd(&ell) != 1 {
        return Err(Error::NotCoprime(n, ell));
    }
    if i >= n || j >= ell {
        return Err(Error::BadParameter(
            "crt residues must satisfy i < n, j < l".into(),
        ));
    }
    let egcd = (n as i128).extended_gcd(&(ell as i128));
    // n*x + l*y = 1; x = j*n*eg.x + i*l*eg.y mod n*l
    let m = n as i128 * ell as i128;
    let x = ((j as i128 * n as i128 % m) * egcd.x + (i as i128 * ell as i128 % m) * egcd.y) % m;
    Ok(((x % m + m) % m) as u64)
}

/// `gcd(n, F(n)) == 1`; this holds for every prime `n > 4`, since `F(n)`
/// is then attained by a partition avoiding `n` itself.
pub fn coprime_landau_check(n: usize) -> Result<bool> {
    let (value, _) = landau(n)?;
    Ok((n as u128).gcd(&value) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landau_small_values() {
        assert_eq!(landau(1).unwrap().0, 1);
        assert_eq!(landau_bruteforce(2).unwrap(), 2);
        assert_eq!(landau_bruteforce(4).unwrap(), 4);
        let (v5, d5) = landau(5).unwrap();
        assert_eq!(v5, 6);
        assert_eq!(d5.parts(), vec![2, 3]);
        let (v7, d7) = landau(7).unwrap();
        assert_eq!(v7, 12);
        assert_eq!(d7.parts(), vec![4, 3]);
        assert_eq!(d7.weight(), 7);
    }

    #[test]
    fn landau_matches_bruteforce_up_to_30() {
        for n in 1..=30 {
            assert_eq!(landau(n).unwrap().0, landau_bruteforce(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn landau_witness_is_consistent() {
        for n in 1..=60 {
            let (v, dec) = landau(n).unwrap();
            assert_eq!(dec.value(), v, "n={n}");
            assert!(dec.weight() <= n as u128, "n={n}");
            for pair in dec.factors.windows(2) {
                assert!(pair[0].0 < pair[1].0);
            }
        }
    }

    #[test]
    fn landau_monotone_and_superlinear() {
        let mut prev = 0u128;
        for n in 1..=60 {
            let (v, _) = landau(n).unwrap();
            assert!(v >= prev, "n={n}");
            if n >= 7 {
                assert!(v >= n as u128, "n={n}");
            }
            prev = v;
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_witness(0, 0, 3, 2).unwrap(), 0);
        assert_eq!(crt_witness(1, 0, 3, 2).unwrap(), 4);
        assert_eq!(crt_witness(2, 3, 5, 6).unwrap(), 27);
        assert!(matches!(
            crt_witness(0, 0, 4, 6),
            Err(Error::NotCoprime(4, 6))
        ));
    }

    #[test]
    fn crt_exhaustive_small() {
        for (n, ell) in [(3u64, 2u64), (5, 6), (2, 9)] {
            for i in 0..n {
                for j in 0..ell {
                    let x = crt_witness(i, j, n, ell).unwrap();
                    assert!(x < n * ell);
                    assert_eq!(x % n, i);
                    assert_eq!(x % ell, j);
                }
            }
        }
    }

    #[test]
    fn coprime_for_small_primes() {
        for n in [5usize, 7, 11, 13] {
            assert!(coprime_landau_check(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).factors, vec![]);
        assert_eq!(factorize(6).factors, vec![(2, 1), (3, 1)]);
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
    }
}
