//! Prime sieve and multiplicative bookkeeping.
//!
//! A [`PrimeTable`] is built once for a fixed bound and never grows. Every
//! factorization it hands out is expressed in 1-based prime *indices*
//! (`p_1 = 2`, `p_2 = 3`, ...) because the permutation actions in
//! [`crate::group`] act on indices, not on the primes themselves.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest sieve bound accepted; `smallest_factor` is stored as `u32`.
pub const MAX_SIEVE_BOUND: u64 = u32::MAX as u64;

/// Primes up to a fixed bound together with a smallest-prime-factor table.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
    // smallest_factor[n] for n in 2..=bound; entries 0 and 1 are unused.
    smallest_factor: Vec<u32>,
}

/// Prime factorization `n = prod p_i^e` stored as `(i, e)` pairs with
/// strictly increasing prime index `i` and `e >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    entries: Vec<(usize, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(index, exponent)` pairs, merging repeated
    /// indices and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let mut merged = std::collections::BTreeMap::<usize, u32>::new();
        for (i, e) in pairs {
            if i == 0 {
                return Err(Error::invalid("prime indices are 1-based"));
            }
            if e > 0 {
                *merged.entry(i).or_insert(0) += e;
            }
        }
        Ok(Factorization {
            entries: merged.into_iter().collect(),
        })
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, u32)> {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ω(n): number of prime factors counted with multiplicity.
    pub fn omega(&self) -> u32 {
        self.entries.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent ν_{p_i}(n) of the `i`-th prime.
    pub fn exponent(&self, index: usize) -> u32 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0)
    }

    /// Largest prime index present, 0 for n = 1.
    pub fn max_index(&self) -> usize {
        self.entries.last().map(|&(i, _)| i).unwrap_or(0)
    }

    /// Multiplies the factorization back out with checked arithmetic.
    pub fn value(&self, table: &PrimeTable) -> Result<u64> {
        let mut acc: u64 = 1;
        for &(i, e) in &self.entries {
            let p = table.prime(i)?;
            for _ in 0..e {
                acc = acc.checked_mul(p).ok_or_else(|| {
                    Error::Overflow(format!("product of {:?} exceeds u64", self.entries))
                })?;
            }
        }
        Ok(acc)
    }
}

impl PrimeTable {
    /// Linear sieve over `[2, bound]`.
    pub fn sieve(bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::invalid(format!(
                "sieve bound must be >= 2, got {bound}"
            )));
        }
        if bound > MAX_SIEVE_BOUND {
            return Err(Error::invalid(format!(
                "sieve bound {bound} exceeds supported maximum {MAX_SIEVE_BOUND}"
            )));
        }
        let len = bound as usize + 1;
        let mut smallest_factor = vec![0u32; len];
        let mut primes: Vec<u64> = Vec::new();
        for n in 2..len {
            if smallest_factor[n] == 0 {
                smallest_factor[n] = n as u32;
                primes.push(n as u64);
            }
            let spf = smallest_factor[n] as u64;
            for &p in &primes {
                if p > spf {
                    break;
                }
                let m = n as u64 * p;
                if m > bound {
                    break;
                }
                smallest_factor[m as usize] = p as u32;
            }
        }
        Ok(PrimeTable {
            bound,
            primes,
            smallest_factor,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// All primes `<= bound`, increasing.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of stored primes, i.e. π(bound).
    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    /// The `i`-th prime (1-based).
    pub fn prime(&self, index: usize) -> Result<u64> {
        if index == 0 {
            return Err(Error::invalid("prime indices are 1-based"));
        }
        self.primes.get(index - 1).copied().ok_or_else(|| {
            Error::TableTooSmall(format!(
                "prime index {index} requested but table holds {} primes (bound {})",
                self.primes.len(),
                self.bound
            ))
        })
    }

    /// 1-based index of a stored prime, `None` if `p` is not a prime `<= bound`.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|pos| pos + 1)
    }

    /// Smallest prime factor of `n` for `2 <= n <= bound`.
    pub fn smallest_factor(&self, n: u64) -> Result<u64> {
        if n < 2 || n > self.bound {
            return Err(self.out_of_range(n));
        }
        Ok(self.smallest_factor[n as usize] as u64)
    }

    /// π(x) for `x <= bound`.
    pub fn pi(&self, x: u64) -> Result<usize> {
        if x > self.bound {
            return Err(self.out_of_range(x));
        }
        Ok(self.primes.partition_point(|&p| p <= x))
    }

    fn out_of_range(&self, n: u64) -> Error {
        Error::invalid(format!(
            "{n} is outside the table range [1, {}]",
            self.bound
        ))
    }

    /// Factorization of `1 <= n <= bound`.
    pub fn factor(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.bound {
            return Err(self.out_of_range(n));
        }
        let mut entries: Vec<(usize, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.smallest_factor[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            // p came out of the sieve, so it is stored.
            let idx = self.index_of(p).expect("sieve factor is a stored prime");
            entries.push((idx, e));
        }
        Ok(Factorization { entries })
    }

    /// Factorization of any `n >= 1` whose prime factors are all `<= bound`.
    ///
    /// Integers beyond the bound arise as images of the completely
    /// multiplicative permutations; they are split by trial division over the
    /// stored primes until the cofactor drops into the sieve range. An `n`
    /// with a prime factor above the bound fails with `TableTooSmall`.
    pub fn factor_smooth(&self, n: u64) -> Result<Factorization> {
        if n <= self.bound {
            return self.factor(n);
        }
        let mut entries: Vec<(usize, u32)> = Vec::new();
        let mut m = n;
        for (pos, &p) in self.primes.iter().enumerate() {
            if m <= self.bound {
                break;
            }
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            if e > 0 {
                entries.push((pos + 1, e));
            }
        }
        if m > self.bound {
            return Err(Error::TableTooSmall(format!(
                "{n} has a prime factor above the table bound {}",
                self.bound
            )));
        }
        let rest = self.factor(m)?;
        // Trial division stopped at the first prime where the cofactor fit;
        // the remaining factors all have larger indices.
        entries.extend_from_slice(rest.entries());
        Ok(Factorization { entries })
    }

    /// Ω(n) for `1 <= n <= bound`.
    pub fn omega(&self, n: u64) -> Result<u32> {
        Ok(self.factor(n)?.omega())
    }

    /// Whether `n` lies in the unital multiplicative semigroup generated by
    /// the primes whose indices are in `index_set`.
    pub fn semigroup_member(&self, n: u64, index_set: &BTreeSet<usize>) -> Result<bool> {
        Ok(self
            .factor_smooth(n)?
            .entries()
            .iter()
            .all(|(i, _)| index_set.contains(i)))
    }
}
