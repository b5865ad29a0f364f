//! Exact multiplicative functions: Dedekind ψ, σ and d.
//!
//! Single values go through [`factorize`]; dense ranges go through
//! [`DivisorSieve`], which factors a whole window at once by striking out
//! prime powers.

use std::sync::LazyLock;

use serde::Serialize;

use crate::prime_engine::simple_sieve;
use crate::{Error, Result, BULK_SCAN_CEILING};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn psi(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e - 1) * (p as u128 + 1))
            .product()
    }

    pub fn sigma(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = p as u128;
                (p.pow(e + 1) - 1) / (p - 1)
            })
            .product()
    }

    pub fn num_divisors(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

/// Smallest-prime-factor table for `2 ≤ m ≤ limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    table: Vec<u32>,
}

impl SpfTable {
    pub const DEFAULT_LIMIT: u64 = 10_000_000;

    pub fn new(limit: u64) -> Result<Self> {
        if limit > BULK_SCAN_CEILING {
            return Err(Error::resource(format!(
                "SpfTable limit {limit} above {BULK_SCAN_CEILING}"
            )));
        }
        let n = limit as usize;
        let mut table = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        // linear sieve
        for i in 2..=n {
            if table[i] == 0 {
                table[i] = i as u32;
                primes.push(i as u32);
            }
            let spf_i = table[i];
            for &p in &primes {
                if p > spf_i || (p as usize) * i > n {
                    break;
                }
                table[p as usize * i] = p;
            }
        }
        Ok(SpfTable { limit, table })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `m` for `2 ≤ m ≤ limit`.
    pub fn spf(&self, m: u64) -> Option<u64> {
        if m < 2 || m > self.limit {
            None
        } else {
            Some(self.table[m as usize] as u64)
        }
    }
}

// primes below 2^16, enough to fully trial-divide anything below 2^32
static SMALL_PRIMES: LazyLock<Vec<u64>> = LazyLock::new(|| simple_sieve(1 << 16));

fn check_positive(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("n must be ≥ 1 (got 0)"))
    } else {
        Ok(())
    }
}

pub fn factorize(n: u64, accel: Option<&SpfTable>) -> Result<Factorization> {
    check_positive(n)?;
    let mut factors = Vec::new();
    let mut rem = n;

    if let Some(t) = accel.filter(|t| n <= t.limit) {
        while rem > 1 {
            let p = t.table[rem as usize] as u64;
            let mut e = 0;
            while rem.is_multiple_of(p) {
                rem /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        return Ok(Factorization { n, factors });
    }

    let mut strike = |p: u64, rem: &mut u64| {
        if (*rem).is_multiple_of(p) {
            let mut e = 0;
            while (*rem).is_multiple_of(p) {
                *rem /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    };
    for &p in SMALL_PRIMES.iter() {
        if p * p > rem {
            break;
        }
        strike(p, &mut rem);
    }
    if rem >= 1 << 32 {
        // 6k±1 wheel past the table; only reached for large prime factors
        let mut d: u64 = (1 << 16) + 1; // 65537 ≡ 5 (mod 6)
        while d.checked_mul(d).is_some_and(|sq| sq <= rem) {
            strike(d, &mut rem);
            strike(d + 2, &mut rem);
            d += 6;
        }
    }
    if rem > 1 {
        factors.push((rem, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn dedekind_psi(n: u64) -> Result<u128> {
    Ok(factorize(n, None)?.psi())
}

pub fn sigma(n: u64) -> Result<u128> {
    Ok(factorize(n, None)?.sigma())
}

pub fn num_divisors(n: u64) -> Result<u64> {
    Ok(factorize(n, None)?.num_divisors())
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n, None)?.is_squarefree())
}

/// ψ, σ and d of one integer from a bulk window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithValues {
    pub n: u64,
    pub psi: u64,
    pub sigma: u64,
    pub divisors: u32,
}

impl ArithValues {
    pub fn is_squarefree(&self) -> bool {
        self.psi == self.sigma
    }
}

/// Computes ψ, σ, d for every integer of a window `[lo, hi)` with
/// `hi ≤ BULK_SCAN_CEILING` (values fit in `u64` there since σ(n) < 10n).
#[derive(Debug, Clone)]
pub struct DivisorSieve {
    primes: Vec<u64>,
    hi_max: u64,
}

impl DivisorSieve {
    pub fn new(hi_max: u64) -> Result<Self> {
        if hi_max > BULK_SCAN_CEILING {
            return Err(Error::resource(format!(
                "hi={hi_max} above bulk ceiling {BULK_SCAN_CEILING}"
            )));
        }
        let root = (hi_max as f64).sqrt() as u64 + 2;
        Ok(DivisorSieve {
            primes: simple_sieve(root),
            hi_max,
        })
    }

    pub fn window(&self, lo: u64, hi: u64) -> Vec<ArithValues> {
        assert!(1 <= lo && lo <= hi && hi <= self.hi_max);
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut vals: Vec<ArithValues> = (lo..hi)
            .map(|n| ArithValues {
                n,
                psi: 1,
                sigma: 1,
                divisors: 1,
            })
            .collect();
        for &p in &self.primes {
            if p * p >= hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                let mut r = rem[i];
                let mut e = 0u32;
                let mut pe = 1u64;
                while r.is_multiple_of(p) {
                    r /= p;
                    e += 1;
                    pe *= p;
                }
                rem[i] = r;
                let v = &mut vals[i];
                v.psi *= (pe / p) * (p + 1);
                v.sigma *= (pe * p - 1) / (p - 1);
                v.divisors *= e + 1;
                m += p;
            }
        }
        for i in 0..len {
            let q = rem[i];
            if q > 1 {
                let v = &mut vals[i];
                v.psi *= q + 1;
                v.sigma *= q + 1;
                v.divisors *= 2;
            }
        }
        vals
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors_brute(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1, None).unwrap().factors().is_empty());
        assert_eq!(
            factorize(5040, None).unwrap().factors(),
            &[(2, 4), (3, 2), (5, 1), (7, 1)]
        );
        assert_eq!(
            factorize(2310, None).unwrap().factors(),
            &[(2, 1), (3, 1), (5, 1), (7, 1), (11, 1)]
        );
        assert!(matches!(factorize(0, None), Err(Error::Domain(_))));
    }

    #[test]
    fn factorize_large_values() {
        let n = 1_000_003u64 * 1_000_033 * 65_537;
        assert_eq!(
            factorize(n, None).unwrap().factors(),
            &[(65_537, 1), (1_000_003, 1), (1_000_033, 1)]
        );
        assert_eq!(factorize(1 << 63, None).unwrap().factors(), &[(2, 63)]);
        let f = factorize(u64::MAX, None).unwrap();
        assert_eq!(
            f.factors().iter().map(|&(p, e)| p.pow(e)).product::<u64>(),
            u64::MAX
        );
    }

    #[test]
    fn accelerated_matches_trial_division() {
        let t = SpfTable::new(50_000).unwrap();
        for n in 1..50_000 {
            assert_eq!(factorize(n, Some(&t)).unwrap(), factorize(n, None).unwrap());
        }
        assert_eq!(t.spf(49_999), Some(49_999));
        assert_eq!(t.spf(49_975), Some(5));
        assert_eq!(t.spf(49_994), Some(2));
        assert_eq!(t.spf(49_987), Some(7));
        assert_eq!(t.spf(1), None);
    }

    #[test]
    fn function_examples() {
        assert_eq!(dedekind_psi(1).unwrap(), 1);
        assert_eq!(dedekind_psi(10).unwrap(), 18);
        assert_eq!(dedekind_psi(12).unwrap(), 24);
        assert_eq!(dedekind_psi(12).unwrap(), 2 * dedekind_psi(6).unwrap());
        assert_eq!(sigma(1).unwrap(), 1);
        assert_eq!(sigma(12).unwrap(), 28);
        assert_eq!(sigma(5040).unwrap(), 19344);
        assert_eq!(num_divisors(1).unwrap(), 1);
        assert_eq!(num_divisors(12).unwrap(), 6);
        assert_eq!(num_divisors(5040).unwrap(), 60);
        assert!(is_squarefree(30).unwrap());
        assert!(!is_squarefree(12).unwrap());
        assert!(is_squarefree(1).unwrap());
        for f in [dedekind_psi, sigma] {
            assert!(matches!(f(0), Err(Error::Domain(_))));
        }
        assert!(num_divisors(0).is_err());
        assert!(is_squarefree(0).is_err());
    }

    #[test]
    fn sigma_and_d_match_divisor_enumeration() {
        for n in 1..=2000u64 {
            let ds = divisors_brute(n);
            assert_eq!(sigma(n).unwrap(), ds.iter().sum::<u64>() as u128, "n={n}");
            assert_eq!(num_divisors(n).unwrap(), ds.len() as u64, "n={n}");
        }
    }

    #[test]
    fn sigma_of_u64_max_does_not_overflow() {
        let f = factorize(u64::MAX, None).unwrap();
        assert!(f.sigma() > u64::MAX as u128);
        assert!(f.psi() <= f.sigma());
    }

    #[test]
    fn divisor_sieve_matches_factorize() {
        let s = DivisorSieve::new(200_000).unwrap();
        for (lo, hi) in [(1, 1000), (99_000, 101_000), (150_001, 150_002)] {
            for v in s.window(lo, hi) {
                let f = factorize(v.n, None).unwrap();
                assert_eq!(v.psi as u128, f.psi());
                assert_eq!(v.sigma as u128, f.sigma());
                assert_eq!(v.divisors as u64, f.num_divisors());
            }
        }
        assert!(DivisorSieve::new(BULK_SCAN_CEILING + 1).is_err());
    }
}
