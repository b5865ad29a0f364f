use serde::Serialize;

use crate::{Error, Result, PRIME_INDEX_CEILING, SIEVE_CEILING};

/// Odd numbers covered by one sieve segment.
pub const DEFAULT_SEGMENT_ODDS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

/// Plain sieve of Eratosthenes returning all primes `< limit`.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit];
    let mut primes = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Ordered stream of the primes in `[lo, hi)`, produced one segment at a
/// time.
pub struct PrimeStream {
    hi: u64,
    // odd base primes with p² < hi
    base: Vec<u64>,
    segment_odds: usize,
    // first odd number of the next segment to sieve
    next_odd: u64,
    pending_two: bool,
    buf: Vec<u64>,
    pos: usize,
    marks: Vec<bool>,
}

impl PrimeStream {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        Self::with_segment(lo, hi, DEFAULT_SEGMENT_ODDS)
    }

    pub fn with_segment(lo: u64, hi: u64, segment_odds: usize) -> Result<Self> {
        if hi <= lo {
            return Err(Error::domain(format!(
                "hi must exceed lo (lo={lo}, hi={hi})"
            )));
        }
        if hi > SIEVE_CEILING {
            return Err(Error::resource(format!(
                "hi={hi} is above the sieve ceiling {SIEVE_CEILING}"
            )));
        }
        if segment_odds == 0 {
            return Err(Error::domain("segment size must be positive"));
        }
        let root = isqrt(hi - 1);
        let base = simple_sieve(root + 1)
            .into_iter()
            .filter(|&p| p != 2)
            .collect();
        let first_odd = if lo <= 3 { 3 } else { lo | 1 };
        Ok(PrimeStream {
            hi,
            base,
            segment_odds,
            next_odd: first_odd,
            pending_two: lo <= 2 && hi > 2,
            buf: Vec::new(),
            pos: 0,
            marks: vec![false; segment_odds],
        })
    }

    fn fill(&mut self) -> bool {
        self.buf.clear();
        self.pos = 0;
        while self.buf.is_empty() {
            if self.next_odd >= self.hi {
                return false;
            }
            let start = self.next_odd;
            let span = ((self.hi - start).div_ceil(2)).min(self.segment_odds as u64) as usize;
            let marks = &mut self.marks[..span];
            marks.fill(false);
            let end = start + 2 * span as u64; // exclusive, odd
            for &p in &self.base {
                let sq = p * p;
                if sq >= end {
                    break;
                }
                let mut m = if sq >= start {
                    sq
                } else {
                    let r = start % p;
                    let first = if r == 0 { start } else { start + (p - r) };
                    // only odd multiples
                    if first % 2 == 0 {
                        first + p
                    } else {
                        first
                    }
                };
                while m < end {
                    marks[((m - start) / 2) as usize] = true;
                    m += 2 * p;
                }
            }
            for (i, &composite) in marks.iter().enumerate() {
                if !composite {
                    let v = start + 2 * i as u64;
                    if v > 1 {
                        self.buf.push(v);
                    }
                }
            }
            self.next_odd = end;
        }
        true
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pending_two {
            self.pending_two = false;
            return Some(2);
        }
        if self.pos == self.buf.len() && !self.fill() {
            return None;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// All primes in `[lo, hi)`.
pub fn sieve_range(lo: u64, hi: u64) -> Result<PrimeRange> {
    sieve_range_with_segment(lo, hi, DEFAULT_SEGMENT_ODDS)
}

pub fn sieve_range_with_segment(lo: u64, hi: u64, segment_odds: usize) -> Result<PrimeRange> {
    let primes = PrimeStream::with_segment(lo, hi, segment_odds)?.collect();
    Ok(PrimeRange { lo, hi, primes })
}

/// An upper bound on `p_n`, valid for all `n ≥ 1`
/// (`p_n < n(ln n + ln ln n)` for `n ≥ 6`).
pub fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 14;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

pub(crate) fn check_index(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(format!("{what} must be ≥ 1 (got 0)")));
    }
    if n > PRIME_INDEX_CEILING {
        return Err(Error::resource(format!(
            "{what}={n} is above the prime-index ceiling {PRIME_INDEX_CEILING}"
        )));
    }
    Ok(())
}

/// The n-th prime, 1-indexed (`p₁ = 2`).
pub fn nth_prime(n: u64) -> Result<u64> {
    check_index(n, "n")?;
    let mut stream = PrimeStream::new(0, nth_prime_upper_bound(n))?;
    Ok(stream
        .nth((n - 1) as usize)
        .expect("upper bound on p_n holds"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_naive(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn first_primes() {
        assert_eq!(
            sieve_range(0, 30).unwrap().primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert!(sieve_range(30, 31).unwrap().primes.is_empty());
        assert_eq!(sieve_range(2, 3).unwrap().primes, vec![2]);
        assert_eq!(sieve_range(3, 4).unwrap().primes, vec![3]);
        assert!(sieve_range(0, 2).unwrap().primes.is_empty());
    }

    #[test]
    fn window_above_a_million_matches_trial_division() {
        let lo = 1_000_000;
        let hi = lo + 100;
        let expected: Vec<u64> = (lo..hi).filter(|&n| is_prime_naive(n)).collect();
        assert_eq!(sieve_range(lo, hi).unwrap().primes, expected);
        assert_eq!(expected.first(), Some(&1_000_003));
    }

    #[test]
    fn tiny_segments_agree_with_default() {
        let a = sieve_range_with_segment(10, 5000, 7).unwrap();
        let b = sieve_range(10, 5000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_ranges() {
        assert!(matches!(sieve_range(5, 5), Err(Error::Domain(_))));
        assert!(matches!(sieve_range(9, 3), Err(Error::Domain(_))));
        assert!(matches!(
            sieve_range(0, SIEVE_CEILING + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn nth_prime_examples() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(10).unwrap(), 29);
        assert_eq!(nth_prime(100_000).unwrap(), 1_299_709);
        assert!(matches!(nth_prime(0), Err(Error::Domain(_))));
        assert!(matches!(
            nth_prime(PRIME_INDEX_CEILING + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }
}
