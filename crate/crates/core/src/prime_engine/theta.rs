use serde::{Deserialize, Serialize};

use super::sieve::{check_index, nth_prime_upper_bound, PrimeStream};
use crate::dd::DoubleDouble;
use crate::{Error, Result};

/// θ(p_n) = Σ_{i≤n} log p_i, carried as `theta_hi + theta_lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub index: u64,
    pub prime: u64,
    pub theta_hi: f64,
    pub theta_lo: f64,
}

impl ThetaPoint {
    pub fn theta(&self) -> DoubleDouble {
        DoubleDouble {
            hi: self.theta_hi,
            lo: self.theta_lo,
        }
    }

    /// θ(p_n)/p_n.
    pub fn ratio(&self) -> f64 {
        (self.theta() / DoubleDouble::from_u64(self.prime)).to_f64()
    }
}

/// Running θ over a prime stream. Each `log p` is a binary64 value; the
/// sum itself is kept in double-double so accumulation error stays far
/// below the per-term rounding.
#[derive(Debug, Clone, Copy)]
pub struct ThetaAccumulator {
    index: u64,
    prime: u64,
    sum: DoubleDouble,
}

impl Default for ThetaAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl ThetaAccumulator {
    pub fn new() -> Self {
        ThetaAccumulator {
            index: 0,
            prime: 1,
            sum: DoubleDouble::ZERO,
        }
    }

    /// Resumes after a stored point.
    pub fn resume(point: &ThetaPoint) -> Self {
        ThetaAccumulator {
            index: point.index,
            prime: point.prime,
            sum: point.theta(),
        }
    }

    #[inline]
    pub fn push(&mut self, p: u64) {
        debug_assert!(p > self.prime);
        self.index += 1;
        self.prime = p;
        self.sum += (p as f64).ln();
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn theta(&self) -> DoubleDouble {
        self.sum
    }

    pub fn point(&self) -> ThetaPoint {
        ThetaPoint {
            index: self.index,
            prime: self.prime,
            theta_hi: self.sum.hi,
            theta_lo: self.sum.lo,
        }
    }
}

/// Points at every multiple of `stride` up to `n_max`, merged with the
/// explicitly requested `extra` indices (those above `n_max` are ignored).
pub fn theta_stream(n_max: u64, stride: u64, extra: &[u64]) -> Result<Vec<ThetaPoint>> {
    check_index(n_max, "n_max")?;
    if stride == 0 {
        return Err(Error::domain("stride must be ≥ 1 (got 0)"));
    }
    let mut wanted: Vec<u64> = extra
        .iter()
        .copied()
        .filter(|&i| i >= 1 && i <= n_max)
        .collect();
    wanted.sort_unstable();
    wanted.dedup();
    let mut wanted = wanted.into_iter().peekable();

    let mut acc = ThetaAccumulator::new();
    let mut out = Vec::new();
    for p in PrimeStream::new(0, nth_prime_upper_bound(n_max))? {
        acc.push(p);
        let i = acc.index();
        let mut emit = i.is_multiple_of(stride);
        while wanted.peek().is_some_and(|&w| w <= i) {
            emit |= wanted.next() == Some(i);
        }
        if emit {
            out.push(acc.point());
        }
        if i == n_max {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_of_29() {
        let pts = theta_stream(10, 10, &[]).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].index, 10);
        assert_eq!(pts[0].prime, 29);
        assert!((pts[0].theta().to_f64() - 22.590394).abs() < 1e-6);
        assert!((pts[0].ratio() - 0.779).abs() < 5e-4);
    }

    #[test]
    fn extra_indices_are_emitted() {
        let pts = theta_stream(1000, 400, &[10, 1000, 5000]).unwrap();
        let idx: Vec<u64> = pts.iter().map(|p| p.index).collect();
        assert_eq!(idx, vec![10, 400, 800, 1000]);
    }

    #[test]
    fn stream_is_increasing_and_below_p() {
        let pts = theta_stream(20_000, 1, &[]).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].theta().total_cmp(&w[0].theta()).is_gt());
        }
        for p in &pts {
            assert!(p.theta().to_f64() < p.prime as f64);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(theta_stream(0, 1, &[]), Err(Error::Domain(_))));
        assert!(matches!(theta_stream(10, 0, &[]), Err(Error::Domain(_))));
        assert!(matches!(
            theta_stream(crate::PRIME_INDEX_CEILING + 1, 1, &[]),
            Err(Error::Resource(_))
        ));
    }
}
