//! Quantities at primorials `N_n = p_1 ⋯ p_n`, all kept in log space:
//! `log N_n = θ(p_n)` and `log(ψ(N_n)/N_n) = Σ log(1 + 1/p_i)`.
//! `N_n` itself is never formed.

use serde::Serialize;

use crate::bounds::{BoundCheckResult, BoundKind, WorstMargin};
use crate::constants::{E_GAMMA, ZETA2};
use crate::dd::DoubleDouble;
use crate::prime_engine::{nth_prime_upper_bound, PrimeStream, ThetaCache};
use crate::{Error, Result, PRIME_INDEX_CEILING};

/// Smallest prime from which the two explicit primorial bounds are claimed.
pub const BOUND_PRIME_THRESHOLD: u64 = 20_000;

/// Running state after absorbing `p_1, …, p_index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimorialState {
    pub index: u64,
    pub prime: u64,
    /// `θ(p_n) = log N_n`.
    pub theta: DoubleDouble,
    /// `R_n = Σ_{i≤n} log1p(1/p_i) = log(ψ(N_n)/N_n)`.
    pub psi_ratio_log: DoubleDouble,
}

impl PrimorialState {
    /// `log log N_n = log θ(p_n)`.
    pub fn loglog_n(&self) -> f64 {
        self.theta.hi.ln() + self.theta.lo / self.theta.hi
    }

    /// `ψ(N_n)/N_n`.
    pub fn psi_ratio(&self) -> f64 {
        self.psi_ratio_log.to_f64().exp()
    }

    /// `f(N_n)`, which equals `g(N_n)` because `N_n` is squarefree.
    pub fn f_value(&self) -> f64 {
        self.psi_ratio() - E_GAMMA * self.loglog_n()
    }

    pub fn mertens_ratio(&self) -> f64 {
        self.psi_ratio() / (self.prime as f64).ln()
    }
}

/// Walks the primes once, maintaining both compensated running sums.
pub struct PrimorialWalker {
    primes: PrimeStream,
    state: PrimorialState,
}

impl PrimorialWalker {
    /// A walker able to reach index `n_max`.
    pub fn new(n_max: u64) -> Result<Self> {
        check_ceiling(n_max, "n_max")?;
        Ok(PrimorialWalker {
            primes: PrimeStream::new(0, nth_prime_upper_bound(n_max))?,
            state: PrimorialState {
                index: 0,
                prime: 1,
                theta: DoubleDouble::ZERO,
                psi_ratio_log: DoubleDouble::ZERO,
            },
        })
    }
}

impl Iterator for PrimorialWalker {
    type Item = PrimorialState;

    fn next(&mut self) -> Option<PrimorialState> {
        let p = self.primes.next()?;
        let s = &mut self.state;
        s.index += 1;
        s.prime = p;
        s.theta += (p as f64).ln();
        s.psi_ratio_log += (1.0 / p as f64).ln_1p();
        Some(*s)
    }
}

fn check_ceiling(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(format!("{what} must be ≥ 1 (got 0)")));
    }
    if n > PRIME_INDEX_CEILING {
        return Err(Error::resource(format!(
            "{what}={n} above the prime-index ceiling {PRIME_INDEX_CEILING}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimorialStats {
    pub index: u64,
    pub prime: u64,
    pub theta: DoubleDouble,
    pub loglog_n: f64,
    pub psi_ratio_log: DoubleDouble,
    pub f_value: f64,
    pub mertens_ratio: f64,
}

impl From<PrimorialState> for PrimorialStats {
    fn from(s: PrimorialState) -> Self {
        PrimorialStats {
            index: s.index,
            prime: s.prime,
            theta: s.theta,
            loglog_n: s.loglog_n(),
            psi_ratio_log: s.psi_ratio_log,
            f_value: s.f_value(),
            mertens_ratio: s.mertens_ratio(),
        }
    }
}

/// Stats at each of `report_indices` (all in `1..=n_max`), in increasing
/// index order, from a single pass over the primes.
pub fn stats_stream(n_max: u64, report_indices: &[u64]) -> Result<Vec<PrimorialStats>> {
    check_ceiling(n_max, "n_max")?;
    let mut wanted: Vec<u64> = report_indices.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    if let Some(&bad) = wanted.iter().find(|&&i| i == 0 || i > n_max) {
        return Err(Error::domain(format!(
            "report index {bad} outside 1..={n_max}"
        )));
    }
    let mut out = Vec::with_capacity(wanted.len());
    let mut next = wanted.iter().peekable();
    for s in PrimorialWalker::new(n_max)? {
        if next.peek().is_some_and(|&&w| w == s.index) {
            out.push(PrimorialStats::from(s));
            next.next();
        }
        if s.index == n_max {
            break;
        }
    }
    Ok(out)
}

/// Stats at the given indices, sieving only as far as the largest.
pub fn stats_at(indices: &[u64]) -> Result<Vec<PrimorialStats>> {
    let n_max = indices.iter().copied().max().unwrap_or(1);
    stats_stream(n_max, indices)
}

/// `ψ(N_n)/(N_n log p_n)`, tending to `e^γ/ζ(2)`.
pub fn mertens_ratio(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("n must be ≥ 2 (got {n})")));
    }
    Ok(stats_stream(n, &[n])?[0].mertens_ratio)
}

/// `f̃(N_{n+1})/f̃(N_n) − 1` from `θ(p_n)` and `p_{n+1}`, where
/// `f̃(m) = ψ(m)/(m log log m)`.
///
/// With `L = log θ(p_n)`, `a = 1/p_{n+1}` and
/// `Δ = log1p(log p_{n+1} / θ(p_n))` the deviation is `(aL − Δ)/(L + Δ)`.
/// Both terms of the numerator are about `1/p` while their difference is
/// smaller by the factor `1 − θ/p`, so this form must not be replaced by a
/// quotient of two f̃ values.
pub fn ftilde_deviation(theta: DoubleDouble, next_prime: u64) -> f64 {
    let l = theta.hi.ln() + theta.lo / theta.hi;
    let q = next_prime as f64;
    let a = 1.0 / q;
    let delta = (q.ln() / theta.to_f64()).ln_1p();
    a.mul_add(l, -delta) / (l + delta)
}

pub fn ftilde_ratio_deviation(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!(
            "n must be ≥ 2 so that log log N_n > 0 (got {n})"
        )));
    }
    check_ceiling(n + 1, "n+1")?;
    let mut walker = PrimorialWalker::new(n + 1)?;
    let at_n = walker.nth((n - 1) as usize).expect("walker reaches n");
    let succ = walker.next().expect("walker reaches n+1");
    Ok(ftilde_deviation(at_n.theta, succ.prime))
}

/// `k log k / (q log q)` with `k = p + ½√p·log log log p`.
pub fn k_ratio_from(p: u64, next_prime: u64) -> f64 {
    let pf = p as f64;
    let log3 = pf.ln().ln().ln();
    let k = pf + 0.5 * pf.sqrt() * log3;
    let q = next_prime as f64;
    (k * k.ln()) / (q * q.ln())
}

pub fn k_ratio(n: u64) -> Result<f64> {
    if n < 7 {
        return Err(Error::domain(format!(
            "n must be ≥ 7 so that log log log p_n is defined (got {n})"
        )));
    }
    check_ceiling(n + 1, "n+1")?;
    let mut walker = PrimorialWalker::new(n + 1)?;
    let at_n = walker.nth((n - 1) as usize).expect("walker reaches n");
    let succ = walker.next().expect("walker reaches n+1");
    Ok(k_ratio_from(at_n.prime, succ.prime))
}

/// Index of the first prime `≥ p`.
pub fn first_index_at_or_above(p: u64) -> Result<u64> {
    let count = PrimeStream::new(0, p.max(1))?.count() as u64;
    Ok(count + 1)
}

/// Right-hand side `−0.698 log p + 0.220/log p` of the `f(N_n)` bound.
pub fn f_bound_rhs(p: f64) -> f64 {
    let lp = p.ln();
    -0.698 * lp + 0.220 / lp
}

/// Right-hand side `log p − 0.123/log p` of the `log log N_n` bound.
pub fn loglog_bound_rhs(p: f64) -> f64 {
    let lp = p.ln();
    lp - 0.123 / lp
}

/// `e^γ (1/ζ(2) − 1)`, the slope of `f(N_n)` against `log p_n`.
pub fn mertens_shift() -> f64 {
    E_GAMMA * (1.0 / ZETA2 - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FBoundReport {
    pub check: BoundCheckResult,
    /// The right side evaluated at `p = 20000`.
    pub rhs_at_threshold: f64,
    pub mertens_shift: f64,
}

fn check_bound_range(first: u64, last: u64) -> Result<()> {
    check_ceiling(last, "last")?;
    if first == 0 || first > last {
        return Err(Error::domain(format!(
            "need 1 ≤ first ≤ last (first={first}, last={last})"
        )));
    }
    Ok(())
}

/// Both explicit primorial bounds over `first..=last` in one pass.
pub fn check_primorial_bounds(first: u64, last: u64) -> Result<(BoundCheckResult, FBoundReport)> {
    check_bound_range(first, last)?;
    let mut loglog = WorstMargin::new();
    let mut fbound = WorstMargin::new();
    for s in PrimorialWalker::new(last)? {
        if s.index < first {
            continue;
        }
        if s.index == first && s.prime < BOUND_PRIME_THRESHOLD {
            return Err(Error::domain(format!(
                "first={first} has p_first={} < {BOUND_PRIME_THRESHOLD}; the bounds are not claimed there",
                s.prime
            )));
        }
        let p = s.prime as f64;
        loglog.observe(s.loglog_n() - loglog_bound_rhs(p), s.index);
        fbound.observe(f_bound_rhs(p) - s.f_value(), s.index);
        if s.index == last {
            break;
        }
    }
    Ok((
        loglog.finish(BoundKind::LoglogNLower, (first, last), 0),
        FBoundReport {
            check: fbound.finish(BoundKind::FPrimorialUpper, (first, last), 0),
            rhs_at_threshold: f_bound_rhs(BOUND_PRIME_THRESHOLD as f64),
            mertens_shift: mertens_shift(),
        },
    ))
}

pub fn check_loglog_n_lower_bound(first: u64, last: u64) -> Result<BoundCheckResult> {
    Ok(check_primorial_bounds(first, last)?.0)
}

pub fn check_f_primorial_bound(first: u64, last: u64) -> Result<FBoundReport> {
    Ok(check_primorial_bounds(first, last)?.1)
}

/// Rounds to `digits` decimals, ties to even on the exact binary value.
pub fn round_half_even(x: f64, digits: usize) -> String {
    // std formatting rounds the exact decimal expansion half-to-even
    format!("{x:.digits$}")
}

/// Digits printed in the reference tables, used when a row index matches
/// one of the published columns.
pub fn table1_printed_digits(n: u64) -> Option<[usize; 3]> {
    match n {
        10 => Some([3, 3, 3]),
        1_000 => Some([3, 7, 5]),
        100_000 => Some([5, 11, 6]),
        10_000_000 => Some([6, 14, 7]),
        _ => None,
    }
}

const TABLE1_DEFAULT_DIGITS: [usize; 3] = [6, 14, 7];
pub const TABLE2_DIGITS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub n: u64,
    pub prime: u64,
    pub next_prime: u64,
    pub theta: DoubleDouble,
    /// `θ(p_n)/p_n`.
    pub theta_ratio: f64,
    /// `f̃(N_{n+1})/f̃(N_n)`; absent for `n < 2`.
    pub ftilde_ratio: Option<f64>,
    pub ftilde_deviation: Option<f64>,
    /// Absent for `n < 7`.
    pub k_ratio: Option<f64>,
    pub digits: [usize; 3],
    pub printed: [Option<String>; 3],
}

fn table1_row(point_theta: DoubleDouble, n: u64, prime: u64, next_prime: u64) -> Table1Row {
    let theta_ratio = (point_theta / DoubleDouble::from_u64(prime)).to_f64();
    let ftilde_deviation = (n >= 2).then(|| ftilde_deviation(point_theta, next_prime));
    let ftilde_ratio = ftilde_deviation.map(|d| 1.0 + d);
    let k_ratio = (n >= 7).then(|| k_ratio_from(prime, next_prime));
    let digits = table1_printed_digits(n).unwrap_or(TABLE1_DEFAULT_DIGITS);
    let printed = [
        Some(round_half_even(theta_ratio, digits[0])),
        ftilde_ratio.map(|v| round_half_even(v, digits[1])),
        k_ratio.map(|v| round_half_even(v, digits[2])),
    ];
    Table1Row {
        n,
        prime,
        next_prime,
        theta: point_theta,
        theta_ratio,
        ftilde_ratio,
        ftilde_deviation,
        k_ratio,
        digits,
        printed,
    }
}

/// Rows of θ(p_n)/p_n, the f̃ successor ratio and the k-ratio, in the
/// order of `indices`. With a cache, each index resumes from its nearest
/// checkpoint.
pub fn table1(indices: &[u64], cache: Option<&ThetaCache>) -> Result<Vec<Table1Row>> {
    for &n in indices {
        check_ceiling(n, "index")?;
        check_ceiling(n + 1, "index+1")?;
    }
    if let Some(cache) = cache {
        return indices
            .iter()
            .map(|&n| {
                let (pt, next) = cache.point_and_successor(n)?;
                Ok(table1_row(pt.theta(), n, pt.prime, next))
            })
            .collect();
    }
    let n_max = indices.iter().copied().max().unwrap_or(0);
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let mut wanted: Vec<u64> = indices.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let mut found: Vec<(u64, PrimorialState, u64)> = Vec::new();
    let mut pending: Option<PrimorialState> = None;
    let mut want = wanted.iter().peekable();
    for s in PrimorialWalker::new(n_max + 1)? {
        if let Some(prev) = pending.take() {
            found.push((prev.index, prev, s.prime));
        }
        if want.peek().is_some_and(|&&w| w == s.index) {
            pending = Some(s);
            want.next();
        }
        if s.index == n_max + 1 {
            break;
        }
    }
    Ok(indices
        .iter()
        .map(|&n| {
            let (_, s, next) = found.iter().find(|(i, _, _)| *i == n).expect("walked");
            table1_row(s.theta, n, s.prime, *next)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Row {
    pub n: u64,
    pub prime: u64,
    pub f_value: f64,
    pub printed: String,
    pub stats: PrimorialStats,
}

/// `f(N_n)` at each index, in the order given.
pub fn table2(indices: &[u64]) -> Result<Vec<Table2Row>> {
    for &n in indices {
        check_ceiling(n, "index")?;
    }
    let stats = stats_at(indices)?;
    Ok(indices
        .iter()
        .map(|&n| {
            let s = *stats.iter().find(|s| s.index == n).expect("requested");
            Table2Row {
                n,
                prime: s.prime,
                f_value: s.f_value,
                printed: round_half_even(s.f_value, TABLE2_DIGITS),
                stats: s,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{arith, criteria};

    #[test]
    fn rounding_is_half_even() {
        assert_eq!(round_half_even(0.125, 2), "0.12");
        assert_eq!(round_half_even(0.375, 2), "0.38");
        assert_eq!(round_half_even(2.5, 0), "2");
        assert_eq!(round_half_even(-1.6756, 2), "-1.68");
    }

    #[test]
    fn index_ten_components() {
        let s = stats_stream(10, &[3, 10]).unwrap();
        assert!((s[0].f_value - 0.22).abs() < 5e-3);
        let s10 = s[1];
        assert_eq!(s10.prime, 29);
        assert!((s10.theta.to_f64() - 22.590_394_530_115_656).abs() < 1e-12);
        assert!((s10.psi_ratio_log.to_f64().exp() - 3.876_886_385_229_737).abs() < 1e-12);
        assert!((s10.f_value + 1.675_651_039_794_588_7).abs() < 1e-12);
        assert!((s10.mertens_ratio - 1.151_335_249_699_552).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_exact_arithmetic_while_n_fits() {
        let stats = stats_stream(14, &(1..=14).collect::<Vec<_>>()).unwrap();
        let mut n_k = 1u64;
        for s in stats {
            n_k *= s.prime;
            let psi = arith::dedekind_psi(n_k).unwrap();
            let exact = psi as f64 / n_k as f64;
            assert!((s.psi_ratio_log.to_f64().exp() / exact - 1.0).abs() < 1e-14);
            if n_k >= 2 {
                let f = criteria::dedekind_f(n_k).unwrap().value;
                let g = criteria::robin_g(n_k).unwrap().value;
                assert!((s.f_value - f).abs() < 1e-10);
                assert!((s.f_value - g).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn domain_guards() {
        assert!(matches!(mertens_ratio(1), Err(Error::Domain(_))));
        assert!(matches!(ftilde_ratio_deviation(1), Err(Error::Domain(_))));
        assert!(matches!(k_ratio(6), Err(Error::Domain(_))));
        assert!(matches!(stats_stream(10, &[11]), Err(Error::Domain(_))));
        assert!(matches!(
            stats_stream(PRIME_INDEX_CEILING + 1, &[]),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            check_loglog_n_lower_bound(100, 3000),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn small_index_values() {
        assert!((1.0 + ftilde_ratio_deviation(10).unwrap() - 0.987).abs() < 1e-3);
        assert!((k_ratio(10).unwrap() - 0.938_791_086_236_013_5).abs() < 1e-12);
        assert!((k_ratio(1000).unwrap() - 1.00378).abs() < 1e-5);
        assert!((mertens_ratio(10).unwrap() - 1.1513).abs() < 1e-4);
    }

    #[test]
    fn threshold_index() {
        assert_eq!(first_index_at_or_above(20_000).unwrap(), 2263);
        assert_eq!(first_index_at_or_above(2).unwrap(), 1);
        assert_eq!(first_index_at_or_above(3).unwrap(), 2);
    }

    #[test]
    fn bounds_hold_past_threshold_sample() {
        let (ll, fb) = check_primorial_bounds(2263, 20_000).unwrap();
        assert!(ll.pass && fb.check.pass);
        assert!((fb.rhs_at_threshold + 6.89).abs() < 0.01);
        assert!((fb.mertens_shift + 0.698).abs() < 0.001);
    }

    #[test]
    fn table1_cached_and_cold_agree() {
        let cache = ThetaCache::build(3000, 500).unwrap();
        let cold = table1(&[10, 1000, 2999], None).unwrap();
        let warm = table1(&[10, 1000, 2999], Some(&cache)).unwrap();
        assert_eq!(cold, warm);
        assert_eq!(cold[0].printed[0].as_deref(), Some("0.779"));
        assert_eq!(cold[0].printed[1].as_deref(), Some("0.987"));
    }

    #[test]
    fn table2_small() {
        let rows = table2(&[10, 3]).unwrap();
        assert_eq!(rows[0].n, 10);
        assert_eq!(rows[1].printed, "0.22");
    }
}
