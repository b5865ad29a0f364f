//! Robin's `g(n) = σ(n)/n − e^γ log log n` and the refined
//! `f(n) = ψ(n)/n − e^γ log log n`.
//!
//! Values are evaluated in binary64 from exact integer numerators. When
//! `|value|` falls inside [`ESCALATION_BAND`] the value is recomputed in
//! double-double so its sign can be trusted.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, ArithValues, DivisorSieve};
use crate::bounds::{BoundCheckResult, BoundKind, WorstMargin};
use crate::constants::{Constants, E_GAMMA};
use crate::dd::DoubleDouble;
use crate::{Error, Result, BULK_SCAN_CEILING};

/// Values closer to zero than this are re-evaluated in double-double.
pub const ESCALATION_BAND: f64 = 1e-9;

/// Default constant for the σ upper bound. The commonly quoted 0.6482
/// fails at `n = 12`; the equality constant there is 0.6482136494…
pub const SIGMA_BOUND_C: f64 = 0.6483;

/// Default window length for bulk scans.
pub const DEFAULT_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    /// `g(n)`, built on σ.
    RobinG,
    /// `f(n)`, built on ψ.
    DedekindF,
}

impl CriterionKind {
    pub fn numerator(self, v: &ArithValues) -> u64 {
        match self {
            CriterionKind::RobinG => v.sigma,
            CriterionKind::DedekindF => v.psi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionValue {
    pub n: u64,
    pub kind: CriterionKind,
    /// `σ(n)/n` or `ψ(n)/n`.
    pub ratio: f64,
    /// `e^γ log log n`.
    pub threshold: f64,
    pub value: f64,
    pub precision_escalated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionReport {
    pub kind: CriterionKind,
    pub lo: u64,
    pub hi: u64,
    pub exceptions: Vec<u64>,
    pub largest: Option<u64>,
    pub escalations: u64,
    /// Every `n` whose value needed double-double re-evaluation.
    pub escalated: Vec<u64>,
}

/// `e^γ · log(log n)`, one rounding per step.
#[inline]
pub fn threshold(n: u64) -> f64 {
    let l = (n as f64).ln();
    E_GAMMA * l.ln()
}

/// `numerator/n − e^γ log log n` in double-double.
pub fn value_dd(numerator: u128, n: u64) -> DoubleDouble {
    let c = Constants::get();
    let nn = DoubleDouble::from_u64(n);
    let ratio = DoubleDouble::from_u128(numerator) / nn;
    ratio - c.e_gamma * nn.ln().ln()
}

/// Evaluates a criterion from a precomputed exact numerator (σ(n) or ψ(n)).
pub fn evaluate(kind: CriterionKind, n: u64, numerator: u128) -> CriterionValue {
    debug_assert!(n >= 2);
    let ratio = numerator as f64 / n as f64;
    let threshold = threshold(n);
    let mut value = ratio - threshold;
    let mut precision_escalated = false;
    if value.abs() < ESCALATION_BAND {
        value = value_dd(numerator, n).to_f64();
        precision_escalated = true;
    }
    CriterionValue {
        n,
        kind,
        ratio,
        threshold,
        value,
        precision_escalated,
    }
}

fn check_n(n: u64) -> Result<()> {
    if n <= 1 {
        Err(Error::domain(format!(
            "n must be ≥ 2, log log n undefined (got {n})"
        )))
    } else {
        Ok(())
    }
}

pub fn robin_g(n: u64) -> Result<CriterionValue> {
    check_n(n)?;
    Ok(evaluate(CriterionKind::RobinG, n, arith::sigma(n)?))
}

pub fn dedekind_f(n: u64) -> Result<CriterionValue> {
    check_n(n)?;
    Ok(evaluate(
        CriterionKind::DedekindF,
        n,
        arith::dedekind_psi(n)?,
    ))
}

pub fn criterion(kind: CriterionKind, n: u64) -> Result<CriterionValue> {
    match kind {
        CriterionKind::RobinG => robin_g(n),
        CriterionKind::DedekindF => dedekind_f(n),
    }
}

pub(crate) fn check_bulk_range(lo: u64, hi: u64, min_lo: u64) -> Result<()> {
    if lo < min_lo {
        return Err(Error::domain(format!("lo must be ≥ {min_lo} (got {lo})")));
    }
    if hi <= lo {
        return Err(Error::domain(format!(
            "hi must exceed lo (lo={lo}, hi={hi})"
        )));
    }
    if hi > BULK_SCAN_CEILING {
        return Err(Error::resource(format!(
            "hi={hi} above bulk scan ceiling {BULK_SCAN_CEILING}"
        )));
    }
    Ok(())
}

/// Splits `[lo, hi)` into windows of `chunk` integers, evaluates them in
/// parallel and returns the per-window results in window order.
pub(crate) fn map_windows<T, F>(lo: u64, hi: u64, chunk: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[ArithValues]) -> T + Sync,
{
    if chunk == 0 {
        return Err(Error::domain("chunk must be ≥ 1 (got 0)"));
    }
    let sieve = DivisorSieve::new(hi)?;
    let starts: Vec<u64> = (lo..hi).step_by(chunk as usize).collect();
    Ok(starts
        .into_par_iter()
        .map(|a| {
            let b = (a + chunk).min(hi);
            f(&sieve.window(a, b))
        })
        .collect())
}

pub fn scan_exceptions(kind: CriterionKind, lo: u64, hi: u64) -> Result<ExceptionReport> {
    scan_exceptions_chunked(kind, lo, hi, DEFAULT_CHUNK)
}

/// All `n ∈ [lo, hi)` with criterion value `≥ 0`.
pub fn scan_exceptions_chunked(
    kind: CriterionKind,
    lo: u64,
    hi: u64,
    chunk: u64,
) -> Result<ExceptionReport> {
    check_bulk_range(lo, hi, 2)?;
    let parts = map_windows(lo, hi, chunk, |window| {
        let mut exceptions = Vec::new();
        let mut escalated = Vec::new();
        for v in window {
            let cv = evaluate(kind, v.n, kind.numerator(v) as u128);
            if cv.precision_escalated {
                escalated.push(v.n);
            }
            if cv.value >= 0.0 {
                exceptions.push(v.n);
            }
        }
        (exceptions, escalated)
    })?;
    let mut exceptions = Vec::new();
    let mut escalated = Vec::new();
    for (e, s) in parts {
        exceptions.extend(e);
        escalated.extend(s);
    }
    Ok(ExceptionReport {
        kind,
        lo,
        hi,
        largest: exceptions.last().copied(),
        exceptions,
        escalations: escalated.len() as u64,
        escalated,
    })
}

/// `e^γ log log n + c/log log n − σ(n)/n`, escalated near zero.
fn sigma_bound_margin(n: u64, sigma: u128, c: f64) -> (f64, bool) {
    let ll = (n as f64).ln().ln();
    let margin = E_GAMMA * ll + c / ll - sigma as f64 / n as f64;
    if margin.abs() >= ESCALATION_BAND {
        return (margin, false);
    }
    let k = Constants::get();
    let nn = DoubleDouble::from_u64(n);
    let lld = nn.ln().ln();
    let m = k.e_gamma * lld + DoubleDouble::from_f64(c) / lld - DoubleDouble::from_u128(sigma) / nn;
    (m.to_f64(), true)
}

/// Checks `σ(n)/n ≤ e^γ log log n + c/log log n` on `[lo, hi)`.
pub fn check_sigma_upper_bound(lo: u64, hi: u64, c: f64) -> Result<BoundCheckResult> {
    check_sigma_upper_bound_chunked(lo, hi, c, DEFAULT_CHUNK)
}

pub fn check_sigma_upper_bound_chunked(
    lo: u64,
    hi: u64,
    c: f64,
    chunk: u64,
) -> Result<BoundCheckResult> {
    check_bulk_range(lo, hi, 3)?;
    if !c.is_finite() {
        return Err(Error::domain(format!("c must be finite (got {c})")));
    }
    let parts = map_windows(lo, hi, chunk, |window| {
        let mut worst = WorstMargin::new();
        let mut escalations = 0u64;
        for v in window {
            let (m, esc) = sigma_bound_margin(v.n, v.sigma as u128, c);
            escalations += esc as u64;
            worst.observe(m, v.n);
        }
        (worst, escalations)
    })?;
    let (worst, escalations) = parts
        .into_iter()
        .fold((WorstMargin::new(), 0), |(w, e), (w2, e2)| {
            (w.merge(w2), e + e2)
        });
    Ok(worst.finish(BoundKind::SigmaUpper, (lo, hi), escalations))
}
