//! Candidate exceptions: ψ-champions (primorials `N_k` and their multiples
//! `l·N_k` below `N_{k+1}`, OEIS A060735), superabundant numbers (A004394),
//! and numeric checks of the two monotonicity propositions over them.
//!
//! Membership decisions always use exact integer cross-multiplication.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith::{self, DivisorSieve};
use crate::criteria::{self, map_windows, value_dd, CriterionKind, ESCALATION_BAND};
use crate::dd::DoubleDouble;
use crate::prime_engine::PrimeStream;
use crate::{Error, Result, BULK_SCAN_CEILING, DENSE_ORACLE_CEILING, SIEVE_CEILING};

/// `l · N_k` with `1 ≤ l < p_{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChampionNumber {
    pub primorial_index: u64,
    pub multiplier: u64,
    #[serde(serialize_with = "serialize_biguint")]
    pub value: BigUint,
    /// `Σ_{i≤k} log(1 + 1/p_i) = log(ψ(N_k)/N_k)`; the same for every `l`.
    pub psi_ratio_log: f64,
}

fn serialize_biguint<S: serde::Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

fn all_primes() -> PrimeStream {
    PrimeStream::new(0, SIEVE_CEILING).expect("static range is valid")
}

/// Walks the sequence in increasing order until `stop` says so.
fn walk_s_sequence(mut stop: impl FnMut(&BigUint, usize) -> bool) -> Vec<ChampionNumber> {
    let mut out = Vec::new();
    let mut primes = all_primes();
    let mut p_k = primes.next().expect("2");
    let mut n_k = BigUint::from(p_k);
    let mut ratio_log = DoubleDouble::from_f64((1.0 / p_k as f64).ln_1p());
    let mut k = 1u64;
    loop {
        let p_next = primes.next().expect("prime stream below ceiling");
        for l in 1..p_next {
            let value = &n_k * l;
            if stop(&value, out.len()) {
                return out;
            }
            out.push(ChampionNumber {
                primorial_index: k,
                multiplier: l,
                value,
                psi_ratio_log: ratio_log.to_f64(),
            });
        }
        n_k *= p_next;
        p_k = p_next;
        ratio_log += (1.0 / p_k as f64).ln_1p();
        k += 1;
    }
}

/// All `l·N_k ≤ limit`, in increasing order, built structurally.
/// Starts at `N₁ = 2`; empty when `limit < 2`.
pub fn generate_s_sequence(limit: &BigUint) -> Vec<ChampionNumber> {
    walk_s_sequence(|v, _| v > limit)
}

/// The first `count` terms of the same sequence.
pub fn s_sequence_terms(count: usize) -> Vec<ChampionNumber> {
    walk_s_sequence(|_, len| len >= count)
}

/// True iff `ψ(m)/m ≤ ψ(n)/n` for every `m < n`.
///
/// Ties are admitted: `ψ(l·N_k)/(l·N_k) = ψ(N_k)/N_k`, so the multiples of a
/// primorial only qualify under the non-strict comparison.
pub fn is_psi_champion(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::domain(format!("n must be ≥ 2 (got {n})")));
    }
    if n > DENSE_ORACLE_CEILING {
        return Err(Error::resource(format!(
            "n={n} above the O(n) oracle ceiling {DENSE_ORACLE_CEILING}"
        )));
    }
    let psi_n = arith::dedekind_psi(n)?;
    // m = 1 has ratio 1 < ψ(n)/n
    for m in 2..n {
        let psi_m = arith::dedekind_psi(m)?;
        if psi_m * n as u128 > psi_n * m as u128 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    /// `σ(n)/n`: superabundant numbers.
    Sigma,
    /// `ψ(n)/n`: ψ-champions.
    Psi,
    /// `d(n)`: highly composite numbers.
    Divisors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// A new record must strictly exceed every earlier ratio.
    Strict,
    /// Equalling the running maximum also counts.
    AllowTies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Record {
    pub n: u64,
    pub ratio_num: u128,
    pub ratio_den: u64,
}

impl Record {
    fn beats(&self, best: &Record, ties: TiePolicy) -> bool {
        let lhs = self.ratio_num * best.ratio_den as u128;
        let rhs = best.ratio_num * self.ratio_den as u128;
        match ties {
            TiePolicy::Strict => lhs > rhs,
            TiePolicy::AllowTies => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordScanResult {
    pub kind: RecordKind,
    pub ties: TiePolicy,
    pub records: Vec<Record>,
    pub limit: u64,
}

impl RecordScanResult {
    pub fn values(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.n).collect()
    }
}

const NO_RECORD: Record = Record {
    n: 0,
    ratio_num: 0,
    ratio_den: 1,
};

/// Record scan over `1 ≤ n ≤ limit`.
///
/// Windows are processed in parallel and each reports its local records;
/// a sequential pass then keeps those that also beat every earlier window.
pub fn record_scan(kind: RecordKind, limit: u64, ties: TiePolicy) -> Result<RecordScanResult> {
    if limit == 0 {
        return Err(Error::domain("limit must be ≥ 1 (got 0)"));
    }
    if limit > BULK_SCAN_CEILING {
        return Err(Error::resource(format!(
            "limit={limit} above bulk scan ceiling {BULK_SCAN_CEILING}"
        )));
    }
    let locals = map_windows(1, limit + 1, criteria::DEFAULT_CHUNK, |window| {
        let mut best = NO_RECORD;
        let mut local = Vec::new();
        for v in window {
            let r = match kind {
                RecordKind::Sigma => Record {
                    n: v.n,
                    ratio_num: v.sigma as u128,
                    ratio_den: v.n,
                },
                RecordKind::Psi => Record {
                    n: v.n,
                    ratio_num: v.psi as u128,
                    ratio_den: v.n,
                },
                RecordKind::Divisors => Record {
                    n: v.n,
                    ratio_num: v.divisors as u128,
                    ratio_den: 1,
                },
            };
            if r.beats(&best, ties) {
                best = r;
                local.push(r);
            }
        }
        local
    })?;
    let mut best = NO_RECORD;
    let mut records = Vec::new();
    for r in locals.into_iter().flatten() {
        if r.beats(&best, ties) {
            best = r;
            records.push(r);
        }
    }
    Ok(RecordScanResult {
        kind,
        ties,
        records,
        limit,
    })
}

/// Superabundant numbers `≤ limit`, including the vacuous `n = 1`.
pub fn generate_superabundant(limit: u64) -> Result<RecordScanResult> {
    record_scan(RecordKind::Sigma, limit, TiePolicy::Strict)
}

/// ψ-champions `2 ≤ n ≤ limit` found by scanning every integer.
pub fn psi_champions_by_scan(limit: u64) -> Result<Vec<u64>> {
    let scan = record_scan(RecordKind::Psi, limit, TiePolicy::AllowTies)?;
    Ok(scan
        .records
        .iter()
        .map(|r| r.n)
        .filter(|&n| n >= 2)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Proposition {
    /// `f(l·N_k) < f(N_k)` for `1 < l`, `l·N_k < N_{k+1}`.
    Prop1,
    /// `f(m) < f(N_k)` for `l·N_k < m < (l+1)·N_k < N_{k+1}`.
    Prop2,
    /// `ψ(l·N_k) = l·ψ(N_k)` for `1 ≤ l < p_{k+1}`.
    PsiMultipleIdentity,
}

/// One instance where the expected relation did not hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionWitness {
    pub primorial_index: u64,
    pub multiplier: u64,
    pub n: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionCheck {
    pub proposition: Proposition,
    pub limit: u64,
    pub cases_checked: u64,
    pub escalations: u64,
    pub failures: Vec<PropositionWitness>,
}

impl PropositionCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Primorials `N_k ≤ bound` with the prime following each,
/// as `(k, N_k, p_{k+1})`.
fn primorials_u64(bound: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    let mut primes = all_primes();
    let mut n_k = primes.next().expect("2");
    let mut k = 1;
    while n_k <= bound {
        let p_next = primes.next().expect("prime");
        out.push((k, n_k, p_next));
        match n_k.checked_mul(p_next) {
            Some(next) => n_k = next,
            None => break,
        }
        k += 1;
    }
    out
}

/// `f(a) < f(b)` for integers given with their exact ψ, settling near-ties
/// in double-double. Returns `(holds, escalated)`.
fn f_strictly_less(a: (u64, u128), b: (u64, u128)) -> (bool, bool) {
    let fa = criteria::evaluate(CriterionKind::DedekindF, a.0, a.1).value;
    let fb = criteria::evaluate(CriterionKind::DedekindF, b.0, b.1).value;
    let diff = fb - fa;
    if diff.abs() >= ESCALATION_BAND {
        return (diff > 0.0, false);
    }
    let d = value_dd(b.1, b.0) - value_dd(a.1, a.0);
    (d.hi > 0.0 || (d.hi == 0.0 && d.lo > 0.0), true)
}

/// `ψ(l·N_k) = l·ψ(N_k)` exactly, for every `k ≤ k_max` and `l < p_{k+1}`.
pub fn psi_multiple_identity_check(k_max: u64) -> Result<PropositionCheck> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be ≥ 1 (got 0)"));
    }
    if k_max > 14 {
        return Err(Error::resource(format!(
            "k_max={k_max}: N_k·p_(k+1) exceeds 64 bits beyond k = 14"
        )));
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    for (k, n_k, p_next) in primorials_u64(u64::MAX).into_iter().take(k_max as usize) {
        let psi_nk = arith::dedekind_psi(n_k)?;
        for l in 1..p_next {
            let n = n_k * l;
            let psi = arith::dedekind_psi(n)?;
            cases += 1;
            if psi != l as u128 * psi_nk {
                failures.push(PropositionWitness {
                    primorial_index: k,
                    multiplier: l,
                    n,
                    detail: format!("psi({n})={psi} but l*psi(N_k)={}", l as u128 * psi_nk),
                });
            }
        }
    }
    Ok(PropositionCheck {
        proposition: Proposition::PsiMultipleIdentity,
        limit: k_max,
        cases_checked: cases,
        escalations: 0,
        failures,
    })
}

/// `f(l·N_k) < f(N_k)` for every `1 < l` with `l·N_k < min(N_{k+1}, limit)`.
pub fn verify_prop1(limit: u64) -> Result<PropositionCheck> {
    if limit > BULK_SCAN_CEILING {
        return Err(Error::resource(format!(
            "limit={limit} above {BULK_SCAN_CEILING}"
        )));
    }
    let mut cases = 0;
    let mut escalations = 0;
    let mut failures = Vec::new();
    let primorials = primorials_u64(limit);
    for (i, &(k, n_k, _)) in primorials.iter().enumerate() {
        let next_primorial = primorials.get(i + 1).map_or(u64::MAX, |t| t.1);
        let bound = next_primorial.min(limit);
        let base = (n_k, arith::dedekind_psi(n_k)?);
        for l in 2.. {
            let n = n_k * l;
            if n >= bound {
                break;
            }
            let (holds, esc) = f_strictly_less((n, arith::dedekind_psi(n)?), base);
            cases += 1;
            escalations += esc as u64;
            if !holds {
                failures.push(PropositionWitness {
                    primorial_index: k,
                    multiplier: l,
                    n,
                    detail: format!("f({n}) >= f({n_k})"),
                });
            }
        }
    }
    Ok(PropositionCheck {
        proposition: Proposition::Prop1,
        limit,
        cases_checked: cases,
        escalations,
        failures,
    })
}

/// `f(m) < f(N_k)` for every `m` strictly between `l·N_k` and `(l+1)·N_k`,
/// `l ≥ 1`, `(l+1)·N_k < min(N_{k+1}, limit)`.
pub fn verify_prop2(limit: u64) -> Result<PropositionCheck> {
    if limit > DENSE_ORACLE_CEILING {
        return Err(Error::resource(format!(
            "limit={limit} above dense-scan ceiling {DENSE_ORACLE_CEILING}"
        )));
    }
    let mut cases = 0;
    let mut escalations = 0;
    let mut failures = Vec::new();
    if limit < 3 {
        return Ok(PropositionCheck {
            proposition: Proposition::Prop2,
            limit,
            cases_checked: 0,
            escalations: 0,
            failures,
        });
    }
    let psi: Vec<u64> = DivisorSieve::new(limit)?
        .window(1, limit)
        .iter()
        .map(|v| v.psi)
        .collect();
    let psi_of = |m: u64| psi[(m - 1) as usize] as u128;
    let primorials = primorials_u64(limit);
    for (i, &(k, n_k, _)) in primorials.iter().enumerate() {
        let next_primorial = primorials.get(i + 1).map_or(u64::MAX, |t| t.1);
        let bound = next_primorial.min(limit);
        let base = (n_k, psi_of(n_k));
        for l in 1.. {
            let upper = (l + 1) * n_k;
            if upper >= bound {
                break;
            }
            for m in l * n_k + 1..upper {
                let (holds, esc) = f_strictly_less((m, psi_of(m)), base);
                cases += 1;
                escalations += esc as u64;
                if !holds {
                    failures.push(PropositionWitness {
                        primorial_index: k,
                        multiplier: l,
                        n: m,
                        detail: format!("f({m}) >= f({n_k})"),
                    });
                }
            }
        }
    }
    Ok(PropositionCheck {
        proposition: Proposition::Prop2,
        limit,
        cases_checked: cases,
        escalations,
        failures,
    })
}

/// Members of `s` (taken up to `limit`) that are also superabundant, as
/// `(overlap, |s|)`.
pub fn superabundant_overlap(
    s: &[ChampionNumber],
    superabundant: &RecordScanResult,
) -> (usize, usize) {
    let sa: std::collections::BTreeSet<u64> = superabundant.values().into_iter().collect();
    let limit = BigUint::from(superabundant.limit);
    let in_range: Vec<&ChampionNumber> = s.iter().filter(|c| c.value <= limit).collect();
    let overlap = in_range
        .iter()
        .filter(|c| {
            let v: u64 = (&c.value).try_into().expect("value ≤ u64 limit");
            sa.contains(&v)
        })
        .count();
    (overlap, in_range.len())
}

/// `N_k` as a big integer.
pub fn primorial(k: u64) -> BigUint {
    all_primes()
        .take(k as usize)
        .fold(BigUint::one(), |acc, p| acc * p)
}
