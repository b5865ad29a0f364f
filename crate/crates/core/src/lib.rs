//! Numerical verification toolkit for the Dedekind psi refinement of
//! Robin's criterion.
//!
//! The crate is organised bottom-up:
//!
//! - [`prime_engine`]: segmented sieve, `p_n`, and a compensated running
//!   Chebyshev theta with an on-disk checkpoint cache.
//! - [`arith`]: exact `ψ`, `σ`, `d` over 64-bit integers, single and bulk.
//! - [`criteria`]: Robin's `g(n)`, the refined `f(n)`, exception scans and
//!   the explicit `σ(n)/n` upper bound.
//! - [`champions`]: ψ-champions (primorial multiples), superabundant
//!   numbers and the proposition checks over them.
//! - [`primorial`]: log-space quantities at primorials, both numeric
//!   tables and the bounds valid for `p_n ≥ 20000`.
//! - [`oeis`]: b-file reader and term comparison.

pub mod arith;
pub mod bounds;
pub mod champions;
pub mod constants;
pub mod criteria;
pub mod dd;
mod error;
pub mod oeis;
pub mod prime_engine;
pub mod primorial;

pub use error::{Error, Result};

/// Largest prime index reachable by the streaming engine (`p_n` for
/// `n ≤ PRIME_INDEX_CEILING`). Covers `n = 10⁷` plus its successor.
pub const PRIME_INDEX_CEILING: u64 = 10_500_000;

/// Upper end accepted by [`prime_engine::sieve_range`].
pub const SIEVE_CEILING: u64 = 1_000_000_000_000;

/// Upper end for dense per-integer scans (exceptions, records, Prop. 1).
pub const BULK_SCAN_CEILING: u64 = 100_000_000;

/// Upper end for the O(n) ψ-champion oracle and the Prop. 2 dense scan.
pub const DENSE_ORACLE_CEILING: u64 = 1_000_000;
