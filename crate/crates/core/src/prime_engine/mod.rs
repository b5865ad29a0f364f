//! Prime generation and the Chebyshev theta function.
//!
//! Primes come from an odd-only segmented sieve whose memory use is bounded
//! by the base primes up to `√hi` plus one segment. θ is accumulated as a
//! double-double running sum in strict index order, so results do not
//! depend on how the sieve was segmented.

mod cache;
pub mod hexfloat;
mod sieve;
mod theta;

pub use cache::{ThetaCache, CACHE_FORMAT_VERSION};
pub use sieve::{
    nth_prime, nth_prime_upper_bound, sieve_range, sieve_range_with_segment, simple_sieve,
    PrimeRange, PrimeStream, DEFAULT_SEGMENT_ODDS,
};
pub use theta::{theta_stream, ThetaAccumulator, ThetaPoint};
