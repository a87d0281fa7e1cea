//! Exact Goldbach partition counts and the limit law of a uniformly sampled
//! Goldbach number.
//!
//! Draw one partition `2k = p + q` uniformly from all partitions of even
//! numbers in `(4, 2n]` into two odd primes and call `Gₙ = k`. As `n → ∞`,
//! `Gₙ/n` converges in law to the maximum of two independent uniforms, with
//! CDF `u²`, mean `2/3` and variance `1/18`. This crate computes everything
//! needed to check that at desk scale, exactly where possible:
//!
//! * [`primes`]: bit sieve, odd primes, `π(y)`.
//! * [`table`]: `Q₂(2k)` by direct counting and by exact convolution, with
//!   cumulative and weighted sums; [`cache`] persists tables.
//! * [`sampler`]: seeded uniform sampling of partitions and Goldbach numbers.
//! * [`moments`]: exact rational moments, the limit law, Kolmogorov distance.
//! * [`series`], [`identities`], [`tauberian`]: the prime power series near
//!   `z → 1`, coefficient-level generating-function identities, and
//!   partial-sum asymptote diagnostics.
//! * [`report`]: JSON-lines / CSV rendering.

pub mod cache;
pub mod error;
pub mod identities;
pub mod moments;
mod ntt;
pub mod primes;
pub mod report;
pub mod sampler;
pub mod series;
pub mod table;
pub mod tauberian;

pub use error::{Error, Result};
pub use moments::{
    convergence_sweep, exact_moment, exact_two_step, exact_variance, kolmogorov_distance,
    limit_cdf, limit_moment, CdfReport, LimitLaw, MomentReport, Quantity, SweepReport,
};
pub use primes::PrimeTable;
pub use sampler::{enumerate_partitions, GoldbachPartition, SamplerStream};
pub use series::{eval_series, lemma2_ratios, SeriesPoint};
pub use table::{
    build_table_convolution, build_table_direct, count_q2_direct, GoldbachCountTable, Method,
};
pub use tauberian::{tauberian_ratio, AsymptoteDiagnostic, AsymptoteQuantity};
