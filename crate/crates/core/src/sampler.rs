//! Uniform sampling from the set of Goldbach partitions of even numbers in
//! `(4, 2n]`.
//!
//! A draw first picks `k` with probability `Q₂(2k) / |Σ₂ₙ|` by inverting the
//! cumulative counts, then picks one of the `Q₂(2k)` partitions of `2k`
//! uniformly. Together this is uniform over every partition.
//!
//! Randomness comes from ChaCha8 keyed by `seed` (expanded with
//! `SeedableRng::seed_from_u64`) on stream `stream_id`. Bounded integers use
//! Lemire's multiply-and-reject method, so there is no modulo bias and the
//! sequence depends only on `(seed, stream_id, table)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::table::GoldbachCountTable;

/// One unordered representation `m = p + q`, `p ≤ q`, both odd primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoldbachPartition {
    pub m: u64,
    pub p: u64,
    pub q: u64,
}

fn check_goldbach_number(primes: &PrimeTable, m: u64) -> Result<()> {
    if m <= 4 || m % 2 == 1 {
        return Err(Error::Domain(format!(
            "expected an even number in (4, 2n], got {m}"
        )));
    }
    if m - 3 > primes.limit() {
        return Err(Error::out_of_range("m - 3", m - 3, primes.limit()));
    }
    Ok(())
}

/// All partitions of `m`, ascending in the smaller part.
pub fn enumerate_partitions(primes: &PrimeTable, m: u64) -> Result<Vec<GoldbachPartition>> {
    check_goldbach_number(primes, m)?;
    Ok(primes
        .odd_primes_up_to(m / 2)
        .iter()
        .filter(|&&p| primes.bit(m - p))
        .map(|&p| GoldbachPartition { m, p, q: m - p })
        .collect())
}

/// The `index`-th partition of `m` in [`enumerate_partitions`] order.
pub fn partition_at(primes: &PrimeTable, m: u64, index: u64) -> Result<GoldbachPartition> {
    check_goldbach_number(primes, m)?;
    primes
        .odd_primes_up_to(m / 2)
        .iter()
        .filter(|&&p| primes.bit(m - p))
        .nth(index as usize)
        .map(|&p| GoldbachPartition { m, p, q: m - p })
        .ok_or_else(|| Error::out_of_range("partition index", index, 0))
}

/// Fraction of trials with `Rₙ ≤ Gₙ` and its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStepEstimate {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Deterministic random stream over one count table.
#[derive(Debug, Clone)]
pub struct SamplerStream<'a> {
    table: &'a GoldbachCountTable,
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl<'a> SamplerStream<'a> {
    pub fn new(table: &'a GoldbachCountTable, seed: u64, stream_id: u64) -> Result<Self> {
        if table.cardinality(table.n())? == 0 {
            return Err(Error::InvalidArgument(
                "cannot sample from a table with no partitions".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Ok(SamplerStream {
            table,
            seed,
            stream_id,
            rng,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn table(&self) -> &'a GoldbachCountTable {
        self.table
    }

    /// Uniform integer in `[0, bound)`; `bound` must be positive.
    pub fn uniform_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut wide = u128::from(self.rng.next_u64()) * u128::from(bound);
        if (wide as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (wide as u64) < threshold {
                wide = u128::from(self.rng.next_u64()) * u128::from(bound);
            }
        }
        (wide >> 64) as u64
    }

    /// Draws `k = Gₙ` with probability `Q₂(2k) / |Σ₂ₙ|`.
    pub fn sample_number(&mut self) -> u64 {
        let prefix = self.table.prefix();
        let total = prefix[prefix.len() - 1];
        let target = self.uniform_below(total) + 1;
        prefix.partition_point(|&s| s < target) as u64
    }

    /// Draws one partition uniformly from all of `Σ₂ₙ`.
    pub fn sample_partition(&mut self, primes: &PrimeTable) -> Result<GoldbachPartition> {
        let k = self.sample_number();
        self.sample_partition_given(primes, k)
    }

    /// Draws one partition of `2k` uniformly.
    pub fn sample_partition_given(
        &mut self,
        primes: &PrimeTable,
        k: u64,
    ) -> Result<GoldbachPartition> {
        let count = self.table.q2(k)?;
        if count == 0 {
            return Err(Error::Domain(format!(
                "{} has no Goldbach partition",
                2 * k
            )));
        }
        let index = self.uniform_below(count);
        partition_at(primes, 2 * k, index)
    }

    /// Monte Carlo estimate of `Pr(Rₙ ≤ Gₙ)` with `Rₙ` uniform on `{3, …, n}`.
    pub fn two_step_estimate(&mut self, trials: u64) -> Result<TwoStepEstimate> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        let n = self.table.n();
        let mut successes = 0u64;
        for _ in 0..trials {
            let g = self.sample_number();
            let r = 3 + self.uniform_below(n - 2);
            successes += u64::from(r <= g);
        }
        let estimate = successes as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        Ok(TwoStepEstimate {
            trials,
            successes,
            estimate,
            std_error,
        })
    }
}

/// Sample mean and variance of `k / n` with CLT standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawSummary {
    pub draws: u64,
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

pub fn summarize_draws(draws: &[u64], n: u64) -> Result<DrawSummary> {
    if draws.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two draws to summarize".into(),
        ));
    }
    let len = draws.len() as f64;
    let scale = n as f64;
    let mean = draws.iter().map(|&k| k as f64 / scale).sum::<f64>() / len;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &k in draws {
        let d = k as f64 / scale - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    let variance = m2 / (len - 1.0);
    let m4 = m4 / len;
    let pop_var = m2 / len;
    Ok(DrawSummary {
        draws: draws.len() as u64,
        mean,
        variance,
        mean_se: (variance / len).sqrt(),
        variance_se: ((m4 - pop_var * pop_var).max(0.0) / len).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{build_table_direct, GoldbachCountTable, Method};

    #[test]
    fn partitions_by_hand() {
        let p = PrimeTable::build(100).unwrap();
        let parts = |m| {
            enumerate_partitions(&p, m)
                .unwrap()
                .into_iter()
                .map(|g| (g.p, g.q))
                .collect::<Vec<_>>()
        };
        assert_eq!(parts(10), vec![(3, 7), (5, 5)]);
        assert_eq!(parts(6), vec![(3, 3)]);
        assert_eq!(parts(20), vec![(3, 17), (7, 13)]);
        assert_eq!(parts(8), vec![(3, 5)]);
    }

    #[test]
    fn partition_domain_errors() {
        let p = PrimeTable::build(100).unwrap();
        assert!(matches!(
            enumerate_partitions(&p, 11),
            Err(Error::Domain(_))
        ));
        assert!(matches!(enumerate_partitions(&p, 4), Err(Error::Domain(_))));
        assert!(matches!(
            enumerate_partitions(&p, 104),
            Err(Error::OutOfRange { .. })
        ));
        assert!(partition_at(&p, 10, 2).is_err());
        assert_eq!(partition_at(&p, 10, 1).unwrap().p, 5);
    }

    #[test]
    fn partitions_are_valid_and_counted() {
        let p = PrimeTable::build(4000).unwrap();
        let t = build_table_direct(2000).unwrap();
        for k in 3..=2000u64 {
            let parts = enumerate_partitions(&p, 2 * k).unwrap();
            assert_eq!(parts.len() as u64, t.q2(k).unwrap());
            for w in parts.windows(2) {
                assert!(w[0].p < w[1].p);
            }
            for g in parts {
                assert_eq!(g.p + g.q, g.m);
                assert!(g.p <= g.q);
                assert!(p.is_odd_prime(g.p).unwrap() && p.is_odd_prime(g.q).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_table_always_three() {
        let t = build_table_direct(3).unwrap();
        let p = PrimeTable::build(6).unwrap();
        let mut s = SamplerStream::new(&t, 1, 0).unwrap();
        for _ in 0..100 {
            assert_eq!(s.sample_number(), 3);
            assert_eq!(
                s.sample_partition(&p).unwrap(),
                GoldbachPartition { m: 6, p: 3, q: 3 }
            );
        }
        let est = s.two_step_estimate(1000).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn rejects_empty_table_and_zero_trials() {
        let t = GoldbachCountTable::from_counts(vec![0, 0], Method::Direct).unwrap();
        assert!(SamplerStream::new(&t, 0, 0).is_err());
        let t = build_table_direct(5).unwrap();
        let mut s = SamplerStream::new(&t, 0, 0).unwrap();
        assert!(s.two_step_estimate(0).is_err());
    }

    #[test]
    fn same_seed_same_draws() {
        let t = build_table_direct(1000).unwrap();
        let a: Vec<u64> = {
            let mut s = SamplerStream::new(&t, 7, 3).unwrap();
            (0..100).map(|_| s.sample_number()).collect()
        };
        let b: Vec<u64> = {
            let mut s = SamplerStream::new(&t, 7, 3).unwrap();
            (0..100).map(|_| s.sample_number()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<u64> = {
            let mut s = SamplerStream::new(&t, 7, 4).unwrap();
            (0..100).map(|_| s.sample_number()).collect()
        };
        assert_ne!(a, c);
        let s = SamplerStream::new(&t, 7, 4).unwrap();
        assert_eq!((s.seed(), s.stream_id()), (7, 4));
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let t = build_table_direct(5).unwrap();
        let mut s = SamplerStream::new(&t, 99, 0).unwrap();
        for bound in [1u64, 2, 3, 7, 1 << 40, u64::MAX] {
            for _ in 0..200 {
                assert!(s.uniform_below(bound) < bound);
            }
        }
    }

    #[test]
    fn small_table_frequencies() {
        // Weights 1, 1, 2 for k = 3, 4, 5.
        let t = build_table_direct(5).unwrap();
        let mut s = SamplerStream::new(&t, 42, 0).unwrap();
        let draws = 100_000u64;
        let mut counts = [0u64; 6];
        for _ in 0..draws {
            counts[s.sample_number() as usize] += 1;
        }
        for (k, prob) in [(3usize, 0.25), (4, 0.25), (5, 0.5)] {
            let freq = counts[k] as f64 / draws as f64;
            let se = (prob * (1.0 - prob) / draws as f64).sqrt();
            assert!((freq - prob).abs() < 4.0 * se, "k = {k}: {freq}");
        }
    }

    #[test]
    fn summary_of_constant_draws() {
        let s = summarize_draws(&[5, 5, 5, 5], 5).unwrap();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.variance, 0.0);
        assert!(summarize_draws(&[5], 5).is_err());
    }
}
