//! Bit-packed sieve of Eratosthenes.
//!
//! A [`PrimeTable`] stores primality for every integer in `0..=limit`, the
//! ascending list of odd primes up to `limit`, and one cumulative prime count
//! per 64-bit word so that `π(y)` is a table lookup plus a popcount.
//!
//! The sieve runs over odd numbers only, one segment at a time. Segment
//! length changes memory traffic, never the output.

use crate::error::{Error, Result};

/// Default cap on the bytes a single table may occupy.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

const DEFAULT_SEGMENT_ODDS: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    odd_primes: Vec<u64>,
    // Primes strictly below word `w`, i.e. below 64*w.
    checkpoints: Vec<u32>,
}

impl PrimeTable {
    /// Sieves `0..=limit` under [`DEFAULT_MEMORY_BUDGET`].
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn build_with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "prime table limit must be at least 2, got {limit}"
            )));
        }
        let needed = estimated_bytes(limit);
        if needed > budget_bytes {
            return Err(Error::Resource(format!(
                "prime table up to {limit} needs about {needed} bytes, \
                 over the memory budget of {budget_bytes} bytes"
            )));
        }
        Ok(Self::sieve(limit, DEFAULT_SEGMENT_ODDS))
    }

    pub(crate) fn sieve(limit: u64, segment_odds: usize) -> Self {
        assert!(limit >= 2 && segment_odds > 0);
        let words = (limit / 64 + 1) as usize;
        let mut bits = vec![0u64; words];
        let mut odd_primes = Vec::with_capacity(prime_count_upper_bound(limit) as usize);
        set_bit(&mut bits, 2);

        let base = small_odd_primes(isqrt(limit));
        let mut composite = vec![false; segment_odds];

        // Segment covers odd m = 2*i + 1 for i in [lo, hi).
        let total_odds = limit.div_ceil(2);
        let mut lo = 0u64;
        while lo < total_odds {
            let hi = (lo + segment_odds as u64).min(total_odds);
            let seg = &mut composite[..(hi - lo) as usize];
            seg.fill(false);
            let seg_end = 2 * hi + 1; // first odd not in segment
            for &p in &base {
                let sq = p * p;
                if sq >= seg_end {
                    break;
                }
                let seg_start = 2 * lo + 1;
                let mut m = if sq >= seg_start {
                    sq
                } else {
                    let r = seg_start.div_ceil(p) * p;
                    if r % 2 == 0 {
                        r + p
                    } else {
                        r
                    }
                };
                while m < seg_end {
                    seg[((m - 1) / 2 - lo) as usize] = true;
                    m += 2 * p;
                }
            }
            for (off, &c) in seg.iter().enumerate() {
                let m = 2 * (lo + off as u64) + 1;
                if !c && m >= 3 && m <= limit {
                    set_bit(&mut bits, m);
                    odd_primes.push(m);
                }
            }
            lo = hi;
        }

        let mut checkpoints = Vec::with_capacity(words);
        let mut running = 0u32;
        for w in &bits {
            checkpoints.push(running);
            running += w.count_ones();
        }

        PrimeTable {
            limit,
            bits,
            odd_primes,
            checkpoints,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Odd primes `3 ≤ p ≤ limit`, ascending.
    pub fn odd_primes(&self) -> &[u64] {
        &self.odd_primes
    }

    /// Odd primes `p ≤ bound`, ascending; `bound` is clamped to the limit.
    pub fn odd_primes_up_to(&self, bound: u64) -> &[u64] {
        let end = self.odd_primes.partition_point(|&p| p <= bound);
        &self.odd_primes[..end]
    }

    pub fn is_prime(&self, m: u64) -> Result<bool> {
        self.check(m, "m")?;
        Ok(self.bit(m))
    }

    /// Membership in the odd primes `{3, 5, 7, 11, ...}`; 2 is excluded.
    pub fn is_odd_prime(&self, m: u64) -> Result<bool> {
        self.check(m, "m")?;
        Ok(m % 2 == 1 && self.bit(m))
    }

    /// `π(y)`, the number of primes `≤ y` (2 included).
    pub fn prime_count(&self, y: u64) -> Result<u64> {
        self.check(y, "y")?;
        let w = (y / 64) as usize;
        let mask = if y % 64 == 63 {
            u64::MAX
        } else {
            (1u64 << (y % 64 + 1)) - 1
        };
        Ok(u64::from(self.checkpoints[w]) + u64::from((self.bits[w] & mask).count_ones()))
    }

    /// Primality without the range check; callers guarantee `m ≤ limit`.
    #[inline]
    pub(crate) fn bit(&self, m: u64) -> bool {
        self.bits[(m / 64) as usize] >> (m % 64) & 1 == 1
    }

    fn check(&self, m: u64, what: &'static str) -> Result<()> {
        if m > self.limit {
            Err(Error::out_of_range(what, m, self.limit))
        } else {
            Ok(())
        }
    }
}

fn set_bit(bits: &mut [u64], m: u64) {
    bits[(m / 64) as usize] |= 1 << (m % 64);
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn small_odd_primes(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    let mut composite = vec![false; bound + 1];
    let mut out = Vec::new();
    for m in (3..=bound).step_by(2) {
        if composite[m] {
            continue;
        }
        out.push(m as u64);
        let mut j = m * m;
        while j <= bound {
            composite[j] = true;
            j += 2 * m;
        }
    }
    out
}

// Rosser–Schoenfeld: π(x) < 1.25506 x / ln x for x > 1.
fn prime_count_upper_bound(limit: u64) -> u64 {
    if limit < 17 {
        return 7;
    }
    let x = limit as f64;
    (1.25506 * x / x.ln()).ceil() as u64
}

fn estimated_bytes(limit: u64) -> u64 {
    let words = limit / 64 + 1;
    words * 8 + words * 4 + prime_count_upper_bound(limit) * 8 + (DEFAULT_SEGMENT_ODDS as u64)
}
