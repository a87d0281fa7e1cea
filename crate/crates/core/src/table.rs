//! Goldbach partition counts `Q₂(2k)` for `3 ≤ k ≤ n`.
//!
//! Two independent constructions produce the same table:
//!
//! * **direct**: for each `2k`, walk odd primes `p ≤ k` and test `2k − p`.
//! * **convolution**: square the odd-prime indicator sequence exactly to get
//!   the ordered pair counts `C(2k)`, then `Q₂(2k) = (C(2k) + [k odd prime]) / 2`.
//!
//! The second form is the coefficient-level reading of
//! `2 Σ Q₂(2k) z^{2k} = f(z)² + f(z²)` with `f(z) = Σ_p z^p`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntt;
use crate::primes::PrimeTable;

/// Largest power `r` accepted by [`GoldbachCountTable::weighted_sum`].
pub const MAX_ORDER: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Convolution,
    /// Loaded from a cache file; the original construction is not recorded.
    Cache,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Convolution => "convolution",
            Method::Cache => "cache",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Q₂(2k)` for `3 ≤ k ≤ n` together with cumulative sums.
///
/// Equality compares `n` and the counts; `method` is provenance only.
#[derive(Debug, Clone)]
pub struct GoldbachCountTable {
    n: u64,
    // Indexed by k; entries 0..=2 are zero.
    q2: Vec<u64>,
    prefix: Vec<u64>,
    // Cumulative Σ (2k)^r q2[k] for r = 1, 2.
    weighted: [Vec<u128>; 2],
    method: Method,
}

impl PartialEq for GoldbachCountTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.q2 == other.q2
    }
}

impl Eq for GoldbachCountTable {}

impl GoldbachCountTable {
    /// Builds a table from `counts[i] = Q₂(2(i + 3))`, `i = 0..n−2`.
    pub fn from_counts(counts: Vec<u64>, method: Method) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument(
                "a count table needs at least the entry for k = 3".into(),
            ));
        }
        let n = counts.len() as u64 + 2;
        let mut q2 = Vec::with_capacity(counts.len() + 3);
        q2.extend_from_slice(&[0, 0, 0]);
        q2.extend(counts);

        let mut prefix = Vec::with_capacity(q2.len());
        let mut w1 = Vec::with_capacity(q2.len());
        let mut w2 = Vec::with_capacity(q2.len());
        let (mut s, mut s1, mut s2) = (0u64, 0u128, 0u128);
        for (k, &q) in q2.iter().enumerate() {
            let m = 2 * k as u128;
            s = s
                .checked_add(q)
                .ok_or_else(|| Error::Overflow(format!("cardinality at k = {k}")))?;
            s1 += m * u128::from(q);
            s2 += m * m * u128::from(q);
            prefix.push(s);
            w1.push(s1);
            w2.push(s2);
        }
        Ok(GoldbachCountTable {
            n,
            q2,
            prefix,
            weighted: [w1, w2],
            method,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// `Q₂(2k)`.
    pub fn q2(&self, k: u64) -> Result<u64> {
        self.check_k(k)?;
        Ok(self.q2[k as usize])
    }

    /// Counts for `k = 3..=n`, in order.
    pub fn counts(&self) -> &[u64] {
        &self.q2[3..]
    }

    /// Cumulative counts indexed by `k = 0..=n`; `prefix()[k] = |Σ₂ₖ|` for `k ≥ 3`.
    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    /// `|Σ₂ⱼ| = Σ_{2<k≤j} Q₂(2k)`.
    pub fn cardinality(&self, j: u64) -> Result<u64> {
        self.check_k(j)?;
        Ok(self.prefix[j as usize])
    }

    /// `Σ_{2<k≤j} (2k)^r Q₂(2k)`, exact.
    pub fn weighted_sum(&self, j: u64, r: u32) -> Result<u128> {
        self.check_k(j)?;
        match r {
            0 => Ok(u128::from(self.prefix[j as usize])),
            1 | 2 => Ok(self.weighted[r as usize - 1][j as usize]),
            r if r > MAX_ORDER => Err(Error::InvalidArgument(format!(
                "order {r} exceeds the supported maximum {MAX_ORDER}"
            ))),
            r => {
                let mut acc = 0u128;
                for k in 3..=j {
                    let term = (2 * u128::from(k))
                        .checked_pow(r)
                        .and_then(|p| p.checked_mul(u128::from(self.q2[k as usize])))
                        .and_then(|t| acc.checked_add(t));
                    acc = term.ok_or_else(|| {
                        Error::Overflow(format!(
                            "Σ (2k)^{r} Q₂(2k) up to k = {j} does not fit in 128 bits"
                        ))
                    })?;
                }
                Ok(acc)
            }
        }
    }

    /// The table for `j ≤ n`; counts do not depend on `n`.
    pub fn truncated(&self, j: u64) -> Result<Self> {
        self.check_k(j)?;
        let mut t = self.clone();
        let len = j as usize + 1;
        t.n = j;
        t.q2.truncate(len);
        t.prefix.truncate(len);
        for w in &mut t.weighted {
            w.truncate(len);
        }
        Ok(t)
    }

    /// First `k` with `Q₂(2k) = 0`, if any. `None` means every even number in
    /// `(4, 2n]` has a Goldbach partition.
    pub fn first_goldbach_gap(&self) -> Option<u64> {
        (3..=self.n).find(|&k| self.q2[k as usize] == 0)
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k < 3 || k > self.n {
            Err(Error::out_of_range("k", k, self.n))
        } else {
            Ok(())
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < 3 {
        Err(Error::InvalidArgument(format!(
            "n must be at least 3, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn check_primes_cover(primes: &PrimeTable, n: u64) -> Result<()> {
    // Both parts of 2n are at most 2n − 3.
    if primes.limit() < 2 * n - 3 {
        Err(Error::out_of_range("2n - 3", 2 * n - 3, primes.limit()))
    } else {
        Ok(())
    }
}

/// Unordered odd-prime pairs `p ≤ q` with `p + q = m`.
pub fn count_q2_direct(primes: &PrimeTable, m: u64) -> Result<u64> {
    if m <= 4 {
        return Err(Error::Domain(format!(
            "Goldbach numbers lie in (4, 2n]; got m = {m}"
        )));
    }
    if m - 3 > primes.limit() {
        return Err(Error::out_of_range("m - 3", m - 3, primes.limit()));
    }
    if m % 2 == 1 {
        return Ok(0);
    }
    Ok(primes
        .odd_primes_up_to(m / 2)
        .iter()
        .filter(|&&p| primes.bit(m - p))
        .count() as u64)
}

pub fn build_table_direct(n: u64) -> Result<GoldbachCountTable> {
    check_n(n)?;
    let primes = PrimeTable::build(2 * n)?;
    build_table_direct_with(&primes, n)
}

pub fn build_table_direct_with(primes: &PrimeTable, n: u64) -> Result<GoldbachCountTable> {
    check_n(n)?;
    check_primes_cover(primes, n)?;
    let counts = (3..=n)
        .into_par_iter()
        .map(|k| count_q2_direct(primes, 2 * k))
        .collect::<Result<Vec<_>>>()?;
    GoldbachCountTable::from_counts(counts, Method::Direct)
}

pub fn build_table_convolution(n: u64) -> Result<GoldbachCountTable> {
    check_n(n)?;
    let primes = PrimeTable::build(2 * n)?;
    build_table_convolution_with(&primes, n)
}

pub fn build_table_convolution_with(primes: &PrimeTable, n: u64) -> Result<GoldbachCountTable> {
    check_n(n)?;
    check_primes_cover(primes, n)?;
    let ordered = ordered_pair_counts(primes, n)?;
    let mut counts = Vec::with_capacity(n as usize - 2);
    for k in 3..=n {
        let twice = ordered[k as usize] + u64::from(primes.bit(k) && k % 2 == 1);
        if twice % 2 == 1 {
            return Err(Error::InternalPrecision(format!(
                "C({}) + [k odd prime] = {twice} is odd at k = {k}",
                2 * k
            )));
        }
        counts.push(twice / 2);
    }
    GoldbachCountTable::from_counts(counts, Method::Convolution)
}

/// Ordered odd-prime pair counts `C(2k)` for `k = 0..=n` via exact transform.
///
/// Odd primes are packed as `p = 2i + 1`, so `p + q = 2k` becomes `i + j = k − 1`
/// and the convolution runs at half length.
pub fn ordered_pair_counts(primes: &PrimeTable, n: u64) -> Result<Vec<u64>> {
    check_primes_cover(primes, n.max(3))?;
    let mut packed = vec![0u64; n as usize];
    for &p in primes.odd_primes_up_to(2 * n - 1) {
        packed[((p - 1) / 2) as usize] = 1;
    }
    let conv = ntt::self_convolution(&packed)?;
    let mut out = vec![0u64; n as usize + 1];
    out[1..].copy_from_slice(&conv[..n as usize]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_counts() {
        let p = PrimeTable::build(100).unwrap();
        assert_eq!(count_q2_direct(&p, 10).unwrap(), 2);
        assert_eq!(count_q2_direct(&p, 11).unwrap(), 0);
        assert_eq!(count_q2_direct(&p, 6).unwrap(), 1);
        assert_eq!(count_q2_direct(&p, 8).unwrap(), 1);
        assert_eq!(count_q2_direct(&p, 20).unwrap(), 2);
        assert_eq!(count_q2_direct(&p, 14).unwrap(), 2);
    }

    #[test]
    fn count_domain_and_range() {
        let p = PrimeTable::build(20).unwrap();
        assert!(matches!(count_q2_direct(&p, 4), Err(Error::Domain(_))));
        assert!(matches!(count_q2_direct(&p, 0), Err(Error::Domain(_))));
        assert!(count_q2_direct(&p, 23).is_ok());
        assert!(matches!(
            count_q2_direct(&p, 24),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn hand_enumerated_tables() {
        let t = build_table_direct(5).unwrap();
        assert_eq!(t.counts(), &[1, 1, 2]);
        assert_eq!(t.cardinality(5).unwrap(), 4);
        assert_eq!(t.cardinality(3).unwrap(), 1);
        assert_eq!(t.method(), Method::Direct);

        let t = build_table_direct(10).unwrap();
        assert_eq!(t.counts(), &[1, 1, 2, 1, 2, 2, 2, 2]);
        assert_eq!(t.cardinality(10).unwrap(), 13);
    }

    #[test]
    fn ordered_counts_by_hand() {
        let p = PrimeTable::build(40).unwrap();
        let c = ordered_pair_counts(&p, 7).unwrap();
        // C(10): (3,7),(5,5),(7,3); C(14): (3,11),(7,7),(11,3)
        assert_eq!(c[5], 3);
        assert_eq!(c[7], 3);
        assert_eq!(c[3], 1);
        assert_eq!(c[0], 0);
        assert_eq!(c[1], 0);
        assert_eq!(c[2], 0);
    }

    #[test]
    fn weighted_sums_by_hand() {
        let t = build_table_convolution(5).unwrap();
        assert_eq!(t.weighted_sum(5, 0).unwrap(), 4);
        assert_eq!(t.weighted_sum(5, 1).unwrap(), 34);
        assert_eq!(t.weighted_sum(5, 2).unwrap(), 300);
        assert_eq!(t.weighted_sum(5, 3).unwrap(), 216 + 512 + 2000);
        assert!(matches!(
            t.weighted_sum(5, MAX_ORDER + 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            t.weighted_sum(6, 1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(t.cardinality(2), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn weighted_sum_overflow_is_reported() {
        let t = GoldbachCountTable::from_counts(vec![u64::MAX; 4], Method::Direct).unwrap_err();
        assert!(matches!(t, Error::Overflow(_)));

        let t = GoldbachCountTable::from_counts(vec![1 << 55; 300], Method::Direct).unwrap();
        assert!(t.weighted_sum(302, 4).is_ok());
        assert!(matches!(t.weighted_sum(302, 8), Err(Error::Overflow(_))));
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(
            build_table_direct(2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            build_table_convolution(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn insufficient_prime_table() {
        let p = PrimeTable::build(10).unwrap();
        assert!(matches!(
            build_table_direct_with(&p, 10),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn methods_agree_exhaustively_to_ten_thousand() {
        let primes = PrimeTable::build(20_000).unwrap();
        let direct = build_table_direct_with(&primes, 10_000).unwrap();
        let conv = build_table_convolution_with(&primes, 10_000).unwrap();
        assert_eq!(direct, conv);
        assert_eq!(conv.method(), Method::Convolution);
        for n in 3..200 {
            assert_eq!(
                build_table_direct_with(&primes, n).unwrap(),
                build_table_convolution_with(&primes, n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn goldbach_holds_at_desk_scale() {
        let t = build_table_convolution(100_000).unwrap();
        assert_eq!(t.first_goldbach_gap(), None);
        let gap = GoldbachCountTable::from_counts(vec![1, 0, 2], Method::Direct).unwrap();
        assert_eq!(gap.first_goldbach_gap(), Some(4));
    }

    #[test]
    fn truncation_matches_fresh_build() {
        let big = build_table_convolution(2_000).unwrap();
        let small = build_table_direct(700).unwrap();
        let cut = big.truncated(700).unwrap();
        assert_eq!(cut, small);
        assert_eq!(cut.prefix(), small.prefix());
        assert_eq!(
            cut.weighted_sum(700, 2).unwrap(),
            small.weighted_sum(700, 2).unwrap()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn table_invariants(n in 3u64..3_000) {
            let primes = PrimeTable::build(2 * n).unwrap();
            let t = build_table_convolution_with(&primes, n).unwrap();
            prop_assert_eq!(t.prefix()[n as usize], t.counts().iter().sum::<u64>());
            for k in 3..=n {
                prop_assert!(t.q2(k).unwrap() <= primes.prime_count(2 * k).unwrap() / 2 + 1);
                prop_assert_eq!(t.weighted_sum(k, 0).unwrap(), u128::from(t.cardinality(k).unwrap()));
                if k > 3 {
                    prop_assert!(t.cardinality(k).unwrap() >= t.cardinality(k - 1).unwrap());
                    prop_assert!(t.weighted_sum(k, 1).unwrap() >= t.weighted_sum(k - 1, 1).unwrap());
                    prop_assert!(t.weighted_sum(k, 2).unwrap() >= t.weighted_sum(k - 1, 2).unwrap());
                }
            }
        }
    }
}
