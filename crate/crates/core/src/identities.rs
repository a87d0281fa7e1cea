//! Coefficient-level checks of the generating-function identities.
//!
//! With `f(z) = Σ_p z^p` over odd primes and `δ(k) = [k is an odd prime]`:
//!
//! | identity                                   | coefficient of        | form checked                                         |
//! |--------------------------------------------|-----------------------|------------------------------------------------------|
//! | `2 Σ Q₂(2k) z^{2k} = f² + f(z²)`           | `z^{2k}`              | `2Q₂ = C(2k) + δ(k)`                                 |
//! | `Σ 2k Q₂ z^{2k−1} = f f′ + z f′(z²)`       | `z^{2k−1}`            | `2kQ₂ = Σ q + k δ(k)`                                |
//! | `Σ 2k(2k−1) Q₂ z^{2k−2} = f′² + f f″ + f′(z²) + 2z² f″(z²)` | `z^{2k−2}` | `2k(2k−1)Q₂ = Σ (pq + q(q−1)) + (k + 2k(k−1)) δ(k)` |
//!
//! where the sums run over *ordered* odd-prime pairs `(p, q)` with `p + q = 2k`.
//! The pair sums are enumerated directly, independently of how the count table
//! was built.
//!
//! The second-derivative identity is also evaluated in the form with
//! `f(z²) + 2z² f′(z²)` in place of the last two terms, for which the
//! coefficient is `δ(k−1) + 2(k−1) δ(k−1)`; that variant does not hold and is
//! reported as a diagnostic only.

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::table::GoldbachCountTable;

/// Ordered odd-prime pair statistics per even number `2k`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPairSums {
    pub n: u64,
    /// `C(2k)`, the number of ordered pairs.
    pub count: Vec<u64>,
    /// `Σ q`; empty unless weights were requested.
    pub sum_q: Vec<u128>,
    /// `Σ p·q`; empty unless weights were requested.
    pub sum_pq: Vec<u128>,
    /// `Σ q(q−1)`; empty unless weights were requested.
    pub sum_q_q1: Vec<u128>,
}

impl OrderedPairSums {
    /// Enumerates every ordered pair `(p, q)` with `p + q ≤ 2n`.
    pub fn enumerate(primes: &PrimeTable, n: u64, weights: bool) -> Result<Self> {
        if n >= 3 && primes.limit() < 2 * n - 3 {
            return Err(Error::out_of_range("2n - 3", 2 * n - 3, primes.limit()));
        }
        let len = n as usize + 1;
        let mut count = vec![0u64; len];
        let wlen = if weights { len } else { 0 };
        let mut sum_q = vec![0u128; wlen];
        let mut sum_pq = vec![0u128; wlen];
        let mut sum_q_q1 = vec![0u128; wlen];

        let odd = primes.odd_primes_up_to(2 * n);
        for (i, &p) in odd.iter().enumerate() {
            if 2 * p > 2 * n {
                break;
            }
            for &q in &odd[i..] {
                let m = p + q;
                if m > 2 * n {
                    break;
                }
                let k = (m / 2) as usize;
                if p == q {
                    count[k] += 1;
                } else {
                    count[k] += 2;
                }
                if weights {
                    let (p, q) = (u128::from(p), u128::from(q));
                    // (p, q) and, when distinct, (q, p).
                    let orders: &[(u128, u128)] =
                        if p == q { &[(p, q)] } else { &[(p, q), (q, p)] };
                    for &(a, b) in orders {
                        sum_q[k] += b;
                        sum_pq[k] += a * b;
                        sum_q_q1[k] += b * (b - 1);
                    }
                }
            }
        }
        Ok(OrderedPairSums {
            n,
            count,
            sum_q,
            sum_pq,
            sum_q_q1,
        })
    }
}

fn delta(primes: &PrimeTable, k: u64) -> u64 {
    u64::from(k % 2 == 1 && primes.bit(k))
}

fn check_inputs(table: &GoldbachCountTable, primes: &PrimeTable, available: usize) -> Result<()> {
    if (available as u64) <= table.n() {
        return Err(Error::InvalidArgument(format!(
            "pair data covers k ≤ {} but the table runs to {}",
            available.saturating_sub(1),
            table.n()
        )));
    }
    if primes.limit() < table.n() {
        return Err(Error::out_of_range("n", table.n(), primes.limit()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residual {
    /// Largest `|lhs − rhs|` over `3 ≤ k ≤ n`.
    pub max: u128,
    /// First `k` attaining it, when nonzero.
    pub at: Option<u64>,
}

impl Residual {
    fn new() -> Self {
        Residual { max: 0, at: None }
    }

    fn record(&mut self, k: u64, lhs: u128, rhs: u128) {
        let r = lhs.abs_diff(rhs);
        if r > self.max {
            self.max = r;
            self.at = Some(k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max == 0
    }
}

/// `max_k |2Q₂(2k) − C(2k) − δ(k)|`; `ordered[k] = C(2k)`.
pub fn verify_lemma1(
    table: &GoldbachCountTable,
    ordered: &[u64],
    primes: &PrimeTable,
) -> Result<Residual> {
    check_inputs(table, primes, ordered.len())?;
    let mut res = Residual::new();
    for (k, &q) in (3..).zip(table.counts()) {
        let lhs = 2 * u128::from(q);
        let rhs = u128::from(ordered[k as usize]) + u128::from(delta(primes, k));
        res.record(k, lhs, rhs);
    }
    Ok(res)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivativeCheck {
    pub first: Residual,
    pub second: Residual,
    /// Second identity with `f(z²) + 2z² f′(z²)`; expected nonzero.
    pub second_as_printed: Residual,
}

/// Coefficient identities for the first and second derivatives of the
/// pair-count series. `sums` must carry weights.
pub fn verify_derivative_identities(
    table: &GoldbachCountTable,
    sums: &OrderedPairSums,
    primes: &PrimeTable,
) -> Result<DerivativeCheck> {
    check_inputs(table, primes, sums.sum_q.len())?;
    let mut first = Residual::new();
    let mut second = Residual::new();
    let mut printed = Residual::new();
    for (k, &q) in (3..).zip(table.counts()) {
        let ku = k as usize;
        let (k128, q128) = (u128::from(k), u128::from(q));
        let d = u128::from(delta(primes, k));
        let d_prev = u128::from(delta(primes, k - 1));

        first.record(k, 2 * k128 * q128, sums.sum_q[ku] + k128 * d);

        let lhs2 = 2 * k128 * (2 * k128 - 1) * q128;
        let pair_part = sums.sum_pq[ku] + sums.sum_q_q1[ku];
        second.record(k, lhs2, pair_part + (k128 + 2 * k128 * (k128 - 1)) * d);
        printed.record(k, lhs2, pair_part + d_prev + 2 * (k128 - 1) * d_prev);
    }
    Ok(DerivativeCheck {
        first,
        second,
        second_as_printed: printed,
    })
}

/// Largest degrees accepted by [`euler_bivariate_check`].
pub const EULER_MAX_N: usize = 200;
pub const EULER_MAX_M: usize = 8;

/// Coefficients `[m][n]` of `Π_p (1 − x z^p)⁻¹` over odd primes, truncated to
/// `z^max_n` and `x^max_m`.
pub fn euler_product_coefficients(max_n: usize, max_m: usize) -> Result<Vec<Vec<u64>>> {
    check_euler_limits(max_n, max_m)?;
    let mut a = vec![vec![0u64; max_n + 1]; max_m + 1];
    a[0][0] = 1;
    for p in odd_primes_small(max_n) {
        // Multiply by Σ_j x^j z^{jp}: a[m][n] += a[m−1][n−p], in increasing
        // order so that repeated parts are picked up.
        for m in 1..=max_m {
            for n in p..=max_n {
                a[m][n] += a[m - 1][n - p];
            }
        }
    }
    Ok(a)
}

/// `Q_m(n)` for all `m ≤ max_m`, `n ≤ max_n` by listing multisets of odd primes.
pub fn enumerate_prime_partitions(max_n: usize, max_m: usize) -> Result<Vec<Vec<u64>>> {
    check_euler_limits(max_n, max_m)?;
    let primes = odd_primes_small(max_n);
    let mut counts = vec![vec![0u64; max_n + 1]; max_m + 1];

    fn walk(
        primes: &[usize],
        start: usize,
        sum: usize,
        parts: usize,
        max_n: usize,
        max_m: usize,
        counts: &mut [Vec<u64>],
    ) {
        counts[parts][sum] += 1;
        if parts == max_m {
            return;
        }
        for (i, &p) in primes.iter().enumerate().skip(start) {
            if sum + p > max_n {
                break;
            }
            walk(primes, i, sum + p, parts + 1, max_n, max_m, counts);
        }
    }
    walk(&primes, 0, 0, 0, max_n, max_m, &mut counts);
    Ok(counts)
}

/// Largest coefficient difference between the product expansion and direct
/// enumeration.
pub fn euler_bivariate_check(max_n: usize, max_m: usize) -> Result<u64> {
    let product = euler_product_coefficients(max_n, max_m)?;
    let listed = enumerate_prime_partitions(max_n, max_m)?;
    Ok(product
        .iter()
        .flatten()
        .zip(listed.iter().flatten())
        .map(|(a, b)| a.abs_diff(*b))
        .max()
        .unwrap_or(0))
}

fn check_euler_limits(max_n: usize, max_m: usize) -> Result<()> {
    if max_n > EULER_MAX_N || max_m > EULER_MAX_M {
        return Err(Error::Resource(format!(
            "bivariate expansion limited to n ≤ {EULER_MAX_N}, m ≤ {EULER_MAX_M}; \
             got n = {max_n}, m = {max_m}"
        )));
    }
    Ok(())
}

fn odd_primes_small(bound: usize) -> Vec<usize> {
    (3..=bound)
        .step_by(2)
        .filter(|&m| {
            (3..)
                .step_by(2)
                .take_while(|d| d * d <= m)
                .all(|d| m % d != 0)
        })
        .collect()
}
