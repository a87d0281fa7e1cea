//! The prime power series `f(z) = Σ_p z^p` over odd primes and its first two
//! derivatives, summed with a certified truncation bound.
//!
//! Terms for primes above the truncation point are bounded by the same sum
//! over *every* integer `m ≥ P`, which has a closed form:
//!
//! ```text
//! Σ_{m≥P} z^m            = z^P / (1−z)
//! Σ_{m≥P} m z^{m−1}      = P z^{P−1}/(1−z) + z^P/(1−z)²
//! Σ_{m≥P} m(m−1) z^{m−2} = P(P−1) z^{P−2}/(1−z) + 2P z^{P−1}/(1−z)² + 2 z^P/(1−z)³
//! ```
//!
//! `eps` is a mixed tolerance: each tail must be at most `eps · max(1, value)`,
//! which is absolute for small values and relative near `z → 1`, where `f″`
//! grows like `(1−z)⁻³`.

use crate::error::{Error, Result};
use crate::primes::PrimeTable;

// How many primes to add between tail checks.
const CHECK_EVERY: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub z: f64,
    pub eps: f64,
    pub f: f64,
    pub f_prime: f64,
    pub f_double_prime: f64,
    /// Largest prime included in the partial sums (0 when none were needed).
    pub p_max: u64,
    /// Certified remainders for `f`, `f′`, `f″`.
    pub tails: [f64; 3],
}

impl SeriesPoint {
    pub fn values(&self) -> [f64; 3] {
        [self.f, self.f_prime, self.f_double_prime]
    }

    /// Largest tail measured against `max(1, value)`; at most `eps`.
    pub fn tail_bound(&self) -> f64 {
        self.tails
            .iter()
            .zip(self.values())
            .map(|(t, v)| t / v.max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Bounds on `Σ_{m≥start} z^m`, `Σ m z^{m−1}`, `Σ m(m−1) z^{m−2}`.
fn integer_tails(z: f64, ln_z: f64, start: u64) -> [f64; 3] {
    let q = 1.0 - z;
    let p = start as f64;
    let zp2 = ((p - 2.0) * ln_z).exp();
    let zp1 = zp2 * z;
    let zp = zp1 * z;
    [
        zp / q,
        p * zp1 / q + zp / (q * q),
        p * (p - 1.0) * zp2 / q + 2.0 * p * zp1 / (q * q) + 2.0 * zp / (q * q * q),
    ]
}

fn within(tails: &[f64; 3], sums: &[f64; 3], eps: f64) -> bool {
    tails.iter().zip(sums).all(|(t, s)| *t <= eps * s.max(1.0))
}

/// Evaluates `f`, `f′`, `f″` at `z ∈ [0, 1)` to tolerance `eps`.
pub fn eval_series(primes: &PrimeTable, z: f64, eps: f64) -> Result<SeriesPoint> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("z must lie in [0, 1), got {z}")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let mut point = SeriesPoint {
        z,
        eps,
        f: 0.0,
        f_prime: 0.0,
        f_double_prime: 0.0,
        p_max: 0,
        tails: [0.0; 3],
    };
    if z == 0.0 {
        return Ok(point);
    }

    // z − 1 is exact for z ≥ 1/2, so ln z keeps full relative accuracy near 1.
    let ln_z = (z - 1.0).ln_1p();
    let mut sums = [0.0f64; 3];
    let odd = primes.odd_primes();
    let mut done = false;
    for (i, &p) in odd.iter().enumerate() {
        let pf = p as f64;
        let w = ((pf - 2.0) * ln_z).exp();
        sums[0] += w * z * z;
        sums[1] += pf * w * z;
        sums[2] += pf * (pf - 1.0) * w;
        point.p_max = p;
        if (i + 1) % CHECK_EVERY == 0 {
            let tails = integer_tails(z, ln_z, p + 1);
            if within(&tails, &sums, eps) {
                point.tails = tails;
                done = true;
                break;
            }
        }
    }
    if !done {
        let start = primes.limit() + 1;
        let tails = integer_tails(z, ln_z, start.max(3));
        if !within(&tails, &sums, eps) {
            let needed = required_limit(z, ln_z, eps, &sums, start);
            return Err(Error::PrimeTableTooSmall {
                needed,
                have: primes.limit(),
            });
        }
        point.tails = tails;
    }
    [point.f, point.f_prime, point.f_double_prime] = sums;
    Ok(point)
}

// Smallest truncation point meeting the tolerance, using the partial sums
// reached so far as lower bounds for the full values.
fn required_limit(z: f64, ln_z: f64, eps: f64, sums: &[f64; 3], from: u64) -> u64 {
    let ok = |p: u64| within(&integer_tails(z, ln_z, p), sums, eps);
    let mut hi = from.max(3);
    while !ok(hi) {
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            return hi;
        }
    }
    let mut lo = from.max(3);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi.saturating_sub(1)
}

/// Evaluated series divided by the reference asymptotes near `z → 1⁻`.
///
/// With `L = log(1/(1−z))` the reference shapes are `1/((1−z)L)`,
/// `1/((1−z)²L)` and `1/((1−z)³L)`. `implied` holds the evaluated
/// constants (`f·(1−z)L`, `f′·(1−z)²L`, `f″·(1−z)³L`); `ratios` divides
/// those by the stated constants 1, 2, 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Ratios {
    pub z: f64,
    pub log_term: f64,
    pub implied: [f64; 3],
    pub ratios: [f64; 3],
}

pub const LEMMA2_CONSTANTS: [f64; 3] = [1.0, 2.0, 2.0];

pub fn lemma2_ratios(point: &SeriesPoint) -> Result<Lemma2Ratios> {
    if point.z < 0.9 {
        return Err(Error::Domain(format!(
            "asymptotic ratios need z ≥ 0.9, got {}",
            point.z
        )));
    }
    let q = 1.0 - point.z;
    let log_term = -q.ln();
    let implied = [
        point.f * q * log_term,
        point.f_prime * q * q * log_term,
        point.f_double_prime * q * q * q * log_term,
    ];
    let mut ratios = implied;
    for (r, c) in ratios.iter_mut().zip(LEMMA2_CONSTANTS) {
        *r /= c;
    }
    Ok(Lemma2Ratios {
        z: point.z,
        log_term,
        implied,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_zero() {
        let t = PrimeTable::build(100).unwrap();
        let p = eval_series(&t, 0.0, 1e-9).unwrap();
        assert_eq!(p.values(), [0.0; 3]);
        assert_eq!(p.tail_bound(), 0.0);
    }

    #[test]
    fn domain_checks() {
        let t = PrimeTable::build(100).unwrap();
        assert!(matches!(eval_series(&t, 1.0, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(eval_series(&t, -0.1, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(
            eval_series(&t, f64::NAN, 1e-9),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_series(&t, 0.5, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn half_against_direct_summation() {
        // Oracle: exact powers 2^-p, summed from the largest term down.
        let t = PrimeTable::build(200).unwrap();
        let oracle: f64 = t
            .odd_primes()
            .iter()
            .rev()
            .map(|&p| 0.5f64.powi(p as i32))
            .sum();
        let p = eval_series(&t, 0.5, 1e-9).unwrap();
        assert!((p.f - oracle).abs() <= 1e-9, "{} vs {oracle}", p.f);
        assert!((p.f - 0.164_682_509_851).abs() < 1e-9);
        assert!(p.tail_bound() <= 1e-9);
    }

    #[test]
    fn small_table_names_the_limit() {
        let t = PrimeTable::build(100).unwrap();
        let err = eval_series(&t, 0.99, 1e-9).unwrap_err();
        assert!(err.to_string().contains("at least"), "{err}");
        assert!(matches!(err, Error::PrimeTableTooSmall { have: 100, .. }));
    }

    #[test]
    fn required_limit_suffices() {
        let t = PrimeTable::build(100).unwrap();
        let needed = match eval_series(&t, 0.99, 1e-9) {
            Err(Error::PrimeTableTooSmall { needed, .. }) => needed,
            other => panic!("unexpected {other:?}"),
        };
        let big = PrimeTable::build(needed).unwrap();
        assert!(eval_series(&big, 0.99, 1e-9).is_ok());
    }

    #[test]
    fn truncation_is_sound() {
        let small = PrimeTable::build(5_000).unwrap();
        let big = PrimeTable::build(50_000).unwrap();
        for z in [0.9, 0.99] {
            let a = eval_series(&small, z, 1e-6).unwrap();
            let b = eval_series(&big, z, 1e-12).unwrap();
            for i in 0..3 {
                assert!(
                    (a.values()[i] - b.values()[i]).abs()
                        <= a.tails[i] + b.tails[i] + 1e-12 * b.values()[i],
                    "z = {z}, series {i}"
                );
            }
        }
    }

    #[test]
    fn monotone_in_z() {
        let t = PrimeTable::build(100_000).unwrap();
        let mut prev = -1.0;
        for i in 0..50 {
            let z = i as f64 / 50.0 * 0.99;
            let p = eval_series(&t, z, 1e-9).unwrap();
            assert!(p.f > prev || (i == 0 && p.f == 0.0));
            assert!(p.values().iter().all(|v| v.is_finite() && *v >= 0.0));
            prev = p.f;
        }
    }

    #[test]
    fn ratios_need_asymptotic_regime() {
        let t = PrimeTable::build(1000).unwrap();
        let p = eval_series(&t, 0.5, 1e-9).unwrap();
        assert!(lemma2_ratios(&p).is_err());
    }
}
