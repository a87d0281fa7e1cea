//! Partial-sum diagnostics for the Hardy–Littlewood–Karamata transfer.
//!
//! If `g(x) = Σ a_k x^k ~ (r − x)^{−ρ} L(1/(r − x))` as `x → r⁻` with
//! `a_k ≥ 0` and `L` slowly varying, then
//! `Σ_{k≤N} a_k r^k ~ (N/r)^ρ L(N) / Γ(ρ + 1)`.
//!
//! Applied to the Goldbach series this predicts
//!
//! | quantity            | partial sum            | ρ | predicted             |
//! |---------------------|------------------------|---|-----------------------|
//! | `cardinality`       | `Σ Q₂(2k)`             | 2 | `2 n² / log² n`       |
//! | `first_moment_sum`  | `Σ 2k Q₂(2k)`          | 3 | `(8/3) n³ / log² n`   |
//! | `second_moment_sum` | `Σ (2k)² Q₂(2k)`       | 4 | `4 n⁴ / log² n`       |
//!
//! The constants are reported against measured sums, not asserted.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::moments::exact_moment;
use crate::table::GoldbachCountTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoteQuantity {
    Cardinality,
    FirstMomentSum,
    SecondMomentSum,
}

impl AsymptoteQuantity {
    pub const ALL: [AsymptoteQuantity; 3] = [
        AsymptoteQuantity::Cardinality,
        AsymptoteQuantity::FirstMomentSum,
        AsymptoteQuantity::SecondMomentSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AsymptoteQuantity::Cardinality => "cardinality",
            AsymptoteQuantity::FirstMomentSum => "first_moment_sum",
            AsymptoteQuantity::SecondMomentSum => "second_moment_sum",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown asymptote quantity {s:?}")))
    }

    /// Power of `2k` weighting the counts.
    pub fn weight_order(self) -> u32 {
        match self {
            AsymptoteQuantity::Cardinality => 0,
            AsymptoteQuantity::FirstMomentSum => 1,
            AsymptoteQuantity::SecondMomentSum => 2,
        }
    }

    /// Exponent `ρ`, equal to the power of `n` in the prediction.
    pub fn rho(self) -> u32 {
        self.weight_order() + 2
    }

    /// Leading constant of the prediction `c · n^ρ / log² n`.
    pub fn constant(self) -> f64 {
        match self {
            AsymptoteQuantity::Cardinality => 2.0,
            AsymptoteQuantity::FirstMomentSum => 8.0 / 3.0,
            AsymptoteQuantity::SecondMomentSum => 4.0,
        }
    }

    pub fn predicted(self, n: u64) -> f64 {
        let x = n as f64;
        let log = x.ln();
        self.constant() * x.powi(self.rho() as i32) / (log * log)
    }
}

impl fmt::Display for AsymptoteQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteDiagnostic {
    pub quantity: AsymptoteQuantity,
    pub n: u64,
    /// Exact partial sum.
    pub measured: u128,
    pub predicted: f64,
    /// `measured / predicted`.
    pub ratio: f64,
    /// `measured · log² n / n^ρ`, the constant the data implies.
    pub implied_constant: f64,
}

pub fn tauberian_ratio(
    table: &GoldbachCountTable,
    quantity: AsymptoteQuantity,
    n: u64,
) -> Result<AsymptoteDiagnostic> {
    let measured = table.weighted_sum(n, quantity.weight_order())?;
    let predicted = quantity.predicted(n);
    let x = n as f64;
    let log = x.ln();
    let m = measured as f64;
    Ok(AsymptoteDiagnostic {
        quantity,
        n,
        measured,
        predicted,
        ratio: m / predicted,
        implied_constant: m * log * log / x.powi(quantity.rho() as i32),
    })
}

/// `Σ 2k Q₂ / (2n · Σ Q₂) − E[Gₙ/n]`, exactly; zero for every `n`.
pub fn first_moment_consistency(table: &GoldbachCountTable, n: u64) -> Result<BigRational> {
    let t = table.truncated(n)?;
    let first = BigInt::from(t.weighted_sum(n, 1)?);
    let card = BigInt::from(t.cardinality(n)?);
    let ratio = BigRational::new(first, BigInt::from(2 * n) * card);
    Ok(ratio - exact_moment(&t, 1)?.exact)
}

/// `Γ(k)` for positive integer `k`, as `(k − 1)!`.
pub fn gamma_integer(k: u32) -> f64 {
    (1..k).map(f64::from).product()
}

/// Right side of the transfer, `(N/r)^ρ L(N) / Γ(ρ + 1)`, for integer `ρ`.
pub fn karamata_partial_sum<L: Fn(f64) -> f64>(
    big_n: f64,
    r: f64,
    rho: u32,
    slowly_varying: L,
) -> f64 {
    (big_n / r).powi(rho as i32) * slowly_varying(big_n) / gamma_integer(rho + 1)
}
