//! Exact moments of `Gₙ/n`, the limit law `T = max(U₁, U₂)` and the
//! Kolmogorov distance between them.
//!
//! Every value derived from a count table is an exact rational; floats only
//! appear when a report is rendered.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::table::{GoldbachCountTable, MAX_ORDER};

/// Law of the maximum of two independent uniforms on `(0, 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LimitLaw;

impl LimitLaw {
    pub fn cdf(self, u: f64) -> f64 {
        limit_cdf(u)
    }

    /// `E[T^r] = 2 / (r + 2)`.
    pub fn moment(self, r: u32) -> BigRational {
        BigRational::new(2.into(), (u64::from(r) + 2).into())
    }

    pub fn mean(self) -> BigRational {
        self.moment(1)
    }

    pub fn variance(self) -> BigRational {
        let m = self.mean();
        self.moment(2) - &m * &m
    }
}

pub fn limit_cdf(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u < 1.0 {
        u * u
    } else {
        1.0
    }
}

pub fn limit_moment(r: u32) -> f64 {
    2.0 / (f64::from(r) + 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `E[(Gₙ/n)^r]`.
    Raw(u32),
    /// `Var(Gₙ/n)`.
    Variance,
    /// `Pr(Rₙ ≤ Gₙ)` with `Rₙ` uniform on `{3, …, n}`.
    TwoStep,
}

impl MomentKind {
    pub fn name(self) -> &'static str {
        match self {
            MomentKind::Raw(_) => "moment",
            MomentKind::Variance => "variance",
            MomentKind::TwoStep => "two_step",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            MomentKind::Raw(r) => r,
            MomentKind::Variance => 2,
            MomentKind::TwoStep => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub n: u64,
    pub kind: MomentKind,
    pub exact: BigRational,
    pub limit: BigRational,
}

impl MomentReport {
    fn new(n: u64, kind: MomentKind, exact: BigRational, limit: BigRational) -> Self {
        MomentReport {
            n,
            kind,
            exact,
            limit,
        }
    }

    pub fn value(&self) -> f64 {
        to_f64(&self.exact)
    }

    pub fn limit_value(&self) -> f64 {
        to_f64(&self.limit)
    }

    pub fn deviation_exact(&self) -> BigRational {
        (&self.exact - &self.limit).abs()
    }

    pub fn deviation(&self) -> f64 {
        to_f64(&self.deviation_exact())
    }
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn ratio_u128(num: u128, den: BigInt) -> BigRational {
    BigRational::new(BigInt::from(num), den)
}

/// `E[(Gₙ/n)^r] = Σ (2k)^r Q₂(2k) / ((2n)^r |Σ₂ₙ|)`, reduced.
pub fn exact_moment(table: &GoldbachCountTable, r: u32) -> Result<MomentReport> {
    if r == 0 || r > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "moment order must be in 1..={MAX_ORDER}, got {r}"
        )));
    }
    let n = table.n();
    let num = table.weighted_sum(n, r)?;
    let den = BigInt::from(2 * n).pow(r) * BigInt::from(table.cardinality(n)?);
    if den.is_zero() {
        return Err(Error::InvalidArgument("table has no partitions".into()));
    }
    Ok(MomentReport::new(
        n,
        MomentKind::Raw(r),
        ratio_u128(num, den),
        LimitLaw.moment(r),
    ))
}

/// `Var(Gₙ/n) = E[(Gₙ/n)²] − E[Gₙ/n]²`.
pub fn exact_variance(table: &GoldbachCountTable) -> Result<MomentReport> {
    let m1 = exact_moment(table, 1)?.exact;
    let m2 = exact_moment(table, 2)?.exact;
    Ok(MomentReport::new(
        table.n(),
        MomentKind::Variance,
        m2 - &m1 * &m1,
        LimitLaw.variance(),
    ))
}

/// Exact `Pr(Rₙ ≤ Gₙ)` for `Rₙ` uniform on `{3, …, n}` independent of `Gₙ`:
/// `Σ_k Pr(Gₙ = k) (k − 2)/(n − 2)`.
pub fn exact_two_step(table: &GoldbachCountTable) -> Result<MomentReport> {
    let n = table.n();
    let card = table.cardinality(n)?;
    // Σ k q2[k] = W₁ / 2.
    let sum_k = BigInt::from(table.weighted_sum(n, 1)? / 2);
    let num = sum_k - BigInt::from(2u64) * BigInt::from(card);
    let den = BigInt::from(card) * BigInt::from(n - 2);
    if den.is_zero() {
        return Err(Error::InvalidArgument("table has no partitions".into()));
    }
    Ok(MomentReport::new(
        n,
        MomentKind::TwoStep,
        BigRational::new(num, den),
        LimitLaw.mean(),
    ))
}

/// One evaluation point of the exact CDF of `Gₙ/n` against `F(u) = u²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfPoint {
    pub k: u64,
    pub u: f64,
    /// `Pr(Gₙ ≤ k)`.
    pub cdf: f64,
    /// `Pr(Gₙ < k)`, the left limit at the atom.
    pub left_cdf: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdfReport {
    pub n: u64,
    /// `sup_u |Pr(Gₙ/n ≤ u) − F(u)|`, exact.
    pub distance: BigRational,
    /// Atom where the supremum is attained (first one on ties).
    pub argmax_k: u64,
    /// Whether the supremum is attained at the left limit of `argmax_k`.
    pub at_left_limit: bool,
    pub points: Vec<CdfPoint>,
}

impl CdfReport {
    pub fn distance_value(&self) -> f64 {
        to_f64(&self.distance)
    }
}

/// Kolmogorov distance between the law of `Gₙ/n` and `F(u) = u²`.
///
/// The empirical side is a step function with atoms at `k/n`, so the
/// supremum is attained at an atom or at its left limit. Each candidate is
/// compared as the integer `|S(k)·n² − k²·S(n)|` over the common
/// denominator `S(n)·n²`.
pub fn kolmogorov_distance(table: &GoldbachCountTable) -> Result<CdfReport> {
    kolmogorov_distance_with_points(table, 0)
}

/// As [`kolmogorov_distance`], also recording up to `grid` evenly spaced
/// atoms (always including `k = n`) in `points`.
pub fn kolmogorov_distance_with_points(
    table: &GoldbachCountTable,
    grid: usize,
) -> Result<CdfReport> {
    let n = table.n();
    let prefix = table.prefix();
    let total = i128::from(prefix[n as usize]);
    if total == 0 {
        return Err(Error::InvalidArgument("table has no partitions".into()));
    }
    let nn = i128::from(n) * i128::from(n);
    let den = total
        .checked_mul(nn)
        .ok_or_else(|| Error::Overflow(format!("CDF denominator at n = {n}")))?;

    let mut best = (-1i128, 0u64, false);
    for k in 3..=n {
        let target = i128::from(k) * i128::from(k) * total;
        let at = (i128::from(prefix[k as usize]) * nn - target).abs();
        let left = (i128::from(prefix[k as usize - 1]) * nn - target).abs();
        if at > best.0 {
            best = (at, k, false);
        }
        if left > best.0 {
            best = (left, k, true);
        }
    }

    let mut points = Vec::new();
    if grid > 0 {
        let span = n - 2;
        let step = span.div_ceil(grid as u64).max(1);
        let mut k = 3 + (span - 1) % step;
        while k <= n {
            let s = prefix[k as usize] as f64;
            let u = k as f64 / n as f64;
            points.push(CdfPoint {
                k,
                u,
                cdf: s / total as f64,
                left_cdf: prefix[k as usize - 1] as f64 / total as f64,
                limit: limit_cdf(u),
            });
            k += step;
        }
    }

    Ok(CdfReport {
        n,
        distance: BigRational::new(BigInt::from(best.0), BigInt::from(den)),
        argmax_k: best.1,
        at_left_limit: best.2,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Mean,
    Variance,
    SecondMoment,
    Kolmogorov,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Mean => "mean",
            Quantity::Variance => "variance",
            Quantity::SecondMoment => "second_moment",
            Quantity::Kolmogorov => "kolmogorov",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Quantity::Mean),
            "variance" => Ok(Quantity::Variance),
            "second_moment" => Ok(Quantity::SecondMoment),
            "kolmogorov" | "cdf" => Ok(Quantity::Kolmogorov),
            other => Err(Error::InvalidArgument(format!(
                "unknown quantity {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepReport {
    Moment(MomentReport),
    Cdf(CdfReport),
}

impl SweepReport {
    pub fn n(&self) -> u64 {
        match self {
            SweepReport::Moment(m) => m.n,
            SweepReport::Cdf(c) => c.n,
        }
    }

    /// Distance from the limit: `|value − limit|` for moments, `D(n)` for the CDF.
    pub fn deviation(&self) -> f64 {
        match self {
            SweepReport::Moment(m) => m.deviation(),
            SweepReport::Cdf(c) => c.distance_value(),
        }
    }
}

/// Evaluates each quantity at each `n` by truncating `table`, handing reports
/// to `emit` in `(n, quantity)` order as soon as they are ready.
pub fn sweep_each<F>(
    table: &GoldbachCountTable,
    n_list: &[u64],
    quantities: &[Quantity],
    mut emit: F,
) -> Result<()>
where
    F: FnMut(SweepReport) -> Result<()>,
{
    if n_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("n list must be ascending".into()));
    }
    if quantities.is_empty() {
        return Ok(());
    }
    for &n in n_list {
        let t = table.truncated(n)?;
        for &q in quantities {
            let report = match q {
                Quantity::Mean => SweepReport::Moment(exact_moment(&t, 1)?),
                Quantity::SecondMoment => SweepReport::Moment(exact_moment(&t, 2)?),
                Quantity::Variance => SweepReport::Moment(exact_variance(&t)?),
                Quantity::Kolmogorov => SweepReport::Cdf(kolmogorov_distance(&t)?),
            };
            emit(report)?;
        }
    }
    Ok(())
}

pub fn convergence_sweep(
    table: &GoldbachCountTable,
    n_list: &[u64],
    quantities: &[Quantity],
) -> Result<Vec<SweepReport>> {
    let mut out = Vec::new();
    sweep_each(table, n_list, quantities, |r| {
        out.push(r);
        Ok(())
    })?;
    Ok(out)
}
