use std::collections::hash_map::RandomState;
use std::fs::File;
use std::hash::{BuildHasher, Hasher};
use std::io::{self, BufWriter, Write};

use goldbach_core::identities::{
    euler_bivariate_check, verify_derivative_identities, verify_lemma1, OrderedPairSums, Residual,
};
use goldbach_core::moments::{exact_two_step, kolmogorov_distance_with_points, sweep_each};
use goldbach_core::report::{Format, ReportWriter, Row, Value};
use goldbach_core::sampler::partition_at;
use goldbach_core::table::{build_table_direct_with, ordered_pair_counts};
use goldbach_core::tauberian::first_moment_consistency;
use num_traits::Zero;

use goldbach_core::{
    count_q2_direct, enumerate_partitions, eval_series, exact_moment, exact_variance,
    lemma2_ratios, tauberian_ratio, AsymptoteQuantity, Error, GoldbachCountTable, Method,
    PrimeTable, Quantity, SamplerStream, SweepReport,
};

use crate::args::*;
use crate::store;
use crate::Failure;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

// Above this n the pair-count identity uses the transform instead of
// enumerating pairs, which grows like π(2n)².
const ENUMERATION_MAX_N: u64 = 100_000;

// Cross-method spot checks for tables too large to rebuild directly.
const SPOT_CHECKS: u64 = 200;

// Series evaluation starts from this prime table and grows on demand.
const SERIES_START_LIMIT: u64 = 1 << 16;

/// Streams rows with provenance fields appended.
struct Reporter {
    writer: ReportWriter<Box<dyn Write>>,
    provenance: Vec<(&'static str, Value)>,
}

impl Reporter {
    fn open(args: &OutputArgs) -> Result<Self, Failure> {
        let sink: Box<dyn Write> = match &args.output {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(Error::Io)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let format = match args.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        };
        Ok(Reporter {
            writer: ReportWriter::new(sink, format),
            provenance: Vec::new(),
        })
    }

    fn tag(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.provenance.push((key, value.into()));
        self
    }

    fn emit(&mut self, mut row: Row) -> Result<(), Error> {
        for (k, v) in &self.provenance {
            row.push(k, v.clone());
        }
        row.push("tool_version", TOOL_VERSION);
        Ok(self.writer.write(&row)?)
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = RandomState::new().build_hasher().finish();
        eprintln!("generated seed {s}; pass --seed {s} to reproduce");
        s
    })
}

pub fn count(args: &CountArgs) -> Result<(), Failure> {
    let path = args.out.clone().or_else(|| store::cache_path(args.n));
    let cached = match &path {
        Some(p) if !args.force => store::load_matching(p, args.n),
        _ => None,
    };
    let reused = cached.is_some();
    let table = match cached {
        Some(t) => t,
        None => {
            let primes = PrimeTable::build(2 * args.n)?;
            let t = store::build(&primes, args.n, args.method)?;
            if let Some(p) = &path {
                store::save(&t, p)?;
            }
            t
        }
    };
    let mut out = Reporter::open(&args.output)?.tag("method", table.method().as_str());
    out.emit(
        Row::new()
            .with("n", table.n())
            .with("cardinality", table.cardinality(table.n())?)
            .with("goldbach_holds", table.first_goldbach_gap().is_none())
            .with("first_gap", table.first_goldbach_gap().unwrap_or(0))
            .with(
                "cache",
                path.as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            )
            .with("reused", reused),
    )?;
    Ok(())
}

fn check_row(check: &str, n: u64, r: &Residual, detail: String) -> Row {
    Row::new()
        .with("check", check)
        .with("n", n)
        .with("residual", r.max)
        .with("at", r.at.unwrap_or(0))
        .with("pass", r.is_zero())
        .with("detail", detail)
}

pub fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let table = store::acquire(&args.table)?;
    let n = table.n();
    let primes = PrimeTable::build(2 * n)?;
    let mut out = Reporter::open(&args.output)?.tag("method", table.method().as_str());
    let mut failed = Vec::new();
    let mut record = |out: &mut Reporter, row: Row, name: &str, ok: bool| -> Result<(), Failure> {
        if !ok {
            failed.push(name.to_string());
        }
        Ok(out.emit(row)?)
    };

    let (ordered, route) = if n <= ENUMERATION_MAX_N {
        (
            OrderedPairSums::enumerate(&primes, n, false)?.count,
            "pair enumeration",
        )
    } else {
        (ordered_pair_counts(&primes, n)?, "transform")
    };
    let r = verify_lemma1(&table, &ordered, &primes)?;
    record(
        &mut out,
        check_row(
            "pair_count",
            n,
            &r,
            format!("2Q2(2k) = C(2k) + [k odd prime], C by {route}"),
        ),
        "pair_count",
        r.is_zero(),
    )?;

    let r = cross_method(&table, &primes)?;
    let detail = if n <= ENUMERATION_MAX_N {
        "all k against direct counting".to_string()
    } else {
        format!("{SPOT_CHECKS} evenly spaced k against direct counting")
    };
    record(
        &mut out,
        check_row("cross_method", n, &r, detail),
        "cross_method",
        r.is_zero(),
    )?;

    let dn = n.min(args.derivative_max.max(3));
    let sums = OrderedPairSums::enumerate(&primes, dn, true)?;
    let d = verify_derivative_identities(&table.truncated(dn)?, &sums, &primes)?;
    record(
        &mut out,
        check_row(
            "derivative_first",
            dn,
            &d.first,
            "2kQ2 = sum q + k[k odd prime]".into(),
        ),
        "derivative_first",
        d.first.is_zero(),
    )?;
    record(
        &mut out,
        check_row(
            "derivative_second",
            dn,
            &d.second,
            format!(
                "uncorrected delta(k-1) form: residual {} at k = {}",
                d.second_as_printed.max,
                d.second_as_printed.at.unwrap_or(0)
            ),
        ),
        "derivative_second",
        d.second.is_zero(),
    )?;

    let e = euler_bivariate_check(60, 5)?;
    let r = Residual {
        max: u128::from(e),
        at: None,
    };
    record(
        &mut out,
        check_row(
            "euler_product",
            60,
            &r,
            "coefficients of z^n u^m, m <= 5".into(),
        ),
        "euler_product",
        e == 0,
    )?;

    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join(", ")))
    }
}

// Number of k where the table disagrees with an independent count.
fn cross_method(table: &GoldbachCountTable, primes: &PrimeTable) -> Result<Residual, Failure> {
    let n = table.n();
    let mut r = Residual { max: 0, at: None };
    let mut mismatch = |k: u64, a: u64, b: u64| {
        if a != b {
            r.max += 1;
            r.at.get_or_insert(k);
        }
    };
    if n <= ENUMERATION_MAX_N {
        let direct = build_table_direct_with(primes, n)?;
        for k in 3..=n {
            mismatch(k, table.q2(k)?, direct.q2(k)?);
        }
    } else {
        for i in 0..SPOT_CHECKS {
            let k = 3 + (n - 3) * i / (SPOT_CHECKS - 1);
            mismatch(k, table.q2(k)?, count_q2_direct(primes, 2 * k)?);
        }
    }
    Ok(r)
}

pub fn sample(args: &SampleArgs) -> Result<(), Failure> {
    let table = store::acquire(&args.table)?;
    let n = table.n();
    let seed = resolve_seed(args.seed.seed);
    let mut stream = SamplerStream::new(&table, seed, args.seed.stream)?;
    let mut out = Reporter::open(&args.output)?
        .tag("method", table.method().as_str())
        .tag("seed", seed)
        .tag("stream", args.seed.stream);
    match args.mode {
        SampleMode::Partitions => {
            let primes = PrimeTable::build(2 * n)?;
            for i in 0..args.trials {
                let g = stream.sample_partition(&primes)?;
                out.emit(
                    Row::new()
                        .with("draw", i)
                        .with("n", n)
                        .with("k", g.m / 2)
                        .with("m", g.m)
                        .with("p", g.p)
                        .with("q", g.q),
                )?;
            }
        }
        SampleMode::Numbers => {
            for i in 0..args.trials {
                let k = stream.sample_number();
                out.emit(
                    Row::new()
                        .with("draw", i)
                        .with("n", n)
                        .with("k", k)
                        .with("u", k as f64 / n as f64),
                )?;
            }
        }
    }
    Ok(())
}

pub fn partitions(args: &PartitionsArgs) -> Result<(), Failure> {
    let primes = PrimeTable::build(args.m.max(2))?;
    let all = enumerate_partitions(&primes, args.m)?;
    let mut out = Reporter::open(&args.output)?.tag("method", Method::Direct.as_str());
    for (i, g) in all.iter().enumerate() {
        debug_assert_eq!(
            partition_at(&primes, args.m, i as u64).ok().as_ref(),
            Some(g)
        );
        out.emit(
            Row::new()
                .with("n", args.m / 2)
                .with("m", g.m)
                .with("index", i as u64)
                .with("p", g.p)
                .with("q", g.q),
        )?;
    }
    Ok(())
}

pub fn moments(args: &MomentsArgs) -> Result<(), Failure> {
    let table = store::acquire(&args.table)?;
    let mut out = Reporter::open(&args.output)?.tag("method", table.method().as_str());
    for &r in &args.orders {
        out.emit(Row::from(&exact_moment(&table, r)?))?;
    }
    out.emit(Row::from(&exact_variance(&table)?))?;
    out.emit(Row::from(&exact_two_step(&table)?))?;
    Ok(())
}

pub fn cdf(args: &CdfArgs) -> Result<(), Failure> {
    let table = store::acquire(&args.table)?;
    let report = kolmogorov_distance_with_points(&table, args.points as usize)?;
    let mut out = Reporter::open(&args.output)?.tag("method", table.method().as_str());
    for p in &report.points {
        out.emit(Row::from(p).with("n", report.n))?;
    }
    out.emit(
        Row::from(&report)
            .with("argmax_k", report.argmax_k)
            .with("at_left_limit", report.at_left_limit),
    )?;
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let quantities = args
        .quantities
        .iter()
        .map(|q| Quantity::parse(q))
        .collect::<Result<Vec<_>, _>>()?;
    let max = *args.n_list.iter().max().expect("clap requires a value");
    let table = store::acquire_for(Some(max), args.table.as_deref())?;
    let mut out = Reporter::open(&args.output)?.tag("method", table.method().as_str());
    sweep_each(&table, &args.n_list, &quantities, |report| {
        out.emit(match &report {
            SweepReport::Moment(m) => Row::from(m),
            SweepReport::Cdf(c) => Row::from(c),
        })
    })?;
    Ok(())
}

const LEMMA2_KEYS: [&str; 7] = [
    "log_term",
    "ratio_f",
    "ratio_f_prime",
    "ratio_f_double_prime",
    "implied_f",
    "implied_f_prime",
    "implied_f_double_prime",
];

pub fn series(args: &SeriesArgs) -> Result<(), Failure> {
    let mut primes = PrimeTable::build(SERIES_START_LIMIT)?;
    let mut out = Reporter::open(&args.output)?;
    for &z in &args.z {
        let point = loop {
            match eval_series(&primes, z, args.eps) {
                Err(Error::PrimeTableTooSmall { needed, .. }) => {
                    eprintln!("z = {z}: growing prime table to {needed}");
                    primes = PrimeTable::build(needed)?;
                }
                other => break other?,
            }
        };
        let mut row = Row::from(&point).with("prime_limit", primes.limit());
        if z >= 0.9 {
            row = row.with_lemma2(&lemma2_ratios(&point)?);
        } else {
            // Asymptote ratios are only defined near z = 1.
            for key in LEMMA2_KEYS {
                row.push(key, f64::NAN);
            }
        }
        out.emit(row)?;
    }
    Ok(())
}

pub fn tauberian(args: &TauberianArgs) -> Result<(), Failure> {
    let n_list = if args.n_list.is_empty() {
        vec![args
            .table
            .n
            .ok_or_else(|| Failure::Usage("either --n or --n-list is required".into()))?]
    } else {
        args.n_list.clone()
    };
    let max = *n_list.iter().max().expect("nonempty");
    let table = store::acquire_for(Some(max), args.table.table.as_deref())?;
    let mut out = Reporter::open(&args.output)?.tag("method", table.method().as_str());
    for &n in &n_list {
        let consistent = first_moment_consistency(&table, n)?;
        for q in AsymptoteQuantity::ALL {
            let d = tauberian_ratio(&table, q, n)?;
            out.emit(Row::from(&d).with("first_moment_consistent", consistent.is_zero()))?;
        }
    }
    Ok(())
}

pub fn twostep(args: &TwostepArgs) -> Result<(), Failure> {
    let table = store::acquire(&args.table)?;
    let n = table.n();
    let seed = resolve_seed(args.seed.seed);
    let mut stream = SamplerStream::new(&table, seed, args.seed.stream)?;
    let est = stream.two_step_estimate(args.trials)?;
    let exact = exact_two_step(&table)?;
    let mean = exact_moment(&table, 1)?;
    let mut out = Reporter::open(&args.output)?
        .tag("method", table.method().as_str())
        .tag("seed", seed)
        .tag("stream", args.seed.stream);
    out.emit(
        Row::new()
            .with("n", n)
            .with("trials", est.trials)
            .with("successes", est.successes)
            .with("estimate", est.estimate)
            .with("std_error", est.std_error)
            .with("exact", exact.value())
            .with("exact_mean", mean.value())
            .with("limit", 2.0 / 3.0),
    )?;
    Ok(())
}
