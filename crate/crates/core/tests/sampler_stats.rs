//! Goodness-of-fit checks for the sampler at significance 1e-6.

use std::collections::HashMap;

use goldbach_core::table::build_table_direct_with;
use goldbach_core::{enumerate_partitions, PrimeTable, SamplerStream};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const ALPHA: f64 = 1e-6;

fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

fn critical(categories: usize) -> f64 {
    ChiSquared::new((categories - 1) as f64)
        .unwrap()
        .inverse_cdf(1.0 - ALPHA)
}

#[test]
fn goldbach_number_follows_count_weights() {
    let n = 100;
    let primes = PrimeTable::build(2 * n).unwrap();
    let table = build_table_direct_with(&primes, n).unwrap();
    let card = table.cardinality(n).unwrap() as f64;
    let draws = 1_000_000u64;
    let mut stream = SamplerStream::new(&table, 7, 0).unwrap();
    let mut counts = vec![0u64; n as usize + 1];
    for _ in 0..draws {
        counts[stream.sample_number() as usize] += 1;
    }
    let (mut obs, mut exp) = (Vec::new(), Vec::new());
    for k in 3..=n {
        let q = table.q2(k).unwrap();
        if q == 0 {
            assert_eq!(counts[k as usize], 0, "k = {k} has no partitions");
        } else {
            obs.push(counts[k as usize]);
            exp.push(draws as f64 * q as f64 / card);
        }
    }
    let stat = chi_square(&obs, &exp);
    assert!(stat < critical(obs.len()), "chi² = {stat}");
}

#[test]
fn partitions_are_uniform() {
    let n = 100;
    let primes = PrimeTable::build(2 * n).unwrap();
    let table = build_table_direct_with(&primes, n).unwrap();
    let mut stream = SamplerStream::new(&table, 11, 3).unwrap();
    let draws = 1_000_000u64;
    let mut seen: HashMap<(u64, u64), u64> = HashMap::new();
    for _ in 0..draws {
        let g = stream.sample_partition(&primes).unwrap();
        assert_eq!(g.p + g.q, g.m);
        assert!(g.p <= g.q);
        *seen.entry((g.m, g.p)).or_default() += 1;
    }
    let all: Vec<(u64, u64)> = (3..=n)
        .flat_map(|k| enumerate_partitions(&primes, 2 * k).unwrap())
        .map(|g| (g.m, g.p))
        .collect();
    assert_eq!(all.len() as u64, table.cardinality(n).unwrap());
    assert!(seen.keys().all(|key| all.contains(key)));
    let expected = draws as f64 / all.len() as f64;
    let obs: Vec<u64> = all
        .iter()
        .map(|key| seen.get(key).copied().unwrap_or(0))
        .collect();
    let stat = chi_square(&obs, &vec![expected; obs.len()]);
    assert!(stat < critical(obs.len()), "chi² = {stat}");
}

#[test]
fn conditional_on_ten_is_fair() {
    let primes = PrimeTable::build(200).unwrap();
    let table = build_table_direct_with(&primes, 100).unwrap();
    let mut stream = SamplerStream::new(&table, 5, 9).unwrap();
    let mut hits = [0u64; 2];
    for _ in 0..200_000 {
        let g = stream.sample_partition_given(&primes, 5).unwrap();
        assert!((g.p, g.q) == (3, 7) || (g.p, g.q) == (5, 5));
        hits[usize::from(g.p == 5)] += 1;
    }
    let stat = chi_square(&hits, &[100_000.0; 2]);
    assert!(stat < critical(2), "chi² = {stat}");
}

#[test]
fn uniform_below_is_unbiased() {
    let primes = PrimeTable::build(20).unwrap();
    let table = build_table_direct_with(&primes, 10).unwrap();
    let mut stream = SamplerStream::new(&table, 1, 0).unwrap();
    let mut counts = [0u64; 7];
    for _ in 0..700_000 {
        counts[stream.uniform_below(7) as usize] += 1;
    }
    let stat = chi_square(&counts, &[100_000.0; 7]);
    assert!(stat < critical(7), "chi² = {stat}");
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let primes = PrimeTable::build(2000).unwrap();
    let table = build_table_direct_with(&primes, 1000).unwrap();
    let run = |seed, stream_id| {
        let mut s = SamplerStream::new(&table, seed, stream_id).unwrap();
        (0..1000).map(|_| s.sample_number()).collect::<Vec<_>>()
    };
    assert_eq!(run(3, 0), run(3, 0));
    assert_ne!(run(3, 0), run(3, 1));
    assert_ne!(run(3, 0), run(4, 0));
}
