//! Large-scale spot checks of the sieve and the convolution table.

use goldbach_core::cache::{decode, encode};
use goldbach_core::table::build_table_convolution_with;
use goldbach_core::{count_q2_direct, PrimeTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trial_division(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut d = 3;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[test]
fn sieve_to_ten_million() {
    let limit = 10_000_000;
    let t = PrimeTable::build(limit).unwrap();
    assert_eq!(t.prime_count(limit).unwrap(), 664_579);
    assert_eq!(t.prime_count(1_000_000).unwrap(), 78_498);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let m = rng.random_range(0..=limit);
        assert_eq!(t.is_prime(m).unwrap(), trial_division(m), "m = {m}");
    }
    for m in limit - 100..=limit {
        assert_eq!(t.is_prime(m).unwrap(), trial_division(m), "m = {m}");
    }
}

#[test]
fn convolution_matches_direct_at_one_million() {
    let n = 1_000_000;
    let primes = PrimeTable::build(2 * n).unwrap();
    let table = build_table_convolution_with(&primes, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ks: Vec<u64> = (0..200).map(|_| rng.random_range(3..=n)).collect();
    ks.extend([3, 4, 5, n - 1, n]);
    for k in ks {
        assert_eq!(
            table.q2(k).unwrap(),
            count_q2_direct(&primes, 2 * k).unwrap(),
            "k = {k}"
        );
    }
    assert_eq!(table.first_goldbach_gap(), None);
    assert_eq!(decode(&encode(&table)).unwrap(), table);
}
