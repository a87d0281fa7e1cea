//! Exact self-convolution over the prime field `Z/pZ`, `p = 15·2^27 + 1`.
//!
//! Results are reduced mod `p`, so they equal the integer convolution only
//! while every true coefficient is below `p`. [`self_convolution`] checks a
//! coefficient bound before transforming and refuses inputs that could wrap.

use crate::error::{Error, Result};

pub(crate) const MODULUS: u64 = 2_013_265_921;
const GENERATOR: u64 = 31;
const MAX_LOG_LEN: u32 = 27;

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % MODULUS;
        }
        base = base * base % MODULUS;
        exp >>= 1;
    }
    acc
}

fn transform(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let mut twiddles = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(GENERATOR, (MODULUS - 1) / len as u64);
        if invert {
            w = pow_mod(w, MODULUS - 2);
        }
        let half = len / 2;
        twiddles.clear();
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % MODULUS;
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = *y * tw % MODULUS;
                *x = if u + v >= MODULUS {
                    u + v - MODULUS
                } else {
                    u + v
                };
                *y = if u >= v { u - v } else { u + MODULUS - v };
            }
        }
        len <<= 1;
    }

    if invert {
        let inv_n = pow_mod(n as u64, MODULUS - 2);
        for x in a.iter_mut() {
            *x = *x * inv_n % MODULUS;
        }
    }
}

/// Returns `c` with `c[m] = Σ_{i+j=m} a[i]·a[j]` for `m < 2·a.len() − 1`.
///
/// Fails with [`Error::InternalPrecision`] when a coefficient could reach the
/// modulus, and with [`Error::Resource`] when the transform would exceed the
/// field's largest power-of-two root of unity.
pub(crate) fn self_convolution(a: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let max = a.iter().copied().max().unwrap_or(0);
    let nonzero = a.iter().filter(|&&x| x != 0).count() as u128;
    let bound = u128::from(max) * u128::from(max) * nonzero;
    if bound >= u128::from(MODULUS) {
        return Err(Error::InternalPrecision(format!(
            "convolution coefficients may reach {bound}, not below the transform modulus {MODULUS}"
        )));
    }

    let out_len = 2 * a.len() - 1;
    let size = out_len.next_power_of_two();
    if size.trailing_zeros() > MAX_LOG_LEN {
        return Err(Error::Resource(format!(
            "convolution of length {out_len} exceeds the transform limit 2^{MAX_LOG_LEN}"
        )));
    }

    let mut buf = vec![0u64; size];
    buf[..a.len()].copy_from_slice(a);
    transform(&mut buf, false);
    for x in buf.iter_mut() {
        *x = *x * *x % MODULUS;
    }
    transform(&mut buf, true);
    buf.truncate(out_len);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn schoolbook(a: &[u64]) -> Vec<u64> {
        let mut c = vec![0u64; 2 * a.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in a.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        c
    }

    #[test]
    fn generator_has_full_order() {
        assert_eq!(pow_mod(GENERATOR, MODULUS - 1), 1);
        assert_ne!(pow_mod(GENERATOR, (MODULUS - 1) / 2), 1);
        assert_ne!(pow_mod(GENERATOR, (MODULUS - 1) / 3), 1);
        assert_ne!(pow_mod(GENERATOR, (MODULUS - 1) / 5), 1);
    }

    #[test]
    fn small_square() {
        // (1 + x + x^2)^2
        assert_eq!(self_convolution(&[1, 1, 1]).unwrap(), vec![1, 2, 3, 2, 1]);
        assert_eq!(self_convolution(&[5]).unwrap(), vec![25]);
        assert!(self_convolution(&[]).unwrap().is_empty());
    }

    #[test]
    fn refuses_possible_wraparound() {
        let a = vec![50_000u64; 2];
        assert!(matches!(
            self_convolution(&a),
            Err(Error::InternalPrecision(_))
        ));
    }

    proptest! {
        #[test]
        fn matches_schoolbook(a in proptest::collection::vec(0u64..4, 1..300)) {
            prop_assert_eq!(self_convolution(&a).unwrap(), schoolbook(&a));
        }
    }
}
