//! Small number-theory helpers. Factorisation is delegated to `num-prime`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Distinct prime divisors of `|n|`. Zero and units have none.
pub fn prime_divisors(n: &BigInt) -> Result<BTreeSet<u64>> {
    let n = n.magnitude();
    if n.is_zero() || n.is_one() {
        return Ok(BTreeSet::new());
    }
    if let Some(small) = n.to_u128() {
        return num_prime::nt_funcs::factorize128(small)
            .into_keys()
            .map(|p| p.to_u64().ok_or_else(|| Error::PrimeTooLarge(p.to_string())))
            .collect();
    }
    num_prime::nt_funcs::factorize(n.clone())
        .into_keys()
        .map(|p: BigUint| p.to_u64().ok_or_else(|| Error::PrimeTooLarge(p.to_string())))
        .collect()
}

pub fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// `v_p(n)`; `None` for `n = 0`.
pub fn valuation(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        n = q;
        k += 1;
    }
}

/// Minimum `p`-adic valuation over the entries; `None` for the zero vector.
pub fn vector_valuation(v: &[BigInt], p: u64) -> Option<u64> {
    v.iter().filter_map(|x| valuation(x, p)).min()
}

/// Largest exponent in the factorisation of `|n|` (0 for units); falls back
/// to `⌊log₂ |n|⌋` when a factor does not fit in 64 bits.
pub fn max_prime_exponent(n: &BigInt) -> u64 {
    if n.is_zero() {
        return 0;
    }
    match prime_divisors(n) {
        Ok(primes) => primes.into_iter().filter_map(|p| valuation(n, p)).max().unwrap_or(0),
        Err(_) => n.magnitude().bits() - 1,
    }
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
