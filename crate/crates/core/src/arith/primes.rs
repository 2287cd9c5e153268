use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test for all `u64` (Miller-Rabin with a base set
/// known to be exact below 2^64).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn require_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization of a positive `u64`.
pub fn factor_u64(n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n > 1 && n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    factor_into(n, &mut out);
    out
}

/// Prime divisors of a nonzero integer. Trial division removes small factors;
/// whatever remains must fit in a `u64` to be split further.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    assert!(!n.is_zero(), "zero has every prime as a divisor");
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d < 100_000 {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        if n.is_multiple_of(&bd) {
            out.push(d);
            while n.is_multiple_of(&bd) {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        let rest = n
            .to_u64()
            .ok_or(Error::Overflow("cofactor beyond 64 bits cannot be factored"))?;
        out.extend(factor_u64(rest).into_keys());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
