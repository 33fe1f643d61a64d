//! Integer helpers over Z_d.

use num_integer::Integer;

use crate::error::{GaborError, Result};

/// Representative of `x mod d` in `[0, d)`.
#[inline]
pub fn modd(x: i64, d: usize) -> usize {
    x.rem_euclid(d as i64) as usize
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Inverse of `m` in the unit group of Z_d.
pub fn mod_inverse(m: i64, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(GaborError::EmptyDimension);
    }
    if d == 1 {
        return Ok(0);
    }
    let egcd = (m.rem_euclid(d as i64)).extended_gcd(&(d as i64));
    if egcd.gcd != 1 {
        return Err(GaborError::NotInvertible { m, d });
    }
    Ok(modd(egcd.x, d))
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

pub fn euler_phi(n: usize) -> usize {
    if n == 1 {
        return 1;
    }
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

/// `binom(i, k)` for small nonnegative `i` as exact integer.
pub fn binom(i: i64, k: u32) -> i64 {
    match k {
        0 => 1,
        1 => i,
        2 => i * (i - 1) / 2,
        3 => i * (i - 1) * (i - 2) / 6,
        _ => {
            let mut num: i128 = 1;
            let mut den: i128 = 1;
            for j in 0..k as i128 {
                num *= i as i128 - j;
                den *= j + 1;
            }
            (num / den) as i64
        }
    }
}

/// Multiplicative order of `x` modulo `m` (`m >= 1`, `gcd(x, m) = 1`).
pub fn mult_order(x: usize, m: usize) -> usize {
    if m == 1 {
        return 1;
    }
    let mut acc = x % m;
    let mut k = 1;
    while acc != 1 {
        acc = acc * x % m;
        k += 1;
        assert!(k <= m, "{x} is not a unit modulo {m}");
    }
    k
}

/// Legendre symbol via Euler's criterion, with `(0/p) = 0`.
pub fn legendre(k: i64, p: usize) -> i8 {
    let k = modd(k, p);
    if k == 0 {
        return 0;
    }
    let e = (p - 1) / 2;
    let mut base = k as u128;
    let mut acc: u128 = 1;
    let mut exp = e;
    let p128 = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p128;
        }
        base = base * base % p128;
        exp >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}
