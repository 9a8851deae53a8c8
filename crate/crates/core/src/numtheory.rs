//! Residue arithmetic modulo odd prime powers.
//!
//! Every modulus handled here is at most [`MAX_MODULUS`] = 2^31, so a product of
//! two residues fits in a `u64` without overflow. Constructors reject anything
//! larger instead of wrapping.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest modulus accepted by the residue arithmetic.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Trial division is only trusted this far.
pub const MAX_PRIME: u64 = 1_000_000;

/// An odd prime `p` together with an exponent `n` and the exact modulus `p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    n: u32,
    modulus: u64,
}

impl PrimePower {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        check_odd_prime(p)?;
        let modulus = checked_prime_power(p, n)?;
        Ok(PrimePower { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check_residue(&self, x: u64) -> Result<()> {
        if x < self.modulus {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                value: x,
                bound: self.modulus,
            })
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p > MAX_PRIME || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// `p^n`, failing if the result exceeds [`MAX_MODULUS`].
pub fn checked_prime_power(p: u64, n: u32) -> Result<u64> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc *= p as u128;
        if acc > MAX_MODULUS as u128 {
            return Err(Error::ArithmeticBound {
                value: acc,
                bound: MAX_MODULUS,
            });
        }
    }
    Ok(acc as u64)
}

/// Exponent of `p` in `x`; `x = 0` has no finite valuation.
pub fn valuation(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Euler's totient of `p^n`.
pub fn phi_prime_power(p: u64, n: u32) -> u64 {
    if n == 0 {
        1
    } else {
        p.pow(n - 1) * (p - 1)
    }
}

/// True when `x` is invertible modulo `p^n` (everything is, modulo 1).
pub fn is_unit(x: u64, p: u64, n: u32) -> bool {
    n == 0 || x % p != 0
}

#[inline]
pub(crate) fn mul_mod(x: u64, y: u64, modulus: u64) -> u64 {
    x * y % modulus
}

/// Square-and-multiply on a raw modulus `<= MAX_MODULUS`.
pub(crate) fn pow_mod_raw(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut b = base % modulus;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    acc
}

/// `1 + q + ... + q^(m-1)` on a raw modulus, by the doubling recurrence
/// `S(2k) = S(k)(1 + q^k)`, `S(2k+1) = S(2k) q + 1`. Never divides by `q - 1`.
pub(crate) fn geom_sum_raw(q: u64, m: u64, modulus: u64) -> u64 {
    if modulus == 1 || m == 0 {
        return 0;
    }
    let q = q % modulus;
    let mut sum = 0; // S(k)
    let mut pow = 1; // q^k
    for bit in (0..64 - m.leading_zeros()).rev() {
        sum = mul_mod(sum, (1 + pow) % modulus, modulus);
        pow = mul_mod(pow, pow, modulus);
        if (m >> bit) & 1 == 1 {
            sum = (mul_mod(sum, q, modulus) + 1) % modulus;
            pow = mul_mod(pow, q, modulus);
        }
    }
    sum
}

/// `base^exp mod p^n`. Modulus 1 yields 0, the only residue.
pub fn pow_mod(base: u64, exp: u64, m: &PrimePower) -> Result<u64> {
    m.check_residue(base)?;
    Ok(pow_mod_raw(base, exp, m.modulus))
}

/// `1 + q + ... + q^(m-1) mod p^n`.
pub fn geom_sum(q: u64, m: u64, modulus: &PrimePower) -> Result<u64> {
    modulus.check_residue(q)?;
    Ok(geom_sum_raw(q, m, modulus.modulus))
}

/// The unique subgroup of order `p^i` in the unit group of `Z_{p^n}`,
/// i.e. the residues `k p^(n-i) + 1`.
pub fn unit_subgroup_elements(p: u64, n: u32, i: u32) -> Result<BTreeSet<u64>> {
    if i >= n {
        return Err(Error::InvalidParameters(format!(
            "subgroup exponent {i} must be below {n}"
        )));
    }
    let m = PrimePower::new(p, n)?;
    let step = p.pow(n - i);
    Ok((0..p.pow(i))
        .map(|k| (k * step + 1) % m.modulus)
        .collect())
}

/// `v_p(m!)` by Legendre's formula.
fn factorial_valuation(m: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut pk = p;
    while pk <= m {
        total += m / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    total
}

/// `v_p(C(p^n, k))`, computed from factorial valuations only.
pub fn binom_valuation(p: u64, n: u32, k: u64) -> Result<u64> {
    let top = PrimePower::new(p, n)?.modulus;
    if k > top {
        return Err(Error::OutOfRange {
            value: k,
            bound: top + 1,
        });
    }
    Ok(factorial_valuation(top, p) - factorial_valuation(k, p) - factorial_valuation(top - k, p))
}

/// Whether `p^(n-k+2)` divides `C(p^n, k)`, for `3 <= k <= n + 2`.
pub fn binom_valuation_holds(p: u64, n: u32, k: u64) -> Result<bool> {
    if k < 3 || k > n as u64 + 2 {
        return Err(Error::InvalidParameters(format!(
            "k = {k} outside 3..={}",
            n as u64 + 2
        )));
    }
    let needed = n as i64 - k as i64 + 2;
    Ok(binom_valuation(p, n, k)? as i64 >= needed)
}
