//! Prime moduli and scalar arithmetic in F_p.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime `p` together with the matrix dimension `d` used over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeModulus {
    p: u32,
    d: usize,
}

impl PrimeModulus {
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32, d })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// |SL_d(F_p)| as u128 (saturating for absurd sizes).
    pub fn sl_order(&self) -> u128 {
        sl_order(self.p as u64, self.d)
    }
}

/// |SL_d(F_p)| = p^{d(d-1)/2} * prod_{i=2..d} (p^i - 1).
pub fn sl_order(p: u64, d: usize) -> u128 {
    let p = p as u128;
    let mut order: u128 = 1;
    for _ in 0..d * (d - 1) / 2 {
        order = order.saturating_mul(p);
    }
    for i in 2..=d as u32 {
        order = order.saturating_mul(p.pow(i) - 1);
    }
    order
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat. Returns `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
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

/// Legendre symbol (a/p) for odd p: 1, -1 or 0.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn sl_orders() {
        assert_eq!(sl_order(3, 2), 24);
        assert_eq!(sl_order(5, 2), 120);
        assert_eq!(sl_order(7, 2), 336);
        assert_eq!(sl_order(2, 3), 168);
        assert_eq!(sl_order(3, 3), 5616);
    }

    #[test]
    fn rejects_bad_modulus() {
        assert_eq!(PrimeModulus::new(9, 2), Err(Error::NotPrime(9)));
        assert_eq!(PrimeModulus::new(7, 1), Err(Error::InvalidDimension(1)));
    }

    #[test]
    fn inverses() {
        for a in 1..13 {
            assert_eq!(a * inv_mod(a, 13).unwrap() % 13, 1);
        }
        assert_eq!(inv_mod(0, 13), None);
    }
}
