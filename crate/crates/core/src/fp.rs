//! Exact arithmetic in the prime field F_p, p an odd prime below 2^31.

use crate::error::{Error, Result};

/// A residue in [0, p). Raw value only; all arithmetic goes through [`FieldChar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(pub u32);

/// The characteristic. Construction runs a deterministic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldChar {
    p: u32,
}

impl FieldChar {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= (1 << 31) || !is_prime_u64(p) {
            return Err(Error::BadCharacteristic(p));
        }
        Ok(FieldChar { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn elem(&self, n: i64) -> Fp {
        let p = self.p as i64;
        Fp(n.rem_euclid(p) as u32)
    }

    pub fn zero(&self) -> Fp {
        Fp(0)
    }

    pub fn one(&self) -> Fp {
        Fp(1)
    }

    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + b.0 as u64;
        Fp((s % self.p as u64) as u32)
    }

    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + (self.p - b.0) as u64;
        Fp((s % self.p as u64) as u32)
    }

    pub fn neg(&self, a: Fp) -> Fp {
        if a.0 == 0 {
            a
        } else {
            Fp(self.p - a.0)
        }
    }

    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn inv(&self, a: Fp) -> Result<Fp> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, (self.p - 2) as u64))
    }

    pub fn div(&self, a: Fp, b: Fp) -> Result<Fp> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fp, mut e: u64) -> Fp {
        let mut base = a;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Deterministic Miller-Rabin; the bases {2,3,5,7} decide primality below 3.2e9.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}
