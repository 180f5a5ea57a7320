//! Prime field 𝔽_q for an odd prime q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Element of the prime field 𝔽_q.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem {
    value: u32,
    q: u32,
}

impl FieldElem {
    pub fn new(value: i64, q: u32) -> Self {
        FieldElem { value: value.rem_euclid(q as i64) as u32, q }
    }

    pub fn zero(q: u32) -> Self {
        FieldElem { value: 0, q }
    }

    pub fn one(q: u32) -> Self {
        FieldElem { value: 1, q }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        FieldElem { value: pow_mod(self.value, e, self.q), q: self.q }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(FieldElem { value: inv_mod(self.value, self.q), q: self.q })
        }
    }

    /// Signed representative in (−q/2, q/2].
    pub fn signed(self) -> i64 {
        let v = self.value as i64;
        if 2 * v > self.q as i64 {
            v - self.q as i64
        } else {
            v
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        FieldElem { value: add_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        FieldElem { value: sub_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.q, rhs.q);
        FieldElem { value: mul_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> Self {
        FieldElem { value: sub_mod(0, self.value, self.q), q: self.q }
    }
}

// ---------------------------------------------------------------------------
// Raw residue helpers shared by the polynomial code.

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, q: u32) -> u32 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, q: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

pub(crate) fn pow_mod(mut base: u32, mut e: u64, q: u32) -> u32 {
    let mut acc = 1 % q;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(a % q != 0);
    pow_mod(a, q as u64 - 2, q)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Checks that `q` is an odd prime small enough for the u32 residue arithmetic.
pub fn check_field(q: u32) -> Result<()> {
    if q % 2 == 0 || !is_prime(q as u64) || q >= 1 << 16 {
        return Err(Error::Domain(format!("q = {q} must be an odd prime below 65536")));
    }
    Ok(())
}

/// Least primitive root modulo the prime `q`.
pub fn primitive_root(q: u32) -> u32 {
    if q == 2 {
        return 1;
    }
    let fs = prime_factors(q as u64 - 1);
    (2..q)
        .find(|&g| fs.iter().all(|&p| pow_mod(g, (q as u64 - 1) / p, q) != 1))
        .expect("prime modulus has a primitive root")
}

/// Least non-square in 𝔽_q*.
pub fn least_nonsquare(q: u32) -> u32 {
    (2..q)
        .find(|&c| pow_mod(c, (q as u64 - 1) / 2, q) == q - 1)
        .expect("odd prime has a non-square")
}

/// The fixed root of unity ζ_ℓ = g^{(q−1)/ℓ}, g the least primitive root.
pub fn zeta_ell(q: u32, ell: u32) -> Result<u32> {
    if ell < 2 || (q - 1) % ell != 0 {
        return Err(Error::Domain(format!("ell = {ell} does not divide q - 1 = {}", q - 1)));
    }
    Ok(pow_mod(primitive_root(q), ((q - 1) / ell) as u64, q))
}

/// Whether `c ≠ 0` is an ℓ-th power in 𝔽_q*.
pub fn is_ell_power(c: u32, ell: u32, q: u32) -> bool {
    debug_assert!(c % q != 0);
    let e = (q as u64 - 1) / gcd(ell as u64, q as u64 - 1);
    pow_mod(c, e, q) == 1
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
