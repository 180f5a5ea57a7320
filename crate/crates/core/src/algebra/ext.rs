//! Extension fields 𝔽_{q^n} = 𝔽_q[t]/(m(t)), m the canonical (least) monic
//! irreducible of degree n.
//!
//! Arithmetic runs on discrete logarithms to a fixed primitive element with a
//! Zech table for addition, so point counting is table lookups only.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::field::{prime_factors, FieldElem};
use super::irreducible::irreducibles;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Largest field size for which log tables are built.
pub const EXT_LIMIT: u64 = 1 << 22;

/// An element of 𝔽_{q^n} in the polynomial basis 1, t, …, t^{n−1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtFieldElem {
    pub coeffs: Vec<FieldElem>,
}

impl ExtFieldElem {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }
}

/// Log-domain element: exponent of the primitive element, or [`ExtField::zero`].
pub type Ext = u32;

pub struct ExtField {
    q: u32,
    n: usize,
    modulus: Poly,
    /// q^n − 1, the order of the multiplicative group.
    order: u32,
    /// exp[k] = packed coefficients of γ^k.
    exp: Vec<u32>,
    /// log[packed] = k, with log[0] = zero sentinel.
    log: Vec<u32>,
    /// zech[k] = log(1 + γ^k).
    zech: Vec<u32>,
}

type FieldTable = HashMap<(u32, usize), Arc<ExtField>>;

fn fields() -> &'static RwLock<FieldTable> {
    static F: OnceLock<RwLock<FieldTable>> = OnceLock::new();
    F.get_or_init(|| RwLock::new(HashMap::new()))
}

impl ExtField {
    /// Shared field 𝔽_{q^n}; tables are built once per process.
    pub fn get(q: u32, n: usize) -> Result<Arc<ExtField>> {
        if let Some(f) = fields().read().expect("field lock").get(&(q, n)) {
            return Ok(f.clone());
        }
        let f = Arc::new(ExtField::build(q, n)?);
        fields().write().expect("field lock").entry((q, n)).or_insert(f.clone());
        Ok(f)
    }

    fn build(q: u32, n: usize) -> Result<ExtField> {
        if n == 0 {
            return Err(Error::Domain("extension degree must be at least 1".into()));
        }
        let size = (q as u64)
            .checked_pow(n as u32)
            .filter(|&s| s <= EXT_LIMIT)
            .ok_or_else(|| Error::Domain(format!("field of size {q}^{n} exceeds {EXT_LIMIT}")))?;
        let modulus = irreducibles(q, n)?[0].clone();
        let order = (size - 1) as u32;
        let gen = primitive_element(q, n, &modulus, order as u64);

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![order; size as usize];
        let mut cur = Poly::one(q);
        for k in 0..order {
            let packed = pack(&cur, n, q);
            exp.push(packed);
            log[packed as usize] = k;
            cur = cur.mul_mod(&gen, &modulus);
        }
        debug_assert_eq!(pack(&cur, n, q), 1);

        let zech = exp
            .iter()
            .map(|&p| {
                let d0 = p % q;
                let bumped = p - d0 + (d0 + 1) % q;
                log[bumped as usize]
            })
            .collect();
        Ok(ExtField { q, n, modulus, order, exp, log, zech })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Number of elements q^n.
    pub fn size(&self) -> u64 {
        self.order as u64 + 1
    }

    /// Order q^n − 1 of the multiplicative group.
    pub fn mult_order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn zero(&self) -> Ext {
        self.order
    }

    #[inline]
    pub fn one(&self) -> Ext {
        0
    }

    #[inline]
    pub fn is_zero(&self, a: Ext) -> bool {
        a == self.order
    }

    /// All elements: zero first, then γ^0, γ^1, ….
    pub fn elements(&self) -> impl Iterator<Item = Ext> {
        std::iter::once(self.order).chain(0..self.order)
    }

    /// Image of a prime-field residue.
    #[inline]
    pub fn from_prime(&self, c: u32) -> Ext {
        self.log[(c % self.q) as usize]
    }

    #[inline]
    pub fn mul(&self, a: Ext, b: Ext) -> Ext {
        if a == self.order || b == self.order {
            return self.order;
        }
        let s = a as u64 + b as u64;
        (s % self.order as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: Ext, b: Ext) -> Ext {
        if a == self.order {
            return b;
        }
        if b == self.order {
            return a;
        }
        let k = if b >= a { b - a } else { b + self.order - a };
        let z = self.zech[k as usize];
        if z == self.order {
            return self.order;
        }
        self.mul(a, z)
    }

    #[inline]
    pub fn neg(&self, a: Ext) -> Ext {
        if a == self.order {
            return a;
        }
        // −1 = γ^{(q^n−1)/2}
        self.mul(a, self.order / 2)
    }

    #[inline]
    pub fn sub(&self, a: Ext, b: Ext) -> Ext {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Ext) -> Option<Ext> {
        if a == self.order {
            None
        } else {
            Some((self.order - a) % self.order)
        }
    }

    pub fn pow(&self, a: Ext, e: u64) -> Ext {
        if a == self.order {
            return if e == 0 { 0 } else { a };
        }
        ((a as u64 * (e % self.order as u64)) % self.order as u64) as u32
    }

    /// Whether a nonzero element is an ℓ-th power, for ℓ | q^n − 1.
    #[inline]
    pub fn is_power(&self, a: Ext, ell: u32) -> bool {
        debug_assert!(a != self.order && self.order % ell == 0);
        a % ell == 0
    }

    /// Horner evaluation of a polynomial over 𝔽_q.
    pub fn eval(&self, coeffs_log: &[Ext], x: Ext) -> Ext {
        coeffs_log.iter().rev().fold(self.order, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Coefficients of a prime-field polynomial mapped into log form.
    pub fn poly_logs(&self, p: &Poly) -> Vec<Ext> {
        p.coeffs().iter().map(|&c| self.from_prime(c)).collect()
    }

    pub fn frobenius(&self, a: Ext) -> Ext {
        self.pow(a, self.q as u64)
    }

    pub fn to_elem(&self, a: Ext) -> ExtFieldElem {
        let mut packed = if a == self.order { 0 } else { self.exp[a as usize] };
        let mut coeffs = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            coeffs.push(FieldElem::new((packed % self.q) as i64, self.q));
            packed /= self.q;
        }
        ExtFieldElem { coeffs }
    }

    pub fn from_elem(&self, e: &ExtFieldElem) -> Result<Ext> {
        if e.coeffs.len() != self.n || e.coeffs.iter().any(|c| c.modulus() != self.q) {
            return Err(Error::Domain(format!("element is not in F_{}^{}", self.q, self.n)));
        }
        let packed = e.coeffs.iter().rev().fold(0u32, |acc, c| acc * self.q + c.value());
        Ok(self.log[packed as usize])
    }

    /// Element represented by a residue polynomial of degree < n.
    pub fn from_poly(&self, p: &Poly) -> Ext {
        let r = p.rem(&self.modulus);
        self.log[pack(&r, self.n, self.q) as usize]
    }

    pub fn to_poly(&self, a: Ext) -> Poly {
        let e = self.to_elem(a);
        Poly::from_raw(self.q, e.coeffs.iter().map(|c| c.value()).collect())
    }

    /// Nonzero elements of the prime subfield have logs divisible by (q^n−1)/(q−1).
    pub fn in_prime_field(&self, a: Ext) -> bool {
        a == self.order || a % (self.order / (self.q - 1)) == 0
    }
}

fn pack(p: &Poly, n: usize, q: u32) -> u32 {
    (0..n).rev().fold(0u32, |acc, i| acc * q + p.coeff(i))
}

fn primitive_element(q: u32, n: usize, m: &Poly, order: u64) -> Poly {
    let fs = prime_factors(order);
    let size = order + 1;
    (1..size)
        .map(|i| {
            let mut c = Vec::with_capacity(n);
            let mut x = i;
            for _ in 0..n {
                c.push((x % q as u64) as u32);
                x /= q as u64;
            }
            Poly::from_raw(q, c)
        })
        .find(|g| fs.iter().all(|&p| g.pow_mod((order / p) as u128, m) != Poly::one(q)))
        .expect("finite field has a primitive element")
}
