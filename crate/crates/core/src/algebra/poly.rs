//! Dense univariate polynomials over 𝔽_q.

use std::cmp::Ordering;
use std::fmt;

use super::field::{add_mod, inv_mod, mul_mod, sub_mod, FieldElem};
use crate::error::{Error, Result};

/// Polynomial over 𝔽_q, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    q: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds from ascending integer coefficients, reducing each mod q.
    pub fn from_ints(q: u32, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&x| x.rem_euclid(q as i64) as u32).collect();
        Poly::from_raw(q, c)
    }

    /// Builds from ascending residues already in [0, q).
    pub fn from_raw(q: u32, mut coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < q));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { q, coeffs }
    }

    pub fn zero(q: u32) -> Self {
        Poly { q, coeffs: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Poly { q, coeffs: vec![1] }
    }

    pub fn constant(q: u32, c: u32) -> Self {
        Poly::from_raw(q, vec![c % q])
    }

    /// The monomial X.
    pub fn x(q: u32) -> Self {
        Poly { q, coeffs: vec![0, 1] }
    }

    /// Monic polynomial of degree `d` whose lower coefficients are the base-q
    /// digits of `index` (least significant digit is the constant term).
    pub fn monic_from_index(q: u32, d: usize, mut index: u64) -> Self {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((index % q as u64) as u32);
            index /= q as u64;
        }
        c.push(1);
        Poly { q, coeffs: c }
    }

    /// Inverse of [`Poly::monic_from_index`] for monic polynomials.
    pub fn monic_index(&self) -> u64 {
        let d = self.coeffs.len() - 1;
        let mut idx = 0u64;
        for i in (0..d).rev() {
            idx = idx * self.q as u64 + self.coeffs[i] as u64;
        }
        idx
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of X^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0, for size bookkeeping.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficients as signed representatives, ascending.
    pub fn signed_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| FieldElem::new(c as i64, self.q).signed()).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| add_mod(self.coeff(i), other.coeff(i), self.q)).collect();
        Poly::from_raw(self.q, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| sub_mod(self.coeff(i), other.coeff(i), self.q)).collect();
        Poly::from_raw(self.q, c)
    }

    pub fn neg(&self) -> Poly {
        Poly::zero(self.q).sub(self)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.q;
        Poly::from_raw(self.q, self.coeffs.iter().map(|&a| mul_mod(a, c, self.q)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
            // keep headroom: q < 2^16 so each product < 2^32
            if i % 1024 == 1023 {
                acc.iter_mut().for_each(|x| *x %= q);
            }
        }
        Poly::from_raw(self.q, acc.into_iter().map(|x| (x % q) as u32).collect())
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    /// Quotient and remainder. Errors on division by zero.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let q = self.q;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Poly::zero(q), self.clone()));
        }
        let inv_lead = inv_mod(d.leading(), q);
        let mut r = self.coeffs.clone();
        let mut quot = vec![0u32; r.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(r[k + dd], inv_lead, q);
            quot[k] = c;
            if c != 0 {
                for (j, &b) in d.coeffs.iter().enumerate() {
                    r[k + j] = sub_mod(r[k + j], mul_mod(c, b, q), q);
                }
            }
        }
        r.truncate(dd);
        Ok((Poly::from_raw(q, quot), Poly::from_raw(q, r)))
    }

    /// Remainder modulo a nonzero polynomial.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).expect("nonzero modulus").1
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (qt, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(qt)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic scalar multiple (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.q))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let q = self.q;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, (i as u64 % q as u64) as u32, q))
            .collect();
        Poly::from_raw(q, c)
    }

    /// Horner evaluation at a point of 𝔽_q.
    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.q), c, self.q))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    /// self^e mod m by square-and-multiply.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.q).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.q);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Squarefree test via gcd with the derivative.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            // a p-th power in characteristic p
            return false;
        }
        self.gcd(&d).is_constant()
    }

    /// Canonical order: degree first, then ascending coefficient tuple.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Substitution self(X) ↦ self(c·X).
    pub fn scale_var(&self, c: u32) -> Poly {
        let mut pw = 1u32;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            out.push(mul_mod(a, pw, self.q));
            pw = mul_mod(pw, c, self.q);
        }
        Poly::from_raw(self.q, out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Comma-separated ascending coefficients, the cache and CLI wire format.
pub fn coeffs_to_csv(p: &Poly) -> String {
    p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// Parses comma-separated (possibly negative) ascending coefficients.
pub fn parse_coeffs(q: u32, s: &str) -> Result<Poly> {
    let mut c = Vec::new();
    for tok in s.split(',') {
        let t = tok.trim();
        if t.is_empty() {
            continue;
        }
        let v: i64 = t
            .parse()
            .map_err(|_| Error::Domain(format!("bad coefficient '{t}' in '{s}'")))?;
        c.push(v);
    }
    Ok(Poly::from_ints(q, &c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q, 0..max_len).prop_map(move |c| Poly::from_raw(q, c))
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let p = Poly::from_ints(3, &[1, 0, 3, 6]);
        assert_eq!(p.coeffs(), &[1]);
        assert_eq!(Poly::from_ints(3, &[0, 0]).degree(), None);
    }

    #[test]
    fn index_roundtrip() {
        for idx in 0..27 {
            let p = Poly::monic_from_index(3, 3, idx);
            assert_eq!(p.monic_index(), idx);
            assert_eq!(p.degree(), Some(3));
        }
    }

    #[test]
    fn display_and_parse() {
        let p = parse_coeffs(3, "0,-1,0,1").unwrap();
        assert_eq!(p.to_string(), "X^3 + 2X");
        assert_eq!(coeffs_to_csv(&p), "0,2,0,1");
        assert!(parse_coeffs(3, "1,x").is_err());
    }

    #[test]
    fn derivative_in_char_p() {
        // (X^3)' = 3X^2 = 0 over F_3
        let p = Poly::from_ints(3, &[0, 0, 0, 1]);
        assert!(p.derivative().is_zero());
        assert!(!p.is_squarefree());
    }

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in arb_poly(5, 9), b in arb_poly(5, 6)) {
            prop_assume!(!b.is_zero());
            let (qt, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(qt.mul(&b).add(&r), a);
            prop_assert!(r.degree().map_or(true, |d| d < b.deg()));
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(3, 8), b in arb_poly(3, 8)) {
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert!(a.rem(&g).is_zero());
                prop_assert!(b.rem(&g).is_zero());
            }
        }

        #[test]
        fn mul_is_commutative(a in arb_poly(7, 7), b in arb_poly(7, 7)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(7, 6), b in arb_poly(7, 6), x in 0u32..7) {
            prop_assert_eq!(a.mul(&b).eval(x), mul_mod(a.eval(x), b.eval(x), 7));
            prop_assert_eq!(a.add(&b).eval(x), add_mod(a.eval(x), b.eval(x), 7));
        }
    }
}
