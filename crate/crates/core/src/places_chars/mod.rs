//! Places of 𝔽_q(X), power-residue symbols, splitting types in Kummer and
//! cubic covers, and Dirichlet characters of prime modulus with their
//! L-polynomials.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{is_ell_power, pow_mod, prime_factors, zeta_ell};
use crate::algebra::irreducible::{irreducible_or_err, irreducibles};
use crate::algebra::{CycInt, Poly};
use crate::curves::{CubicModel, KummerCover};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    /// A monic irreducible polynomial.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg(),
            Place::Infinity => 1,
        }
    }

    pub fn finite(p: Poly) -> Result<Place> {
        irreducible_or_err(&p)?;
        Ok(Place::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// All finite places of degree `d`, canonically ordered.
pub fn finite_places(q: u32, d: usize) -> Result<Vec<Place>> {
    Ok(irreducibles(q, d)?.iter().cloned().map(Place::Finite).collect())
}

/// Places of degree dividing `n` (finite ones by degree, then ∞).
pub fn places_dividing(q: u32, n: usize) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for d in (1..=n).filter(|d| n % d == 0) {
        out.extend(finite_places(q, d)?);
    }
    out.push(Place::Infinity);
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitType {
    // cyclic degree-ℓ covers
    Split,
    Inert,
    Ramified,
    // cubic non-Galois covers (Inert is shared)
    TotallySplit,
    PartiallySplit,
    PartiallyRamified,
    TotallyRamified,
    /// Cubic infinite place whose reduction is not a separable cubic.
    Unclassified,
}

impl SplitType {
    pub fn name(self) -> &'static str {
        match self {
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
            SplitType::TotallySplit => "totally_split",
            SplitType::PartiallySplit => "partially_split",
            SplitType::PartiallyRamified => "partially_ramified",
            SplitType::TotallyRamified => "totally_ramified",
            SplitType::Unclassified => "unclassified",
        }
    }

    pub fn parse(s: &str) -> Option<SplitType> {
        [
            SplitType::Split,
            SplitType::Inert,
            SplitType::Ramified,
            SplitType::TotallySplit,
            SplitType::PartiallySplit,
            SplitType::PartiallyRamified,
            SplitType::TotallyRamified,
        ]
        .into_iter()
        .find(|t| t.name() == s)
    }
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether the infinite place enters explicit-formula place sums.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub enum InfinityMode {
    /// Include ∞ whenever it can be classified.
    #[default]
    IncludeWhenClassifiable,
    FiniteOnly,
}

/// ℓ-th power residue symbol (f/v)_ℓ.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Symbol {
    Zero,
    /// ζ_ℓ^e for the fixed ζ_ℓ.
    Root(u32),
}

/// f^{(q^{deg v}−1)/ℓ} mod v, identified with a power of ζ_ℓ.
pub fn residue_symbol(f: &Poly, v: &Poly, ell: u32) -> Result<Symbol> {
    let q = f.modulus();
    let z = zeta_ell(q, ell)?;
    let dv = v.degree().filter(|&d| d > 0).ok_or_else(|| Error::Domain("residue symbol needs a nonconstant place".into()))?;
    let r = f.rem(v);
    if r.is_zero() {
        return Ok(Symbol::Zero);
    }
    let e = ((q as u128).pow(dv as u32) - 1) / ell as u128;
    let s = r.pow_mod(e, v);
    if !s.is_constant() {
        return Err(Error::Domain(format!("{v} is not irreducible")));
    }
    let c = s.coeff(0);
    (0..ell)
        .find(|&k| pow_mod(z, k as u64, q) == c)
        .map(Symbol::Root)
        .ok_or_else(|| Error::Domain(format!("{v} is not irreducible")))
}

/// Splitting of a place in the Kummer cover Y^ℓ = Q(X).
pub fn split_kummer(cover: &KummerCover, v: &Place) -> SplitType {
    let big_q = cover.poly();
    let ell = cover.ell();
    match v {
        Place::Infinity => {
            if big_q.deg() % ell as usize != 0 {
                SplitType::Ramified
            } else if is_ell_power(big_q.leading(), ell, big_q.modulus()) {
                SplitType::Split
            } else {
                SplitType::Inert
            }
        }
        Place::Finite(p) => match residue_symbol(big_q, p, ell).expect("cover has ell | q-1") {
            Symbol::Zero => SplitType::Ramified,
            Symbol::Root(0) => SplitType::Split,
            Symbol::Root(_) => SplitType::Inert,
        },
    }
}

/// Splitting of a place in the cubic field defined by Y³ + aY + b.
pub fn split_cubic(model: &CubicModel, v: &Place) -> SplitType {
    match v {
        Place::Infinity => model.infinity_type(),
        Place::Finite(p) => {
            if model.disc().rem(p).is_zero() {
                return SplitType::PartiallyRamified;
            }
            let a = model.a().rem(p);
            let b = model.b().rem(p);
            cubic_type_mod(&a, &b, &model.disc().rem(p), p)
        }
    }
}

/// Factorization type of the separable cubic Y³ + aY + b over 𝔽_q[X]/(v),
/// given its discriminant reduced mod v.
fn cubic_type_mod(a: &Poly, b: &Poly, disc: &Poly, v: &Poly) -> SplitType {
    let q = v.modulus();
    let size = (q as u128).pow(v.deg() as u32);
    // element c0 + c1 Y + c2 Y² of K[Y]/(Y³ + aY + b)
    let mul = |x: &[Poly; 3], y: &[Poly; 3]| -> [Poly; 3] {
        let mut p: Vec<Poly> = vec![Poly::zero(q); 5];
        for i in 0..3 {
            for j in 0..3 {
                p[i + j] = p[i + j].add(&x[i].mul(&y[j]));
            }
        }
        // Y⁴ = −aY² − bY, Y³ = −aY − b
        let p4 = p[4].rem(v);
        p[2] = p[2].sub(&a.mul(&p4));
        p[1] = p[1].sub(&b.mul(&p4));
        let p3 = p[3].rem(v);
        p[1] = p[1].sub(&a.mul(&p3));
        p[0] = p[0].sub(&b.mul(&p3));
        [p[0].rem(v), p[1].rem(v), p[2].rem(v)]
    };
    let y = [Poly::zero(q), Poly::one(q), Poly::zero(q)];
    let mut acc = [Poly::one(q), Poly::zero(q), Poly::zero(q)];
    let mut base = y.clone();
    let mut e = size;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    if acc == y {
        return SplitType::TotallySplit;
    }
    // a square discriminant leaves no root, a non-square exactly one
    let legendre = disc.pow_mod((size - 1) / 2, v);
    if legendre == Poly::one(q) {
        SplitType::Inert
    } else {
        SplitType::PartiallySplit
    }
}

// ---------------------------------------------------------------------------
// Dirichlet characters and L-polynomials

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DirichletChar {
    modulus: Poly,
    ell: u32,
    k: u32,
}

impl DirichletChar {
    /// χ_{v₀,ℓ}^k for a monic irreducible v₀, ℓ | q−1, 1 ≤ k ≤ ℓ−1.
    pub fn new(modulus: Poly, ell: u32, k: u32) -> Result<Self> {
        zeta_ell(modulus.modulus(), ell)?;
        if k == 0 || k >= ell {
            return Err(Error::Domain(format!("trivial or out-of-range exponent k = {k} for ell = {ell}")));
        }
        if !modulus.is_monic() {
            return Err(Error::Domain(format!("modulus {modulus} is not monic")));
        }
        irreducible_or_err(&modulus)?;
        Ok(DirichletChar { modulus, ell, k })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.modulus.modulus()
    }

    /// χ(f) as a CycInt (zero when v₀ | f).
    pub fn value(&self, f: &Poly) -> CycInt {
        match residue_symbol(f, &self.modulus, self.ell).expect("validated character") {
            Symbol::Zero => CycInt::zero(self.ell),
            Symbol::Root(e) => CycInt::root(self.ell, (e * self.k) as i64),
        }
    }

    /// Exponent of χ(f) in μ_ℓ, or `None` when v₀ | f.
    pub fn exponent(&self, f: &Poly) -> Option<u32> {
        match residue_symbol(f, &self.modulus, self.ell).expect("validated character") {
            Symbol::Zero => None,
            Symbol::Root(e) => Some(e * self.k % self.ell),
        }
    }

    /// Exponents of χ on every residue mod v₀, indexed by the base-q digits of
    /// the residue (constant term least significant); `None` at zero. Built
    /// from one discrete-log walk instead of a power per residue.
    pub fn exponent_table(&self) -> Vec<Option<u32>> {
        let q = self.q();
        let d = self.modulus.deg();
        let size = (q as u64).pow(d as u32);
        let order = (size - 1) as u128;
        let residue = |mut idx: u64| {
            let mut c = Vec::with_capacity(d);
            for _ in 0..d {
                c.push((idx % q as u64) as u32);
                idx /= q as u64;
            }
            Poly::from_raw(q, c)
        };
        let index = |p: &Poly| p.coeffs().iter().rev().fold(0u64, |a, &c| a * q as u64 + c as u64);
        let primes = prime_factors(order as u64);
        let one = Poly::one(q);
        let gen = (1..size)
            .map(residue)
            .find(|g| primes.iter().all(|&p| g.pow_mod(order / p as u128, &self.modulus) != one))
            .expect("multiplicative group of a finite field is cyclic");
        let eg = self.exponent(&gen).expect("generator is a unit") as u64;
        let mut table = vec![None; size as usize];
        let mut x = one;
        for k in 0..order as u64 {
            table[index(&x) as usize] = Some((k * eg % self.ell as u64) as u32);
            x = x.mul_mod(&gen, &self.modulus);
        }
        table
    }

    /// ∞ is unramified in Y^ℓ = v₀ exactly when ℓ | deg v₀ (then it splits,
    /// v₀ being monic).
    pub fn infinity_split(&self) -> bool {
        self.modulus.deg() % self.ell as usize == 0
    }

    /// Value at the infinite place used in power-sum identities: 1 when ∞
    /// splits, 0 when it ramifies.
    pub fn value_at_infinity(&self) -> CycInt {
        if self.infinity_split() {
            CycInt::one(self.ell)
        } else {
            CycInt::zero(self.ell)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LPoly {
    pub q: u32,
    pub ell: u32,
    pub k: u32,
    pub modulus_coeffs: Vec<u32>,
    /// Ascending coefficients of u.
    pub coeffs: Vec<CycInt>,
}

impl LPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Integer coefficients when every coefficient is rational.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.as_int()).collect()
    }

    pub fn embedded(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.embed()).collect()
    }

    /// JSON record {q, ell, k, modulus_coeffs, coeffs: [[int,...],...]}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "ell": self.ell,
            "k": self.k,
            "modulus_coeffs": self.modulus_coeffs,
            "coeffs": self.coeffs.iter().map(|c| c.coords().to_vec()).collect::<Vec<_>>(),
        })
    }

    /// Divides by (1 − εu), ε = ±1; errors if the division is not exact.
    pub fn divide_linear(&self, eps: i64) -> Result<LPoly> {
        let n = self.coeffs.len();
        if n < 2 {
            return Err(Error::Identity("cannot remove a trivial zero from a constant L-polynomial".into()));
        }
        // c(u) = (1 − εu) d(u): d_0 = c_0, d_m = c_m + ε d_{m−1}
        let mut d = Vec::with_capacity(n - 1);
        d.push(self.coeffs[0].clone());
        for m in 1..n - 1 {
            let prev = d[m - 1].scale(eps);
            d.push(self.coeffs[m].add(&prev));
        }
        let tail = self.coeffs[n - 1].add(&d[n - 2].scale(eps));
        if !tail.is_zero() {
            return Err(Error::Identity(format!("(1 - {eps}u) does not divide the L-polynomial")));
        }
        Ok(LPoly { coeffs: d, ..self.clone() })
    }
}

/// L(u, χ) = Σ_m (Σ_{f monic, deg f = m} χ(f)) u^m, degree ≤ deg v₀ − 1.
pub fn char_l_poly(chi: &DirichletChar) -> Result<LPoly> {
    let q = chi.q();
    let ell = chi.ell;
    let dv = chi.modulus.deg();
    let table = chi.exponent_table();
    let qu = q as u64;
    let v = chi.modulus.coeffs();
    let coeff = |m: usize| -> CycInt {
        let count = qu.pow(m as u32);
        let mut acc = vec![0i64; ell as usize];
        for idx in 0..count {
            // residue index of the monic polynomial with lower digits idx
            let r = if m < dv {
                idx + qu.pow(m as u32)
            } else {
                let (mut r, mut rest, mut place) = (0u64, idx, 1u64);
                for &vi in &v[..dv] {
                    let fi = (rest % qu) as u32;
                    rest /= qu;
                    r += ((fi + q - vi) % q) as u64 * place;
                    place *= qu;
                }
                r
            };
            if let Some(e) = table[r as usize] {
                acc[e as usize] += 1;
            }
        }
        acc.iter()
            .enumerate()
            .fold(CycInt::zero(ell), |s, (e, &n)| s.add(&CycInt::root(ell, e as i64).scale(n)))
    };
    let mut coeffs: Vec<CycInt> = (0..dv).map(coeff).collect();
    let beyond = coeff(dv);
    if !beyond.is_zero() {
        return Err(Error::Identity(format!(
            "character sum of degree {dv} does not vanish for modulus {}",
            chi.modulus
        )));
    }
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(LPoly { q, ell, k: chi.k, modulus_coeffs: chi.modulus.coeffs().to_vec(), coeffs })
}

/// Removes the trivial factor (1 − u) carried by L(u, χ) when ∞ splits in
/// Y^ℓ = v₀, leaving the part that divides the curve's zeta numerator.
pub fn primitive_l_poly(chi: &DirichletChar) -> Result<LPoly> {
    let l = char_l_poly(chi)?;
    if chi.infinity_split() {
        l.divide_linear(1)
    } else {
        Ok(l)
    }
}

/// Σ_m c_m q^{−m(σ+it)} with ζ_ℓ ↦ e^{2πi/ℓ}.
pub fn l_eval(l: &LPoly, sigma: f64, t: f64) -> Complex64 {
    let q = l.q as f64;
    let u = Complex64::from_polar(q.powf(-sigma), -t * q.ln());
    let c = l.embedded();
    crate::numeric::horner(&c, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::irreducible::irreducibles;
    use proptest::prelude::*;

    fn p(q: u32, c: &[i64]) -> Poly {
        Poly::from_ints(q, c)
    }

    #[test]
    fn residue_symbol_examples() {
        let f = p(3, &[0, -1, 0, 1]);
        assert_eq!(residue_symbol(&f, &p(3, &[0, 1]), 2).unwrap(), Symbol::Zero);
        assert_eq!(residue_symbol(&f, &p(3, &[1, 0, 1]), 2).unwrap(), Symbol::Root(0));
        assert_eq!(residue_symbol(&p(7, &[1, 1]), &p(7, &[0, 1]), 3).unwrap(), Symbol::Root(0));
        assert!(residue_symbol(&f, &p(3, &[0, 1]), 3).is_err());
    }

    #[test]
    fn symbol_at_degree_one_is_legendre() {
        // (f / (X − c)) = (f(c) / q)
        let q = 7;
        let f = p(q, &[3, 1, 4, 1]);
        for c in 0..q {
            let v = p(q, &[-(c as i64), 1]);
            let fc = f.eval(c);
            let s = residue_symbol(&f, &v, 2).unwrap();
            match s {
                Symbol::Zero => assert_eq!(fc, 0),
                Symbol::Root(e) => assert_eq!(e == 0, pow_mod(fc, 3, q) == 1),
            }
        }
    }

    #[test]
    fn kummer_splitting_examples() {
        let c = KummerCover::new(2, p(3, &[0, -1, 0, 1])).unwrap();
        assert_eq!(split_kummer(&c, &Place::Infinity), SplitType::Ramified);
        assert_eq!(split_kummer(&c, &Place::Finite(p(3, &[1, 0, 1]))), SplitType::Split);
        assert_eq!(split_kummer(&c, &Place::Finite(p(3, &[0, 1]))), SplitType::Ramified);
        let c = KummerCover::new(2, p(3, &[2, 1, 0, 1, 1])).unwrap();
        assert_eq!(split_kummer(&c, &Place::Infinity), SplitType::Split);
        let twisted = KummerCover::new(2, p(3, &[2, 1, 0, 1, 1]).scale(2)).unwrap();
        assert_eq!(split_kummer(&twisted, &Place::Infinity), SplitType::Inert);
    }

    fn first_cubic_model(q: u32) -> CubicModel {
        for ia in 0..(q as u64).pow(3) {
            for ib in 0..(q as u64).pow(4) {
                let a = Poly::monic_from_index(q, 3, ia).sub(&Poly::x(q).pow(3));
                let b = Poly::monic_from_index(q, 4, ib).sub(&Poly::x(q).pow(4));
                if let Ok(m) = CubicModel::new(a, b) {
                    return m;
                }
            }
        }
        unreachable!("some small cubic model is valid")
    }

    #[test]
    fn cubic_splitting_at_degree_one_matches_root_count() {
        let q = 5;
        let m = first_cubic_model(q);
        let (a, b) = (m.a().clone(), m.b().clone());
        let mut seen = std::collections::BTreeSet::new();
        for c in 0..q {
            let v = Place::Finite(p(q, &[-(c as i64), 1]));
            let t = split_cubic(&m, &v);
            let (ac, bc) = (a.eval(c), b.eval(c));
            let roots = (0..q)
                .filter(|&y| (pow_mod(y, 3, q) + ac * y % q + bc) % q == 0)
                .count();
            let expect = if m.disc().eval(c) == 0 {
                SplitType::PartiallyRamified
            } else {
                match roots {
                    3 => SplitType::TotallySplit,
                    1 => SplitType::PartiallySplit,
                    _ => SplitType::Inert,
                }
            };
            assert_eq!(t, expect, "c = {c}");
            seen.insert(t);
        }
        assert!(seen.len() >= 2);
    }

    #[test]
    fn l_poly_of_linear_modulus_is_one() {
        let chi = DirichletChar::new(p(3, &[0, 1]), 2, 1).unwrap();
        let l = char_l_poly(&chi).unwrap();
        assert_eq!(l.integer_coeffs(), Some(vec![1]));
        assert!((l_eval(&l, 0.5, 1.3) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn l_poly_cubic_modulus_by_direct_sum() {
        // v₀ = X³ − X − 1 over F_3: direct summation over monic linears and quadratics
        let v0 = p(3, &[-1, -1, 0, 1]);
        let chi = DirichletChar::new(v0.clone(), 2, 1).unwrap();
        let l = char_l_poly(&chi).unwrap();
        let mut c1 = 0i64;
        for a in 0..3 {
            c1 += legendre_poly(&p(3, &[a, 1]), &v0);
        }
        let mut c2 = 0i64;
        for a in 0..3 {
            for b in 0..3 {
                c2 += legendre_poly(&p(3, &[a, b, 1]), &v0);
            }
        }
        let ints = l.integer_coeffs().unwrap();
        assert_eq!(ints[0], 1);
        assert_eq!(ints.get(1).copied().unwrap_or(0), c1);
        assert_eq!(ints.get(2).copied().unwrap_or(0), c2);
    }

    // Euler's criterion computed independently of residue_symbol.
    fn legendre_poly(f: &Poly, v: &Poly) -> i64 {
        let r = f.rem(v);
        if r.is_zero() {
            return 0;
        }
        let e = (3u128.pow(v.deg() as u32) - 1) / 2;
        if r.pow_mod(e, v) == Poly::one(3) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn character_sums_vanish_beyond_modulus_degree() {
        for d in 1..=6 {
            for v0 in irreducibles(3, d).unwrap().iter() {
                let chi = DirichletChar::new(v0.clone(), 2, 1).unwrap();
                let l = char_l_poly(&chi).unwrap();
                assert!(l.degree() < d.max(1));
                assert_eq!(l.coeffs[0], CycInt::one(2));
            }
        }
    }

    #[test]
    fn exponent_table_matches_direct_symbols() {
        for (q, ell, d) in [(3, 2, 3), (7, 3, 2), (5, 4, 2)] {
            for v in irreducibles(q, d).unwrap().iter().take(4).cloned() {
                let chi = DirichletChar::new(v, ell, 1).unwrap();
                let table = chi.exponent_table();
                for (idx, e) in table.iter().enumerate() {
                    let mut c = Vec::new();
                    let mut r = idx as u32;
                    for _ in 0..d {
                        c.push(r % q);
                        r /= q;
                    }
                    assert_eq!(*e, chi.exponent(&Poly::from_raw(q, c)));
                }
            }
        }
    }

    #[test]
    fn l_eval_is_periodic_in_t() {
        let v0 = irreducibles(3, 5).unwrap()[2].clone();
        let l = char_l_poly(&DirichletChar::new(v0, 2, 1).unwrap()).unwrap();
        let period = 2.0 * std::f64::consts::PI / 3f64.ln();
        for t in [0.1, 0.7, 2.3] {
            let a = l_eval(&l, 0.5, t).norm();
            let b = l_eval(&l, 0.5, t + period).norm();
            assert!((a - b).abs() < 1e-12);
        }
        let at_zero = crate::numeric::horner(&l.embedded(), Complex64::new(0.0, 0.0));
        assert!((at_zero - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trivial_characters_are_rejected() {
        assert!(DirichletChar::new(p(7, &[0, 1]), 3, 0).is_err());
        assert!(DirichletChar::new(p(7, &[0, 1]), 3, 3).is_err());
        assert!(DirichletChar::new(p(5, &[0, 1]), 3, 1).is_err());
        assert!(DirichletChar::new(p(3, &[0, 0, 1]), 2, 1).is_err());
    }

    #[test]
    fn lpoly_json_shape() {
        // X² + 1 is irreducible over F_7 since 7 ≡ 3 mod 4
        let chi = DirichletChar::new(p(7, &[1, 0, 1]), 3, 2).unwrap();
        let l = char_l_poly(&chi).unwrap();
        let j = l.to_json();
        assert_eq!(j["q"], 7);
        assert_eq!(j["ell"], 3);
        assert_eq!(j["k"], 2);
        assert_eq!(j["modulus_coeffs"], serde_json::json!([1, 0, 1]));
        assert_eq!(j["coeffs"][0], serde_json::json!([1, 0]));
    }

    proptest! {
        #[test]
        fn residue_symbol_is_multiplicative(
            f in prop::collection::vec(0u32..7, 1..7),
            g in prop::collection::vec(0u32..7, 1..7),
            d in 1usize..=3,
            pick in 0usize..1000,
        ) {
            let q = 7;
            let f = Poly::from_raw(q, f);
            let g = Poly::from_raw(q, g);
            let vs = irreducibles(q, d).unwrap();
            let v = &vs[pick % vs.len()];
            let sf = residue_symbol(&f, v, 3).unwrap();
            let sg = residue_symbol(&g, v, 3).unwrap();
            let sfg = residue_symbol(&f.mul(&g), v, 3).unwrap();
            let expect = match (sf, sg) {
                (Symbol::Root(a), Symbol::Root(b)) => Symbol::Root((a + b) % 3),
                _ => Symbol::Zero,
            };
            prop_assert_eq!(sfg, expect);
        }

        #[test]
        fn twisting_swaps_split_and_inert_at_odd_degree(
            c in prop::collection::vec(0u32..3, 4..8),
            d in prop::sample::select(vec![1usize, 3]),
            pick in 0usize..1000,
        ) {
            let q = 3;
            let big_q = Poly::from_raw(q, c);
            prop_assume!(big_q.deg() >= 3 && big_q.is_squarefree());
            let cover = KummerCover::new(2, big_q.clone()).unwrap();
            let twist = KummerCover::new(2, big_q.scale(2)).unwrap();
            let vs = irreducibles(q, d).unwrap();
            let v = Place::Finite(vs[pick % vs.len()].clone());
            let a = split_kummer(&cover, &v);
            let b = split_kummer(&twist, &v);
            match a {
                SplitType::Ramified => prop_assert_eq!(b, SplitType::Ramified),
                SplitType::Split => prop_assert_eq!(b, SplitType::Inert),
                SplitType::Inert => prop_assert_eq!(b, SplitType::Split),
                _ => prop_assert!(false),
            }
        }
    }
}
