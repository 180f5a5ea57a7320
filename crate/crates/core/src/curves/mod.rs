//! Curve models (Kummer covers Y^ℓ = Q and cubic fields Y³ + aY + b), genus,
//! point counts over 𝔽_{q^n}, zeta numerators, exact power sums, RH checks and
//! per-curve explicit formulas.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::field::{check_field, mul_mod, sub_mod, zeta_ell};
use crate::algebra::{factor, Ext, ExtField, Poly};
use crate::error::{Error, Result};
use crate::numeric::distinct_integer_roots;
use crate::places_chars::{places_dividing, split_cubic, split_kummer, InfinityMode, Place, SplitType};

/// Fields larger than this are counted in parallel over x.
const PAR_COUNT_THRESHOLD: u64 = 1 << 15;

/// Y^ℓ = Q(X) with Q ℓ-powerfree and nonconstant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KummerCover {
    ell: u32,
    big_q: Poly,
    rad_degree: usize,
}

impl KummerCover {
    pub fn new(ell: u32, big_q: Poly) -> Result<Self> {
        let q = big_q.modulus();
        check_field(q)?;
        zeta_ell(q, ell)?;
        if !crate::algebra::field::is_prime(ell as u64) {
            return Err(Error::Domain(format!("ell = {ell} is not prime")));
        }
        if big_q.is_constant() {
            return Err(Error::InvalidModel(format!("Q = {big_q} is constant")));
        }
        let f = factor(&big_q)?;
        if !f.is_ell_powerfree(ell) {
            return Err(Error::InvalidModel(format!("Q = {big_q} is not {ell}-powerfree")));
        }
        let rad_degree = f.factors.iter().map(|(p, _)| p.deg()).sum();
        let cover = KummerCover { ell, big_q, rad_degree };
        let d = cover.conductor_degree();
        if ((ell - 1) as usize * (d - 2)) % 2 != 0 {
            return Err(Error::InvalidModel(format!("non-integral genus for Q = {}", cover.big_q)));
        }
        Ok(cover)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn poly(&self) -> &Poly {
        &self.big_q
    }

    pub fn q(&self) -> u32 {
        self.big_q.modulus()
    }

    pub fn infinity_ramified(&self) -> bool {
        self.big_q.deg() % self.ell as usize != 0
    }

    /// deg rad(Q) + [∞ ramified].
    pub fn conductor_degree(&self) -> usize {
        self.rad_degree + usize::from(self.infinity_ramified())
    }

    pub fn genus(&self) -> usize {
        (self.ell as usize - 1) * (self.conductor_degree() - 2) / 2
    }

    /// Twist Y^ℓ = cQ.
    pub fn twist(&self, c: u32) -> Result<KummerCover> {
        KummerCover::new(self.ell, self.big_q.scale(c))
    }
}

impl fmt::Display for KummerCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y^{} = {} over F_{}", self.ell, self.big_q, self.q())
    }
}

/// The cubic field generated by a root of Y³ + aY + b, with squarefree
/// non-square discriminant −4a³ − 27b².
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CubicModel {
    a: Poly,
    b: Poly,
    disc: Poly,
    /// Least m with deg a ≤ 2m and deg b ≤ 3m.
    weight: usize,
}

impl CubicModel {
    pub fn new(a: Poly, b: Poly) -> Result<Self> {
        let q = a.modulus();
        check_field(q)?;
        if q == 3 {
            return Err(Error::Domain("cubic models need characteristic > 3 (tame ramification)".into()));
        }
        let disc = cubic_disc(&a, &b);
        let model_name = || format!("Y^3 + ({a})Y + ({b})");
        if disc.deg() < 4 || disc.deg() % 2 != 0 {
            return Err(Error::InvalidModel(format!("{}: discriminant degree {} is not 2g + 4", model_name(), disc.deg())));
        }
        if !disc.is_squarefree() {
            return Err(Error::InvalidModel(format!("{}: discriminant is not squarefree", model_name())));
        }
        let weight = a.deg().div_ceil(2).max(b.deg().div_ceil(3));
        if has_polynomial_root(&a, &b, weight) {
            return Err(Error::InvalidModel(format!("{}: reducible over F_q(X)", model_name())));
        }
        Ok(CubicModel { a, b, disc, weight })
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn disc(&self) -> &Poly {
        &self.disc
    }

    pub fn q(&self) -> u32 {
        self.a.modulus()
    }

    pub fn genus(&self) -> usize {
        (self.disc.deg() - 4) / 2
    }

    /// Reduction at ∞ after Y = X^m Z: the cubic Z³ + a₀Z + b₀ over 𝔽_q.
    pub fn infinity_reduction(&self) -> (u32, u32) {
        (self.a.coeff(2 * self.weight), self.b.coeff(3 * self.weight))
    }

    /// Type at ∞, `Unclassified` unless the reduction is separable.
    pub fn infinity_type(&self) -> SplitType {
        let q = self.q();
        let (a0, b0) = self.infinity_reduction();
        if cubic_disc_const(a0, b0, q) == 0 {
            return SplitType::Unclassified;
        }
        match roots_in_prime_field(a0, b0, q) {
            3 => SplitType::TotallySplit,
            1 => SplitType::PartiallySplit,
            _ => SplitType::Inert,
        }
    }
}

impl fmt::Display for CubicModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y^3 + ({})Y + ({}) over F_{}", self.a, self.b, self.q())
    }
}

/// −4a³ − 27b².
pub fn cubic_disc(a: &Poly, b: &Poly) -> Poly {
    let q = a.modulus();
    let m4 = sub_mod(0, 4 % q, q);
    let m27 = sub_mod(0, 27 % q, q);
    a.pow(3).scale(m4).add(&b.square().scale(m27))
}

fn cubic_disc_const(a: u32, b: u32, q: u32) -> u32 {
    let a3 = mul_mod(mul_mod(a, a, q), a, q);
    let d = sub_mod(0, mul_mod(4 % q, a3, q), q);
    sub_mod(d, mul_mod(27 % q, mul_mod(b, b, q), q), q)
}

fn roots_in_prime_field(a: u32, b: u32, q: u32) -> usize {
    (0..q)
        .filter(|&y| {
            let y3 = mul_mod(mul_mod(y, y, q), y, q);
            (y3 as u64 + mul_mod(a, y, q) as u64 + b as u64) % q as u64 == 0
        })
        .count()
}

/// A root r ∈ 𝔽_q[X] of Y³ + aY + b has deg r ≤ m, so the search is finite.
fn has_polynomial_root(a: &Poly, b: &Poly, m: usize) -> bool {
    let q = a.modulus();
    let total = (q as u64).pow(m as u32 + 1);
    (0..total).any(|idx| {
        let mut c = Vec::with_capacity(m + 1);
        let mut x = idx;
        for _ in 0..=m {
            c.push((x % q as u64) as u32);
            x /= q as u64;
        }
        let r = Poly::from_raw(q, c);
        r.pow(3).add(&a.mul(&r)).add(b).is_zero()
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CoverModel {
    Kummer(KummerCover),
    Cubic(CubicModel),
}

impl CoverModel {
    pub fn q(&self) -> u32 {
        match self {
            CoverModel::Kummer(c) => c.q(),
            CoverModel::Cubic(m) => m.q(),
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            CoverModel::Kummer(c) => c.genus(),
            CoverModel::Cubic(m) => m.genus(),
        }
    }

    /// Splitting type of a place of 𝔽_q(X).
    pub fn split(&self, v: &Place) -> SplitType {
        match self {
            CoverModel::Kummer(c) => split_kummer(c, v),
            CoverModel::Cubic(m) => split_cubic(m, v),
        }
    }
}

impl fmt::Display for CoverModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverModel::Kummer(c) => c.fmt(f),
            CoverModel::Cubic(m) => m.fmt(f),
        }
    }
}

impl From<KummerCover> for CoverModel {
    fn from(c: KummerCover) -> Self {
        CoverModel::Kummer(c)
    }
}

impl From<CubicModel> for CoverModel {
    fn from(m: CubicModel) -> Self {
        CoverModel::Cubic(m)
    }
}

// ---------------------------------------------------------------------------
// Point counting

/// #C(𝔽_{q^n}) for the smooth projective model.
pub fn count_points(model: &CoverModel, n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("extension degree n must be at least 1".into()));
    }
    let field = ExtField::get(model.q(), n)?;
    match model {
        CoverModel::Kummer(c) => Ok(count_kummer(c, &field, n)),
        CoverModel::Cubic(m) => count_cubic(m, &field, n),
    }
}

fn sum_over_field<F>(field: &ExtField, f: F) -> u64
where
    F: Fn(Ext) -> u64 + Sync,
{
    if field.size() > PAR_COUNT_THRESHOLD {
        let zero = field.zero();
        f(zero) + (0..field.mult_order()).into_par_iter().map(&f).sum::<u64>()
    } else {
        field.elements().map(f).sum()
    }
}

fn count_kummer(c: &KummerCover, field: &ExtField, n: usize) -> u64 {
    let ell = c.ell();
    let coeffs = field.poly_logs(c.poly());
    let affine = sum_over_field(field, |x| {
        let v = field.eval(&coeffs, x);
        if field.is_zero(v) {
            1
        } else if field.is_power(v, ell) {
            ell as u64
        } else {
            0
        }
    });
    let at_infinity = match split_kummer(c, &Place::Infinity) {
        SplitType::Ramified => 1,
        SplitType::Split => ell as u64,
        // residue degree ℓ: rational over 𝔽_{q^n} iff ℓ | n
        _ => {
            if n % ell as usize == 0 {
                ell as u64
            } else {
                0
            }
        }
    };
    affine + at_infinity
}

fn count_cubic(m: &CubicModel, field: &ExtField, n: usize) -> Result<u64> {
    let ta = field.poly_logs(m.a());
    let tb = field.poly_logs(m.b());
    let td = field.poly_logs(m.disc());
    let size = field.size();
    let affine = sum_over_field(field, |x| {
        let d = field.eval(&td, x);
        if field.is_zero(d) {
            // simple root of the discriminant: partially ramified, two points
            return 2;
        }
        if !field.is_power(d, 2) {
            return 1;
        }
        let a = field.eval(&ta, x);
        let b = field.eval(&tb, x);
        if cubic_splits_completely(field, a, b, size) {
            3
        } else {
            0
        }
    });
    let at_infinity = match m.infinity_type() {
        SplitType::TotallySplit => 3,
        SplitType::PartiallySplit => 1 + if n % 2 == 0 { 2 } else { 0 },
        SplitType::Inert => {
            if n % 3 == 0 {
                3
            } else {
                0
            }
        }
        _ => return Err(Error::UnclassifiedInfinity(m.to_string())),
    };
    Ok(affine + at_infinity)
}

/// Whether Y^{|F|} ≡ Y mod Y³ + aY + b over F.
fn cubic_splits_completely(f: &ExtField, a: Ext, b: Ext, size: u64) -> bool {
    let na = f.neg(a);
    let nb = f.neg(b);
    let mul = |x: [Ext; 3], y: [Ext; 3]| -> [Ext; 3] {
        let mut p = [f.zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                p[i + j] = f.add(p[i + j], f.mul(x[i], y[j]));
            }
        }
        p[2] = f.add(p[2], f.mul(na, p[4]));
        p[1] = f.add(p[1], f.mul(nb, p[4]));
        p[1] = f.add(p[1], f.mul(na, p[3]));
        p[0] = f.add(p[0], f.mul(nb, p[3]));
        [p[0], p[1], p[2]]
    };
    let y = [f.zero(), f.one(), f.zero()];
    let mut acc = [f.one(), f.zero(), f.zero()];
    let mut base = y;
    let mut e = size;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(base, base);
        }
    }
    acc == y
}

// ---------------------------------------------------------------------------
// Zeta numerators and power sums

/// S_n = q^n + 1 − #C(𝔽_{q^n}) for n = 1..=count, by direct counting.
pub fn counted_power_sums(model: &CoverModel, count: usize) -> Result<Vec<i128>> {
    let q = model.q() as i128;
    (1..=count)
        .map(|n| Ok(q.pow(n as u32) + 1 - count_points(model, n)? as i128))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ZetaNumerator {
    pub q: u32,
    pub genus: usize,
    /// c₀ … c_{2g}, c₀ = 1.
    pub coeffs: Vec<i128>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PowerSums {
    pub q: u32,
    pub genus: usize,
    /// S₁ … S_N.
    pub s: Vec<i128>,
}

impl PowerSums {
    /// S_n for 1 ≤ n ≤ N.
    pub fn get(&self, n: usize) -> i128 {
        self.s[n - 1]
    }

    /// Tr Θⁿ = S_n / q^{n/2}.
    pub fn trace(&self, n: usize) -> f64 {
        self.get(n) as f64 / (self.q as f64).powf(n as f64 / 2.0)
    }
}

/// Newton: n c_n = −Σ_{k=1}^{n} S_k c_{n−k}.
fn coeffs_from_power_sums(s: &[i128], upto: usize) -> Result<Vec<i128>> {
    let mut c = vec![1i128];
    for n in 1..=upto {
        let acc: i128 = (1..=n).map(|k| s[k - 1] * c[n - k]).sum();
        if acc % n as i128 != 0 {
            return Err(Error::Identity(format!("Newton step {n} is not integral (sum {acc})")));
        }
        c.push(-acc / n as i128);
    }
    Ok(c)
}

impl ZetaNumerator {
    /// Counts S₁..S_g and completes P_C by the functional equation.
    pub fn from_model(model: &CoverModel) -> Result<Self> {
        let g = model.genus();
        let s = counted_power_sums(model, g)?;
        ZetaNumerator::from_power_sums(model.q(), g, &s)
    }

    /// Builds P_C from S₁..S_g (at least g values).
    pub fn from_power_sums(q: u32, g: usize, s: &[i128]) -> Result<Self> {
        let mut c = coeffs_from_power_sums(s, g)?;
        c.resize(2 * g + 1, 0);
        for k in 0..g {
            c[2 * g - k] = (q as i128).pow((g - k) as u32) * c[k];
        }
        Ok(ZetaNumerator { q, genus: g, coeffs: c })
    }

    /// Counts S₁..S_{2g}, derives every coefficient by Newton's identities and
    /// requires agreement with the functional-equation completion.
    pub fn from_model_checked(model: &CoverModel) -> Result<Self> {
        let g = model.genus();
        let s = counted_power_sums(model, 2 * g)?;
        let full = coeffs_from_power_sums(&s, 2 * g)?;
        let z = ZetaNumerator::from_power_sums(model.q(), g, &s)?;
        if full != z.coeffs {
            return Err(Error::Identity(format!(
                "functional equation fails for {model}: Newton {full:?} vs completed {:?}",
                z.coeffs
            )));
        }
        Ok(z)
    }

    /// S₁..S_N via the integer recurrence S_n = −n c_n − Σ_{k=1}^{n−1} c_k S_{n−k}.
    pub fn power_sums(&self, big_n: usize) -> PowerSums {
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or(0);
        let mut s: Vec<i128> = Vec::with_capacity(big_n);
        for n in 1..=big_n {
            let mut v = -(n as i128) * c(n);
            for k in 1..n {
                v -= c(k) * s[n - k - 1];
            }
            s.push(v);
        }
        PowerSums { q: self.q, genus: self.genus, s }
    }

    /// P(1), the divisor class number.
    pub fn class_number(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus;
        self.coeffs.len() == 2 * g + 1
            && self.coeffs[0] == 1
            && (0..=2 * g).all(|k| {
                let j = 2 * g - k;
                // c_{2g−k} q^{k} = q^{g} c_k, written without negative powers
                self.coeffs[j] * (self.q as i128).pow(k as u32) == (self.q as i128).pow(g as u32) * self.coeffs[k]
            })
    }
}

/// Power sums S₁..S_N of a model: counted for n ≤ g, recurrence beyond.
pub fn power_sums(model: &CoverModel, big_n: usize) -> Result<PowerSums> {
    Ok(ZetaNumerator::from_model(model)?.power_sums(big_n))
}

#[derive(Clone, Debug, Serialize)]
pub struct RhReport {
    pub ok: bool,
    /// max over roots of | |u*| − q^{−1/2} |.
    pub max_deviation: f64,
    pub functional_equation: bool,
    /// S_n² ≤ 4g²qⁿ for n ≤ 2g + 2.
    pub weil_bound: bool,
}

pub const RH_TOL: f64 = 1e-9;

pub fn verify_rh(p: &ZetaNumerator) -> RhReport {
    let g = p.genus;
    let fe = p.functional_equation_holds();
    let s = p.power_sums(2 * g + 2);
    let q = p.q as i128;
    let weil = (1..=2 * g + 2).all(|n| {
        let sn = s.get(n);
        sn * sn <= 4 * (g as i128) * (g as i128) * q.pow(n as u32)
    });
    let target = (p.q as f64).powf(-0.5);
    let max_dev = if g == 0 {
        0.0
    } else {
        distinct_integer_roots(&p.coeffs)
            .iter()
            .map(|z| (z.norm() - target).abs())
            .fold(0.0, f64::max)
    };
    RhReport {
        ok: fe && weil && max_dev < RH_TOL && max_dev.is_finite(),
        max_deviation: max_dev,
        functional_equation: fe,
        weil_bound: weil,
    }
}

/// Eigenangles θ_j ∈ (−π, π] of the unitarized Frobenius (diagnostic only).
pub fn eigenangles(p: &ZetaNumerator) -> Vec<f64> {
    // roots of P are q^{−1/2} e^{−iθ_j}; recover θ from reciprocal roots
    let coeffs: Vec<num_complex::Complex64> =
        p.coeffs.iter().map(|&c| num_complex::Complex64::new(c as f64, 0.0)).collect();
    let sq = (p.q as f64).sqrt();
    crate::numeric::poly_roots(&coeffs).iter().map(|z| (1.0 / (z * sq)).arg()).collect()
}

// ---------------------------------------------------------------------------
// Explicit formulas

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ExplicitCheck {
    pub n: usize,
    pub lhs: i128,
    pub rhs: i128,
    pub equal: bool,
}

/// Number of finite places of each degree ≤ `max_deg` by splitting type, plus
/// the type at ∞.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaceCensus {
    by_degree: Vec<BTreeMap<SplitType, u64>>,
    pub infinity: SplitType,
}

impl PlaceCensus {
    pub fn max_degree(&self) -> usize {
        self.by_degree.len()
    }

    pub fn count(&self, d: usize, t: SplitType) -> u64 {
        self.by_degree[d - 1].get(&t).copied().unwrap_or(0)
    }

    /// Classifies every monic irreducible of degree ≤ `max_deg` through the
    /// residue-symbol route.
    pub fn by_symbols(model: &CoverModel, max_deg: usize) -> Result<Self> {
        let q = model.q();
        let mut by_degree = Vec::with_capacity(max_deg);
        for d in 1..=max_deg {
            let places = crate::places_chars::finite_places(q, d)?;
            let types: Vec<SplitType> = places.par_iter().map(|v| model.split(v)).collect();
            let mut m = BTreeMap::new();
            for t in types {
                *m.entry(t).or_insert(0) += 1;
            }
            by_degree.push(m);
        }
        Ok(PlaceCensus { by_degree, infinity: model.split(&Place::Infinity) })
    }

    /// Classifies places of degree d through the elements of 𝔽_{q^d} of exact
    /// degree d: each place has d conjugate roots there, and the residue of
    /// the model at the place is read off the values at a root.
    pub fn by_roots(model: &CoverModel, max_deg: usize) -> Result<Self> {
        let mut by_degree = Vec::with_capacity(max_deg);
        for d in 1..=max_deg {
            let f = ExtField::get(model.q(), d)?;
            let proper: Vec<usize> = (1..d).filter(|k| d % k == 0).collect();
            let exact = |x: Ext| {
                proper.iter().all(|&k| {
                    let mut y = x;
                    for _ in 0..k {
                        y = f.frobenius(y);
                    }
                    y != x
                })
            };
            let classify = root_classifier(model, &f);
            let mut m: BTreeMap<SplitType, u64> = BTreeMap::new();
            let types: Vec<SplitType> = (0..f.mult_order())
                .into_par_iter()
                .filter(|&x| exact(x))
                .map(&classify)
                .collect();
            let zero_type = (d == 1).then(|| classify(f.zero()));
            for t in types.into_iter().chain(zero_type) {
                *m.entry(t).or_insert(0) += 1;
            }
            for c in m.values_mut() {
                if *c % d as u64 != 0 {
                    return Err(Error::Identity(format!("root census of degree {d} is not a union of orbits")));
                }
                *c /= d as u64;
            }
            by_degree.push(m);
        }
        Ok(PlaceCensus { by_degree, infinity: model.split(&Place::Infinity) })
    }
}

/// Splitting type at the place with root x, for x of exact degree d.
fn root_classifier<'a>(model: &'a CoverModel, f: &'a ExtField) -> Box<dyn Fn(Ext) -> SplitType + Sync + 'a> {
    match model {
        CoverModel::Kummer(c) => {
            let ell = c.ell();
            let coeffs = f.poly_logs(c.poly());
            Box::new(move |x| {
                let v = f.eval(&coeffs, x);
                if f.is_zero(v) {
                    SplitType::Ramified
                } else if f.is_power(v, ell) {
                    SplitType::Split
                } else {
                    SplitType::Inert
                }
            })
        }
        CoverModel::Cubic(m) => {
            let (ta, tb, td) = (f.poly_logs(m.a()), f.poly_logs(m.b()), f.poly_logs(m.disc()));
            let size = f.size();
            Box::new(move |x| {
                let disc = f.eval(&td, x);
                if f.is_zero(disc) {
                    SplitType::PartiallyRamified
                } else if !f.is_power(disc, 2) {
                    SplitType::PartiallySplit
                } else if cubic_splits_completely(f, f.eval(&ta, x), f.eval(&tb, x), size) {
                    SplitType::TotallySplit
                } else {
                    SplitType::Inert
                }
            })
        }
    }
}

/// Right-hand side of the explicit formula for −S_n:
/// Σ_v Σ_{w|v, f_w deg v | n} f_w deg v − Σ_{deg v | n} deg v over the places
/// admitted by `mode`.
pub fn explicit_rhs(model: &CoverModel, census: &PlaceCensus, n: usize, mode: InfinityMode) -> Result<i128> {
    if n > census.max_degree() {
        return Err(Error::Domain(format!("census covers degrees ≤ {}, need {n}", census.max_degree())));
    }
    // (type, residue degree, multiplicity) of the primes above v, minus v itself
    let contribution = |t: SplitType, d: usize| -> i128 {
        let dv = d as i128;
        let hit = |f: usize| if n % (f * d) == 0 { (f * d) as i128 } else { 0 };
        let base = if n % d == 0 { dv } else { 0 };
        match (model, t) {
            (CoverModel::Kummer(c), SplitType::Split) => c.ell() as i128 * hit(1) - base,
            (CoverModel::Kummer(c), SplitType::Inert) => hit(c.ell() as usize) - base,
            (_, SplitType::Ramified) | (_, SplitType::PartiallyRamified) => {
                // cubic partial ramification: one unramified degree-1 prime beside the ramified one
                let extra = if matches!(model, CoverModel::Cubic(_)) { hit(1) } else { 0 };
                hit(1) + extra - base
            }
            (CoverModel::Cubic(_), SplitType::TotallySplit) => 3 * hit(1) - base,
            (CoverModel::Cubic(_), SplitType::PartiallySplit) => hit(1) + hit(2) - base,
            (CoverModel::Cubic(_), SplitType::Inert) => hit(3) - base,
            _ => 0,
        }
    };
    let mut rhs: i128 = 0;
    for d in (1..=n).filter(|d| n % d == 0) {
        for (&t, &count) in &census.by_degree[d - 1] {
            rhs += count as i128 * contribution(t, d);
        }
    }
    let inf = census.infinity;
    if inf != SplitType::Unclassified && mode == InfinityMode::IncludeWhenClassifiable {
        rhs += contribution(inf, 1);
    }
    Ok(rhs)
}

/// Checks −S_n against the place sum for n = 1..=max_n, with S_n from the
/// zeta numerator (counted up to g, recurrence beyond) and places classified
/// through roots.
pub fn verify_explicit_formula_range(
    model: &CoverModel,
    max_n: usize,
    mode: InfinityMode,
) -> Result<Vec<ExplicitCheck>> {
    let s = power_sums(model, max_n)?;
    let census = PlaceCensus::by_roots(model, max_n)?;
    (1..=max_n)
        .map(|n| {
            let lhs = -s.get(n);
            let rhs = explicit_rhs(model, &census, n, mode)?;
            Ok(ExplicitCheck { n, lhs, rhs, equal: lhs == rhs })
        })
        .collect()
}

/// Single-n check with S_n counted directly over 𝔽_{q^n} and places classified
/// by residue symbols.
pub fn verify_explicit_formula(model: &CoverModel, n: usize, mode: InfinityMode) -> Result<ExplicitCheck> {
    let q = model.q() as i128;
    let lhs = -(q.pow(n as u32) + 1 - count_points(model, n)? as i128);
    let census = PlaceCensus::by_symbols(model, n)?;
    let rhs = explicit_rhs(model, &census, n, mode)?;
    Ok(ExplicitCheck { n, lhs, rhs, equal: lhs == rhs })
}

/// Per-place dump for a failed identity.
pub fn explicit_formula_dump(model: &CoverModel, n: usize) -> Result<String> {
    let mut out = format!("{model}, n = {n}\n");
    for v in places_dividing(model.q(), n)? {
        out.push_str(&format!("  {v} (deg {}): {}\n", v.degree(), model.split(&v)));
    }
    Ok(out)
}
