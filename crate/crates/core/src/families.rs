//! Families of covers over a fixed 𝔽_q: quadratic extensions of genus g (and
//! the odd- and even-degree model subfamilies), cyclic ℓ-extensions by
//! conductor degree, and cubic non-Galois models Y³ + aY + b. Also the
//! splitting densities of a fixed place across a family.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::field::{check_field, is_prime, least_nonsquare, mul_mod, pow_mod, primitive_root, zeta_ell};
use crate::algebra::{factor, Poly};
use crate::curves::{CoverModel, CubicModel, KummerCover};
use crate::error::{Error, Result};
use crate::places_chars::{Place, SplitType};

/// Hard cap on the number of candidate models an exact enumeration may touch.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum QuadVariant {
    /// εQ with Q monic squarefree of degree 2g+1 or 2g+2, ε ∈ {1, least non-square}.
    Full,
    /// Monic squarefree Q of degree 2g+1.
    OddModel,
    /// Monic squarefree Q of degree 2g+2.
    EvenModel,
}

impl FromStr for QuadVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(QuadVariant::Full),
            "odd" | "odd-model" => Ok(QuadVariant::OddModel),
            "even" | "even-model" => Ok(QuadVariant::EvenModel),
            _ => Err(Error::Domain(format!("unknown quadratic variant '{s}' (full, odd, even)"))),
        }
    }
}

impl fmt::Display for QuadVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadVariant::Full => "full",
            QuadVariant::OddModel => "odd",
            QuadVariant::EvenModel => "even",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum FamilyKind {
    Quadratic { g: usize, variant: QuadVariant },
    CyclicEll { ell: u32, d: usize },
    CubicSF { g: usize },
}

impl FamilyKind {
    pub fn genus(&self) -> usize {
        match *self {
            FamilyKind::Quadratic { g, .. } | FamilyKind::CubicSF { g } => g,
            FamilyKind::CyclicEll { ell, d } => (ell as usize - 1) * (d - 2) / 2,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Quadratic { g, variant } => write!(f, "quadratic-{variant}-g{g}"),
            FamilyKind::CyclicEll { ell, d } => write!(f, "cyclic-ell{ell}-d{d}"),
            FamilyKind::CubicSF { g } => write!(f, "cubic-g{g}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub q: u32,
    pub kind: FamilyKind,
    pub members: Vec<CoverModel>,
    /// Number of generated models per extension class: class size ↦ number of classes.
    pub dedupe_log: BTreeMap<usize, usize>,
    /// Seed of a sampled subset; `None` for exact enumerations.
    pub sample_seed: Option<u64>,
}

impl Family {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_estimate(&self) -> bool {
        self.sample_seed.is_some()
    }

    pub fn genus(&self) -> usize {
        self.kind.genus()
    }
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::Budget { required, budget })
    } else {
        Ok(())
    }
}

fn pow_u128(q: u32, e: usize) -> u128 {
    (q as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
}

/// Monic squarefree polynomials of degree d, canonically ordered.
fn monic_squarefree(q: u32, d: usize) -> Vec<Poly> {
    (0..(q as u64).pow(d as u32))
        .into_par_iter()
        .map(|i| Poly::monic_from_index(q, d, i))
        .filter(|p| p.is_squarefree())
        .collect()
}

fn quadratic_degrees(g: usize, variant: QuadVariant) -> Vec<usize> {
    match variant {
        QuadVariant::Full => vec![2 * g + 1, 2 * g + 2],
        QuadVariant::OddModel => vec![2 * g + 1],
        QuadVariant::EvenModel => vec![2 * g + 2],
    }
}

fn quadratic_constants(q: u32, variant: QuadVariant) -> Vec<u32> {
    match variant {
        QuadVariant::Full => vec![1, least_nonsquare(q)],
        _ => vec![1],
    }
}

/// Quadratic extensions of genus g, one model Y² = εQ per extension.
pub fn enum_quadratic(q: u32, g: usize, variant: QuadVariant, budget: u128) -> Result<Family> {
    check_field(q)?;
    if g == 0 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    let degrees = quadratic_degrees(g, variant);
    let constants = quadratic_constants(q, variant);
    let required = degrees.iter().map(|&d| pow_u128(q, d)).sum::<u128>() * constants.len() as u128;
    check_budget(required, budget)?;
    let mut polys = Vec::new();
    for &d in &degrees {
        let base = monic_squarefree(q, d);
        for &c in &constants {
            polys.extend(base.iter().map(|p| p.scale(c)));
        }
    }
    polys.sort_by(|a, b| a.canonical_cmp(b));
    let members: Vec<CoverModel> = polys
        .into_iter()
        .map(|p| KummerCover::new(2, p).map(CoverModel::from))
        .collect::<Result<_>>()?;
    let dedupe_log = BTreeMap::from([(1, members.len())]);
    Ok(Family { q, kind: FamilyKind::Quadratic { g, variant }, members, dedupe_log, sample_seed: None })
}

/// Seeded uniform sample of `count` members of a quadratic family, for
/// parameters beyond the exact budget. Results are estimates.
pub fn sample_quadratic(q: u32, g: usize, variant: QuadVariant, count: usize, seed: u64) -> Result<Family> {
    check_field(q)?;
    if g == 0 {
        return Err(Error::Domain("genus must be at least 1".into()));
    }
    let degrees = quadratic_degrees(g, variant);
    let constants = quadratic_constants(q, variant);
    // pick a degree with probability proportional to the squarefree count q^d − q^{d−1}
    let weights: Vec<f64> = degrees.iter().map(|&d| (q as f64).powi(d as i32)).collect();
    let total: f64 = weights.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(count);
    while members.len() < count {
        let mut r = rng.gen::<f64>() * total;
        let mut d = degrees[0];
        for (&dd, &w) in degrees.iter().zip(&weights) {
            d = dd;
            if r < w {
                break;
            }
            r -= w;
        }
        let mut c: Vec<u32> = (0..d).map(|_| rng.gen_range(0..q)).collect();
        c.push(1);
        let p = Poly::from_raw(q, c);
        if !p.is_squarefree() {
            continue;
        }
        let eps = constants[rng.gen_range(0..constants.len())];
        members.push(KummerCover::new(2, p.scale(eps))?.into());
    }
    Ok(Family {
        q,
        kind: FamilyKind::Quadratic { g, variant },
        members,
        dedupe_log: BTreeMap::new(),
        sample_seed: Some(seed),
    })
}

/// Ordering key matching `Poly::canonical_cmp`.
fn poly_key(p: &Poly) -> (usize, Vec<u32>) {
    (p.deg(), p.coeffs().to_vec())
}

/// Cyclic degree-ℓ extensions with conductor degree d, one canonical Kummer
/// model per extension. Y^ℓ = Q and Y^ℓ = Q' define the same extension iff
/// Q' = Q^j h^ℓ; models are kept ℓ-powerfree with the constant reduced to a
/// fixed coset representative of 𝔽_q*/(𝔽_q*)^ℓ.
pub fn enum_cyclic(q: u32, ell: u32, d: usize, budget: u128) -> Result<Family> {
    check_field(q)?;
    if ell == 2 || !is_prime(ell as u64) {
        return Err(Error::Domain(format!("ell = {ell} must be an odd prime")));
    }
    zeta_ell(q, ell)?;
    if d < 2 {
        return Err(Error::Domain("conductor degree must be at least 2".into()));
    }
    if ((ell as usize - 1) * (d - 2)) % 2 != 0 {
        return Err(Error::Domain(format!("conductor degree {d} gives a non-integral genus")));
    }
    let l = ell as usize;
    let radical_degrees: Vec<usize> = [d, d - 1].into_iter().filter(|&r| r >= 1).collect();
    let required = radical_degrees
        .iter()
        .map(|&r| pow_u128(q, r).saturating_mul(pow_u128(ell - 1, r)))
        .sum::<u128>()
        .saturating_mul(ell as u128);
    check_budget(required, budget)?;

    let gen = primitive_root(q);
    // coset representatives g^i, i < ℓ, indexed by i
    let reps: Vec<u32> = (0..ell).map(|i| pow_mod(gen, i as u64, q)).collect();

    // every generated model as (constant index, factors with exponents)
    let mut generated: Vec<(usize, Vec<(Poly, u32)>)> = Vec::new();
    for &r in &radical_degrees {
        let radicals = monic_squarefree(q, r);
        let factored: Vec<Vec<Poly>> = radicals
            .par_iter()
            .map(|p| factor(p).map(|f| f.factors.into_iter().map(|(x, _)| x).collect()))
            .collect::<Result<_>>()?;
        for primes in factored {
            let k = primes.len();
            let choices = (l - 1).pow(k as u32);
            for idx in 0..choices {
                let mut x = idx;
                let exps: Vec<u32> = (0..k)
                    .map(|_| {
                        let e = (x % (l - 1)) as u32 + 1;
                        x /= l - 1;
                        e
                    })
                    .collect();
                let deg: usize = primes.iter().zip(&exps).map(|(p, &e)| p.deg() * e as usize).sum();
                let inf_ramified = deg % l != 0;
                if r + usize::from(inf_ramified) != d {
                    continue;
                }
                let fac: Vec<(Poly, u32)> = primes.iter().cloned().zip(exps).collect();
                for ci in 0..l {
                    generated.push((ci, fac.clone()));
                }
            }
        }
    }

    let build = |ci: usize, fac: &[(Poly, u32)]| -> Poly {
        fac.iter().fold(Poly::constant(q, reps[ci]), |acc, (p, e)| acc.mul(&p.pow(*e)))
    };
    // canonical representative of the class {Q^j · ℓ-th powers : 1 ≤ j < ℓ}
    let canonical = |ci: usize, fac: &[(Poly, u32)]| -> Poly {
        (1..l)
            .map(|j| {
                let cj = (ci * j) % l;
                let fj: Vec<(Poly, u32)> = fac.iter().map(|(p, e)| (p.clone(), (*e as usize * j % l) as u32)).collect();
                build(cj, &fj)
            })
            .min_by(|a, b| a.canonical_cmp(b))
            .expect("ell >= 3")
    };
    let reps_of: Vec<Poly> = generated.par_iter().map(|(ci, fac)| canonical(*ci, fac)).collect();
    let mut classes: BTreeMap<(usize, Vec<u32>), (Poly, usize)> = BTreeMap::new();
    for p in reps_of {
        classes.entry(poly_key(&p)).or_insert_with(|| (p, 0)).1 += 1;
    }
    let mut dedupe_log = BTreeMap::new();
    let mut members = Vec::with_capacity(classes.len());
    for (_, (p, size)) in classes {
        *dedupe_log.entry(size).or_insert(0) += 1;
        let cover = KummerCover::new(ell, p)?;
        debug_assert_eq!(cover.conductor_degree(), d);
        members.push(cover.into());
    }
    Ok(Family { q, kind: FamilyKind::CyclicEll { ell, d }, members, dedupe_log, sample_seed: None })
}

/// Canonical form of a cyclic model: the least member of its class.
pub fn canonical_cyclic(cover: &KummerCover) -> Result<KummerCover> {
    let q = cover.q();
    let ell = cover.ell();
    let f = factor(cover.poly())?;
    let lead = f.unit.value();
    let best = (1..ell)
        .map(|j| {
            // Q^j with exponents reduced mod ℓ and the constant moved to its coset representative
            let c = pow_mod(lead, j as u64, q);
            let ci = coset_index(c, ell, q);
            let rep = pow_mod(primitive_root(q), ci as u64, q);
            f.factors
                .iter()
                .fold(Poly::constant(q, rep), |acc, (p, e)| acc.mul(&p.pow(e * j % ell)))
        })
        .min_by(|a, b| a.canonical_cmp(b))
        .expect("ell >= 2");
    KummerCover::new(ell, best)
}

/// i with c ∈ g^i (𝔽_q*)^ℓ, g the least primitive root.
fn coset_index(c: u32, ell: u32, q: u32) -> u32 {
    let g = primitive_root(q);
    let mut x = 1u32;
    for i in 0..q - 1 {
        if x == c {
            return i % ell;
        }
        x = mul_mod(x, g, q);
    }
    unreachable!("nonzero residue")
}

/// Cubic non-Galois models Y³ + aY + b whose discriminant −4a³ − 27b² is
/// squarefree of degree 2g + 4 = 6m with deg a ≤ 2m, deg b ≤ 3m, deduplicated
/// under Y ↦ uY. The degree condition makes ∞ unramified and classifiable,
/// which confines g to g ≡ 1 mod 3.
pub fn enum_cubic(q: u32, g: usize, budget: u128) -> Result<Family> {
    check_field(q)?;
    if q == 3 {
        return Err(Error::Domain("cubic models need characteristic > 3".into()));
    }
    if (2 * g + 4) % 6 != 0 {
        return Err(Error::Domain(format!(
            "genus {g}: discriminant degree {} is not a multiple of 6, so ∞ cannot be classified",
            2 * g + 4
        )));
    }
    let m = (2 * g + 4) / 6;
    let (na, nb) = (2 * m + 1, 3 * m + 1);
    let required = pow_u128(q, na).saturating_mul(pow_u128(q, nb));
    check_budget(required, budget)?;
    let total_b = (q as u64).pow(nb as u32);
    let any_poly = |n: usize, idx: u64| {
        // all polynomials with n coefficients: drop the forced leading 1
        let p = Poly::monic_from_index(q, n, idx);
        p.sub(&Poly::x(q).pow(n as u32))
    };
    let units: Vec<u32> = (1..q).collect();
    let found: Vec<(CubicModel, usize)> = (0..(q as u64).pow(na as u32))
        .into_par_iter()
        .flat_map_iter(|ia| {
            let a = any_poly(na, ia);
            (0..total_b).map(move |ib| (a.clone(), any_poly(nb, ib)))
        })
        .filter_map(|(a, b)| {
            if b.is_zero() {
                return None;
            }
            let orbit: Vec<(Poly, Poly)> = units
                .iter()
                .map(|&u| (a.scale(mul_mod(u, u, q)), b.scale(pow_mod(u, 3, q))))
                .collect();
            let key = |(x, y): &(Poly, Poly)| (poly_key(x), poly_key(y));
            let min = orbit.iter().map(key).min().expect("nonempty");
            if min != key(&(a.clone(), b.clone())) {
                return None;
            }
            let model = CubicModel::new(a, b).ok()?;
            if model.disc().deg() != 2 * g + 4 {
                return None;
            }
            let distinct = orbit.iter().map(key).collect::<std::collections::BTreeSet<_>>().len();
            Some((model, distinct))
        })
        .collect();
    let mut dedupe_log = BTreeMap::new();
    let mut members = Vec::with_capacity(found.len());
    for (model, size) in found {
        *dedupe_log.entry(size).or_insert(0) += 1;
        members.push(CoverModel::from(model));
    }
    Ok(Family { q, kind: FamilyKind::CubicSF { g }, members, dedupe_log, sample_seed: None })
}

// ---------------------------------------------------------------------------
// Densities

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub place: String,
    pub place_degree: usize,
    pub behavior: SplitType,
    pub empirical_num: i128,
    pub empirical_den: i128,
    pub predicted: f64,
    pub gap: f64,
}

impl DensityReport {
    pub fn empirical(&self) -> Ratio<i128> {
        Ratio::new(self.empirical_num, self.empirical_den)
    }

    pub fn empirical_f64(&self) -> f64 {
        self.empirical_num as f64 / self.empirical_den as f64
    }
}

/// Fraction of members with behavior ω at v₀, exactly.
pub fn empirical_density(fam: &Family, v0: &Place, omega: SplitType) -> Result<DensityReport> {
    if fam.is_empty() {
        return Err(Error::Domain("empty family".into()));
    }
    let hits = fam.members.par_iter().filter(|m| m.split(v0) == omega).count();
    let predicted = predicted_density(&fam.kind, fam.q, v0, omega)?;
    let empirical = Ratio::new(hits as i128, fam.len() as i128);
    let gap = (ratio_f64(&empirical) - ratio_f64(&predicted)).abs();
    Ok(DensityReport {
        place: v0.to_string(),
        place_degree: v0.degree(),
        behavior: omega,
        empirical_num: *empirical.numer(),
        empirical_den: *empirical.denom(),
        predicted: ratio_f64(&predicted),
        gap,
    })
}

pub fn ratio_f64(r: &Ratio<i128>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Leading-order coefficient c_{v₀,ω} for cyclic ℓ-extensions.
pub fn cyclic_coefficient(q: u32, ell: u32, deg_v0: usize, omega: SplitType) -> Result<Ratio<i128>> {
    let qd = pow_u128(q, deg_v0) as i128;
    let l = ell as i128;
    match omega {
        SplitType::Ramified => Ok(Ratio::new(l - 1, qd + l - 1)),
        SplitType::Split | SplitType::Inert => Ok(Ratio::new(qd, l * (qd + l - 1))),
        _ => Err(Error::Domain(format!("behavior {omega} does not occur in cyclic extensions"))),
    }
}

/// Main-term density of behavior ω at a place of the given degree.
///
/// Cyclic split and inert densities carry the limiting ratio of the secondary
/// polynomial factors (1 for split, ℓ−1 for inert), so the three densities
/// sum to 1.
pub fn predicted_density(kind: &FamilyKind, q: u32, v0: &Place, omega: SplitType) -> Result<Ratio<i128>> {
    let d = v0.degree();
    let qd = pow_u128(q, d) as i128;
    match kind {
        FamilyKind::Quadratic { .. } => match omega {
            SplitType::Ramified => Ok(Ratio::new(1, qd + 1)),
            SplitType::Split | SplitType::Inert => Ok(Ratio::new(qd, 2 * (qd + 1))),
            _ => Err(Error::Domain(format!("behavior {omega} does not occur in quadratic extensions"))),
        },
        FamilyKind::CyclicEll { ell, .. } => {
            if v0.is_infinite() {
                return Err(Error::Domain("cyclic densities are predicted at finite places only".into()));
            }
            let c = cyclic_coefficient(q, *ell, d, omega)?;
            Ok(if omega == SplitType::Inert { c * (*ell as i128 - 1) } else { c })
        }
        FamilyKind::CubicSF { .. } => cubic_density(q, d, omega),
    }
}

/// c_v for the five cubic splitting types.
pub fn cubic_density(q: u32, deg_v: usize, omega: SplitType) -> Result<Ratio<i128>> {
    let qd = pow_u128(q, deg_v) as i128;
    let den = 1 + qd + qd * qd;
    let q2 = qd * qd;
    match omega {
        SplitType::TotallySplit => Ok(Ratio::new(q2, 6 * den)),
        SplitType::PartiallySplit => Ok(Ratio::new(q2, 2 * den)),
        SplitType::Inert => Ok(Ratio::new(q2, 3 * den)),
        SplitType::PartiallyRamified => Ok(Ratio::new(qd, den)),
        SplitType::TotallyRamified => Ok(Ratio::new(1, den)),
        _ => Err(Error::Domain(format!("behavior {omega} does not occur in cubic fields"))),
    }
}

/// The behaviors a family can exhibit.
pub fn behaviors(kind: &FamilyKind) -> &'static [SplitType] {
    match kind {
        FamilyKind::Quadratic { .. } | FamilyKind::CyclicEll { .. } => {
            &[SplitType::Ramified, SplitType::Split, SplitType::Inert]
        }
        FamilyKind::CubicSF { .. } => &[
            SplitType::TotallySplit,
            SplitType::PartiallySplit,
            SplitType::Inert,
            SplitType::PartiallyRamified,
            SplitType::TotallyRamified,
        ],
    }
}
