//! Family averages of Frobenius traces, symmetry-group moments, predicted
//! moments, one-level densities and their 1/g deviation terms.

use std::f64::consts::PI;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::irreducible::mobius;
use crate::curves::{eigenangles, PowerSums, ZetaNumerator};
use crate::error::{Error, Result};
use crate::families::{ratio_f64, Family, FamilyKind, QuadVariant};

/// Zeta numerators of every member, in member order.
pub fn family_zetas(fam: &Family) -> Result<Vec<ZetaNumerator>> {
    fam.members.par_iter().map(ZetaNumerator::from_model).collect()
}

/// S₁..S_N of every member.
pub fn family_power_sums(zetas: &[ZetaNumerator], big_n: usize) -> Vec<PowerSums> {
    zetas.par_iter().map(|z| z.power_sums(big_n)).collect()
}

/// (1/#fam) Σ S_n, exactly. n = 0 returns 2g.
pub fn avg_power_sum(sums: &[PowerSums], n: usize) -> Result<Ratio<i128>> {
    let first = sums.first().ok_or_else(|| Error::Domain("empty family".into()))?;
    if n == 0 {
        return Ok(Ratio::from_integer(2 * first.genus as i128));
    }
    if sums.iter().any(|s| s.s.len() < n) {
        return Err(Error::Domain(format!("power sums were computed only up to {}", first.s.len())));
    }
    let total: i128 = sums.par_iter().map(|s| s.get(n)).sum();
    Ok(Ratio::new(total, sums.len() as i128))
}

fn qf(q: u32) -> f64 {
    q as f64
}

fn eta(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        0.0
    }
}

/// Number of monic irreducibles of degree d as a float, valid far beyond i128.
pub fn prime_count_f64(q: u32, d: usize) -> f64 {
    let mut s = 0.0;
    for e in 1..=d {
        if d % e == 0 {
            s += mobius(e as u64) as f64 * qf(q).powi((d / e) as i32);
        }
    }
    s / d as f64
}

/// Places of degree d: finite ones plus ∞ at degree 1 when requested.
fn place_count(q: u32, d: usize, with_infinity: bool) -> f64 {
    prime_count_f64(q, d) + if with_infinity && d == 1 { 1.0 } else { 0.0 }
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n % d == 0)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Group {
    USp,
    U,
}

/// E[Tr Uⁿ] over the symmetry group of 2g × 2g matrices, with a flag set on
/// the boundary n = 2g (USp only), where the value is −1.
pub fn rmt_moment(group: Group, n: usize, g: usize) -> (f64, bool) {
    match group {
        Group::U => (if n == 0 { 2.0 * g as f64 } else { 0.0 }, false),
        Group::USp => {
            if n == 0 {
                (2.0 * g as f64, false)
            } else if n < 2 * g {
                (-eta(n), false)
            } else if n == 2 * g {
                (-1.0, true)
            } else {
                (0.0, false)
            }
        }
    }
}

pub fn symmetry_group(kind: &FamilyKind) -> Group {
    match kind {
        FamilyKind::CyclicEll { .. } => Group::U,
        _ => Group::USp,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PredictOpts {
    /// Analysis exponent in the quadratic and cyclic error terms.
    pub eps: f64,
    /// Include ∞ in the cyclic place sums.
    pub cyclic_infinity: bool,
    /// (δ, B) for the cubic error term; without them no cubic budget is given.
    pub cubic_constants: Option<(f64, f64)>,
    /// Largest support radius accepted for cubic one-level predictions.
    pub cubic_support: f64,
}

impl Default for PredictOpts {
    fn default() -> Self {
        PredictOpts { eps: 0.1, cyclic_infinity: true, cubic_constants: None, cubic_support: 1.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    /// Predicted ⟨Tr Θⁿ⟩.
    pub value: f64,
    /// Size of the error term in the same units, when the constants are known.
    pub budget: Option<f64>,
    pub descriptor: &'static str,
}

/// Main-term prediction for ⟨Tr Θⁿ⟩ over a family of genus g.
///
/// Quadratic (full and even-model): ⟨−Sₙ⟩ = ηₙ q^{n/2} − ηₙ Σ_{deg v | n/2, deg v ≠ 1} deg v/(1+q^{deg v}),
/// finite places. Odd-model: q^{−n/2} ηₙ Σ_{deg v | n/2} deg v/(q^{deg v}+1) plus −ηₙ below 2g,
/// −1 − 1/(q−1) at 2g and nothing above, finite places. Cyclic: ⟨−Sₙ⟩ = λₙ Σ_{deg v | n/ℓ}
/// (ℓ−1) deg v/(1+(ℓ−1)q^{−deg v}), ∞ per `cyclic_infinity`. Cubic: the five-type average,
/// all places including ∞.
pub fn predicted_moment(kind: &FamilyKind, q: u32, n: usize, opts: &PredictOpts) -> Result<Prediction> {
    if n == 0 {
        return Err(Error::Domain("predicted moments start at n = 1".into()));
    }
    let g = kind.genus();
    let qn2 = qf(q).powf(n as f64 / 2.0);
    let eps = opts.eps;
    match kind {
        FamilyKind::Quadratic { variant: QuadVariant::OddModel, .. } => {
            let mut v = 0.0;
            if n % 2 == 0 {
                v += divisors(n / 2)
                    .map(|d| place_count(q, d, false) * d as f64 / (qf(q).powi(d as i32) + 1.0))
                    .sum::<f64>()
                    / qn2;
            }
            v += if n < 2 * g {
                -eta(n)
            } else if n == 2 * g {
                -1.0 - 1.0 / (qf(q) - 1.0)
            } else {
                0.0
            };
            Ok(Prediction {
                value: v,
                budget: Some(g as f64 * qf(q).powi(-(g as i32))),
                descriptor: "O(g q^-g)",
            })
        }
        FamilyKind::Quadratic { .. } => {
            let mut neg_s = 0.0;
            if n % 2 == 0 {
                neg_s = qn2
                    - divisors(n / 2)
                        .filter(|&d| d != 1)
                        .map(|d| place_count(q, d, false) * d as f64 / (1.0 + qf(q).powi(d as i32)))
                        .sum::<f64>();
            }
            let budget = qf(q).powf((eps - 1.0) * (g as f64 + 1.0) + n as f64 * (1.0 + eps)) / qn2;
            Ok(Prediction { value: -neg_s / qn2, budget: Some(budget), descriptor: "O(q^((eps-1)(g+1)+n(1+eps)))" })
        }
        FamilyKind::CyclicEll { ell, d } => {
            let l = *ell as usize;
            let lf = l as f64;
            let mut neg_s = 0.0;
            if n % l == 0 {
                neg_s = divisors(n / l)
                    .map(|e| {
                        place_count(q, e, opts.cyclic_infinity) * (lf - 1.0) * e as f64
                            / (1.0 + (lf - 1.0) * qf(q).powi(-(e as i32)))
                    })
                    .sum();
            }
            let df = *d as f64;
            let budget = (qf(q).powf(n as f64 / lf) * (n as f64).powf(lf - 2.0) / df
                + qf(q).powf((eps - 0.5) * df + n as f64 * (1.0 + eps)))
                / qn2;
            Ok(Prediction {
                value: -neg_s / qn2,
                budget: Some(budget),
                descriptor: "O(q^(n/l) n^(l-2)/d + q^((eps-1/2)d+n(1+eps)))",
            })
        }
        FamilyKind::CubicSF { .. } => {
            let den = |d: usize| 1.0 + qf(q).powi(d as i32) + qf(q).powi(2 * d as i32);
            let sum = |m: usize, w: &dyn Fn(usize) -> f64| -> f64 {
                divisors(m).map(|d| place_count(q, d, true) * d as f64 * w(d) / den(d)).sum()
            };
            let mut neg_s = sum(n, &|d| qf(q).powi(d as i32));
            if n % 2 == 0 {
                neg_s += qn2 + 1.0 - sum(n / 2, &|d| qf(q).powi(d as i32) + 1.0);
            }
            if n % 3 == 0 {
                neg_s += sum(n / 3, &|d| qf(q).powi(2 * d as i32));
            }
            let budget = opts
                .cubic_constants
                .map(|(delta, b)| qf(q).powf(-delta * g as f64 + (b + 1.0) * n as f64) / qn2);
            Ok(Prediction { value: -neg_s / qn2, budget, descriptor: "O(q^(-delta g + (B+1) n))" })
        }
    }
}

/// −(1 − 1/(1+q^{n/2})) for even n, 0 for odd n.
pub fn corollary_moment(q: u32, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    -(1.0 - 1.0 / (1.0 + qf(q).powf(n as f64 / 2.0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub q: u32,
    pub family: String,
    pub g: usize,
    pub n: usize,
    /// Average of Sₙ over the family.
    pub avg_s_num: i128,
    pub avg_s_den: i128,
    pub avg_trace: f64,
    pub predicted: f64,
    pub budget: Option<f64>,
    pub rmt: f64,
    pub boundary_flag: bool,
    pub estimate: bool,
}

impl MomentReport {
    pub fn avg_s(&self) -> Ratio<i128> {
        Ratio::new(self.avg_s_num, self.avg_s_den)
    }
}

pub fn moment_reports(fam: &Family, sums: &[PowerSums], ns: &[usize], opts: &PredictOpts) -> Result<Vec<MomentReport>> {
    let g = fam.genus();
    ns.iter()
        .map(|&n| {
            let avg = avg_power_sum(sums, n)?;
            let (rmt, boundary) = rmt_moment(symmetry_group(&fam.kind), n, g);
            let (predicted, budget) = if n == 0 {
                (2.0 * g as f64, Some(0.0))
            } else {
                let p = predicted_moment(&fam.kind, fam.q, n, opts)?;
                (p.value, p.budget)
            };
            Ok(MomentReport {
                q: fam.q,
                family: fam.kind.to_string(),
                g,
                n,
                avg_s_num: *avg.numer(),
                avg_s_den: *avg.denom(),
                avg_trace: if n == 0 { ratio_f64(&avg) } else { ratio_f64(&avg) / qf(fam.q).powf(n as f64 / 2.0) },
                predicted,
                budget,
                rmt,
                boundary_flag: boundary,
                estimate: fam.is_estimate(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Test functions and one-level densities

#[derive(Clone, Debug, Serialize)]
pub enum TestFunction {
    /// f̂(ξ) = max(0, 1 − |ξ|/α), f(x) = α sinc²(παx).
    Fejer { alpha: f64 },
    /// f̂ given at `values.len()` equally spaced points of [0, α], linearly
    /// interpolated and extended evenly; the last value must be 0.
    Tabulated { alpha: f64, values: Vec<f64> },
}

impl TestFunction {
    pub fn fejer(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Support(format!("support radius {alpha} must be positive")));
        }
        Ok(TestFunction::Fejer { alpha })
    }

    pub fn tabulated(alpha: f64, values: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Support(format!("support radius {alpha} must be positive")));
        }
        if values.len() < 2 || values.last() != Some(&0.0) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("tabulated transform needs ≥ 2 finite values ending in 0".into()));
        }
        Ok(TestFunction::Tabulated { alpha, values })
    }

    pub fn alpha(&self) -> f64 {
        match self {
            TestFunction::Fejer { alpha } | TestFunction::Tabulated { alpha, .. } => *alpha,
        }
    }

    pub fn hat(&self, xi: f64) -> f64 {
        let x = xi.abs();
        match self {
            TestFunction::Fejer { alpha } => (1.0 - x / alpha).max(0.0),
            TestFunction::Tabulated { alpha, values } => {
                if x >= *alpha {
                    return 0.0;
                }
                let h = alpha / (values.len() - 1) as f64;
                let i = ((x / h) as usize).min(values.len() - 2);
                let t = x / h - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    /// f(x) = ∫ f̂(ξ) e^{2πixξ} dξ, exact for the piecewise-linear f̂.
    pub fn f(&self, x: f64) -> f64 {
        match self {
            TestFunction::Fejer { alpha } => {
                let y = PI * alpha * x;
                if y.abs() < 1e-8 {
                    *alpha
                } else {
                    alpha * (y.sin() / y).powi(2)
                }
            }
            TestFunction::Tabulated { alpha, values } => {
                let h = alpha / (values.len() - 1) as f64;
                let k = 2.0 * PI * x;
                let mut total = 0.0;
                for i in 0..values.len() - 1 {
                    let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
                    let s = (values[i + 1] - values[i]) / h;
                    let p = values[i] - s * a;
                    total += if k.abs() < 1e-12 {
                        p * (b - a) + s * (b * b - a * a) / 2.0
                    } else {
                        let prim = |t: f64| (p + s * t) * (k * t).sin() / k + s * (k * t).cos() / (k * k);
                        prim(b) - prim(a)
                    };
                }
                2.0 * total
            }
        }
    }

    /// −f̂′(0⁺); governs the non-oscillating 1/x² decay of f.
    fn kink(&self) -> f64 {
        match self {
            TestFunction::Fejer { alpha } => 1.0 / alpha,
            TestFunction::Tabulated { alpha, values } => {
                (values[0] - values[1]) * (values.len() - 1) as f64 / alpha
            }
        }
    }
}

/// W_f = f̂(0) + (1/g) Σ_{n=1}^{⌊2αg⌋} f̂(n/2g) Sₙ q^{−n/2} from exact power sums.
pub fn one_level_density(ps: &PowerSums, f: &TestFunction) -> Result<f64> {
    let g = ps.genus;
    if g == 0 {
        return Err(Error::Domain("one-level density needs positive genus".into()));
    }
    let top = (2.0 * f.alpha() * g as f64).floor() as usize;
    if ps.s.len() < top {
        return Err(Error::Domain(format!("need S_n up to n = {top}, have {}", ps.s.len())));
    }
    let gf = g as f64;
    let sum: f64 = (1..=top).map(|n| f.hat(n as f64 / (2.0 * gf)) * ps.trace(n)).sum();
    Ok(f.hat(0.0) + sum / gf)
}

/// Number of power sums the Fourier route of [`one_level_density`] consumes.
pub fn old_terms(f: &TestFunction, g: usize) -> usize {
    (2.0 * f.alpha() * g as f64).floor() as usize
}

/// W_f = Σ_j Σ_k f(2g(θ_j/2π − k)) from floating eigenangles. The k-sum is cut
/// at |k| ≤ `cutoff` and the remainder is replaced by the mean 1/x² decay of f.
pub fn one_level_density_direct(p: &ZetaNumerator, f: &TestFunction, cutoff: usize) -> Result<f64> {
    let g = p.genus;
    if g == 0 {
        return Err(Error::Domain("one-level density needs positive genus".into()));
    }
    let two_g = 2.0 * g as f64;
    let c = f.kink() / (2.0 * PI * PI);
    let k_max = cutoff as f64;
    let trigamma_tail = |z: f64| 1.0 / z + 1.0 / (2.0 * z * z) + 1.0 / (6.0 * z * z * z);
    let total = eigenangles(p)
        .into_iter()
        .map(|theta| {
            let phi = theta / (2.0 * PI);
            let near: f64 = (-(cutoff as i64)..=cutoff as i64).map(|k| f.f(two_g * (phi - k as f64))).sum();
            // Σ_{k > K} [1/(k−φ)² + 1/(k+φ)²] ≈ ψ₁(K+1−φ) + ψ₁(K+1+φ)
            let far = c / (two_g * two_g) * (trigamma_tail(k_max + 1.0 - phi) + trigamma_tail(k_max + 1.0 + phi));
            near + far
        })
        .sum();
    Ok(total)
}

/// Family average of W_f, computed from the exact average power sums.
pub fn family_one_level_density(sums: &[PowerSums], f: &TestFunction) -> Result<f64> {
    let first = sums.first().ok_or_else(|| Error::Domain("empty family".into()))?;
    let g = first.genus;
    if g == 0 {
        return Err(Error::Domain("one-level density needs positive genus".into()));
    }
    let gf = g as f64;
    let q = qf(first.q);
    let mut w = f.hat(0.0);
    for n in 1..=old_terms(f, g) {
        let avg = ratio_f64(&avg_power_sum(sums, n)?);
        w += f.hat(n as f64 / (2.0 * gf)) * avg * q.powf(-(n as f64) / 2.0) / gf;
    }
    Ok(w)
}

/// ∫_{USp(2g)} W_f = f̂(0) − (1/g) Σ_{m=1}^{⌊αg⌋} f̂(m/g).
pub fn usp_integral(f: &TestFunction, g: usize) -> f64 {
    let gf = g as f64;
    let top = (f.alpha() * gf).floor() as usize;
    f.hat(0.0) - (1..=top).map(|m| f.hat(m as f64 / gf)).sum::<f64>() / gf
}

/// ∫_{U(2g)} W_f = f̂(0).
pub fn u_integral(f: &TestFunction) -> f64 {
    f.hat(0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct OldPrediction {
    pub group: Group,
    pub group_integral: f64,
    /// The 1/g correction, already divided by g.
    pub deviation: f64,
    pub total: f64,
}

/// Symmetry-group integral plus the family's 1/g deviation.
///
/// Quadratic (full, even-model): +f̂(0)/g Σ_{deg v ≠ 1} deg v/(q^{2 deg v}−1), finite places.
/// Odd-model: dev(f)/g with dev(f) = f̂(0) Σ_v deg v/(q^{2 deg v}−1) − f̂(1)/(q−1), finite places.
/// Cyclic: −f̂(0)(ℓ−1)/g Σ_v deg v/((1+(ℓ−1)q^{−deg v})(q^{ℓ deg v/2}−1)), all places.
/// Cubic: −f̂(0)κ/g, all places.
pub fn predicted_old(kind: &FamilyKind, q: u32, f: &TestFunction, opts: &PredictOpts) -> Result<OldPrediction> {
    let g = kind.genus();
    if g == 0 {
        return Err(Error::Domain("one-level density needs positive genus".into()));
    }
    let alpha = f.alpha();
    let (limit, what) = match kind {
        FamilyKind::Quadratic { .. } => (1.0, "quadratic families need support radius < 1".to_string()),
        FamilyKind::CyclicEll { ell, .. } => {
            (1.0 / (*ell as f64 - 1.0), format!("cyclic degree-{ell} families need support radius < 1/{}", ell - 1))
        }
        FamilyKind::CubicSF { .. } => {
            (opts.cubic_support, format!("cubic support radius is configured below {}", opts.cubic_support))
        }
    };
    if alpha >= limit {
        return Err(Error::Support(format!("alpha = {alpha}: {what}")));
    }
    let gf = g as f64;
    let h0 = f.hat(0.0);
    let sums = kappa_and_sums(q, KAPPA_TOL)?;
    let (group, integral, deviation) = match kind {
        FamilyKind::Quadratic { variant: QuadVariant::OddModel, .. } => {
            let dev = h0 * sums.quadratic_all - f.hat(1.0) / (qf(q) - 1.0);
            (Group::USp, usp_integral(f, g), dev / gf)
        }
        FamilyKind::Quadratic { .. } => (Group::USp, usp_integral(f, g), h0 * sums.quadratic / gf),
        FamilyKind::CyclicEll { ell, .. } => {
            let s = cyclic_sum(q, *ell, KAPPA_TOL)?;
            (Group::U, u_integral(f), -h0 * (*ell as f64 - 1.0) * s.value / gf)
        }
        FamilyKind::CubicSF { .. } => (Group::USp, usp_integral(f, g), -h0 * sums.kappa / gf),
    };
    Ok(OldPrediction { group, group_integral: integral, deviation, total: integral + deviation })
}

// ---------------------------------------------------------------------------
// Place sums

pub const KAPPA_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TruncatedSum {
    pub value: f64,
    /// Truncation degree D.
    pub degree: usize,
    /// Bound on the omitted degrees > D.
    pub tail_bound: f64,
}

/// Σ_{d ≥ start} places(d)·w(d), cut where a geometric bound C·r^d on the
/// per-degree term has tail below tol.
fn truncated_place_sum(
    q: u32,
    with_infinity: bool,
    start: usize,
    w: impl Fn(usize) -> f64,
    c: f64,
    r: f64,
    tol: f64,
) -> Result<TruncatedSum> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    debug_assert!(r < 1.0);
    let tail = |d: usize| c * r.powi(d as i32 + 1) / (1.0 - r);
    let mut degree = start.max(1);
    while tail(degree) >= tol {
        degree += 1;
    }
    Ok(truncated_at(q, with_infinity, start, &w, degree, tail(degree)))
}

fn truncated_at(q: u32, with_infinity: bool, start: usize, w: &impl Fn(usize) -> f64, degree: usize, tail: f64) -> TruncatedSum {
    // add small terms first
    let value = (start..=degree).rev().map(|d| place_count(q, d, with_infinity) * w(d)).sum();
    TruncatedSum { value, degree, tail_bound: tail }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KappaReport {
    pub q: u32,
    pub kappa: f64,
    /// The three place sums in κ.
    pub kappa_sums: [TruncatedSum; 3],
    /// Σ_{deg v ≠ 1} deg v/(q^{2 deg v}−1), finite places.
    pub quadratic: f64,
    /// Σ_v deg v/(q^{2 deg v}−1), finite places.
    pub quadratic_all: f64,
    pub degree: usize,
    pub tail_bound: f64,
}

/// κ = 1/(q−1) − Σ_v (1+q^d)d/((q^d−1)D_v) + Σ_v q^d d/((q^{d/2}−1)D_v) + Σ_v q^{2d} d/((q^{3d/2}−1)D_v)
/// with D_v = 1+q^d+q^{2d}, d = deg v, over all places; plus the quadratic deviation sums.
pub fn kappa_and_sums(q: u32, tol: f64) -> Result<KappaReport> {
    kappa_with(q, tol, None)
}

/// Same as [`kappa_and_sums`] with every sum forced to the given truncation degree.
pub fn kappa_at_degree(q: u32, degree: usize) -> Result<KappaReport> {
    kappa_with(q, 1.0, Some(degree))
}

fn kappa_with(q: u32, tol: f64, forced: Option<usize>) -> Result<KappaReport> {
    crate::algebra::field::check_field(q)?;
    let x = qf(q);
    let p = move |e: f64| x.powf(e);
    let den = move |d: usize| 1.0 + p(d as f64) + p(2.0 * d as f64);
    let df = |d: usize| d as f64;
    // per-degree terms: places(d)·d ≤ q^d + 1 ≤ 2q^d, weights ≤ 2q^{−2d} and ≤ 2.5q^{−3d/2}
    let rate = x.powf(-0.5);
    let run = |start: usize, w: &dyn Fn(usize) -> f64, inf: bool, c: f64, r: f64| -> Result<TruncatedSum> {
        match forced {
            Some(deg) => Ok(truncated_at(q, inf, start, &w, deg, c * r.powi(deg as i32 + 1) / (1.0 - r))),
            None => truncated_place_sum(q, inf, start, w, c, r, tol),
        }
    };
    let s1 = run(1, &|d| (1.0 + p(df(d))) * df(d) / ((p(df(d)) - 1.0) * den(d)), true, 4.0, 1.0 / x)?;
    let s2 = run(1, &|d| p(df(d)) * df(d) / ((p(df(d) / 2.0) - 1.0) * den(d)), true, 5.0, rate)?;
    let s3 = run(1, &|d| p(2.0 * df(d)) * df(d) / ((p(1.5 * df(d)) - 1.0) * den(d)), true, 5.0, rate)?;
    let quad = run(2, &|d| df(d) / (p(2.0 * df(d)) - 1.0), false, 2.0, 1.0 / x)?;
    let quad_all = run(1, &|d| df(d) / (p(2.0 * df(d)) - 1.0), false, 2.0, 1.0 / x)?;
    let kappa = 1.0 / (x - 1.0) - s1.value + s2.value + s3.value;
    let degree = [s1, s2, s3, quad, quad_all].iter().map(|s| s.degree).max().unwrap_or(0);
    let tail_bound = s1.tail_bound + s2.tail_bound + s3.tail_bound;
    Ok(KappaReport {
        q,
        kappa,
        kappa_sums: [s1, s2, s3],
        quadratic: quad.value,
        quadratic_all: quad_all.value,
        degree,
        tail_bound,
    })
}

/// Σ_v deg v/((1+(ℓ−1)q^{−deg v})(q^{ℓ deg v/2}−1)) over all places.
pub fn cyclic_sum(q: u32, ell: u32, tol: f64) -> Result<TruncatedSum> {
    cyclic_sum_with(q, ell, tol, None)
}

pub fn cyclic_sum_at_degree(q: u32, ell: u32, degree: usize) -> Result<TruncatedSum> {
    cyclic_sum_with(q, ell, 1.0, Some(degree))
}

fn cyclic_sum_with(q: u32, ell: u32, tol: f64, forced: Option<usize>) -> Result<TruncatedSum> {
    if ell < 3 {
        return Err(Error::Domain("the cyclic deviation sum needs ell ≥ 3".into()));
    }
    let x = qf(q);
    let l = ell as f64;
    let w = move |d: usize| {
        let df = d as f64;
        df / ((1.0 + (l - 1.0) * x.powf(-df)) * (x.powf(l * df / 2.0) - 1.0))
    };
    // places(d)·w(d) ≤ 2q^d · 2q^{−ℓd/2}
    let r = x.powf(1.0 - l / 2.0);
    match forced {
        Some(deg) => Ok(truncated_at(q, true, 1, &w, deg, 4.0 * r.powi(deg as i32 + 1) / (1.0 - r))),
        None => truncated_place_sum(q, true, 1, w, 4.0, r, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CoverModel;
    use crate::families::{enum_quadratic, DEFAULT_BUDGET};

    #[test]
    fn rmt_values() {
        assert_eq!(rmt_moment(Group::USp, 2, 3), (-1.0, false));
        assert_eq!(rmt_moment(Group::USp, 3, 3), (0.0, false));
        assert_eq!(rmt_moment(Group::USp, 0, 3), (6.0, false));
        assert_eq!(rmt_moment(Group::USp, 6, 3), (-1.0, true));
        assert_eq!(rmt_moment(Group::USp, 8, 3), (0.0, false));
        assert_eq!(rmt_moment(Group::U, 5, 3), (0.0, false));
        for g in 2..8 {
            for n in 1..2 * g {
                assert_eq!(rmt_moment(Group::USp, n, g).0, -eta(n));
            }
        }
    }

    #[test]
    fn su2_second_moment_by_quadrature() {
        // Tr U² = 4cos²θ − 2 against the Sato–Tate measure (2/π) sin²θ dθ
        let steps = 20000;
        let h = PI / steps as f64;
        let m: f64 = (0..steps)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                (4.0 * t.cos().powi(2) - 2.0) * 2.0 / PI * t.sin().powi(2) * h
            })
            .sum();
        assert!((m - rmt_moment(Group::USp, 2, 1).0).abs() < 1e-8);
    }

    #[test]
    fn fejer_transform_pair() {
        let f = TestFunction::fejer(0.4).unwrap();
        // ∫ f = f̂(0) by a long trapezoid sum
        let h = 0.01;
        let integral: f64 = (-200_000..=200_000).map(|i| f.f(i as f64 * h) * h).sum();
        // mean decay 1/(2π²αx²) beyond |x| = 2000
        let tail = 1.0 / (PI * PI * 0.4 * 2000.0);
        assert!((integral + tail - 1.0).abs() < 1e-6);
        let tab = TestFunction::tabulated(0.4, (0..=40).map(|i| 1.0 - i as f64 / 40.0).collect()).unwrap();
        for x in [0.0, 0.3, 1.7, 12.5] {
            assert!((tab.f(x) - f.f(x)).abs() < 1e-12, "x={x}");
            assert!((tab.hat(x / 10.0) - f.hat(x / 10.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_old() {
        let f = TestFunction::fejer(0.4).unwrap();
        let ps = PowerSums { q: 3, genus: 3, s: vec![0; 6] };
        assert_eq!(one_level_density(&ps, &f).unwrap(), 1.0);
    }

    #[test]
    fn two_routes_agree() {
        let fam = enum_quadratic(3, 2, QuadVariant::Full, DEFAULT_BUDGET).unwrap();
        let f = TestFunction::fejer(0.7).unwrap();
        for m in fam.members.iter().step_by(97) {
            let z = ZetaNumerator::from_model(m).unwrap();
            let ps = z.power_sums(8);
            let a = one_level_density(&ps, &f).unwrap();
            let b = one_level_density_direct(&z, &f, 3000).unwrap();
            assert!((a - b).abs() < 1e-6, "{m}: {a} vs {b}");
        }
    }

    #[test]
    fn odd_averages_vanish() {
        let fam = enum_quadratic(3, 2, QuadVariant::Full, DEFAULT_BUDGET).unwrap();
        let sums = family_power_sums(&family_zetas(&fam).unwrap(), 7);
        for n in [1, 3, 5, 7] {
            assert_eq!(avg_power_sum(&sums, n).unwrap(), Ratio::from_integer(0));
        }
        assert_eq!(avg_power_sum(&sums, 0).unwrap(), Ratio::from_integer(4));
    }

    #[test]
    fn second_moment_small_family() {
        // brute force over the 144 members: mean of q² + 1 − #C(𝔽₉)
        let fam = enum_quadratic(3, 1, QuadVariant::Full, DEFAULT_BUDGET).unwrap();
        let direct: i128 = fam
            .members
            .iter()
            .map(|m: &CoverModel| 10 - crate::curves::count_points(m, 2).unwrap() as i128)
            .sum();
        let sums = family_power_sums(&family_zetas(&fam).unwrap(), 2);
        assert_eq!(avg_power_sum(&sums, 2).unwrap(), Ratio::new(direct, 144));
        let p = predicted_moment(&fam.kind, 3, 2, &PredictOpts::default()).unwrap();
        let emp = ratio_f64(&avg_power_sum(&sums, 2).unwrap()) / 3.0;
        assert!((emp - p.value).abs() <= p.budget.unwrap(), "{emp} vs {}", p.value);
    }

    #[test]
    fn cyclic_main_term_vanishes_off_multiples() {
        let kind = FamilyKind::CyclicEll { ell: 3, d: 4 };
        for n in [1, 2, 4, 5] {
            assert_eq!(predicted_moment(&kind, 7, n, &PredictOpts::default()).unwrap().value, 0.0);
        }
        assert!(predicted_moment(&kind, 7, 3, &PredictOpts::default()).unwrap().value < 0.0);
    }

    #[test]
    fn support_guards() {
        let quad = FamilyKind::Quadratic { g: 3, variant: QuadVariant::Full };
        let ell = FamilyKind::CyclicEll { ell: 3, d: 4 };
        let o = PredictOpts::default();
        assert!(matches!(predicted_old(&quad, 3, &TestFunction::fejer(1.0).unwrap(), &o), Err(Error::Support(_))));
        assert!(predicted_old(&quad, 3, &TestFunction::fejer(0.999).unwrap(), &o).is_ok());
        assert!(matches!(predicted_old(&ell, 7, &TestFunction::fejer(0.5).unwrap(), &o), Err(Error::Support(_))));
        assert!(predicted_old(&ell, 7, &TestFunction::fejer(0.49).unwrap(), &o).is_ok());
    }

    #[test]
    fn u_baseline_and_deviation_signs() {
        let f = TestFunction::fejer(0.3).unwrap();
        assert_eq!(u_integral(&f), 1.0);
        let p = predicted_old(&FamilyKind::CyclicEll { ell: 3, d: 4 }, 7, &f, &PredictOpts::default()).unwrap();
        assert!(p.deviation < 0.0);
        let p = predicted_old(&FamilyKind::Quadratic { g: 3, variant: QuadVariant::Full }, 3, &f, &PredictOpts::default())
            .unwrap();
        assert!(p.deviation > 0.0);
    }

    #[test]
    fn quadratic_sum_stabilizes_by_degree_30() {
        let a = kappa_at_degree(3, 30).unwrap().quadratic;
        let b = kappa_at_degree(3, 60).unwrap().quadratic;
        assert!((a - b).abs() < 1e-12);
        // degrees 2 and 3 alone: 3·2/80 + 8·3/728
        assert!(a > 6.0 / 80.0 + 24.0 / 728.0 && a < 0.13, "{a}");
    }

    #[test]
    fn prime_count_float_matches_exact() {
        for d in 1..=20 {
            let exact = crate::algebra::prime_count(3, d as u64) as f64;
            assert!((prime_count_f64(3, d) - exact).abs() <= 1e-6 * exact);
        }
    }
}
