//! An upper bound for log|F| on the unit disk, the character power-sum identity, the
//! factorization of a Kummer cover's zeta numerator into character
//! L-polynomials, and the explicit Lindelöf check on the critical line.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::irreducible::{divisors, irreducibles};
use crate::algebra::{CycInt, Poly};
use crate::curves::{CoverModel, KummerCover, ZetaNumerator};
use crate::error::{Error, Result};
use crate::numeric::horner;
use crate::places_chars::{primitive_l_poly, DirichletChar, LPoly};

// ---------------------------------------------------------------------------
// log|F| on the unit disk from root magnitudes

#[derive(Clone, Debug, Serialize)]
pub struct CVInput {
    /// Number of roots M.
    pub m: usize,
    /// |Σ_m α_mⁿ| for n = 1..=N_max.
    pub magnitudes: Vec<f64>,
}

impl CVInput {
    pub fn new(m: usize, magnitudes: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("need at least one root".into()));
        }
        if magnitudes.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::Domain("power-sum magnitudes must be nonnegative".into()));
        }
        Ok(CVInput { m, magnitudes })
    }

    pub fn from_roots(roots: &[Complex64], n_max: usize) -> Result<Self> {
        let mags = (1..=n_max)
            .map(|n| roots.iter().map(|a| a.powu(n as u32)).sum::<Complex64>().norm())
            .collect();
        CVInput::new(roots.len(), mags)
    }
}

/// log 2 · M/(N+1) + Σ_{n=1}^{N} |Σ αⁿ|/n.
pub fn cv_bound(input: &CVInput, n: usize) -> Result<f64> {
    if n == 0 || n > input.magnitudes.len() {
        return Err(Error::Domain(format!("N = {n} outside 1..={}", input.magnitudes.len())));
    }
    let tail: f64 = input.magnitudes[..n].iter().enumerate().map(|(i, x)| x / (i + 1) as f64).sum();
    Ok(LN_2 * input.m as f64 / (n as f64 + 1.0) + tail)
}

/// max over `grid` equally spaced points of |z| = 1 of log|Π (z − α)|. By the
/// maximum principle this is the sup over the closed disk, up to grid error.
pub fn boundary_sup_log(roots: &[Complex64], grid: usize) -> f64 {
    (0..grid)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / grid as f64);
            roots.iter().map(|a| (z - a).norm().ln()).sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct CvSuiteReport {
    pub polynomials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    /// min over all checks of bound − sup.
    pub min_margin: f64,
}

/// Random polynomials of degree 1..=max_degree with roots in the closed unit
/// disk (a fifth of them on the circle), checked for every N ≤ n_max.
pub fn cv_property_suite(count: usize, max_degree: usize, n_max: usize, grid: usize, seed: u64) -> Result<CvSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<Vec<Complex64>> = (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=max_degree);
            (0..m)
                .map(|_| {
                    let r = if rng.gen_bool(0.2) { 1.0 } else { rng.gen::<f64>().sqrt() };
                    Complex64::from_polar(r, rng.gen::<f64>() * 2.0 * PI)
                })
                .collect()
        })
        .collect();
    let results: Vec<(f64, Vec<String>)> = polys
        .par_iter()
        .enumerate()
        .map(|(i, roots)| -> Result<(f64, Vec<String>)> {
            let sup = boundary_sup_log(roots, grid);
            let input = CVInput::from_roots(roots, n_max)?;
            let mut margin = f64::INFINITY;
            let mut bad = Vec::new();
            for n in 1..=n_max {
                let b = cv_bound(&input, n)?;
                margin = margin.min(b - sup);
                if sup > b {
                    bad.push(format!("polynomial {i} (M = {}), N = {n}: sup {sup} > bound {b}", roots.len()));
                }
            }
            Ok((margin, bad))
        })
        .collect::<Result<_>>()?;
    let min_margin = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    Ok(CvSuiteReport {
        polynomials: count,
        checks: count * n_max,
        failures: results.into_iter().flat_map(|r| r.1).collect(),
        min_margin,
    })
}

// ---------------------------------------------------------------------------
// Character power sums

/// pₙ = Σ γⁿ over the inverse roots of Σ c_m u^m = Π (1 − γu), by Newton.
pub fn l_power_sums(l: &LPoly, big_n: usize) -> Vec<CycInt> {
    let ell = l.ell;
    let c = |k: usize| l.coeffs.get(k).cloned().unwrap_or_else(|| CycInt::zero(ell));
    let mut p: Vec<CycInt> = Vec::with_capacity(big_n);
    for n in 1..=big_n {
        let mut v = c(n).scale(-(n as i64));
        for k in 1..n {
            v = v.sub(&c(k).mul(&p[n - k - 1]));
        }
        p.push(v);
    }
    p
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPowerSum {
    pub n: usize,
    /// Σ_{deg v | n} deg v · χ(v)^{n/deg v} over all places, as ℤ[ζ_ℓ] coordinates.
    pub place_sum: Vec<i64>,
    /// −pₙ of the primitive L-polynomial.
    pub l_side: Vec<i64>,
    pub equal: bool,
    /// |Σ_j e^{inθ_j}|.
    pub magnitude: f64,
    /// magnitude ≤ 1 + q^{n/2}.
    pub within_bound: bool,
}

/// Σ_{deg v | n} deg v · χ(v)^{n/deg v} over the finite places plus χ(∞)ⁿ.
pub fn place_power_sum(chi: &DirichletChar, n: usize) -> Result<CycInt> {
    let ell = chi.ell();
    let q = chi.q();
    let mut acc = chi.value_at_infinity();
    for d in divisors(n as u64) {
        let d = d as usize;
        let places = irreducibles(q, d)?;
        let per_degree: Vec<i64> = places
            .par_iter()
            .filter_map(|v| chi.exponent(v))
            .fold(
                || vec![0i64; ell as usize],
                |mut c, e| {
                    c[(e as usize * (n / d)) % ell as usize] += 1;
                    c
                },
            )
            .reduce(|| vec![0i64; ell as usize], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        for (e, count) in per_degree.into_iter().enumerate() {
            acc = acc.add(&CycInt::root(ell, e as i64).scale(count * d as i64));
        }
    }
    Ok(acc)
}

/// Checks the place sum against −pₙ of the primitive L-polynomial, exactly in ℤ[ζ_ℓ].
pub fn char_power_sum(chi: &DirichletChar, l: &LPoly, n: usize) -> Result<CharPowerSum> {
    if n == 0 {
        return Err(Error::Domain("power sums start at n = 1".into()));
    }
    let place = place_power_sum(chi, n)?;
    let p = l_power_sums(l, n).pop().expect("n ≥ 1");
    let l_side = p.scale(-1);
    let q = chi.q() as f64;
    let magnitude = p.embed().norm() / q.powf(n as f64 / 2.0);
    let equal = place == l_side;
    if !equal {
        return Err(Error::Identity(format!(
            "power sum n = {n} for modulus {}: places give {:?}, L-polynomial gives {:?}",
            chi.modulus(),
            place.coords(),
            l_side.coords()
        )));
    }
    Ok(CharPowerSum {
        n,
        place_sum: place.coords().to_vec(),
        l_side: l_side.coords().to_vec(),
        equal,
        magnitude,
        within_bound: magnitude <= 1.0 + q.powf(n as f64 / 2.0) + 1e-9,
    })
}

// ---------------------------------------------------------------------------
// Zeta factorization

#[derive(Clone, Debug, Serialize)]
pub struct ZetaFactorization {
    pub v0: String,
    pub ell: u32,
    pub genus: usize,
    /// Point-count zeta numerator of Y^ℓ = v₀.
    pub curve: Vec<i128>,
    /// Π_k of the primitive L-polynomials of χ^k, coordinates in ℤ[ζ_ℓ].
    pub product: Vec<Vec<i64>>,
    pub exact: bool,
    /// max |curve − product| after embedding ζ_ℓ ↦ e^{2πi/ℓ}.
    pub max_embedded_diff: f64,
}

fn cyc_poly_mul(a: &[CycInt], b: &[CycInt], ell: u32) -> Vec<CycInt> {
    let mut out = vec![CycInt::zero(ell); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// The cover whose zeta numerator factors through χ_{v₀,ℓ}: Y^ℓ = ε v₀ with
/// ε = (−1)^{deg v₀ (q−1)/ℓ}. By ℓ-th power reciprocity (f/v₀)_ℓ = (εv₀/f)_ℓ
/// for monic f, so the places split in Y^ℓ = εv₀ exactly where χ is trivial.
pub fn character_cover(v0: &Poly, ell: u32) -> Result<KummerCover> {
    let q = v0.modulus();
    let flip = (v0.deg() as u64 * ((q - 1) / ell) as u64) % 2 == 1;
    KummerCover::new(ell, if flip { v0.neg() } else { v0.clone() })
}

/// The zeta numerator of the character cover against Π_{k=1}^{ℓ−1} L*(u, χ^k).
pub fn zeta_factorization(v0: &Poly, ell: u32) -> Result<ZetaFactorization> {
    let cover = character_cover(v0, ell)?;
    let z = ZetaNumerator::from_model(&CoverModel::from(cover.clone()))?;
    let mut product = vec![CycInt::one(ell)];
    for k in 1..ell {
        let l = primitive_l_poly(&DirichletChar::new(v0.clone(), ell, k)?)?;
        product = cyc_poly_mul(&product, &l.coeffs, ell);
    }
    let len = product.len().max(z.coeffs.len());
    let coeff = |k: usize| product.get(k).cloned().unwrap_or_else(|| CycInt::zero(ell));
    let mut exact = true;
    let mut max_diff = 0.0f64;
    for k in 0..len {
        let c = z.coeffs.get(k).copied().unwrap_or(0);
        let p = coeff(k);
        exact &= p.as_int().map(i128::from) == Some(c);
        max_diff = max_diff.max((p.embed() - Complex64::new(c as f64, 0.0)).norm());
    }
    Ok(ZetaFactorization {
        v0: v0.to_string(),
        ell,
        genus: cover.genus(),
        curve: z.coeffs,
        product: product.iter().map(|c| c.coords().to_vec()).collect(),
        exact,
        max_embedded_diff: max_diff,
    })
}

// ---------------------------------------------------------------------------
// Lindelöf

/// ⌊(2 − log_q log_q d / log_q d) · log_q d⌋, at least 1.
pub fn lindelof_n_max(q: u32, d: usize) -> usize {
    let lq = |x: f64| x.ln() / (q as f64).ln();
    let l = lq(d as f64);
    let n = ((2.0 - lq(l) / l) * l).floor();
    if n.is_finite() && n >= 1.0 {
        n as usize
    } else {
        1
    }
}

/// log 2 · (d−2)/(N+1) + Σ_{n≤N} (1+q^{n/2})/n minimized over 1 ≤ N ≤ N_max; returns (bound, N).
pub fn lindelof_bound(q: u32, d: usize) -> (f64, usize) {
    let qf = q as f64;
    let mut partial = 0.0;
    let mut best = (f64::INFINITY, 1);
    for n in 1..=lindelof_n_max(q, d) {
        partial += (1.0 + qf.powf(n as f64 / 2.0)) / n as f64;
        let b = LN_2 * (d as f64 - 2.0) / (n as f64 + 1.0) + partial;
        if b < best.0 {
            best = (b, n);
        }
    }
    best
}

/// bound(d) / (d / log_q d).
pub fn lindelof_ratio(q: u32, d: usize) -> f64 {
    let (b, _) = lindelof_bound(q, d);
    b / (d as f64 / ((d as f64).ln() / (q as f64).ln()))
}

#[derive(Clone, Debug, Serialize)]
pub struct LindelofReport {
    pub q: u32,
    pub ell: u32,
    pub v0: String,
    /// Conductor degree of the cover Y^ℓ = v₀.
    pub d: usize,
    pub l_degree: usize,
    pub sup_log: f64,
    pub t_at_sup: f64,
    pub bound: f64,
    pub n_opt: usize,
    pub ratio: f64,
    pub ok: bool,
    /// Sup on a 4× finer grid, when requested.
    pub refined_sup: Option<f64>,
    /// log|L(2+it)| stays below log(1 + Σ_{m≥1} |c_m| q^{−2m}) on the grid.
    pub sigma2_ok: bool,
}

fn log_abs_l(c: &[Complex64], lnq: f64, sigma: f64, t: f64) -> f64 {
    let u = Complex64::from_polar((-sigma * lnq).exp(), -t * lnq);
    horner(c, u).norm().ln()
}

/// (sup, argmax) of log|L(σ+it)| over one period in t: grid plus golden-section
/// refinement around the five best grid maxima.
pub fn sup_on_line(l: &LPoly, sigma: f64, grid: usize) -> (f64, f64) {
    let period = 2.0 * PI / (l.q as f64).ln();
    let h = period / grid as f64;
    let coeffs = l.embedded();
    let lnq = (l.q as f64).ln();
    let vals: Vec<f64> = (0..grid).into_par_iter().map(|k| log_abs_l(&coeffs, lnq, sigma, k as f64 * h)).collect();
    let mut peaks: Vec<usize> = (0..grid)
        .filter(|&k| vals[k] >= vals[(k + grid - 1) % grid] && vals[k] >= vals[(k + 1) % grid])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(5);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in peaks {
        let (mut a, mut b) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let f = |t: f64| log_abs_l(&coeffs, lnq, sigma, t);
        let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = f(d);
            }
        }
        for (v, t) in [(vals[k], k as f64 * h), (fc, c), (fd, d)] {
            if v > best.0 {
                best = (v, t.rem_euclid(period));
            }
        }
    }
    best
}

/// Explicit Lindelöf check for χ with conductor degree ≥ 3.
pub fn lindelof_check(chi: &DirichletChar, grid: usize, refine: bool) -> Result<LindelofReport> {
    if grid < 64 {
        return Err(Error::Domain(format!("t-grid of {grid} points is below the minimum 64")));
    }
    let q = chi.q();
    let ell = chi.ell();
    let d = chi.modulus().deg() + usize::from(!chi.infinity_split());
    if d < 3 {
        return Err(Error::Domain(format!("conductor degree {d} < 3 leaves no admissible N")));
    }
    let l = primitive_l_poly(chi)?;
    if l.degree() != d - 2 {
        return Err(Error::Identity(format!(
            "primitive L-polynomial of {} has degree {} instead of {}",
            chi.modulus(),
            l.degree(),
            d - 2
        )));
    }
    let (sup_log, t_at_sup) = sup_on_line(&l, 0.5, grid);
    let (bound, n_opt) = lindelof_bound(q, d);
    let refined_sup = refine.then(|| sup_on_line(&l, 0.5, 4 * grid).0);
    let coarse: f64 = l.coeffs.iter().enumerate().skip(1).map(|(m, c)| c.embed().norm() * (q as f64).powi(-2 * m as i32)).sum();
    let sigma2_ok = sup_on_line(&l, 2.0, 256).0 <= (1.0 + coarse).ln() + 1e-12;
    let ratio = sup_log / (d as f64 / ((d as f64).ln() / (q as f64).ln()));
    Ok(LindelofReport {
        q,
        ell,
        v0: chi.modulus().to_string(),
        d,
        l_degree: l.degree(),
        sup_log,
        t_at_sup,
        bound,
        n_opt,
        ratio,
        ok: sup_log <= bound,
        refined_sup,
        sigma2_ok,
    })
}

/// Every irreducible v₀ with deg v₀ in the range, character χ_{v₀,ℓ}.
pub fn lindelof_sweep(q: u32, ell: u32, dmin: usize, dmax: usize, grid: usize, refine: bool) -> Result<Vec<LindelofReport>> {
    let mut out = Vec::new();
    for deg in dmin..=dmax {
        let places = irreducibles(q, deg)?;
        let reports: Vec<LindelofReport> = places
            .par_iter()
            .map(|v| lindelof_check(&DirichletChar::new(v.clone(), ell, 1)?, grid, refine))
            .collect::<Result<_>>()?;
        out.extend(reports);
    }
    Ok(out)
}
