//! Acceptance criteria. Each test writes one PASS/FAIL line straight to stderr
//! (bypassing the harness capture) and then asserts the criterion.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use frobstats::algebra::irreducible::{irreducibles, verify_pnt};
use frobstats::bounds::{cv_property_suite, lindelof_ratio, lindelof_sweep, zeta_factorization};
use frobstats::curves::{verify_explicit_formula_range, verify_rh, CoverModel, ZetaNumerator};
use frobstats::families::{
    empirical_density, enum_cubic, enum_cyclic, enum_quadratic, Family, QuadVariant, DEFAULT_BUDGET,
};
use frobstats::places_chars::{finite_places, InfinityMode, SplitType};
use frobstats::stats::{
    avg_power_sum, corollary_moment, cyclic_sum, cyclic_sum_at_degree, family_one_level_density,
    family_power_sums, family_zetas, kappa_and_sums, kappa_at_degree, predicted_old, usp_integral, PredictOpts,
    TestFunction,
};
use frobstats::curves::PowerSums;
use frobstats::families::ratio_f64;
use num_rational::Ratio;

// tolerances, pinned
const MOMENT_TOL: f64 = 0.05;
const RAMIFIED_TOL: f64 = 0.01;
const SPLIT_INERT_TOL: f64 = 0.02;
const CYCLIC_DENSITY_TOL: f64 = 0.05;
const EMBED_TOL: f64 = 1e-9;
const OLD_RATIO: (f64, f64) = (0.5, 2.0);
const FEJER_ALPHA: f64 = 0.4;
const KAPPA_TOL: f64 = 1e-13;
const DOUBLING_TOL: f64 = 1e-12;
const CV_POLYS: usize = 1000;
const CV_N: usize = 10;
const GRID: usize = 4096;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let line = format!("{} [{id:02}] {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

struct Data {
    fam: Family,
    zetas: Vec<ZetaNumerator>,
    sums: Vec<PowerSums>,
}

fn quadratic(g: usize) -> Arc<Data> {
    static CACHE: OnceLock<std::sync::Mutex<BTreeMap<usize, Arc<Data>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    guard
        .entry(g)
        .or_insert_with(|| {
            let fam = enum_quadratic(3, g, QuadVariant::Full, DEFAULT_BUDGET).unwrap();
            let zetas = family_zetas(&fam).unwrap();
            let sums = family_power_sums(&zetas, 8);
            Arc::new(Data { fam, zetas, sums })
        })
        .clone()
}

fn spread<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    if v.len() <= k {
        return v.to_vec();
    }
    (0..k).map(|i| v[i * v.len() / k].clone()).collect()
}

#[test]
fn c01_family_counts() {
    let start = Instant::now();
    let mut sizes = Vec::new();
    let mut ok = true;
    for g in 1..=3 {
        let n = quadratic(g).fam.len() as u128;
        let formula = 2 * (3u128.pow(2 * g as u32 + 2) - 3u128.pow(2 * g as u32));
        ok &= n == formula;
        sizes.push(n);
    }
    ok &= sizes == [144, 1296, 11664];
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    report(1, "quadratic family sizes", ok, &format!("sizes {sizes:?} in {:.1}s", elapsed.as_secs_f64()));
    assert!(ok);
}

#[test]
fn c02_explicit_formula() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut bad: Vec<String> = Vec::new();
    let mut run = |m: &CoverModel, max_n: usize| {
        match verify_explicit_formula_range(m, max_n, InfinityMode::IncludeWhenClassifiable) {
            Ok(checks) => {
                for c in checks {
                    checked += 1;
                    if !c.equal {
                        bad.push(format!("{m} n={}: {} vs {}", c.n, c.lhs, c.rhs));
                    }
                }
            }
            Err(e) => bad.push(format!("{m}: {e}")),
        }
    };
    for g in 1..=2 {
        for m in &quadratic(g).fam.members {
            run(m, 6);
        }
    }
    for d in [3, 4] {
        let fam = enum_cyclic(7, 3, d, DEFAULT_BUDGET).unwrap();
        for m in spread(&fam.members, 100) {
            run(&m, 6);
        }
    }
    let cubic = enum_cubic(5, 1, DEFAULT_BUDGET).unwrap();
    for m in spread(&cubic.members, 200) {
        run(&m, 6);
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(600);
    report(
        2,
        "explicit formula",
        ok,
        &format!("{checked} identities, {} failures, {:.1}s {:?}", bad.len(), elapsed.as_secs_f64(), bad.first()),
    );
    assert!(ok);
}

#[test]
fn c03_odd_moments_vanish() {
    let mut ok = true;
    let mut seen = 0;
    for g in 1..=3 {
        let data = quadratic(g);
        for n in [1, 3, 5, 7] {
            ok &= avg_power_sum(&data.sums, n).unwrap() == Ratio::from_integer(0);
            seen += 1;
        }
    }
    report(3, "odd moments vanish exactly", ok, &format!("{seen} averages, q=3, g=1..3, n odd ≤ 7"));
    assert!(ok);
}

#[test]
fn c04_even_moments() {
    let trace = |g: usize, n: usize| {
        let d = quadratic(g);
        ratio_f64(&avg_power_sum(&d.sums, n).unwrap()) / 3f64.powf(n as f64 / 2.0)
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [2, 4] {
        let target = corollary_moment(3, n);
        let (t2, t3) = (trace(2, n), trace(3, n));
        let (gap2, gap3) = ((t2 - target).abs(), (t3 - target).abs());
        ok &= gap3 <= MOMENT_TOL && gap3 < gap2;
        detail.push(format!("n={n}: target {target:.4}, g=2 {t2:.4} (gap {gap2:.4}), g=3 {t3:.4} (gap {gap3:.4})"));
    }
    report(4, "even moments", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn c05_quadratic_density() {
    let mut ok = true;
    let mut detail = Vec::new();
    let g3 = quadratic(3);
    let g2 = quadratic(2);
    let limit = 3.0 / 8.0;
    for v in finite_places(3, 1).unwrap() {
        let ram = empirical_density(&g3.fam, &v, SplitType::Ramified).unwrap();
        let sp = empirical_density(&g3.fam, &v, SplitType::Split).unwrap().empirical_f64();
        let inert = empirical_density(&g3.fam, &v, SplitType::Inert).unwrap().empirical_f64();
        let sp2 = empirical_density(&g2.fam, &v, SplitType::Split).unwrap().empirical_f64();
        let in2 = empirical_density(&g2.fam, &v, SplitType::Inert).unwrap().empirical_f64();
        let pass = (ram.empirical_f64() - 0.25).abs() <= RAMIFIED_TOL
            && (sp - inert).abs() <= SPLIT_INERT_TOL
            && (sp - limit).abs() <= (sp2 - limit).abs()
            && (inert - limit).abs() <= (in2 - limit).abs();
        ok &= pass;
        detail.push(format!("v={v}: ram {} split {sp:.5} inert {inert:.5}", ram.empirical()));
    }
    report(5, "quadratic splitting densities", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn c06_cyclic_density() {
    let fam = enum_cyclic(7, 3, 4, DEFAULT_BUDGET).unwrap();
    let target = 2.0 / 9.0;
    let mut ok = true;
    let mut detail = vec![format!("{} members", fam.len())];
    for v in finite_places(7, 1).unwrap() {
        let r = empirical_density(&fam, &v, SplitType::Ramified).unwrap().empirical_f64();
        let s = empirical_density(&fam, &v, SplitType::Split).unwrap().empirical_f64();
        let i = empirical_density(&fam, &v, SplitType::Inert).unwrap().empirical_f64();
        ok &= (r - target).abs() <= CYCLIC_DENSITY_TOL && (s - i / 2.0).abs() <= CYCLIC_DENSITY_TOL;
        detail.push(format!("v={v}: ram {r:.4} split {s:.4} inert {i:.4}"));
    }
    report(6, "cyclic splitting densities", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn c07_oracle_equivalence() {
    let mut count = 0;
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for d in 1..=6 {
        for v in irreducibles(3, d).unwrap().iter() {
            let f = zeta_factorization(v, 2).unwrap();
            count += 1;
            if !f.exact {
                bad.push(f.v0.clone());
            }
        }
    }
    for d in 1..=3 {
        for v in irreducibles(7, d).unwrap().iter() {
            let f = zeta_factorization(v, 3).unwrap();
            count += 1;
            worst = worst.max(f.max_embedded_diff);
            if !f.exact || f.max_embedded_diff > EMBED_TOL {
                bad.push(f.v0.clone());
            }
        }
    }
    let ok = bad.is_empty();
    report(7, "zeta factorization", ok, &format!("{count} moduli, max embedded diff {worst:.1e}, failures {bad:?}"));
    assert!(ok);
}

#[test]
fn c08_riemann_hypothesis() {
    let mut zetas: Vec<ZetaNumerator> = Vec::new();
    for g in 1..=3 {
        zetas.extend(quadratic(g).zetas.iter().cloned());
    }
    for d in [3, 4] {
        zetas.extend(family_zetas(&enum_cyclic(7, 3, d, DEFAULT_BUDGET).unwrap()).unwrap());
    }
    zetas.extend(family_zetas(&enum_cubic(5, 1, DEFAULT_BUDGET).unwrap()).unwrap());
    for (q, ell, dmax) in [(3u32, 2u32, 6usize), (7, 3, 3)] {
        for d in 1..=dmax {
            for v in irreducibles(q, d).unwrap().iter() {
                let f = zeta_factorization(v, ell).unwrap();
                zetas.push(ZetaNumerator { q, genus: f.genus, coeffs: f.curve });
            }
        }
    }
    let reports: Vec<_> = zetas.iter().map(verify_rh).collect();
    let failures = reports.iter().filter(|r| !r.ok).count();
    let worst = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let ok = failures == 0;
    report(8, "Riemann hypothesis", ok, &format!("{} curves, {failures} failures, max deviation {worst:.1e}", zetas.len()));
    assert!(ok);
}

#[test]
fn c09_one_level_density() {
    let f = TestFunction::fejer(FEJER_ALPHA).unwrap();
    let opts = PredictOpts::default();
    let mut rel = Vec::new();
    let mut detail = Vec::new();
    let mut ok = true;
    for g in [3usize, 4] {
        let (sums, kind) = if g == 3 {
            let d = quadratic(3);
            (d.sums.clone(), d.fam.kind)
        } else {
            let fam = enum_quadratic(3, 4, QuadVariant::Full, DEFAULT_BUDGET).unwrap();
            let kind = fam.kind;
            (family_power_sums(&family_zetas(&fam).unwrap(), 8), kind)
        };
        let w = family_one_level_density(&sums, &f).unwrap();
        let dev = w - usp_integral(&f, g);
        let pred = predicted_old(&kind, 3, &f, &opts).unwrap().deviation;
        let r = dev / pred;
        if g == 3 {
            ok &= dev > 0.0 && r >= OLD_RATIO.0 && r <= OLD_RATIO.1;
        }
        rel.push((r - 1.0).abs());
        detail.push(format!("g={g}: deviation {dev:.3e}, predicted {pred:.3e}, ratio {r:.3}"));
    }
    ok &= rel[1] < rel[0];
    report(9, "one-level density deviation", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn c10_disk_log_bound() {
    let r = cv_property_suite(CV_POLYS, 20, CV_N, GRID, 2024).unwrap();
    let ok = r.failures.is_empty() && r.polynomials == CV_POLYS;
    report(
        10,
        "disk log-modulus bound",
        ok,
        &format!("{} polynomials, {} checks, min margin {:.4}, {} failures", r.polynomials, r.checks, r.min_margin, r.failures.len()),
    );
    assert!(ok);
}

#[test]
fn c11_lindelof() {
    let start = Instant::now();
    let reports = lindelof_sweep(3, 2, 3, 8, GRID, true).unwrap();
    let sweep_ok = reports.iter().all(|r| r.ok && r.sigma2_ok);
    let stable = reports.iter().all(|r| (r.refined_sup.unwrap() - r.sup_log).abs() < 1e-4);
    let worst = reports.iter().map(|r| r.sup_log / r.bound).fold(f64::NEG_INFINITY, f64::max);
    let ratios: Vec<f64> = (10..=40).map(|d| lindelof_ratio(3, d)).collect();
    let rises: Vec<usize> = (11..=40).filter(|&d| ratios[d - 10] >= ratios[d - 11]).collect();
    let trend_ok = rises.is_empty() && ratios.iter().all(|&r| r > std::f64::consts::LN_2 / 2.0);
    let elapsed = start.elapsed();
    let ok = sweep_ok && stable && trend_ok && elapsed < Duration::from_secs(600);
    report(
        11,
        "Lindelof bound",
        ok,
        &format!(
            "{} characters, all below bound: {sweep_ok}, max sup/bound {worst:.3}, grid-stable: {stable}; \
             ratio d=10 {:.4} d=40 {:.4}, non-decreasing steps at d = {rises:?}; {:.1}s",
            reports.len(),
            ratios[0],
            ratios[30],
            elapsed.as_secs_f64()
        ),
    );
    assert!(ok);
}

#[test]
fn c12_prime_number_theorem() {
    let mut ok = true;
    for q in [3u32, 5, 7] {
        for n in 1..=12 {
            ok &= verify_pnt(q, n);
        }
    }
    // cross-check against enumeration where it is cheap
    for d in 1..=8usize {
        let total: u128 = (1..=d)
            .filter(|e| d % e == 0)
            .map(|e| e as u128 * irreducibles(3, e).unwrap().len() as u128)
            .sum();
        ok &= total == 3u128.pow(d as u32);
    }
    report(12, "prime polynomial theorem", ok, "q in {3,5,7}, n <= 12, enumeration to degree 8 at q=3");
    assert!(ok);
}

#[test]
fn c13_kappa() {
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [3u32, 5, 7] {
        let k = kappa_and_sums(q, KAPPA_TOL).unwrap();
        let k2 = kappa_at_degree(q, 2 * k.degree).unwrap();
        let drift = [
            (k.kappa - k2.kappa).abs(),
            (k.quadratic - k2.quadratic).abs(),
            (k.quadratic_all - k2.quadratic_all).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let mut pass = k.kappa > 0.0 && drift < DOUBLING_TOL;
        if q == 7 {
            let c = cyclic_sum(7, 3, KAPPA_TOL).unwrap();
            let c2 = cyclic_sum_at_degree(7, 3, 2 * c.degree).unwrap();
            pass &= (c.value - c2.value).abs() < DOUBLING_TOL;
        }
        ok &= pass;
        detail.push(format!("q={q}: kappa {:.12} (D={}, drift {drift:.1e})", k.kappa, k.degree));
    }
    report(13, "kappa and deviation sums", ok, &detail.join("; "));
    assert!(ok);
}
