//! Enumeration of monic irreducibles over 𝔽_q, the on-disk cache, and
//! prime counting.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use super::field::check_field;
use super::poly::{coeffs_to_csv, parse_coeffs, Poly};
use crate::error::{Error, Result};

/// Largest number of monic polynomials the sieve will touch for one degree.
pub const SIEVE_LIMIT: u64 = 1 << 26;

type Table = HashMap<(u32, usize), Arc<Vec<Poly>>>;

fn memory() -> &'static RwLock<Table> {
    static MEM: OnceLock<RwLock<Table>> = OnceLock::new();
    MEM.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Monic irreducibles of degree `d` over 𝔽_q in canonical order, memoized
/// in-process.
pub fn irreducibles(q: u32, d: usize) -> Result<Arc<Vec<Poly>>> {
    if d == 0 {
        return Err(Error::Domain("irreducible degree must be at least 1".into()));
    }
    if let Some(v) = memory().read().expect("cache lock").get(&(q, d)) {
        return Ok(v.clone());
    }
    check_field(q)?;
    let v = Arc::new(sieve(q, d)?);
    memory().write().expect("cache lock").insert((q, d), v.clone());
    Ok(v)
}

/// Like [`irreducibles`], but backed by a text file per (q, d) in `dir`.
/// A missing file is built and written; an existing one is parsed and
/// checked against its header.
pub fn irreducibles_cached(q: u32, d: usize, dir: &Path) -> Result<Arc<Vec<Poly>>> {
    let path = cache_path(dir, q, d);
    if path.exists() {
        let v = Arc::new(read_cache(&path, q, d)?);
        memory().write().expect("cache lock").insert((q, d), v.clone());
        return Ok(v);
    }
    let v = irreducibles(q, d)?;
    fs::create_dir_all(dir)?;
    write_cache(&path, q, d, &v)?;
    Ok(v)
}

/// Cache directory from `FROBSTATS_CACHE`, defaulting to `./cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("FROBSTATS_CACHE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cache"))
}

pub fn cache_path(dir: &Path, q: u32, d: usize) -> PathBuf {
    dir.join(format!("irr_q{q}_d{d}.txt"))
}

fn write_cache(path: &Path, q: u32, d: usize, polys: &[Poly]) -> Result<()> {
    // write to a sibling then rename so concurrent readers never see a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        writeln!(f, "q={q} d={d} count={} v1", polys.len())?;
        for p in polys {
            writeln!(f, "{}", coeffs_to_csv(p))?;
        }
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_cache(path: &Path, q: u32, d: usize) -> Result<Vec<Poly>> {
    let bad = |reason: String| Error::Cache { path: path.display().to_string(), reason };
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[3] != "v1" {
        return Err(bad(format!("bad header '{header}'")));
    }
    let want_q = format!("q={q}");
    let want_d = format!("d={d}");
    if fields[0] != want_q || fields[1] != want_d {
        return Err(bad(format!("header '{header}' does not match q={q} d={d}")));
    }
    let count: usize = fields[2]
        .strip_prefix("count=")
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| bad(format!("bad count in '{header}'")))?;
    let mut out = Vec::with_capacity(count);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let p = parse_coeffs(q, line)?;
        if p.degree() != Some(d) || !p.is_monic() {
            return Err(bad(format!("line '{line}' is not monic of degree {d}")));
        }
        out.push(p);
    }
    if out.len() != count {
        return Err(bad(format!("expected {count} polynomials, found {}", out.len())));
    }
    Ok(out)
}

/// Marks every reducible monic of degree `d` as a product of an irreducible
/// of degree ≤ d/2 with a monic cofactor; the survivors are irreducible.
fn sieve(q: u32, d: usize) -> Result<Vec<Poly>> {
    let total = (q as u64)
        .checked_pow(d as u32)
        .filter(|&t| t <= SIEVE_LIMIT)
        .ok_or_else(|| Error::Domain(format!("q^d = {q}^{d} exceeds the sieve limit {SIEVE_LIMIT}")))?;
    let mut reducible = vec![false; total as usize];
    for k in 1..=d / 2 {
        let small = irreducibles(q, k)?;
        let cof_count = (q as u64).pow((d - k) as u32);
        for f in small.iter() {
            for idx in 0..cof_count {
                let g = Poly::monic_from_index(q, d - k, idx);
                reducible[f.mul(&g).monic_index() as usize] = true;
            }
        }
    }
    let mut out: Vec<Poly> = (0..total)
        .filter(|&i| !reducible[i as usize])
        .map(|i| Poly::monic_from_index(q, d, i))
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// Independent irreducibility test (Rabin): f has no factor of degree ≤ deg/2.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let q = f.modulus();
    let x = Poly::x(q);
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        xp = xp.pow_mod(q as u128, f);
        if !f.gcd(&xp.sub(&x)).is_constant() {
            return false;
        }
    }
    true
}

/// Errors unless `f` is a monic irreducible.
pub fn irreducible_or_err(f: &Poly) -> Result<()> {
    if f.is_monic() && is_irreducible(f) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{f} is not a monic irreducible")))
    }
}

pub fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// π(d): number of monic irreducibles of degree d, by Möbius inversion.
pub fn prime_count(q: u32, d: u64) -> u128 {
    assert!(d >= 1);
    let mut s: i128 = 0;
    for e in divisors(d) {
        s += mobius(e) as i128 * (q as i128).pow((d / e) as u32);
    }
    (s / d as i128) as u128
}

/// q^n = Σ_{d|n} d·π(d), checked exactly.
pub fn verify_pnt(q: u32, n: u64) -> bool {
    let lhs = (q as u128).pow(n as u32);
    let rhs: u128 = divisors(n).into_iter().map(|d| d as u128 * prime_count(q, d)).sum();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linears_over_f3() {
        let v = irreducibles(3, 1).unwrap();
        let c: Vec<Vec<u32>> = v.iter().map(|p| p.coeffs().to_vec()).collect();
        assert_eq!(c, vec![vec![0, 1], vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn counts_match_brute_force_rabin() {
        // brute force: test every monic with the independent Rabin criterion
        for (q, d) in [(3u32, 2usize), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let total = (q as u64).pow(d as u32);
            let brute: Vec<Poly> = (0..total)
                .map(|i| Poly::monic_from_index(q, d, i))
                .filter(is_irreducible)
                .collect();
            let sieved = irreducibles(q, d).unwrap();
            assert_eq!(brute.len(), sieved.len(), "q={q} d={d}");
            for p in &brute {
                assert!(sieved.contains(p));
            }
        }
        assert_eq!(irreducibles(3, 2).unwrap().len(), 3);
        assert_eq!(irreducibles(3, 4).unwrap().len(), 18);
    }

    #[test]
    fn mobius_matches_enumeration() {
        for d in 1..=12usize {
            assert_eq!(irreducibles(3, d).unwrap().len() as u128, prime_count(3, d as u64), "d={d}");
        }
        for d in 1..=6usize {
            assert_eq!(irreducibles(7, d).unwrap().len() as u128, prime_count(7, d as u64));
        }
    }

    #[test]
    fn pnt_identity() {
        assert_eq!(prime_count(3, 1), 3);
        assert_eq!(1 * prime_count(3, 1) + 2 * prime_count(3, 2), 9);
        for q in [3u32, 5, 7] {
            for n in 1..=12 {
                assert!(verify_pnt(q, n));
            }
        }
    }

    #[test]
    fn canonical_order_is_sorted() {
        let v = irreducibles(5, 3).unwrap();
        assert!(v.windows(2).all(|w| w[0].canonical_cmp(&w[1]).is_lt()));
    }

    #[test]
    fn cache_roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let a = irreducibles_cached(3, 5, dir.path()).unwrap();
        let path = cache_path(dir.path(), 3, 5);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&format!("q=3 d=5 count={} v1\n", a.len())));
        let b = irreducibles_cached(3, 5, dir.path()).unwrap();
        assert_eq!(*a, *b);
        fs::write(&path, "q=3 d=5 count=2 v1\n1,1\n").unwrap();
        assert!(matches!(irreducibles_cached(3, 5, dir.path()), Err(Error::Cache { .. })));
    }

    #[test]
    fn mobius_values() {
        let m: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(m, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
