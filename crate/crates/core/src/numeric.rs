//! Floating-point helpers: polynomial roots and exact squarefree reduction of
//! integer polynomials before root finding.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Roots of Σ coeffs[k] z^k (ascending) by Aberth–Ehrlich iteration followed by
/// Newton polishing. Leading coefficient must be nonzero.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();

    // start on a circle of the geometric-mean radius, rotated off the axes
    let r0 = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();

    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = horner(&monic, z[i]);
            let dp = horner(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += 1.0 / diff;
                    }
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let p = horner(&monic, *zi);
            let dp = horner(&deriv, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

pub fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
    v
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1].clone() / b[db].clone();
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].clone() - f.clone() * bj.clone();
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn rat_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db)];
    for k in (0..quot.len()).rev() {
        let f = r[k + db].clone() / b[db].clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].clone() - f.clone() * bj.clone();
        }
        quot[k] = f;
    }
    quot
}

/// P / gcd(P, P') over ℚ, as floats. Input ascending, nonzero.
pub fn squarefree_part(coeffs: &[i128]) -> Vec<f64> {
    let p: Vec<BigRational> = trim(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect());
    if p.len() <= 2 {
        return p.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    }
    let dp: Vec<BigRational> = trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    );
    let (mut a, mut b) = (p.clone(), dp);
    while !b.is_empty() {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    let sf = if a.len() <= 1 { p } else { rat_div(&p, &a) };
    let lead = sf.last().cloned().expect("nonzero");
    sf.into_iter().map(|x| (x / lead.clone()).to_f64().unwrap_or(f64::NAN)).collect()
}

/// Roots of an integer polynomial, each distinct root reported once.
pub fn distinct_integer_roots(coeffs: &[i128]) -> Vec<Complex64> {
    let sf = squarefree_part(coeffs);
    poly_roots(&sf.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_quadratic() {
        // 1 + 3u^2: roots ±i/√3
        let r = distinct_integer_roots(&[1, 0, 3]);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            assert!(z.re.abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_roots_are_collapsed() {
        // (1 + 3u^2)^2 = 1 + 6u^2 + 9u^4
        assert_eq!(squarefree_part(&[1, 0, 6, 0, 9]).len(), 3);
        let r = distinct_integer_roots(&[1, 0, 6, 0, 9]);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_coefficients() {
        let i = Complex64::new(0.0, 1.0);
        // (z - i)(z + 2) = z^2 + (2 - i) z - 2i
        let r = poly_roots(&[-2.0 * i, Complex64::new(2.0, -1.0), Complex64::new(1.0, 0.0)]);
        let mut found_i = false;
        let mut found_m2 = false;
        for z in r {
            found_i |= (z - i).norm() < 1e-12;
            found_m2 |= (z + 2.0).norm() < 1e-12;
        }
        assert!(found_i && found_m2);
    }
}
