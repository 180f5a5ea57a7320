//! Cyclotomic integers ℤ[ζ_ℓ] in the basis 1, ζ, …, ζ^{ℓ−2}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CycInt {
    ell: u32,
    coords: Vec<i64>,
}

impl CycInt {
    pub fn zero(ell: u32) -> Self {
        assert!(ell >= 2);
        CycInt { ell, coords: vec![0; ell as usize - 1] }
    }

    pub fn from_int(ell: u32, n: i64) -> Self {
        let mut z = CycInt::zero(ell);
        z.coords[0] = n;
        z
    }

    pub fn one(ell: u32) -> Self {
        CycInt::from_int(ell, 1)
    }

    /// ζ^e for any integer exponent.
    pub fn root(ell: u32, e: i64) -> Self {
        let e = e.rem_euclid(ell as i64) as usize;
        let mut wide = vec![0i64; ell as usize];
        wide[e] = 1;
        CycInt::reduce(ell, wide)
    }

    pub fn from_coords(ell: u32, coords: Vec<i64>) -> Self {
        assert_eq!(coords.len(), ell as usize - 1);
        CycInt { ell, coords }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Rational integer value, if the element lies in ℤ.
    pub fn as_int(&self) -> Option<i64> {
        self.coords[1..].iter().all(|&c| c == 0).then_some(self.coords[0])
    }

    /// Reduces a coefficient vector in powers of ζ (any length) to the basis.
    fn reduce(ell: u32, wide: Vec<i64>) -> Self {
        let l = ell as usize;
        let mut folded = vec![0i64; l];
        for (k, c) in wide.into_iter().enumerate() {
            folded[k % l] += c;
        }
        // ζ^{ℓ−1} = −(1 + ζ + … + ζ^{ℓ−2})
        let top = folded[l - 1];
        let coords = folded[..l - 1].iter().map(|&c| c - top).collect();
        CycInt { ell, coords }
    }

    pub fn add(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.ell, o.ell);
        CycInt {
            ell: self.ell,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &CycInt) -> CycInt {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt { ell: self.ell, coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.ell, o.ell);
        let n = self.coords.len();
        let mut wide = vec![0i64; 2 * n];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coords.iter().enumerate() {
                wide[i + j] += a * b;
            }
        }
        CycInt::reduce(self.ell, wide)
    }

    /// Image under ζ ↦ e^{2πi/ℓ}.
    pub fn embed(&self) -> Complex64 {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.ell as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for &c in &self.coords {
            acc += p * c as f64;
            p *= w;
        }
        acc
    }

    /// Galois action ζ ↦ ζ^k (k prime to ℓ).
    pub fn galois(&self, k: u32) -> CycInt {
        let l = self.ell as usize;
        let mut wide = vec![0i64; l];
        for (i, &c) in self.coords.iter().enumerate() {
            wide[(i * k as usize) % l] += c;
        }
        CycInt::reduce(self.ell, wide)
    }
}
