//! Factorization by trial division against the irreducible tables.

use super::field::{inv_mod, FieldElem};
use super::irreducible::irreducibles;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub unit: FieldElem,
    /// Monic irreducible factors with multiplicities, canonically sorted.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// unit · Π fᵢ^{eᵢ}.
    pub fn product(&self) -> Poly {
        let q = self.unit.modulus();
        self.factors
            .iter()
            .fold(Poly::constant(q, self.unit.value()), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_ell_powerfree(&self, ell: u32) -> bool {
        self.factors.iter().all(|&(_, e)| e < ell)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Poly {
        let q = self.unit.modulus();
        self.factors.iter().fold(Poly::one(q), |acc, (f, _)| acc.mul(f))
    }
}

pub fn factor(p: &Poly) -> Result<Factorization> {
    let q = p.modulus();
    let Some(n) = p.degree() else {
        return Err(Error::Domain("cannot factor the zero polynomial".into()));
    };
    let unit = FieldElem::new(p.leading() as i64, q);
    let mut rest = p.scale(inv_mod(p.leading(), q));
    let mut factors = Vec::new();
    let mut k = 1;
    while k <= n {
        let Some(rd) = rest.degree() else { break };
        if 2 * k > rd {
            break;
        }
        for f in irreducibles(q, k)?.iter() {
            let mut e = 0;
            while let Some(quot) = rest.div_exact(f) {
                rest = quot;
                e += 1;
            }
            if e > 0 {
                factors.push((f.clone(), e));
            }
        }
        k += 1;
    }
    if rest.deg() > 0 {
        // no factor of degree ≤ deg/2 remains, so the cofactor is irreducible
        factors.push((rest, 1));
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization { unit, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::irreducible::is_irreducible;
    use proptest::prelude::*;

    #[test]
    fn distinct_linears() {
        let f = factor(&Poly::from_ints(3, &[0, -1, 0, 1])).unwrap();
        assert_eq!(f.unit.value(), 1);
        let fs: Vec<Vec<u32>> = f.factors.iter().map(|(p, _)| p.coeffs().to_vec()).collect();
        assert_eq!(fs, vec![vec![0, 1], vec![1, 1], vec![2, 1]]);
        assert!(f.is_squarefree());
    }

    #[test]
    fn repeated_factor() {
        let f = factor(&Poly::from_ints(3, &[0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(Poly::x(3), 2)]);
        assert!(!f.is_squarefree());
        assert!(f.is_ell_powerfree(3));
        assert!(!f.is_ell_powerfree(2));
    }

    #[test]
    fn zero_is_rejected() {
        assert!(factor(&Poly::zero(3)).is_err());
    }

    #[test]
    fn constant_has_no_factors() {
        let f = factor(&Poly::constant(5, 3)).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.unit.value(), 3);
    }

    proptest! {
        #[test]
        fn roundtrip_and_irreducible_parts(c in prop::collection::vec(0u32..3, 1..11)) {
            let p = Poly::from_raw(3, c);
            prop_assume!(!p.is_zero());
            let f = factor(&p).unwrap();
            prop_assert_eq!(f.product(), p.clone());
            for (g, _) in &f.factors {
                prop_assert!(g.is_monic() && is_irreducible(g));
            }
            prop_assert_eq!(f.is_squarefree(), p.is_squarefree());
        }
    }
}
