//! Exact univariate polynomial arithmetic over the rationals: Euclidean
//! division, greatest common divisors, and Yun's squarefree decomposition.
//!
//! The solver deflates multiple roots exactly here before any floating-point
//! iteration runs, so root multiplicities are decided by rational arithmetic
//! and never by distinguishing a cluster of width 1e-4 from a true multiple
//! root.

use crate::poly::{rational_to_f64, Rational};
use num_complex::Complex64;
use num_traits::Zero;

/// Dense univariate polynomial; `coeffs[i]` multiplies `x^i`, and the last
/// entry is nonzero (the zero polynomial has no entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn monic(&self) -> UniPoly {
        let lead = self.coeffs.last().expect("monic of zero polynomial");
        UniPoly::new(self.coeffs.iter().map(|c| c / lead).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), UniPoly::new(rem));
        }
        let mut quo = vec![Rational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let factor = &rem[k] / lead;
            if factor.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = &rem[idx] - &(dc * &factor);
            }
            quo[k - dd] = factor;
        }
        (UniPoly::new(quo), UniPoly::new(rem))
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "division was expected to be exact");
        q
    }

    /// Monic greatest common divisor (Euclid's algorithm).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Yun's squarefree decomposition: returns monic non-constant factors
    /// with their multiplicities, so that the input equals
    /// `lead * prod factor_i ^ mult_i` and the factors are pairwise coprime
    /// and squarefree.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        assert!(!self.is_constant(), "squarefree part of a constant");
        let p = self.monic();
        let dp = p.derivative();
        let g = p.gcd(&dp);
        if g.is_constant() {
            return vec![(p, 1)];
        }
        let mut out = Vec::new();
        let mut c = p.div_exact(&g);
        let mut d = {
            let t = dp.div_exact(&g);
            sub(&t, &c.derivative())
        };
        let mut i = 1u32;
        loop {
            if c.is_constant() {
                break;
            }
            let a = c.gcd(&d);
            let c_next = c.div_exact(&a);
            let d_next = sub(&d.div_exact(&a), &c_next.derivative());
            if !a.is_constant() {
                out.push((a, i));
            }
            c = c_next;
            d = d_next;
            i += 1;
            assert!(
                (i as usize) <= self.coeffs.len() + 1,
                "squarefree decomposition failed to terminate"
            );
        }
        out
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(rational_to_f64(c), 0.0);
        }
        acc
    }

    pub fn complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| Complex64::new(rational_to_f64(c), 0.0))
            .collect()
    }
}

fn sub(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let get = |v: &Vec<Rational>, i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
    UniPoly::new(
        (0..n)
            .map(|i| &get(&a.coeffs, i) - &get(&b.coeffs, i))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn upoly(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x-2) and (x-1)(x+3) share exactly (x-1).
        let a = upoly(&[2, -3, 1]);
        let b = upoly(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), upoly(&[-1, 1]));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = upoly(&[1, 0, 1]);
        let b = upoly(&[-1, 1]);
        let g = a.gcd(&b);
        assert_eq!(g.degree(), Some(0));
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // x^2 (x-1): factor x at multiplicity 2, x-1 at multiplicity 1.
        let p = upoly(&[0, 0, -1, 1]);
        let parts = p.squarefree_decomposition();
        assert_eq!(parts, vec![(upoly(&[-1, 1]), 1), (upoly(&[0, 1]), 2)]);
    }

    #[test]
    fn squarefree_of_pure_power() {
        let p = upoly(&[0, 0, 0, 1]); // x^3
        assert_eq!(p.squarefree_decomposition(), vec![(upoly(&[0, 1]), 3)]);
    }

    #[test]
    fn squarefree_of_squarefree_is_identity() {
        let p = upoly(&[-1, 0, 1]); // x^2 - 1
        assert_eq!(p.squarefree_decomposition(), vec![(p.monic(), 1)]);
    }

    #[test]
    fn squarefree_with_double_pair() {
        // ((x-1)(x+1))^2 = (x^2-1)^2 = x^4 - 2x^2 + 1.
        let p = upoly(&[1, 0, -2, 0, 1]);
        assert_eq!(p.squarefree_decomposition(), vec![(upoly(&[-1, 0, 1]), 2)]);
    }

    #[test]
    fn division_is_exact_on_products() {
        let a = upoly(&[1, 2, 3]);
        let b = upoly(&[-5, 1, 1]);
        // Multiply by convolution, then divide back.
        let mut prod = vec![rat_int(0); 5];
        for (i, ca) in a.coeffs().iter().enumerate() {
            for (j, cb) in b.coeffs().iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(ca * cb);
            }
        }
        let p = UniPoly::new(prod);
        assert_eq!(p.div_exact(&a), b);
        assert_eq!(p.rem(&b), UniPoly::zero());
    }
}
