use num_complex::Complex64;

use crate::{Error, Result};

/// A real monic polynomial `z^n + c_1 z^{n-1} + ... + c_n`.
///
/// The leading coefficient is implicit; `coeffs()` holds `c_1..c_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidDegree);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    /// Builds `∏ (z - r)` from a root multiset closed under conjugation.
    /// Imaginary residue left by rounding is discarded.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, &a) in acc.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a * r;
            }
            acc = next;
        }
        Self::new(acc[1..].iter().map(|c| c.re).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Default residual tolerance for computed roots: `1e-8 · max(1, ‖c‖∞)`.
    pub fn root_tolerance(&self) -> f64 {
        let inf = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        1e-8 * inf.max(1.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by Horner's rule.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// AR parameters `φ` with `self = z^n − φ_1 z^{n−1} − ⋯ − φ_n`.
    pub fn to_ar_params(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| -c).collect()
    }

    /// The reciprocal lag polynomial `1 + c_1 z + ... + c_n z^n`, ascending
    /// powers. Its roots are the reciprocals of the roots of `self`.
    pub fn lag_polynomial(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.coeffs.iter().copied()).collect()
    }
}

/// Characteristic polynomial `z^n − φ_1 z^{n−1} − ⋯ − φ_n` of an AR parameter vector.
pub fn ar_params_to_char_poly(phi: &[f64]) -> Result<MonicPolynomial> {
    MonicPolynomial::new(phi.iter().map(|p| -p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(MonicPolynomial::new(vec![]), Err(Error::InvalidDegree)));
        assert!(matches!(
            MonicPolynomial::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn ar_params_negate() {
        let p = ar_params_to_char_poly(&[0.9, -0.2]).unwrap();
        assert_eq!(p.coeffs(), &[-0.9, 0.2]);
        assert_eq!(p.to_ar_params(), vec![0.9, -0.2]);
        assert_eq!(p.lag_polynomial(), vec![1.0, -0.9, 0.2]);
    }

    #[test]
    fn from_roots_expands() {
        let roots = [0.9, 0.5, 0.3].map(|r| Complex64::new(r, 0.0));
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let expected = [-1.7, 0.87, -0.135];
        for (a, b) in p.coeffs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = MonicPolynomial::new(vec![0.3, -1.2, 0.5]).unwrap();
        let z = Complex64::new(0.4, -0.7);
        let h = 1e-6;
        let fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
        let (_, dp) = p.eval_with_derivative(z);
        assert!((fd - dp).norm() < 1e-8);
    }
}
