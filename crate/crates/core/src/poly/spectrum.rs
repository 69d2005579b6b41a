use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::assignment::min_cost_assignment;
use crate::{Error, Result};

/// Default tolerance for conjugate-pair closure checks.
pub const TOL_CONJ: f64 = 1e-8;

/// A multiset of eigenvalues, stored in canonical order: descending modulus,
/// then descending real part, then descending imaginary part.
///
/// The canonical order only fixes display and serialization; comparisons go
/// through [`spectrum_distance`], which is permutation invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
}

fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

impl Spectrum {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(canonical_cmp);
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Eigenvalues of a general real square matrix.
    pub fn of_matrix(m: &DMatrix<f64>) -> Result<Self> {
        Ok(Self::new(super::eigen::real_eigenvalues(m, None)?))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Smallest pairwise gap `|λ_i − λ_j|`, with the pair that attains it.
    pub fn min_gap(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.values.len() {
            for j in (i + 1)..self.values.len() {
                let d = (self.values[i] - self.values[j]).norm();
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }

    /// True if every non-real value has a partner within `tol` of its conjugate.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let n = self.values.len();
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            let v = self.values[i];
            if v.im.abs() <= tol {
                used[i] = true;
                continue;
            }
            let partner = (0..n).find(|&j| j != i && !used[j] && (self.values[j] - v.conj()).norm() <= tol);
            match partner {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                }
                None => return false,
            }
        }
        true
    }
}

fn squared_cost(a: &Spectrum, b: &Spectrum) -> Vec<f64> {
    let n = a.len();
    let mut cost = vec![0.0; n * n];
    for (i, x) in a.values.iter().enumerate() {
        for (j, y) in b.values.iter().enumerate() {
            cost[i * n + j] = (x - y).norm_sqr();
        }
    }
    cost
}

/// Optimal matching of `a` onto `b`: `result[i]` is the index into `b.values()`
/// paired with `a.values()[i]`.
pub fn optimal_matching(a: &Spectrum, b: &Spectrum) -> Result<Vec<usize>> {
    if a.len() != b.len() {
        return Err(Error::SpectrumSizeMismatch { left: a.len(), right: b.len() });
    }
    Ok(min_cost_assignment(&squared_cost(a, b), a.len()))
}

/// ℓ2 distance between two equal-size spectra under the best pairing.
pub fn spectrum_distance(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    let assign = optimal_matching(a, b)?;
    // Summing the matched terms in sorted order makes the result independent
    // of which side is `a`.
    let mut terms: Vec<f64> = assign
        .iter()
        .enumerate()
        .map(|(i, &j)| (a.values[i] - b.values[j]).norm_sqr())
        .collect();
    terms.sort_by(f64::total_cmp);
    Ok(terms.iter().sum::<f64>().sqrt())
}

/// Largest single-eigenvalue movement under the best pairing.
pub fn max_matched_movement(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    let assign = optimal_matching(a, b)?;
    Ok(assign
        .iter()
        .enumerate()
        .map(|(i, &j)| (a.values[i] - b.values[j]).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_order() {
        let s = Spectrum::new(vec![c(0.3, -0.4), c(-0.9, 0.0), c(0.3, 0.4), c(0.5, 0.0), c(-0.5, 0.0)]);
        let expected = [c(-0.9, 0.0), c(0.3, 0.4), c(0.3, -0.4), c(0.5, 0.0), c(-0.5, 0.0)];
        // |0.3±0.4i| = 0.5 ties with ±0.5 on modulus; real part desc puts 0.5 first.
        let expected_sorted = [expected[0], expected[3], expected[1], expected[2], expected[4]];
        assert_eq!(s.values(), &expected_sorted);
    }

    #[test]
    fn distance_examples() {
        let a = Spectrum::from_real(&[0.5, -0.5]);
        assert_eq!(spectrum_distance(&a, &a).unwrap(), 0.0);
        let b = Spectrum::from_real(&[0.5, 0.5]);
        assert!((spectrum_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_vs_real_pair() {
        let a = Spectrum::new(vec![c(0.3, 0.4), c(0.3, -0.4)]);
        let b = Spectrum::from_real(&[0.3, 0.3]);
        // Brute force over both pairings.
        let brute = [[0usize, 1], [1, 0]]
            .iter()
            .map(|p| {
                (0..2)
                    .map(|i| (a.values()[i] - b.values()[p[i]]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        // each matched pair differs by 0.4i: √(0.16 + 0.16)
        assert!((brute - 0.32f64.sqrt()).abs() < 1e-12);
        assert!((spectrum_distance(&a, &b).unwrap() - brute).abs() < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        let a = Spectrum::from_real(&[0.5]);
        let b = Spectrum::from_real(&[0.5, 0.1]);
        assert!(matches!(
            spectrum_distance(&a, &b),
            Err(Error::SpectrumSizeMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn real_spectra_match_sorted_pairing() {
        let a = Spectrum::from_real(&[0.9, -0.1, 0.4, 0.2]);
        let b = Spectrum::from_real(&[0.3, 0.8, -0.6, 0.0]);
        let mut x: Vec<f64> = a.values().iter().map(|v| v.re).collect();
        let mut y: Vec<f64> = b.values().iter().map(|v| v.re).collect();
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        let sorted: f64 = x.iter().zip(&y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        assert!((spectrum_distance(&a, &b).unwrap() - sorted).abs() < 1e-14);
    }

    #[test]
    fn conjugate_closure() {
        assert!(Spectrum::new(vec![c(0.1, 0.2), c(0.1, -0.2), c(0.7, 0.0)]).is_conjugate_closed(TOL_CONJ));
        assert!(!Spectrum::new(vec![c(0.1, 0.2), c(0.1, 0.2)]).is_conjugate_closed(TOL_CONJ));
    }

    fn spectrum_strategy(n: usize) -> impl Strategy<Value = Spectrum> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
            .prop_map(|v| Spectrum::new(v.into_iter().map(|(re, im)| c(re, im)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn metric_axioms((a, b, d) in (1usize..6).prop_flat_map(|n| (spectrum_strategy(n), spectrum_strategy(n), spectrum_strategy(n)))) {
            let ab = spectrum_distance(&a, &b).unwrap();
            let ba = spectrum_distance(&b, &a).unwrap();
            let ad = spectrum_distance(&a, &d).unwrap();
            let db = spectrum_distance(&d, &b).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(spectrum_distance(&a, &a).unwrap(), 0.0);
            prop_assert_eq!(ab, ba);
            prop_assert!(ab <= ad + db + 1e-12);
        }
    }
}
