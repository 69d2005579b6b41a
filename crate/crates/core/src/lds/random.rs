use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::LdsParams;
use crate::{Error, Result};

/// Output noise standard deviation used by the synthetic generators.
pub const DEFAULT_OUTPUT_NOISE: f64 = 0.01;
pub const DEFAULT_MAX_TRIES: usize = 1000;

pub(crate) fn standard_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_iterator(rows, cols, (0..rows * cols).map(|_| StandardNormal.sample(rng)))
}

/// Random LDS with i.i.d. standard Gaussian `A`, `B`, `C`, `D = 0`, and `A`
/// resampled until its spectral radius is at most 1.
pub fn random_stable_lds<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> Result<LdsParams> {
    random_stable_lds_with(n, m, k, DEFAULT_MAX_TRIES, rng)
}

pub fn random_stable_lds_with<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: usize,
    max_tries: usize,
    rng: &mut R,
) -> Result<LdsParams> {
    if n == 0 || m == 0 || k == 0 {
        return Err(Error::InvalidParams(format!("dimensions must be >= 1, got n={n} m={m} k={k}")));
    }
    let a = stable_matrix(n, max_tries, rng, |rng| standard_gaussian(n, n, rng))?;
    let b = standard_gaussian(n, k, rng);
    let c = standard_gaussian(m, n, rng);
    LdsParams::new(a, b, c, DMatrix::zeros(m, k), 0.0, DEFAULT_OUTPUT_NOISE)
}

/// Draws from `sample` until the result has spectral radius `≤ 1`.
pub(crate) fn stable_matrix<R: Rng + ?Sized>(
    n: usize,
    max_tries: usize,
    rng: &mut R,
    mut sample: impl FnMut(&mut R) -> DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    for _ in 0..max_tries {
        let a = sample(rng);
        debug_assert_eq!(a.nrows(), n);
        if crate::poly::Spectrum::of_matrix(&a)?.spectral_radius() <= 1.0 {
            return Ok(a);
        }
    }
    Err(Error::GenerationFailure { what: "stable state-transition matrix", tries: max_tries })
}

/// Largest condition number accepted for a change-of-basis matrix.
pub const MAX_BASIS_CONDITION: f64 = 1e12;

/// The equivalent system under `h' = P⁻¹ h`: `(P⁻¹AP, P⁻¹B, CP, D)`.
///
/// `D` does not act on the state, so it is left unchanged.
pub fn change_of_basis(params: &LdsParams, p: &DMatrix<f64>) -> Result<LdsParams> {
    let n = params.state_dim();
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::ShapeError(format!("basis is {}x{}, expected {n}x{n}", p.nrows(), p.ncols())));
    }
    let sv = p.singular_values();
    let cond = if sv.min() > 0.0 { sv.max() / sv.min() } else { f64::INFINITY };
    if !(cond < MAX_BASIS_CONDITION) {
        return Err(Error::SingularBasis { cond });
    }
    let p_inv = p.clone().try_inverse().ok_or(Error::SingularBasis { cond })?;
    LdsParams::new(
        &p_inv * &params.a * p,
        &p_inv * &params.b,
        &params.c * p,
        params.d.clone(),
        params.state_noise_std,
        params.output_noise_std,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::spectrum_distance;
    use crate::seed::rng_from_seed;

    #[test]
    fn always_stable() {
        let mut rng = rng_from_seed(11);
        for n in 1..=3 {
            for _ in 0..20 {
                let p = random_stable_lds(n, 1, 1, &mut rng).unwrap();
                assert!(p.spectral_radius().unwrap() <= 1.0);
                assert_eq!(p.d, DMatrix::zeros(1, 1));
                assert_eq!(p.output_noise_std, DEFAULT_OUTPUT_NOISE);
                assert_eq!(p.state_noise_std, 0.0);
            }
        }
    }

    #[test]
    fn scalar_case_in_unit_interval() {
        let mut rng = rng_from_seed(5);
        for _ in 0..50 {
            let p = random_stable_lds(1, 1, 1, &mut rng).unwrap();
            assert!(p.a[(0, 0)].abs() <= 1.0);
        }
    }

    #[test]
    fn deterministic() {
        let a = random_stable_lds(3, 2, 2, &mut rng_from_seed(9)).unwrap();
        let b = random_stable_lds(3, 2, 2, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejection_budget() {
        let err = random_stable_lds_with(8, 1, 1, 1, &mut rng_from_seed(0)).unwrap_err();
        assert!(matches!(err, Error::GenerationFailure { tries: 1, .. }));
    }

    #[test]
    fn identity_basis() {
        let p = random_stable_lds(3, 2, 1, &mut rng_from_seed(1)).unwrap();
        let q = change_of_basis(&p, &DMatrix::identity(3, 3)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn orthogonal_basis_keeps_spectrum() {
        let mut rng = rng_from_seed(2);
        for n in 1..=6 {
            let p = random_stable_lds(n.min(4), 1, 1, &mut rng).unwrap();
            let n = p.state_dim();
            let q = standard_gaussian(n, n, &mut rng).qr().q();
            let t = change_of_basis(&p, &q).unwrap();
            let d = spectrum_distance(&p.spectrum().unwrap(), &t.spectrum().unwrap()).unwrap();
            assert!(d <= 1e-8, "n={n} d={d}");
        }
    }

    #[test]
    fn singular_basis_rejected() {
        let p = random_stable_lds(2, 1, 1, &mut rng_from_seed(3)).unwrap();
        let sing = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(change_of_basis(&p, &sing), Err(Error::SingularBasis { .. })));
    }
}
