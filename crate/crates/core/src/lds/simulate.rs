use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{LdsParams, TimeSeries};
use crate::{Error, Result};

/// Input sequence fed to [`simulate`].
#[derive(Debug, Clone)]
pub enum Inputs {
    /// Observed inputs, `T × k`.
    Given(DMatrix<f64>),
    /// `T` steps of i.i.d. `N(0, I_k)` inputs drawn from the random source.
    Gaussian(usize),
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    // Column-major fill keeps draws in a fixed order for a given seed.
    DMatrix::from_iterator(rows, cols, (0..rows * cols).map(|_| StandardNormal.sample(rng)))
}

/// Runs the state-space recursion from `h_0 = 0`.
///
/// The returned series carries the input sequence that was used.
pub fn simulate<R: Rng + ?Sized>(params: &LdsParams, inputs: Inputs, rng: &mut R) -> Result<TimeSeries> {
    params.validate()?;
    let (n, m, k) = (params.state_dim(), params.output_dim(), params.input_dim());
    let x = match inputs {
        Inputs::Given(x) => {
            if x.ncols() != k {
                return Err(Error::ShapeError(format!("inputs have {} columns, B expects {k}", x.ncols())));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParams("inputs must be finite".into()));
            }
            x
        }
        Inputs::Gaussian(t) => gaussian_matrix(t, k, rng),
    };
    let t_len = x.nrows();
    if t_len == 0 {
        return Err(Error::ShapeError("series length must be >= 1".into()));
    }

    let mut y = DMatrix::zeros(t_len, m);
    let mut h = vec![0.0; n];
    let mut next = vec![0.0; n];
    let sz = params.state_noise_std;
    let sx = params.output_noise_std;
    for t in 0..t_len {
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += params.a[(i, j)] * h[j];
            }
            for j in 0..k {
                acc += params.b[(i, j)] * x[(t, j)];
            }
            if sz > 0.0 {
                acc += sz * { let z: f64 = StandardNormal.sample(rng); z };
            }
            next[i] = acc;
        }
        std::mem::swap(&mut h, &mut next);
        for i in 0..m {
            let mut acc = 0.0;
            for j in 0..n {
                acc += params.c[(i, j)] * h[j];
            }
            for j in 0..k {
                acc += params.d[(i, j)] * x[(t, j)];
            }
            if sx > 0.0 {
                acc += sx * { let z: f64 = StandardNormal.sample(rng); z };
            }
            y[(t, i)] = acc;
        }
    }
    TimeSeries::new("", y, Some(x))
}

/// ARMA(p, q) process `y_t = c + Σ φ_i y_{t−i} + ε_t + Σ θ_j ε_{t−j}` with
/// `ε_t ~ N(0, σ²)`, started from zeros and run `burn_in` steps before
/// recording `len` values.
pub fn simulate_arma<R: Rng + ?Sized>(
    phi: &[f64],
    theta: &[f64],
    intercept: f64,
    noise_std: f64,
    len: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<TimeSeries> {
    if phi.iter().chain(theta).any(|v| !v.is_finite()) || !intercept.is_finite() || !(noise_std >= 0.0) {
        return Err(Error::InvalidParams("ARMA coefficients must be finite, noise >= 0".into()));
    }
    let total = len + burn_in;
    let mut y = vec![0.0; total];
    let mut eps = vec![0.0; total];
    for t in 0..total {
        let e = noise_std * { let z: f64 = StandardNormal.sample(rng); z };
        eps[t] = e;
        let mut v = intercept + e;
        for (i, p) in phi.iter().enumerate() {
            if t > i {
                v += p * y[t - i - 1];
            }
        }
        for (j, q) in theta.iter().enumerate() {
            if t > j {
                v += q * eps[t - j - 1];
            }
        }
        y[t] = v;
    }
    TimeSeries::univariate("", &y[burn_in..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn zero_system() {
        let p = LdsParams::new(scalar(0.0), scalar(0.0), scalar(1.0), scalar(0.0), 0.0, 0.0).unwrap();
        let s = simulate(&p, Inputs::Gaussian(20), &mut rng_from_seed(1)).unwrap();
        assert!(s.channel(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn impulse_response_unrolled() {
        let p = LdsParams::new(scalar(0.5), scalar(1.0), scalar(1.0), scalar(0.0), 0.0, 0.0).unwrap();
        let x = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]);
        let s = simulate(&p, Inputs::Given(x), &mut rng_from_seed(1)).unwrap();
        assert_eq!(s.channel(0), &[1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn same_seed_bit_identical() {
        let a = DMatrix::from_row_slice(2, 2, &[0.5, 0.2, -0.3, 0.4]);
        let p = LdsParams::new(a, DMatrix::from_element(2, 1, 1.0), DMatrix::from_element(1, 2, 1.0), DMatrix::zeros(1, 1), 0.1, 0.01).unwrap();
        let s1 = simulate(&p, Inputs::Gaussian(100), &mut rng_from_seed(42)).unwrap();
        let s2 = simulate(&p, Inputs::Gaussian(100), &mut rng_from_seed(42)).unwrap();
        let bits = |s: &TimeSeries| s.channel(0).iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&s1), bits(&s2));
    }

    #[test]
    fn linearity_in_inputs() {
        let a = DMatrix::from_row_slice(3, 3, &[0.5, 0.1, 0.0, -0.2, 0.3, 0.4, 0.0, 0.1, -0.6]);
        let b = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.5, -1.0, 0.2, 0.3]);
        let c = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 2.0, -1.0]);
        let d = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.2]);
        let p = LdsParams::new(a, b, c, d, 0.0, 0.0).unwrap();
        let mut rng = rng_from_seed(3);
        let x1 = gaussian_matrix(50, 2, &mut rng);
        let x2 = gaussian_matrix(50, 2, &mut rng);
        let y1 = simulate(&p, Inputs::Given(x1.clone()), &mut rng).unwrap();
        let y2 = simulate(&p, Inputs::Given(x2.clone()), &mut rng).unwrap();
        let y12 = simulate(&p, Inputs::Given(x1 + x2), &mut rng).unwrap();
        let diff = y12.outputs() - (y1.outputs() + y2.outputs());
        assert!(diff.amax() < 1e-10);
    }

    #[test]
    fn input_width_mismatch() {
        let p = LdsParams::new(scalar(0.5), scalar(1.0), scalar(1.0), scalar(0.0), 0.0, 0.0).unwrap();
        let err = simulate(&p, Inputs::Given(DMatrix::zeros(5, 2)), &mut rng_from_seed(0)).unwrap_err();
        assert!(matches!(err, Error::ShapeError(_)));
    }

    #[test]
    fn arma_noiseless_recursion() {
        let s = simulate_arma(&[0.8], &[], 1.0, 0.0, 5, 0, &mut rng_from_seed(0)).unwrap();
        // y_0 = 1, y_t = 1 + 0.8 y_{t−1}
        let want = [1.0, 1.8, 2.44, 2.952, 3.3616];
        for (g, w) in s.channel(0).iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}
