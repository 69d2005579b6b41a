use nalgebra::DMatrix;

use crate::poly::Spectrum;
use crate::{Error, Result};

/// Parameters of `h_t = A h_{t−1} + B x_t + ζ_t`, `y_t = C h_t + D x_t + ξ_t`
/// with diagonal Gaussian noise of the given standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct LdsParams {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub state_noise_std: f64,
    pub output_noise_std: f64,
}

fn check_finite(name: &str, m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} has non-finite entries")))
    }
}

impl LdsParams {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        d: DMatrix<f64>,
        state_noise_std: f64,
        output_noise_std: f64,
    ) -> Result<Self> {
        let p = Self { a, b, c, d, state_noise_std, output_noise_std };
        p.validate()?;
        Ok(p)
    }

    /// Checks dimensions, finiteness and noise scales.
    pub fn validate(&self) -> Result<()> {
        let n = self.a.nrows();
        let k = self.b.ncols();
        let m = self.c.nrows();
        if n == 0 || self.a.ncols() != n {
            return Err(Error::ShapeError(format!("A must be square and non-empty, got {}x{}", n, self.a.ncols())));
        }
        if self.b.nrows() != n {
            return Err(Error::ShapeError(format!("B has {} rows, expected {n}", self.b.nrows())));
        }
        if m == 0 || self.c.ncols() != n {
            return Err(Error::ShapeError(format!("C is {}x{}, expected mx{n} with m >= 1", m, self.c.ncols())));
        }
        if self.d.nrows() != m || self.d.ncols() != k {
            return Err(Error::ShapeError(format!(
                "D is {}x{}, expected {m}x{k}",
                self.d.nrows(),
                self.d.ncols()
            )));
        }
        for (name, mat) in [("A", &self.a), ("B", &self.b), ("C", &self.c), ("D", &self.d)] {
            check_finite(name, mat)?;
        }
        for (name, s) in [("state_noise_std", self.state_noise_std), ("output_noise_std", self.output_noise_std)] {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {s}")));
            }
        }
        Ok(())
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::of_matrix(&self.a)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.spectrum()?.spectral_radius())
    }

    /// `ρ(A) ≤ 1 + tol`.
    pub fn is_stable(&self, tol: f64) -> Result<bool> {
        Ok(self.spectral_radius()? <= 1.0 + tol)
    }

    /// Stacked `[C; CA; …; CA^{n−1}]`.
    pub fn observability_matrix(&self) -> DMatrix<f64> {
        let n = self.state_dim();
        let m = self.output_dim();
        let mut out = DMatrix::zeros(n * m, n);
        let mut block = self.c.clone();
        for i in 0..n {
            out.view_mut((i * m, 0), (m, n)).copy_from(&block);
            block = &block * &self.a;
        }
        out
    }

    /// Numerical rank test on the observability matrix: smallest singular
    /// value above `tol` times the largest.
    pub fn is_observable(&self, tol: f64) -> bool {
        let sv = self.observability_matrix().singular_values();
        let max = sv.max();
        let min = sv.min();
        max > 0.0 && min > tol * max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn shape_checks() {
        let bad = LdsParams::new(DMatrix::zeros(2, 2), DMatrix::zeros(3, 1), DMatrix::zeros(1, 2), DMatrix::zeros(1, 1), 0.0, 0.0);
        assert!(matches!(bad, Err(Error::ShapeError(_))));
        let nan = LdsParams::new(scalar(f64::NAN), scalar(1.0), scalar(1.0), scalar(0.0), 0.0, 0.0);
        assert!(matches!(nan, Err(Error::InvalidParams(_))));
        let neg = LdsParams::new(scalar(0.5), scalar(1.0), scalar(1.0), scalar(0.0), -1.0, 0.0);
        assert!(matches!(neg, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn observability() {
        let a = DMatrix::from_row_slice(2, 2, &[0.9, 0.0, 0.0, 0.5]);
        let b = DMatrix::from_element(2, 1, 1.0);
        let obs = LdsParams::new(a.clone(), b.clone(), DMatrix::from_row_slice(1, 2, &[1.0, 1.0]), DMatrix::zeros(1, 1), 0.0, 0.0).unwrap();
        assert!(obs.is_observable(1e-9));
        let unobs = LdsParams::new(a, b, DMatrix::from_row_slice(1, 2, &[1.0, 0.0]), DMatrix::zeros(1, 1), 0.0, 0.0).unwrap();
        assert!(!unobs.is_observable(1e-9));
    }
}
