use nalgebra::DMatrix;

use super::MonicPolynomial;
use crate::{Error, Result};

/// Companion matrix of a monic polynomial in controllable canonical form:
/// ones on the subdiagonal, last column `(−c_n, …, −c_1)ᵀ`, zeros elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionMatrix {
    entries: DMatrix<f64>,
}

impl CompanionMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }
}

pub fn companion_matrix(p: &MonicPolynomial) -> Result<CompanionMatrix> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    let c = p.coeffs();
    let mut m = DMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[n - 1 - i];
    }
    Ok(CompanionMatrix { entries: m })
}
