//! First-order eigenvalue sensitivity of companion matrices.
//!
//! The companion matrix is diagonalized by the Vandermonde matrix of its
//! eigenvalues, so the condition number of `λ_j` is `‖V_{j,*}‖ · ‖V⁻¹_{*,j}‖`.
//! Both norms have closed forms bounded by products of eigenvalue gaps.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Spectrum;
use crate::{Error, Result};

/// Default minimum pairwise gap for a spectrum to count as simple.
pub const TOL_GAP: f64 = 1e-10;

/// Per-eigenvalue lower and upper bounds on the condition number, aligned
/// with the canonical order of the spectrum they were computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

fn check_simple(nodes: &[Complex64], tol: f64) -> Result<()> {
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] - nodes[j]).norm() <= tol {
                return Err(Error::DegenerateSpectrum { i, j, tol });
            }
        }
    }
    Ok(())
}

pub fn condition_bounds(s: &Spectrum) -> Result<ConditionBounds> {
    condition_bounds_with_tol(s, TOL_GAP)
}

pub fn condition_bounds_with_tol(s: &Spectrum, tol_gap: f64) -> Result<ConditionBounds> {
    let vals = s.values();
    check_simple(vals, tol_gap)?;
    let n = vals.len();
    let rho = s.spectral_radius();
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for (j, lj) in vals.iter().enumerate() {
        let gap_prod: f64 = vals
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, lk)| (lj - lk).norm())
            .product();
        let lo = 1.0 / gap_prod;
        let exp = (n - 1) as i32;
        let hi = (n as f64).sqrt() * lj.norm().max(1.0).powi(exp) * (1.0 + rho * rho).powf(0.5 * exp as f64) / gap_prod;
        lower.push(lo);
        upper.push(hi);
    }
    Ok(ConditionBounds { lower, upper })
}

/// Exact condition numbers `‖V_{j,*}‖₂ ‖V⁻¹_{*,j}‖₂` for a simple spectrum,
/// aligned with `s.values()`.
pub fn condition_numbers(s: &Spectrum) -> Result<Vec<f64>> {
    let vals = s.values();
    let inv = vandermonde_inverse(vals)?;
    let n = vals.len();
    Ok((0..n)
        .map(|j| {
            let row: f64 = (0..n).map(|k| vals[j].powi(k as i32).norm_sqr()).sum::<f64>().sqrt();
            let col: f64 = inv.column(j).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            row * col
        })
        .collect())
}

/// Elementary symmetric polynomials `S_0..S_m` of `xs` (`S_0 = 1`).
fn elementary_symmetric(xs: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for x in xs {
        e.push(Complex64::new(0.0, 0.0));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1];
            e[k] += prev * x;
        }
    }
    e
}

/// Inverse of the Vandermonde matrix `V_{j,k} = nodes_j^k`, from elementary
/// symmetric polynomials of the nodes with the `j`-th node removed.
pub fn vandermonde_inverse(nodes: &[Complex64]) -> Result<DMatrix<Complex64>> {
    check_simple(nodes, TOL_GAP)?;
    let p = nodes.len();
    let mut inv = DMatrix::from_element(p, p, Complex64::new(0.0, 0.0));
    for j in 0..p {
        let others = nodes.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v);
        let s = elementary_symmetric(others);
        let denom: Complex64 = nodes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &lk)| nodes[j] - lk)
            .product();
        for i in 0..p {
            // coefficient of z^i in ∏_{k≠j}(z − λ_k) is (−1)^{p−1−i} S_{p−1−i}
            let deg = p - 1 - i;
            let sign = if deg.is_multiple_of(2) { 1.0 } else { -1.0 };
            inv[(i, j)] = s[deg] * sign / denom;
        }
    }
    Ok(inv)
}

/// The Vandermonde matrix `V_{j,k} = nodes_j^k`.
pub fn vandermonde(nodes: &[Complex64]) -> DMatrix<Complex64> {
    let p = nodes.len();
    DMatrix::from_fn(p, p, |j, k| nodes[j].powi(k as i32))
}
