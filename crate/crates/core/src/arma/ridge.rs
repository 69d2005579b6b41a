use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Relative threshold on `|R_ii|` below which a design is rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Minimizes `‖Xβ − y‖² + α‖β_S‖²`, where `S` is the set of columns flagged
/// in `penalty_mask`.
///
/// Solved by Householder QR of `X` stacked on `√α` selector rows for the
/// penalized columns.
pub fn ridge_ls(design: &DMatrix<f64>, targets: &[f64], penalty_mask: &[bool], alpha: f64) -> Result<DVector<f64>> {
    let (rows, cols) = design.shape();
    if targets.len() != rows {
        return Err(Error::ShapeError(format!("{} targets for {rows} design rows", targets.len())));
    }
    if penalty_mask.len() != cols {
        return Err(Error::ShapeError(format!("penalty mask has {} entries for {cols} columns", penalty_mask.len())));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParams(format!("ridge alpha must be finite and >= 0, got {alpha}")));
    }
    if cols == 0 {
        return Ok(DVector::zeros(0));
    }
    if rows < cols {
        return Err(Error::InsufficientData { retained: rows, required: cols });
    }

    let penalized: Vec<usize> = if alpha > 0.0 {
        penalty_mask.iter().enumerate().filter(|(_, &m)| m).map(|(j, _)| j).collect()
    } else {
        Vec::new()
    };
    let total = rows + penalized.len();
    let mut aug = DMatrix::zeros(total, cols);
    aug.view_mut((0, 0), (rows, cols)).copy_from(design);
    let root = alpha.sqrt();
    for (r, &j) in penalized.iter().enumerate() {
        aug[(rows + r, j)] = root;
    }
    let mut rhs = DVector::zeros(total);
    rhs.rows_mut(0, rows).copy_from_slice(targets);

    let qr = aug.qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..cols).map(|i| r[(i, i)].abs()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min < RANK_TOL * max {
        return Err(Error::RankDeficient { min, max });
    }
    qr.q_tr_mul(&mut rhs);
    let beta = r
        .solve_upper_triangular(&rhs.rows(0, cols).into_owned())
        .ok_or(Error::RankDeficient { min, max })?;
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_solve() {
        let x = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        let beta = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let y = &x * &beta;
        let got = ridge_ls(&x, y.as_slice(), &[false; 3], 0.0).unwrap();
        assert!((got - beta).amax() < 1e-12);
    }

    #[test]
    fn huge_penalty_shrinks_to_zero() {
        let x = DMatrix::from_fn(20, 3, |i, j| ((i * 3 + j) as f64).sin());
        let y: Vec<f64> = (0..20).map(|i| (i as f64).cos()).collect();
        let got = ridge_ls(&x, &y, &[true; 3], 1e12).unwrap();
        assert!(got.norm() <= 1e-6);
    }

    #[test]
    fn partial_mask_matches_normal_equations() {
        let x = DMatrix::from_fn(40, 4, |i, j| ((i + 1) as f64 * (j + 2) as f64 * 0.37).sin() + if j == 0 { 1.0 } else { 0.0 });
        let y: Vec<f64> = (0..40).map(|i| (i as f64 * 0.21).cos() + 0.1 * i as f64).collect();
        let mask = [false, true, true, true];
        let alpha = 2.5;
        let got = ridge_ls(&x, &y, &mask, alpha).unwrap();
        // (XᵀX + α diag(mask)) β = Xᵀy
        let mut lhs = x.transpose() * &x;
        for (j, &m) in mask.iter().enumerate() {
            if m {
                lhs[(j, j)] += alpha;
            }
        }
        let rhs = x.transpose() * DVector::from_vec(y);
        let oracle = lhs.lu().solve(&rhs).unwrap();
        assert!((got - oracle).amax() < 1e-10);
    }

    #[test]
    fn rank_deficient_design() {
        let x = DMatrix::from_fn(10, 2, |i, _| i as f64);
        let y = vec![1.0; 10];
        assert!(matches!(ridge_ls(&x, &y, &[false, false], 0.0), Err(Error::RankDeficient { .. })));
        // penalizing the duplicated column restores full rank
        assert!(ridge_ls(&x, &y, &[false, true], 0.1).is_ok());
    }

    #[test]
    fn shape_errors() {
        let x = DMatrix::zeros(4, 2);
        assert!(matches!(ridge_ls(&x, &[0.0; 3], &[false; 2], 0.0), Err(Error::ShapeError(_))));
        assert!(matches!(ridge_ls(&x, &[0.0; 4], &[false; 3], 0.0), Err(Error::ShapeError(_))));
        assert!(matches!(ridge_ls(&x, &[0.0; 4], &[false; 2], -1.0), Err(Error::InvalidParams(_))));
    }
}
