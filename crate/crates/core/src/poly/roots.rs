use num_complex::Complex64;

use super::{companion_matrix, eigen, MonicPolynomial, Spectrum};
use crate::Result;

/// Options for [`poly_roots_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RootOptions {
    /// Total QR sweep budget; `None` means `100·n`.
    pub max_qr_iters: Option<usize>,
}

/// All roots of `p`, with multiplicity.
pub fn poly_roots(p: &MonicPolynomial) -> Result<Spectrum> {
    poly_roots_with(p, RootOptions::default())
}

pub fn poly_roots_with(p: &MonicPolynomial, opts: RootOptions) -> Result<Spectrum> {
    let c = p.coeffs();
    let roots = match c.len() {
        1 => vec![Complex64::new(-c[0], 0.0)],
        2 => quadratic_roots(c[0], c[1]).to_vec(),
        n => {
            let cm = companion_matrix(p)?;
            let raw = eigen::hessenberg_eigenvalues(cm.matrix(), opts.max_qr_iters.unwrap_or(100 * n))?;
            raw.into_iter().map(|r| newton_polish(p, r)).collect()
        }
    };
    Ok(Spectrum::new(roots))
}

/// Roots of `z² + b z + c` without cancellation in the real case.
fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let half = 0.5 * b;
    let disc = half * half - c;
    if disc >= 0.0 {
        let q = -(half + disc.sqrt().copysign(if half == 0.0 { 1.0 } else { half }));
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [Complex64::new(-half, im), Complex64::new(-half, -im)]
    }
}

/// One Newton step, kept only if it lowers the residual.
fn newton_polish(p: &MonicPolynomial, r: Complex64) -> Complex64 {
    let (val, der) = p.eval_with_derivative(r);
    if der.norm() == 0.0 || !der.is_finite() {
        return r;
    }
    let cand = r - val / der;
    if cand.is_finite() && p.eval(cand).norm() < val.norm() {
        cand
    } else {
        r
    }
}
