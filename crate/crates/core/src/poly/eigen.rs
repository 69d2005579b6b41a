//! Dense real eigenvalue solver: diagonal balancing, reduction to upper
//! Hessenberg form by stabilized elementary similarity transforms, then
//! Francis double-shift QR iteration on the Hessenberg matrix.
//!
//! Only eigenvalues are produced. Indexing inside this module is 1-based to
//! keep the bulge-chasing loops legible.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

struct Work {
    n: usize,
    a: Vec<f64>,
}

impl Work {
    fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut a = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                a[(i + 1) * (n + 1) + j + 1] = m[(i, j)];
            }
        }
        Self { n, a }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.n + 1) + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * (self.n + 1) + j] = v;
    }

    #[inline]
    fn sub(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * (self.n + 1) + j] -= v;
    }

    fn balance(&mut self) {
        const RADIX: f64 = 2.0;
        const SQRDX: f64 = RADIX * RADIX;
        let n = self.n;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let mut r = 0.0;
                let mut c = 0.0;
                for j in 1..=n {
                    if j != i {
                        c += self.get(j, i).abs();
                        r += self.get(i, j).abs();
                    }
                }
                if c != 0.0 && r != 0.0 {
                    let mut g = r / RADIX;
                    let mut f = 1.0;
                    let s = c + r;
                    while c < g {
                        f *= RADIX;
                        c *= SQRDX;
                    }
                    g = r * RADIX;
                    while c > g {
                        f /= RADIX;
                        c /= SQRDX;
                    }
                    if (c + r) / f < 0.95 * s {
                        done = false;
                        let g = 1.0 / f;
                        for j in 1..=n {
                            let v = self.get(i, j) * g;
                            self.set(i, j, v);
                        }
                        for j in 1..=n {
                            let v = self.get(j, i) * f;
                            self.set(j, i, v);
                        }
                    }
                }
            }
        }
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        for m in 2..n {
            let mut x: f64 = 0.0;
            let mut piv = m;
            for j in m..=n {
                if self.get(j, m - 1).abs() > x.abs() {
                    x = self.get(j, m - 1);
                    piv = j;
                }
            }
            if piv != m {
                for j in (m - 1)..=n {
                    let (a, b) = (self.get(piv, j), self.get(m, j));
                    self.set(piv, j, b);
                    self.set(m, j, a);
                }
                for j in 1..=n {
                    let (a, b) = (self.get(j, piv), self.get(j, m));
                    self.set(j, piv, b);
                    self.set(j, m, a);
                }
            }
            if x != 0.0 {
                for i in (m + 1)..=n {
                    let mut y = self.get(i, m - 1);
                    if y != 0.0 {
                        y /= x;
                        self.set(i, m - 1, 0.0);
                        for j in m..=n {
                            let v = y * self.get(m, j);
                            self.sub(i, j, v);
                        }
                        for j in 1..=n {
                            let v = y * self.get(j, i);
                            self.sub(j, m, -v);
                        }
                    }
                }
            }
        }
    }

    /// Francis double-shift QR on an upper Hessenberg matrix. Destroys `a`.
    fn hqr(&mut self, max_iters: usize) -> Result<Vec<Complex64>> {
        let n = self.n;
        let mut wr = vec![0.0; n + 1];
        let mut wi = vec![0.0; n + 1];
        let mut found = vec![false; n + 1];

        let mut anorm = 0.0;
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm += self.get(i, j).abs();
            }
        }

        let mut total_iters = 0usize;
        let mut nn = n;
        let mut t = 0.0;
        while nn >= 1 {
            let mut its = 0usize;
            loop {
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.get(l - 1, l - 1).abs() + self.get(l, l).abs();
                    if s == 0.0 {
                        s = anorm;
                    }
                    if self.get(l, l - 1).abs() + s == s {
                        self.set(l, l - 1, 0.0);
                        break;
                    }
                    l -= 1;
                }
                let mut x = self.get(nn, nn);
                if l == nn {
                    wr[nn] = x + t;
                    wi[nn] = 0.0;
                    found[nn] = true;
                    nn -= 1;
                } else {
                    let mut y = self.get(nn - 1, nn - 1);
                    let mut w = self.get(nn, nn - 1) * self.get(nn - 1, nn);
                    if l == nn - 1 {
                        let p = 0.5 * (y - x);
                        let q = p * p + w;
                        let mut z = q.abs().sqrt();
                        x += t;
                        if q >= 0.0 {
                            z = p + z.copysign(p);
                            wr[nn - 1] = x + z;
                            wr[nn] = x + z;
                            if z != 0.0 {
                                wr[nn] = x - w / z;
                            }
                            wi[nn - 1] = 0.0;
                            wi[nn] = 0.0;
                        } else {
                            wr[nn - 1] = x + p;
                            wr[nn] = x + p;
                            wi[nn - 1] = z;
                            wi[nn] = -z;
                        }
                        found[nn - 1] = true;
                        found[nn] = true;
                        nn -= 2;
                    } else {
                        if total_iters >= max_iters {
                            let partial = (1..=n)
                                .filter(|&i| found[i])
                                .map(|i| Complex64::new(wr[i], wi[i]))
                                .collect();
                            return Err(Error::RootSolverFailure {
                                iterations: total_iters,
                                degree: n,
                                partial,
                            });
                        }
                        if its > 0 && its.is_multiple_of(10) {
                            // exceptional shift
                            t += x;
                            for i in 1..=nn {
                                self.sub(i, i, x);
                            }
                            let s = self.get(nn, nn - 1).abs() + self.get(nn - 1, nn - 2).abs();
                            x = 0.75 * s;
                            y = x;
                            w = -0.4375 * s * s;
                        }
                        its += 1;
                        total_iters += 1;
                        self.qr_step(l, nn, x, y, w);
                    }
                }
                if nn == 0 || l + 1 >= nn {
                    break;
                }
            }
        }

        Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
    }

    fn qr_step(&mut self, l: usize, nn: usize, mut x: f64, mut y: f64, w: f64) {
        let (mut p, mut q, mut r, mut z);
        let mut m = nn - 2;
        loop {
            z = self.get(m, m);
            r = x - z;
            let s = y - z;
            p = (r * s - w) / self.get(m + 1, m) + self.get(m, m + 1);
            q = self.get(m + 1, m + 1) - z - r - s;
            r = self.get(m + 2, m + 1);
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = self.get(m, m - 1).abs() * (q.abs() + r.abs());
            let v = p.abs() * (self.get(m - 1, m - 1).abs() + z.abs() + self.get(m + 1, m + 1).abs());
            if u + v == v {
                break;
            }
            m -= 1;
        }
        for i in (m + 2)..=nn {
            self.set(i, i - 2, 0.0);
            if i != m + 2 {
                self.set(i, i - 3, 0.0);
            }
        }
        let mut k = m;
        while k < nn {
            if k != m {
                p = self.get(k, k - 1);
                q = self.get(k + 1, k - 1);
                r = 0.0;
                if k != nn - 1 {
                    r = self.get(k + 2, k - 1);
                }
                x = p.abs() + q.abs() + r.abs();
                if x != 0.0 {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            let s = (p * p + q * q + r * r).sqrt().copysign(p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        let v = -self.get(k, k - 1);
                        self.set(k, k - 1, v);
                    }
                } else {
                    self.set(k, k - 1, -s * x);
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    p = self.get(k, j) + q * self.get(k + 1, j);
                    if k != nn - 1 {
                        p += r * self.get(k + 2, j);
                        self.sub(k + 2, j, p * z);
                    }
                    self.sub(k + 1, j, p * y);
                    self.sub(k, j, p * x);
                }
                let mmin = nn.min(k + 3);
                for i in l..=mmin {
                    p = x * self.get(i, k) + y * self.get(i, k + 1);
                    if k != nn - 1 {
                        p += z * self.get(i, k + 2);
                        self.sub(i, k + 2, p * r);
                    }
                    self.sub(i, k + 1, p * q);
                    self.sub(i, k, p);
                }
            }
            k += 1;
        }
    }
}

/// Eigenvalues of a real square matrix, unordered.
///
/// `max_iters` caps the total number of QR sweeps; `None` uses `100·n`.
pub(crate) fn real_eigenvalues(m: &DMatrix<f64>, max_iters: Option<usize>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::ShapeError(format!("eigenvalues of a {}x{} matrix", n, m.ncols())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(index) = m.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut w = Work::from_matrix(m);
    w.balance();
    w.reduce_to_hessenberg();
    w.hqr(max_iters.unwrap_or(100 * n))
}

/// Eigenvalues of a matrix already in upper Hessenberg form (e.g. a companion
/// matrix); skips the reduction step.
pub(crate) fn hessenberg_eigenvalues(m: &DMatrix<f64>, max_iters: usize) -> Result<Vec<Complex64>> {
    let mut w = Work::from_matrix(m);
    w.balance();
    w.hqr(max_iters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_and_triangular() {
        let m = DMatrix::from_row_slice(3, 3, &[3.0, 1.0, 2.0, 0.0, -1.0, 4.0, 0.0, 0.0, 0.5]);
        let ev = sorted(real_eigenvalues(&m, None).unwrap());
        let expected = [-1.0, 0.5, 3.0];
        for (e, x) in ev.iter().zip(expected) {
            assert!((e.re - x).abs() < 1e-12 && e.im == 0.0);
        }
    }

    #[test]
    fn rotation_has_complex_pair() {
        let (c, s) = (0.6_f64, 0.8_f64);
        let m = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let ev = sorted(real_eigenvalues(&m, None).unwrap());
        assert!((ev[0] - Complex64::new(0.6, -0.8)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.6, 0.8)).norm() < 1e-14);
    }

    #[test]
    fn similarity_preserves_spectrum() {
        // Q diag(1, 2, 3, 4, 5) Q^{-1} with a fixed non-orthogonal Q.
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0, 5.0]));
        let q = DMatrix::from_fn(5, 5, |i, j| if i == j { 2.0 } else { 1.0 / (1.0 + (i + 2 * j) as f64) });
        let a = &q * d * q.clone().try_inverse().unwrap();
        let ev = sorted(real_eigenvalues(&a, None).unwrap());
        for (k, e) in ev.iter().enumerate() {
            assert!((e.re - (k + 1) as f64).abs() < 1e-9, "{e}");
            assert!(e.im.abs() < 1e-9);
        }
    }

    #[test]
    fn iteration_cap_reports_partial() {
        let m = DMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        match real_eigenvalues(&m, Some(0)) {
            Err(Error::RootSolverFailure { degree, partial, .. }) => {
                assert_eq!(degree, 6);
                assert!(partial.len() < 6);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
