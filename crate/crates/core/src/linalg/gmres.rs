use crate::scalar::{axpy, dot, norm2, Scalar};

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions<T> {
    pub rel_tol: T,
    pub restart: usize,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct GmresOutcome<T> {
    pub iterations: usize,
    pub relative_residual: T,
    pub converged: bool,
}

/// Right-preconditioned restarted GMRES. `x` holds the initial guess on entry.
///
/// The reported residual is recomputed from `b - A x` at every restart.
pub fn gmres<T: Scalar>(
    apply: impl Fn(&[T], &mut [T]),
    precond: impl Fn(&[T], &mut [T]),
    b: &[T],
    x: &mut [T],
    opts: GmresOptions<T>,
) -> GmresOutcome<T> {
    let n = b.len();
    let b_norm = norm2(b);
    if b_norm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return GmresOutcome {
            iterations: 0,
            relative_residual: T::zero(),
            converged: true,
        };
    }
    let m = opts.restart.max(1);
    let mut r = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut hess = vec![vec![T::zero(); m]; m + 1];
    let mut cs = vec![T::zero(); m];
    let mut sn = vec![T::zero(); m];
    let mut g = vec![T::zero(); m + 1];
    let mut iterations = 0;

    loop {
        apply(x, &mut r);
        for (ri, &bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let beta = norm2(&r);
        let rel = beta / b_norm;
        if rel <= opts.rel_tol || iterations >= opts.max_iter || !rel.is_finite() {
            return GmresOutcome {
                iterations,
                relative_residual: rel,
                converged: rel <= opts.rel_tol,
            };
        }

        basis.clear();
        basis.push(r.iter().map(|&v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = T::zero());
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            precond(&basis[k], &mut z);
            apply(&z, &mut w);
            // Modified Gram-Schmidt.
            for (j, v) in basis.iter().enumerate() {
                let h = dot(&w, v);
                hess[j][k] = h;
                axpy(-h, v, &mut w);
            }
            let h_next = norm2(&w);
            hess[k + 1][k] = h_next;
            for j in 0..k {
                let t = cs[j] * hess[j][k] + sn[j] * hess[j + 1][k];
                hess[j + 1][k] = -sn[j] * hess[j][k] + cs[j] * hess[j + 1][k];
                hess[j][k] = t;
            }
            let denom = hess[k][k].hypot(hess[k + 1][k]);
            cs[k] = hess[k][k] / denom;
            sn[k] = hess[k + 1][k] / denom;
            hess[k][k] = denom;
            hess[k + 1][k] = T::zero();
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            iterations += 1;
            k_used = k + 1;
            if g[k + 1].abs() / b_norm <= opts.rel_tol * T::lit(0.1)
                || h_next == T::zero()
                || iterations >= opts.max_iter
            {
                break;
            }
            basis.push(w.iter().map(|&v| v / h_next).collect());
        }

        // Back substitution for the Krylov coefficients, then x += M^{-1} V y.
        let mut y = vec![T::zero(); k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= hess[i][j] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        let mut update = vec![T::zero(); n];
        for (j, &yj) in y.iter().enumerate() {
            axpy(yj, &basis[j], &mut update);
        }
        precond(&update, &mut z);
        for (xi, &zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CsrMatrix;

    #[test]
    fn nonsymmetric_tridiagonal() {
        let n = 60;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 4.0));
            if i > 0 {
                t.push((i, i - 1, -1.5));
            }
            if i + 1 < n {
                t.push((i, i + 1, -0.5));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t).unwrap();
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b = a.mul_vec(&x_true);
        let mut x = vec![0.0; n];
        let out = gmres(
            |v, out| a.matvec(v, out),
            |v, out| out.iter_mut().zip(v).for_each(|(o, &v)| *o = v / 4.0),
            &b,
            &mut x,
            GmresOptions {
                rel_tol: 1e-12,
                restart: 10,
                max_iter: 500,
            },
        );
        assert!(out.converged, "{out:?}");
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
