//! Sparse `L D L^T` factorization without pivoting, after an approximate
//! minimum degree permutation.
//!
//! Suitable for symmetric positive definite and symmetric quasi-definite
//! matrices (`[[A, B^T], [B, -C]]` with `A`, `C` positive definite), which
//! admit the factorization under any symmetric permutation.

use crate::error::{Error, Result};
use crate::linalg::csr::CsrMatrix;
use crate::scalar::Scalar;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct LdlFactor<T> {
    n: usize,
    /// `perm[k]` is the original index placed at position `k`.
    perm: Vec<usize>,
    /// Strictly lower factor, compressed by column.
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<T>,
    d: Vec<T>,
    d_inv: Vec<T>,
}

impl<T: Scalar> LdlFactor<T> {
    /// Factors a symmetric matrix. Only the pattern of the full matrix is used
    /// for ordering; values are read from the upper triangle after permutation.
    pub fn new(a: &CsrMatrix<T>, system: &str) -> Result<Self> {
        let n = a.n_rows();
        if a.n_cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{system}: LDL^T needs a square matrix, got {}x{}",
                n,
                a.n_cols()
            )));
        }
        let perm = amd_order(a);
        let mut iperm = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            iperm[p] = k;
        }

        // Upper triangle of P A P^T, by column.
        let mut col_counts = vec![0usize; n + 1];
        for i in 0..n {
            let (cols, _) = a.row(i);
            for &j in cols {
                let (pi, pj) = (iperm[i], iperm[j]);
                if pi <= pj {
                    col_counts[pj + 1] += 1;
                }
            }
        }
        for j in 0..n {
            col_counts[j + 1] += col_counts[j];
        }
        let ap = col_counts.clone();
        let mut next = col_counts;
        let mut ai = vec![0usize; ap[n]];
        let mut ax = vec![T::zero(); ap[n]];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let (pi, pj) = (iperm[i], iperm[j]);
                if pi <= pj {
                    ai[next[pj]] = pi;
                    ax[next[pj]] = v;
                    next[pj] += 1;
                }
            }
        }

        let (etree, lnz) = elimination_tree(n, &ap, &ai);
        let mut lp = vec![0usize; n + 1];
        for j in 0..n {
            lp[j + 1] = lp[j] + lnz[j];
        }
        let mut li = vec![0usize; lp[n]];
        let mut lx = vec![T::zero(); lp[n]];
        let mut d = vec![T::zero(); n];
        let mut d_inv = vec![T::zero(); n];

        // Up-looking factorization: row k of L from a sparse triangular solve
        // whose pattern is read off the elimination tree.
        let mut y_vals = vec![T::zero(); n];
        let mut y_marked = vec![false; n];
        let mut y_idx = vec![0usize; n];
        let mut elim = vec![0usize; n];
        let mut next_in_col = lp.clone();
        let scale = ax.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tiny = scale * T::epsilon() * T::lit(1e-3);

        for k in 0..n {
            let mut n_y = 0;
            for p in ap[k]..ap[k + 1] {
                let i = ai[p];
                if i == k {
                    d[k] = ax[p];
                    continue;
                }
                y_vals[i] = ax[p];
                if y_marked[i] {
                    continue;
                }
                y_marked[i] = true;
                elim[0] = i;
                let mut n_e = 1;
                let mut node = etree[i];
                while node != NONE && node < k && !y_marked[node] {
                    y_marked[node] = true;
                    elim[n_e] = node;
                    n_e += 1;
                    node = etree[node];
                }
                while n_e > 0 {
                    n_e -= 1;
                    y_idx[n_y] = elim[n_e];
                    n_y += 1;
                }
            }
            for idx in (0..n_y).rev() {
                let c = y_idx[idx];
                let yc = y_vals[c];
                let end = next_in_col[c];
                for p in lp[c]..end {
                    y_vals[li[p]] -= lx[p] * yc;
                }
                li[end] = k;
                let l = yc * d_inv[c];
                lx[end] = l;
                d[k] -= yc * l;
                next_in_col[c] += 1;
                y_vals[c] = T::zero();
                y_marked[c] = false;
            }
            if !(d[k].abs() > tiny) || !d[k].is_finite() {
                return Err(Error::SingularMatrix {
                    system: system.to_string(),
                    pivot: k,
                });
            }
            d_inv[k] = T::one() / d[k];
        }

        Ok(Self {
            n,
            perm,
            lp,
            li,
            lx,
            d,
            d_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Nonzeros in the strictly lower factor.
    pub fn factor_nnz(&self) -> usize {
        self.lx.len()
    }

    /// Number of positive and negative pivots (the inertia, since no pivot is zero).
    pub fn inertia(&self) -> (usize, usize) {
        let pos = self.d.iter().filter(|&&v| v > T::zero()).count();
        (pos, self.n - pos)
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.n, "right-hand side length");
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..self.n {
            let xj = x[j];
            if xj != T::zero() {
                for p in self.lp[j]..self.lp[j + 1] {
                    x[self.li[p]] -= self.lx[p] * xj;
                }
            }
        }
        for (xi, &di) in x.iter_mut().zip(&self.d_inv) {
            *xi *= di;
        }
        for j in (0..self.n).rev() {
            let mut s = x[j];
            for p in self.lp[j]..self.lp[j + 1] {
                s -= self.lx[p] * x[self.li[p]];
            }
            x[j] = s;
        }
        for (k, &p) in self.perm.iter().enumerate() {
            b[p] = x[k];
        }
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

fn amd_order<T: Scalar>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.n_rows();
    if n == 0 {
        return Vec::new();
    }
    // Symmetric pattern, so CSR arrays read as CSC describe the same matrix.
    match amd::order::<usize>(n, a.row_ptr(), a.col_idx(), &amd::Control::default()) {
        Ok((p, _, _)) => p,
        // The ordering only affects fill; fall back to the natural order.
        Err(_) => (0..n).collect(),
    }
}

/// Elimination tree and column counts of `L` from the upper triangle by column.
fn elimination_tree(n: usize, ap: &[usize], ai: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut etree = vec![NONE; n];
    let mut lnz = vec![0usize; n];
    let mut flag = vec![NONE; n];
    for j in 0..n {
        flag[j] = j;
        for &row in &ai[ap[j]..ap[j + 1]] {
            let mut i = row;
            if i >= j {
                continue;
            }
            while flag[i] != j {
                if etree[i] == NONE {
                    etree[i] = j;
                }
                lnz[i] += 1;
                flag[i] = j;
                i = etree[i];
            }
        }
    }
    (etree, lnz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, piv);
            b.swap(k, piv);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn two_by_two() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 2.0f64), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 2.0)]).unwrap();
        let f = LdlFactor::new(&a, "test").unwrap();
        let x = f.solve(&[3.0, 3.0]);
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_spd_matches_dense_elimination() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let n = 40;
        let b_mat: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| if rng.gen_bool(0.15) { rng.gen_range(-1.0..1.0) } else { 0.0 }).collect())
            .collect();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                dense[i][j] = (0..n).map(|k| b_mat[k][i] * b_mat[k][j]).sum::<f64>();
            }
            dense[i][i] += 1.0;
        }
        let triplets: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| dense[i][j] != 0.0)
            .map(|(i, j)| (i, j, dense[i][j]))
            .collect();
        let a = CsrMatrix::from_triplets(n, n, &triplets).unwrap();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = LdlFactor::new(&a, "spd").unwrap().solve(&rhs);
        let oracle = dense_solve(dense, rhs);
        for (a, b) in x.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn quasi_definite_inertia() {
        // [[2, 1], [1, -3]] has one positive and one negative eigenvalue.
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -3.0)]).unwrap();
        let f = LdlFactor::new(&a, "kkt").unwrap();
        assert_eq!(f.inertia(), (1, 1));
        let x = f.solve(&[3.0f64, -2.0]);
        assert!((2.0 * x[0] + x[1] - 3.0).abs() < 1e-14);
        assert!((x[0] - 3.0 * x[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn singular_reported_with_name() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        match LdlFactor::new(&a, "rank-one") {
            Err(Error::SingularMatrix { system, .. }) => assert_eq!(system, "rank-one"),
            other => panic!("expected singular error, got {other:?}"),
        }
    }
}
