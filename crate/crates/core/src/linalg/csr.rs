use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Compressed sparse row matrix with sorted, unique column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates in
    /// insertion order.
    pub fn from_triplets(n_rows: usize, n_cols: usize, entries: &[(usize, usize, T)]) -> Result<Self> {
        if let Some(&(row, col, _)) = entries.iter().find(|&&(r, c, _)| r >= n_rows || c >= n_cols) {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                n_rows,
                n_cols,
            });
        }
        let mut counts = vec![0usize; n_rows + 1];
        for &(r, _, _) in entries {
            counts[r + 1] += 1;
        }
        for i in 0..n_rows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut bucket = vec![(0usize, T::zero()); entries.len()];
        for &(r, c, v) in entries {
            bucket[next[r]] = (c, v);
            next[r] += 1;
        }

        let mut row_ptr = Vec::with_capacity(n_rows + 1);
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_ptr.push(0);
        for r in 0..n_rows {
            let row = &mut bucket[counts[r]..counts[r + 1]];
            // Stable, so duplicates keep their insertion order.
            row.sort_by_key(|&(c, _)| c);
            let mut last = usize::MAX;
            for &(c, v) in row.iter() {
                if c == last {
                    *values.last_mut().expect("duplicate follows an entry") += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                    last = c;
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_ptr: vec![0; n_rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    /// Column indices and values of one row.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(T::zero(), |k| vals[k])
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.n_cols, "matvec input length");
        assert_eq!(y.len(), self.n_rows, "matvec output length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols
                .iter()
                .zip(vals)
                .fold(T::zero(), |acc, (&j, &v)| acc + v * x[j]);
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n_rows];
        self.matvec(x, &mut y);
        y
    }

    /// `y += a * A x`
    pub fn matvec_add(&self, a: T, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.n_cols, "matvec input length");
        assert_eq!(y.len(), self.n_rows, "matvec output length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let s = cols
                .iter()
                .zip(vals)
                .fold(T::zero(), |acc, (&j, &v)| acc + v * x[j]);
            *yi += a * s;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut triplets = Vec::with_capacity(self.nnz());
        self.push_transpose_into(&mut triplets, 0, 0, T::one());
        Self::from_triplets(self.n_cols, self.n_rows, &triplets).expect("transpose indices in range")
    }

    /// Appends `scale * A` shifted by `(row_off, col_off)`.
    pub fn push_into(&self, out: &mut Vec<(usize, usize, T)>, row_off: usize, col_off: usize, scale: T) {
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            out.extend(cols.iter().zip(vals).map(|(&j, &v)| (row_off + i, col_off + j, scale * v)));
        }
    }

    /// Appends `scale * A^T` shifted by `(row_off, col_off)`.
    pub fn push_transpose_into(&self, out: &mut Vec<(usize, usize, T)>, row_off: usize, col_off: usize, scale: T) {
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            out.extend(cols.iter().zip(vals).map(|(&j, &v)| (row_off + j, col_off + i, scale * v)));
        }
    }

    /// Largest `|A_ij - A_ji|`, or infinity for non-square matrices.
    pub fn asymmetry(&self) -> T {
        if self.n_rows != self.n_cols {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.n_cols]; self.n_rows];
        for (i, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                row[j] = v;
            }
        }
        d
    }

    /// Row sums.
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n_rows)
            .map(|i| self.row(i).1.iter().fold(T::zero(), |a, &v| a + v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(1, 1, &[(0, 0, 1.0), (0, 0, 2.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 3.0);
    }

    #[test]
    fn empty_is_zero() {
        let m = CsrMatrix::<f64>::from_triplets(3, 4, &[]).unwrap();
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.to_dense(), vec![vec![0.0; 4]; 3]);
    }

    #[test]
    fn out_of_range_rejected() {
        let err = CsrMatrix::from_triplets(2, 2, &[(0, 2, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { row: 0, col: 2, .. }));
    }

    #[test]
    fn random_triplets_match_dense_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let n = 50;
        let entries: Vec<(usize, usize, f64)> = (0..600)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut dense = vec![vec![0.0; n]; n];
        for &(i, j, v) in &entries {
            dense[i][j] += v;
        }
        let m = CsrMatrix::from_triplets(n, n, &entries).unwrap();
        let d = m.to_dense();
        for i in 0..n {
            for j in 0..n {
                assert!((d[i][j] - dense[i][j]).abs() < 1e-14);
            }
            let (cols, _) = m.row(i);
            assert!(cols.windows(2).all(|w| w[0] < w[1]));
        }
        let x: Vec<f64> = (0..n).map(|i| i as f64 * 0.1 - 2.0).collect();
        let y = m.mul_vec(&x);
        for i in 0..n {
            let e: f64 = (0..n).map(|j| dense[i][j] * x[j]).sum();
            assert!((y[i] - e).abs() < 1e-12);
        }
        let t = m.transpose();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(t.get(j, i), m.get(i, j));
            }
        }
    }

    #[test]
    fn identical_input_identical_bytes() {
        let entries = vec![(1, 0, 0.5), (0, 1, 0.25), (1, 0, 0.125), (0, 0, 1.0)];
        let a = CsrMatrix::from_triplets(2, 2, &entries).unwrap();
        let b = CsrMatrix::from_triplets(2, 2, &entries).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.asymmetry(), 0.375);
    }
}
