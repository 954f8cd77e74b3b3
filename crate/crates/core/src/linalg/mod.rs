//! Sparse storage and the direct/iterative solvers used by the time steppers.

mod csr;
mod gmres;
mod ldlt;

pub use csr::CsrMatrix;
pub use gmres::{gmres, GmresOptions, GmresOutcome};
pub use ldlt::LdlFactor;

use crate::error::{Error, Result};
use crate::scalar::{norm2, Scalar};

/// Relative residual every accepted solve must reach.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSolveReport<T> {
    pub relative_residual: T,
    /// Nonzeros of the strictly lower factor (0 for purely iterative solves).
    pub factor_nnz: usize,
    /// Iterative refinement sweeps or Krylov iterations.
    pub iterations: usize,
}

/// A matrix together with its factorization, solving with a residual check
/// and a few sweeps of iterative refinement when needed.
#[derive(Debug, Clone)]
pub struct DirectSolver<T> {
    name: String,
    matrix: CsrMatrix<T>,
    factor: LdlFactor<T>,
}

impl<T: Scalar> DirectSolver<T> {
    pub fn new(matrix: CsrMatrix<T>, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let factor = LdlFactor::new(&matrix, &name)?;
        Ok(Self { name, matrix, factor })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    pub fn factor(&self) -> &LdlFactor<T> {
        &self.factor
    }

    pub fn solve(&self, b: &[T]) -> Result<(Vec<T>, LinearSolveReport<T>)> {
        let b_norm = norm2(b);
        let mut x = self.factor.solve(b);
        if b_norm == T::zero() {
            return Ok((
                x,
                LinearSolveReport {
                    relative_residual: T::zero(),
                    factor_nnz: self.factor.factor_nnz(),
                    iterations: 0,
                },
            ));
        }
        let target = T::lit(RESIDUAL_TOLERANCE);
        let mut r = vec![T::zero(); b.len()];
        let mut rel = self.residual(&x, b, &mut r) / b_norm;
        let mut sweeps = 0;
        // Refine only when the first solve is not already well inside the target.
        while rel > target * T::lit(1e-2) && sweeps < 3 {
            let dx = self.factor.solve(&r);
            let trial: Vec<T> = x.iter().zip(&dx).map(|(&a, &d)| a + d).collect();
            let mut r_trial = vec![T::zero(); b.len()];
            let rel_trial = self.residual(&trial, b, &mut r_trial) / b_norm;
            sweeps += 1;
            if !(rel_trial < rel) {
                break;
            }
            x = trial;
            r = r_trial;
            rel = rel_trial;
        }
        if !(rel <= target) {
            return Err(Error::SolveFailed {
                system: self.name.clone(),
                residual: rel.to_f64_lossy(),
            });
        }
        Ok((
            x,
            LinearSolveReport {
                relative_residual: rel,
                factor_nnz: self.factor.factor_nnz(),
                iterations: sweeps,
            },
        ))
    }

    fn residual(&self, x: &[T], b: &[T], r: &mut [T]) -> T {
        self.matrix.matvec(x, r);
        for (ri, &bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        norm2(r)
    }
}

/// Factors `a` and solves `a x = b`.
pub fn solve<T: Scalar>(a: &CsrMatrix<T>, b: &[T]) -> Result<(Vec<T>, LinearSolveReport<T>)> {
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {} for a {}x{} matrix",
            b.len(),
            a.n_rows(),
            a.n_cols()
        )));
    }
    DirectSolver::new(a.clone(), "linear system")?.solve(b)
}
