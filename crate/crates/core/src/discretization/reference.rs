//! Lagrange shape functions of degree 1 to 3 on the reference triangle
//! `{(x, y) : x, y >= 0, x + y <= 1}`.
//!
//! Local node order: the three vertices, then for each local edge
//! `(0,1), (1,2), (2,0)` its interior nodes ordered from the first endpoint to
//! the second, then the centroid (degree 3 only).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const LOCAL_EDGES: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceElement {
    degree: usize,
}

pub fn reference_element(degree: usize) -> Result<ReferenceElement> {
    match degree {
        1..=3 => Ok(ReferenceElement { degree }),
        _ => Err(Error::UnsupportedDegree(degree)),
    }
}

impl ReferenceElement {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn node_count(&self) -> usize {
        (self.degree + 1) * (self.degree + 2) / 2
    }

    /// Lagrange nodes in barycentric coordinates `(l0, l1, l2)`.
    pub fn nodes_barycentric<T: Scalar>(&self) -> Vec<[T; 3]> {
        let one = T::one();
        let zero = T::zero();
        let mut nodes = vec![[one, zero, zero], [zero, one, zero], [zero, zero, one]];
        let k = self.degree;
        for [a, b] in LOCAL_EDGES {
            for j in 1..k {
                let s = T::from_usize_lossy(j) / T::from_usize_lossy(k);
                let mut l = [zero; 3];
                l[a] = one - s;
                l[b] = s;
                nodes.push(l);
            }
        }
        if k == 3 {
            let third = one / T::lit(3.0);
            nodes.push([third; 3]);
        }
        nodes
    }

    /// Nodes in reference coordinates `(x, y) = (l1, l2)`.
    pub fn nodes<T: Scalar>(&self) -> Vec<[T; 2]> {
        self.nodes_barycentric::<T>()
            .into_iter()
            .map(|l| [l[1], l[2]])
            .collect()
    }

    /// Evaluates all shape functions at a reference point.
    pub fn eval<T: Scalar>(&self, xr: [T; 2], out: &mut [T]) {
        let l = bary(xr);
        let c = T::lit;
        match self.degree {
            1 => out[..3].copy_from_slice(&l),
            2 => {
                for i in 0..3 {
                    out[i] = l[i] * (c(2.0) * l[i] - T::one());
                }
                for (e, [a, b]) in LOCAL_EDGES.into_iter().enumerate() {
                    out[3 + e] = c(4.0) * l[a] * l[b];
                }
            }
            _ => {
                for i in 0..3 {
                    out[i] = c(0.5) * l[i] * (c(3.0) * l[i] - T::one()) * (c(3.0) * l[i] - c(2.0));
                }
                for (e, [a, b]) in LOCAL_EDGES.into_iter().enumerate() {
                    out[3 + 2 * e] = c(4.5) * l[a] * l[b] * (c(3.0) * l[a] - T::one());
                    out[4 + 2 * e] = c(4.5) * l[a] * l[b] * (c(3.0) * l[b] - T::one());
                }
                out[9] = c(27.0) * l[0] * l[1] * l[2];
            }
        }
    }

    /// Evaluates reference gradients `[d/dx, d/dy]` of all shape functions.
    pub fn eval_grad<T: Scalar>(&self, xr: [T; 2], out: &mut [[T; 2]]) {
        let l = bary(xr);
        let c = T::lit;
        // d(l0, l1, l2)/d(x, y)
        let dl: [[T; 2]; 3] = [[-T::one(), -T::one()], [T::one(), T::zero()], [T::zero(), T::one()]];
        let combine = |coef: [T; 3]| -> [T; 2] {
            [
                coef[0] * dl[0][0] + coef[1] * dl[1][0] + coef[2] * dl[2][0],
                coef[0] * dl[0][1] + coef[1] * dl[1][1] + coef[2] * dl[2][1],
            ]
        };
        let zero = T::zero();
        match self.degree {
            1 => {
                out[..3].copy_from_slice(&dl);
            }
            2 => {
                for i in 0..3 {
                    let mut coef = [zero; 3];
                    coef[i] = c(4.0) * l[i] - T::one();
                    out[i] = combine(coef);
                }
                for (e, [a, b]) in LOCAL_EDGES.into_iter().enumerate() {
                    let mut coef = [zero; 3];
                    coef[a] = c(4.0) * l[b];
                    coef[b] = c(4.0) * l[a];
                    out[3 + e] = combine(coef);
                }
            }
            _ => {
                for i in 0..3 {
                    // d/dl of 0.5 l (3l-1)(3l-2) = 0.5 (27 l^2 - 18 l + 2)
                    let mut coef = [zero; 3];
                    coef[i] = c(0.5) * (c(27.0) * l[i] * l[i] - c(18.0) * l[i] + c(2.0));
                    out[i] = combine(coef);
                }
                for (e, [a, b]) in LOCAL_EDGES.into_iter().enumerate() {
                    // 4.5 la lb (3 la - 1)
                    let mut coef = [zero; 3];
                    coef[a] = c(4.5) * l[b] * (c(6.0) * l[a] - T::one());
                    coef[b] = c(4.5) * l[a] * (c(3.0) * l[a] - T::one());
                    out[3 + 2 * e] = combine(coef);
                    let mut coef = [zero; 3];
                    coef[a] = c(4.5) * l[b] * (c(3.0) * l[b] - T::one());
                    coef[b] = c(4.5) * l[a] * (c(6.0) * l[b] - T::one());
                    out[4 + 2 * e] = combine(coef);
                }
                out[9] = combine([
                    c(27.0) * l[1] * l[2],
                    c(27.0) * l[0] * l[2],
                    c(27.0) * l[0] * l[1],
                ]);
            }
        }
    }
}

#[inline]
fn bary<T: Scalar>(xr: [T; 2]) -> [T; 3] {
    [T::one() - xr[0] - xr[1], xr[0], xr[1]]
}

/// Shape function values and reference gradients tabulated at a set of points.
#[derive(Debug, Clone)]
pub struct Tabulation<T> {
    pub n_basis: usize,
    pub values: Vec<T>,
    pub grads: Vec<[T; 2]>,
}

impl<T: Scalar> Tabulation<T> {
    pub fn new(element: &ReferenceElement, points: &[[T; 2]]) -> Self {
        let n = element.node_count();
        let mut values = vec![T::zero(); n * points.len()];
        let mut grads = vec![[T::zero(); 2]; n * points.len()];
        for (q, &p) in points.iter().enumerate() {
            element.eval(p, &mut values[q * n..(q + 1) * n]);
            element.eval_grad(p, &mut grads[q * n..(q + 1) * n]);
        }
        Self {
            n_basis: n,
            values,
            grads,
        }
    }

    #[inline]
    pub fn values_at(&self, q: usize) -> &[T] {
        &self.values[q * self.n_basis..(q + 1) * self.n_basis]
    }

    #[inline]
    pub fn grads_at(&self, q: usize) -> &[[T; 2]] {
        &self.grads[q * self.n_basis..(q + 1) * self.n_basis]
    }
}
