//! Reference Lagrange elements, quadrature rules and global dof layouts.

mod dofmap;
mod quadrature;
mod reference;

pub use dofmap::{build_dofmap, BoundarySelector, DofMap, SpaceKind};
pub use quadrature::{gauss_legendre_unit, quadrature, QuadratureRule, MAX_EXACTNESS};
pub use reference::{reference_element, ReferenceElement, Tabulation, LOCAL_EDGES};

use crate::mesh::{Point2, TriMesh};
use crate::scalar::Scalar;

/// Affine map from the reference triangle onto a mesh triangle.
#[derive(Debug, Clone, Copy)]
pub struct AffineMap<T> {
    pub origin: Point2<T>,
    /// Columns are the images of the reference axes.
    pub jac: [[T; 2]; 2],
    pub det: T,
    /// Inverse transpose of `jac`, maps reference gradients to physical ones.
    pub inv_t: [[T; 2]; 2],
}

impl<T: Scalar> AffineMap<T> {
    pub fn new(mesh: &TriMesh<T>, cell: usize) -> Self {
        let [a, b, c] = mesh.corners(cell);
        let jac = [[b.x - a.x, c.x - a.x], [b.y - a.y, c.y - a.y]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv_t = [
            [jac[1][1] / det, -jac[1][0] / det],
            [-jac[0][1] / det, jac[0][0] / det],
        ];
        Self {
            origin: a,
            jac,
            det,
            inv_t,
        }
    }

    #[inline]
    pub fn apply(&self, xr: [T; 2]) -> Point2<T> {
        Point2::new(
            self.origin.x + self.jac[0][0] * xr[0] + self.jac[0][1] * xr[1],
            self.origin.y + self.jac[1][0] * xr[0] + self.jac[1][1] * xr[1],
        )
    }

    #[inline]
    pub fn inverse(&self, p: Point2<T>) -> [T; 2] {
        let dx = p.x - self.origin.x;
        let dy = p.y - self.origin.y;
        // inv(J) = inv_t^T
        [
            self.inv_t[0][0] * dx + self.inv_t[1][0] * dy,
            self.inv_t[0][1] * dx + self.inv_t[1][1] * dy,
        ]
    }

    #[inline]
    pub fn grad(&self, g: [T; 2]) -> [T; 2] {
        [
            self.inv_t[0][0] * g[0] + self.inv_t[0][1] * g[1],
            self.inv_t[1][0] * g[0] + self.inv_t[1][1] * g[1],
        ]
    }
}
