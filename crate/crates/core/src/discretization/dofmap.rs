use crate::discretization::reference::{reference_element, ReferenceElement, LOCAL_EDGES};
use crate::error::Result;
use crate::mesh::{BoundaryTag, Point2, TriMesh};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Scalar,
    /// Two components, stored blockwise: component `c` of scalar node `i` is
    /// global dof `c * n_nodes + i`.
    Vector,
}

impl SpaceKind {
    pub fn components(self) -> usize {
        match self {
            SpaceKind::Scalar => 1,
            SpaceKind::Vector => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySelector {
    Tag(BoundaryTag),
    Whole,
}

/// Continuous Lagrange degree-of-freedom layout on a triangulation.
///
/// Node numbering: mesh vertices first, then the interior nodes of each edge
/// (edges in sorted `(lo, hi)` order, nodes ordered from `lo` to `hi`), then
/// cell interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap<T> {
    pub kind: SpaceKind,
    pub element: ReferenceElement,
    n_nodes: usize,
    /// Scalar node indices, `nodes_per_cell` per triangle.
    cell_nodes: Vec<usize>,
    pub node_coords: Vec<Point2<T>>,
}

pub fn build_dofmap<T: Scalar>(mesh: &TriMesh<T>, kind: SpaceKind, degree: usize) -> Result<DofMap<T>> {
    let element = reference_element(degree)?;
    let n_vertices = mesh.n_vertices();
    let edges = mesh.edges();
    let per_edge = degree - 1;
    let per_cell = usize::from(degree == 3);
    let n_nodes = n_vertices + per_edge * edges.len() + per_cell * mesh.n_triangles();
    let npc = element.node_count();

    let edge_index = |a: usize, b: usize| -> usize {
        edges
            .binary_search(&(a.min(b), a.max(b)))
            .expect("triangle edge missing from edge list")
    };

    let mut cell_nodes = Vec::with_capacity(npc * mesh.n_triangles());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        cell_nodes.extend_from_slice(tri);
        for [la, lb] in LOCAL_EDGES {
            let (a, b) = (tri[la], tri[lb]);
            let base = n_vertices + per_edge * edge_index(a, b);
            if a < b {
                cell_nodes.extend((0..per_edge).map(|j| base + j));
            } else {
                cell_nodes.extend((0..per_edge).rev().map(|j| base + j));
            }
        }
        if per_cell == 1 {
            cell_nodes.push(n_vertices + per_edge * edges.len() + t);
        }
    }

    let mut node_coords = vec![Point2::default(); n_nodes];
    let bary = element.nodes_barycentric::<T>();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let corners = tri.map(|v| mesh.vertices[v]);
        for (local, l) in bary.iter().enumerate() {
            let node = cell_nodes[t * npc + local];
            if node < n_vertices {
                // Keep vertex coordinates bitwise identical to the mesh.
                node_coords[node] = mesh.vertices[node];
            } else {
                node_coords[node] = Point2::new(
                    l[0] * corners[0].x + l[1] * corners[1].x + l[2] * corners[2].x,
                    l[0] * corners[0].y + l[1] * corners[1].y + l[2] * corners[2].y,
                );
            }
        }
    }

    Ok(DofMap {
        kind,
        element,
        n_nodes,
        cell_nodes,
        node_coords,
    })
}

impl<T: Scalar> DofMap<T> {
    pub fn degree(&self) -> usize {
        self.element.degree()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_dofs(&self) -> usize {
        self.n_nodes * self.kind.components()
    }

    pub fn nodes_per_cell(&self) -> usize {
        self.element.node_count()
    }

    pub fn cell_nodes(&self, cell: usize) -> &[usize] {
        let n = self.nodes_per_cell();
        &self.cell_nodes[cell * n..(cell + 1) * n]
    }

    /// Global dof of component `c` at scalar node `node`.
    #[inline]
    pub fn dof(&self, node: usize, c: usize) -> usize {
        c * self.n_nodes + node
    }

    /// Global dofs whose Lagrange node lies on a selected boundary edge, sorted.
    pub fn boundary_dofs(&self, mesh: &TriMesh<T>, selector: BoundarySelector) -> Vec<usize> {
        let owners = mesh.boundary_edge_owners();
        let npc = self.nodes_per_cell();
        let k = self.degree();
        let mut nodes = Vec::new();
        for (edge, &(cell, local_edge)) in mesh.boundary_edges.iter().zip(&owners) {
            let selected = match selector {
                BoundarySelector::Whole => true,
                BoundarySelector::Tag(tag) => edge.tag == tag,
            };
            if !selected {
                continue;
            }
            nodes.extend_from_slice(&edge.vertices);
            let cell_nodes = &self.cell_nodes[cell * npc..(cell + 1) * npc];
            for j in 0..k - 1 {
                nodes.push(cell_nodes[3 + local_edge * (k - 1) + j]);
            }
        }
        nodes.sort_unstable();
        nodes.dedup();
        let mut dofs: Vec<usize> = (0..self.kind.components())
            .flat_map(|c| nodes.iter().map(move |&n| (n, c)))
            .map(|(n, c)| self.dof(n, c))
            .collect();
        dofs.sort_unstable();
        dofs
    }

    /// Nodal interpolant of a scalar function.
    pub fn interpolate_scalar(&self, f: impl Fn(Point2<T>) -> T) -> Vec<T> {
        debug_assert_eq!(self.kind, SpaceKind::Scalar);
        self.node_coords.iter().map(|&p| f(p)).collect()
    }

    /// Nodal interpolant of a vector function.
    pub fn interpolate_vector(&self, f: impl Fn(Point2<T>) -> [T; 2]) -> Vec<T> {
        debug_assert_eq!(self.kind, SpaceKind::Vector);
        let mut out = vec![T::zero(); self.n_dofs()];
        for (i, &p) in self.node_coords.iter().enumerate() {
            let v = f(p);
            out[i] = v[0];
            out[self.n_nodes + i] = v[1];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_uniform_rect, clamp_left_right};
    use rand::{Rng, SeedableRng};

    fn unit(n: usize) -> TriMesh<f64> {
        let lo = Point2::new(0.0, 0.0);
        let hi = Point2::new(1.0, 1.0);
        build_uniform_rect(n, n, lo, hi, clamp_left_right(lo, hi)).unwrap()
    }

    #[test]
    fn dof_counts_single_square() {
        let m = unit(1);
        assert_eq!(build_dofmap(&m, SpaceKind::Scalar, 1).unwrap().n_dofs(), 4);
        assert_eq!(build_dofmap(&m, SpaceKind::Scalar, 2).unwrap().n_dofs(), 9);
        assert_eq!(build_dofmap(&m, SpaceKind::Vector, 2).unwrap().n_dofs(), 18);
    }

    #[test]
    fn dof_count_formula() {
        for n in 1..5 {
            let m = unit(n);
            let (v, e, f) = (m.n_vertices(), m.edges().len(), m.n_triangles());
            for (k, expect) in [(1, v), (2, v + e), (3, v + 2 * e + f)] {
                let s = build_dofmap(&m, SpaceKind::Scalar, k).unwrap();
                assert_eq!(s.n_dofs(), expect);
                let vec = build_dofmap(&m, SpaceKind::Vector, k).unwrap();
                assert_eq!(vec.n_dofs(), 2 * expect);
            }
        }
    }

    #[test]
    fn shared_nodes_have_shared_coordinates() {
        // Conformity: every local node reached from any adjacent cell must sit at
        // the coordinates recorded for its global index.
        let m = unit(3);
        for k in 1..=3 {
            let d = build_dofmap(&m, SpaceKind::Scalar, k).unwrap();
            let bary = d.element.nodes_barycentric::<f64>();
            for t in 0..m.n_triangles() {
                let c = m.corners(t);
                for (local, &node) in d.cell_nodes(t).iter().enumerate() {
                    let l = bary[local];
                    let x = l[0] * c[0].x + l[1] * c[1].x + l[2] * c[2].x;
                    let y = l[0] * c[0].y + l[1] * c[1].y + l[2] * c[2].y;
                    let p = d.node_coords[node];
                    assert!((p.x - x).abs() < 1e-14 && (p.y - y).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn whole_boundary_p1() {
        let m = unit(1);
        let d = build_dofmap(&m, SpaceKind::Scalar, 1).unwrap();
        assert_eq!(d.boundary_dofs(&m, BoundarySelector::Whole), vec![0, 1, 2, 3]);
    }

    #[test]
    fn clamped_sides_match_coordinate_filter() {
        let m = unit(2);
        for k in 1..=3 {
            let d = build_dofmap(&m, SpaceKind::Vector, k).unwrap();
            let got = d.boundary_dofs(&m, BoundarySelector::Tag(BoundaryTag::GammaD));
            let mut expect: Vec<usize> = (0..2)
                .flat_map(|c| {
                    let d = &d;
                    d.node_coords
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.x == 0.0 || p.x == 1.0)
                        .map(move |(i, _)| d.dof(i, c))
                })
                .collect();
            expect.sort_unstable();
            assert_eq!(got, expect, "degree {k}");
        }
    }

    #[test]
    fn whole_boundary_matches_coordinate_filter() {
        let m = unit(3);
        for k in 1..=3 {
            let d = build_dofmap(&m, SpaceKind::Scalar, k).unwrap();
            let got = d.boundary_dofs(&m, BoundarySelector::Whole);
            let on = |v: f64| v.abs() < 1e-14 || (v - 1.0).abs() < 1e-14;
            let expect: Vec<usize> = (0..d.n_dofs())
                .filter(|&i| on(d.node_coords[i].x) || on(d.node_coords[i].y))
                .collect();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn numbering_is_reproducible() {
        let m = unit(4);
        for k in 1..=3 {
            let a = build_dofmap(&m, SpaceKind::Vector, k).unwrap();
            let b = build_dofmap(&m, SpaceKind::Vector, k).unwrap();
            assert_eq!(a.cell_nodes, b.cell_nodes);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let m = unit(3);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for k in 1..=3usize {
            let d = build_dofmap(&m, SpaceKind::Scalar, k).unwrap();
            // Random polynomial of total degree k.
            let coeffs: Vec<(i32, i32, f64)> = (0..=k as i32)
                .flat_map(|a| (0..=(k as i32 - a)).map(move |b| (a, b)))
                .map(|(a, b)| (a, b, rng.gen_range(-1.0..1.0)))
                .collect();
            let f = |p: Point2<f64>| -> f64 {
                coeffs.iter().map(|&(a, b, c)| c * p.x.powi(a) * p.y.powi(b)).sum()
            };
            let coef = d.interpolate_scalar(f);
            let mut vals = vec![0.0; d.nodes_per_cell()];
            for _ in 0..50 {
                let t = rng.gen_range(0..m.n_triangles());
                let (mut r, mut s): (f64, f64) = (rng.gen(), rng.gen());
                if r + s > 1.0 {
                    r = 1.0 - r;
                    s = 1.0 - s;
                }
                let c = m.corners(t);
                let p = Point2::new(
                    c[0].x + r * (c[1].x - c[0].x) + s * (c[2].x - c[0].x),
                    c[0].y + r * (c[1].y - c[0].y) + s * (c[2].y - c[0].y),
                );
                d.element.eval([r, s], &mut vals);
                let uh: f64 = d.cell_nodes(t).iter().zip(&vals).map(|(&n, v)| coef[n] * v).sum();
                assert!((uh - f(p)).abs() < 1e-11, "degree {k}");
            }
        }
    }
}
