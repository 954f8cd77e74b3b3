//! Structured triangulations of axis-aligned rectangles and their regular refinement.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn midpoint(self, other: Self) -> Self {
        let half = T::lit(0.5);
        Self::new((self.x + other.x) * half, (self.y + other.y) * half)
    }

    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Partition of the boundary used by the displacement field.
///
/// Pressure and temperature are constrained on the whole boundary, so they
/// ignore the tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    GammaD,
    GammaN,
}

/// Boundary edge oriented counter-clockwise around the domain, so the outward
/// normal is the edge direction rotated by -90 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh<T> {
    pub vertices: Vec<Point2<T>>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Largest element diameter.
    pub h: T,
}

/// Tag rule used by the manufactured-solution benchmark: edges on the left and
/// right sides are clamped, top and bottom are traction boundaries.
pub fn clamp_left_right<T: Scalar>(
    lo: Point2<T>,
    hi: Point2<T>,
) -> impl Fn(Point2<T>, Point2<T>) -> BoundaryTag {
    move |a, b| {
        let on = |p: Point2<T>, x: T| (p.x - x).abs() <= T::lit(1e-12) * (hi.x - lo.x);
        if (on(a, lo.x) && on(b, lo.x)) || (on(a, hi.x) && on(b, hi.x)) {
            BoundaryTag::GammaD
        } else {
            BoundaryTag::GammaN
        }
    }
}

/// Every boundary edge clamped.
pub fn clamp_all<T>(_: Point2<T>, _: Point2<T>) -> BoundaryTag {
    BoundaryTag::GammaD
}

/// `n` by `n` unit square with the left and right sides clamped.
pub fn unit_square<T: Scalar>(n: usize) -> Result<TriMesh<T>> {
    let (lo, hi) = (Point2::new(T::zero(), T::zero()), Point2::new(T::one(), T::one()));
    build_uniform_rect(n, n, lo, hi, clamp_left_right(lo, hi))
}

/// Uniform `nx` by `ny` grid of cells, each split along its bottom-left to
/// top-right diagonal.
pub fn build_uniform_rect<T: Scalar>(
    nx: usize,
    ny: usize,
    lo: Point2<T>,
    hi: Point2<T>,
    tag_rule: impl Fn(Point2<T>, Point2<T>) -> BoundaryTag,
) -> Result<TriMesh<T>> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMesh(format!(
            "cell counts must be positive (got {nx}x{ny})"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() || !(lo.x < hi.x) || !(lo.y < hi.y) {
        return Err(Error::InvalidMesh(
            "rectangle corners must satisfy lo < hi componentwise".into(),
        ));
    }
    let dx = (hi.x - lo.x) / T::from_usize_lossy(nx);
    let dy = (hi.y - lo.y) / T::from_usize_lossy(ny);
    let idx = |i: usize, j: usize| j * (nx + 1) + i;

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            // Pin the far side to the exact corner so refinement and direct
            // construction agree bit for bit on the boundary.
            let x = if i == nx { hi.x } else { lo.x + dx * T::from_usize_lossy(i) };
            let y = if j == ny { hi.y } else { lo.y + dy * T::from_usize_lossy(j) };
            vertices.push(Point2::new(x, y));
        }
    }

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let v00 = idx(i, j);
            let v10 = idx(i + 1, j);
            let v01 = idx(i, j + 1);
            let v11 = idx(i + 1, j + 1);
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }

    let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
    let mut push = |a: usize, b: usize| {
        let tag = tag_rule(vertices[a], vertices[b]);
        boundary_edges.push(BoundaryEdge {
            vertices: [a, b],
            tag,
        });
    };
    for i in 0..nx {
        push(idx(i, 0), idx(i + 1, 0));
    }
    for j in 0..ny {
        push(idx(nx, j), idx(nx, j + 1));
    }
    for i in (0..nx).rev() {
        push(idx(i + 1, ny), idx(i, ny));
    }
    for j in (0..ny).rev() {
        push(idx(0, j + 1), idx(0, j));
    }

    let h = dx.hypot(dy);
    Ok(TriMesh {
        vertices,
        triangles,
        boundary_edges,
        h,
    })
}

/// Splits every triangle into four similar children through its edge midpoints.
pub fn refine_regular<T: Scalar>(mesh: &TriMesh<T>) -> TriMesh<T> {
    let mut vertices = mesh.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point2<T>>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            vertices.push(vertices[a].midpoint(vertices[b]));
            vertices.len() - 1
        })
    };

    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let ab = mid(a, b, &mut vertices);
        let bc = mid(b, c, &mut vertices);
        let ca = mid(c, a, &mut vertices);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }

    let mut boundary_edges = Vec::with_capacity(2 * mesh.boundary_edges.len());
    for e in &mesh.boundary_edges {
        let [a, b] = e.vertices;
        let m = mid(a, b, &mut vertices);
        boundary_edges.push(BoundaryEdge {
            vertices: [a, m],
            tag: e.tag,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [m, b],
            tag: e.tag,
        });
    }

    TriMesh {
        vertices,
        triangles,
        boundary_edges,
        h: mesh.h * T::lit(0.5),
    }
}

impl<T: Scalar> TriMesh<T> {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, tri: usize) -> [Point2<T>; 3] {
        let [a, b, c] = self.triangles[tri];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Signed area (positive for counter-clockwise orientation).
    pub fn signed_area(&self, tri: usize) -> T {
        let [a, b, c] = self.corners(tri);
        ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) * T::lit(0.5)
    }

    pub fn total_area(&self) -> T {
        (0..self.n_triangles()).fold(T::zero(), |acc, t| acc + self.signed_area(t))
    }

    /// Sorted list of undirected edges `(lo, hi)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Finds the triangle owning each boundary edge and the local index of that edge
    /// (local edge `e` joins local vertices `e` and `(e + 1) % 3`).
    pub fn boundary_edge_owners(&self) -> Vec<(usize, usize)> {
        let mut owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                owner.insert((tri[e], tri[(e + 1) % 3]), (t, e));
            }
        }
        self.boundary_edges
            .iter()
            .map(|e| owner[&(e.vertices[0], e.vertices[1])])
            .collect()
    }

    /// Checks orientation, conformity, boundary bookkeeping and the Euler relation.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMesh(msg));
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= self.vertices.len()) {
                return bad(format!("triangle {t} references a missing vertex"));
            }
            if !(self.signed_area(t) > T::zero()) {
                return bad(format!("triangle {t} is not counter-clockwise with positive area"));
            }
        }
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for tri in &self.triangles {
            for e in 0..3 {
                *directed.entry((tri[e], tri[(e + 1) % 3])).or_default() += 1;
            }
        }
        if let Some((&(a, b), _)) = directed.iter().find(|(_, &n)| n > 1) {
            return bad(format!("directed edge ({a}, {b}) used twice"));
        }
        let mut expected_boundary: Vec<(usize, usize)> = directed
            .keys()
            .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
            .copied()
            .collect();
        let mut listed: Vec<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| (e.vertices[0], e.vertices[1]))
            .collect();
        expected_boundary.sort_unstable();
        listed.sort_unstable();
        if expected_boundary != listed {
            return bad("boundary edge list does not match the mesh boundary".into());
        }
        if !self.boundary_edges.iter().any(|e| e.tag == BoundaryTag::GammaD) {
            return bad("no clamped boundary edge".into());
        }
        let n_edges = self.edges().len() as i64;
        let euler = self.vertices.len() as i64 - n_edges + self.triangles.len() as i64;
        if euler != 1 {
            return bad(format!("Euler characteristic {euler} != 1"));
        }
        Ok(())
    }

    /// Plain-text dump of vertices, triangles and tagged boundary edges.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {}", self.vertices.len());
        for v in &self.vertices {
            let _ = writeln!(out, "{:e} {:e}", v.x, v.y);
        }
        let _ = writeln!(out, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(out, "boundary_edges {}", self.boundary_edges.len());
        for e in &self.boundary_edges {
            let _ = writeln!(out, "{} {} {:?}", e.vertices[0], e.vertices[1], e.tag);
        }
        out
    }
}
