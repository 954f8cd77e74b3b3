//! Bilinear forms, load vectors and Dirichlet constraints.

use crate::discretization::{
    build_dofmap, gauss_legendre_unit, quadrature, AffineMap, BoundarySelector, DofMap, SpaceKind, Tabulation,
    MAX_EXACTNESS,
};
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::mesh::{BoundaryTag, Point2, TriMesh};
use crate::model::{ModelParams, Spd2};
use crate::scalar::Scalar;

/// Quadrature exactness for loads, tractions and error norms. Sources and
/// exact solutions are trigonometric, so this stays well above the element degree.
pub const LOAD_EXACTNESS: usize = 8;

/// Gauss-Legendre points per boundary edge.
const EDGE_POINTS: usize = 8;

/// A mesh together with the three finite element spaces of the four-field
/// problem and their constrained dofs.
#[derive(Debug, Clone)]
pub struct Discretization<T> {
    pub mesh: TriMesh<T>,
    /// Vector `P_k`.
    pub u: DofMap<T>,
    /// Scalar `P_{k-1}`, unconstrained.
    pub xi: DofMap<T>,
    /// Scalar `P_l`, shared by pressure and temperature.
    pub w: DofMap<T>,
    /// Displacement dofs on `GammaD`.
    pub u_fixed: Vec<usize>,
    /// Pressure/temperature dofs on the whole boundary.
    pub w_fixed: Vec<usize>,
}

impl<T: Scalar> Discretization<T> {
    pub fn new(mesh: TriMesh<T>, k: usize, l: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedDegree(k));
        }
        let u = build_dofmap(&mesh, SpaceKind::Vector, k)?;
        let xi = build_dofmap(&mesh, SpaceKind::Scalar, k - 1)?;
        let w = build_dofmap(&mesh, SpaceKind::Scalar, l)?;
        let u_fixed = u.boundary_dofs(&mesh, BoundarySelector::Tag(BoundaryTag::GammaD));
        let w_fixed = w.boundary_dofs(&mesh, BoundarySelector::Whole);
        if u_fixed.is_empty() {
            return Err(Error::InvalidMesh("no GammaD edges: displacement is not constrained".into()));
        }
        Ok(Self {
            mesh,
            u,
            xi,
            w,
            u_fixed,
            w_fixed,
        })
    }

    pub fn k(&self) -> usize {
        self.u.degree()
    }

    pub fn l(&self) -> usize {
        self.w.degree()
    }

    pub fn n_u(&self) -> usize {
        self.u.n_dofs()
    }

    pub fn n_xi(&self) -> usize {
        self.xi.n_dofs()
    }

    pub fn n_w(&self) -> usize {
        self.w.n_dofs()
    }

    /// Size of the monolithic four-field system.
    pub fn n_total(&self) -> usize {
        self.n_u() + self.n_xi() + 2 * self.n_w()
    }
}

/// Every matrix of the discrete systems. Pressure and temperature share one
/// space, so a single mass matrix serves for `M_p`, `M_T` and `M_pT`, and a
/// single rectangular one for `M_xi_p` and `M_xi_T`.
#[derive(Debug, Clone)]
pub struct FormSet<T> {
    /// `2 mu (eps(u), eps(v))`
    pub a_elast: CsrMatrix<T>,
    /// `(div v, phi)`, rows on the displacement space, columns on `xi`.
    pub b_div: CsrMatrix<T>,
    pub mass_xi: CsrMatrix<T>,
    pub mass_w: CsrMatrix<T>,
    /// `(q, phi)`, rows on `xi`, columns on the pressure/temperature space.
    pub mass_xi_w: CsrMatrix<T>,
    /// `(K grad p, grad q)`
    pub stiff_p: CsrMatrix<T>,
    /// `(Theta grad T, grad S)`
    pub stiff_t: CsrMatrix<T>,
}

struct PhysicalBasis<T> {
    values: Vec<T>,
    grads: Vec<[T; 2]>,
}

impl<T: Scalar> PhysicalBasis<T> {
    fn new(n: usize) -> Self {
        Self {
            values: vec![T::zero(); n],
            grads: vec![[T::zero(); 2]; n],
        }
    }

    fn fill(&mut self, tab: &Tabulation<T>, q: usize, map: &AffineMap<T>) {
        self.values.copy_from_slice(tab.values_at(q));
        for (g, &r) in self.grads.iter_mut().zip(tab.grads_at(q)) {
            *g = map.grad(r);
        }
    }
}

fn tensor_form<T: Scalar>(k: &Spd2<T>, a: [T; 2], b: [T; 2]) -> T {
    let ka = k.apply(a);
    ka[0] * b[0] + ka[1] * b[1]
}

/// Assembles every matrix in [`FormSet`] with exactness `2 max(k, l)`.
pub fn assemble_forms<T: Scalar>(disc: &Discretization<T>, params: &ModelParams<T>) -> Result<FormSet<T>> {
    let mesh = &disc.mesh;
    let exactness = (2 * disc.k().max(disc.l())).min(MAX_EXACTNESS);
    let rule = quadrature::<T>(exactness)?;
    let ref_pts = rule.reference_points();
    let tab_u = Tabulation::new(&disc.u.element, &ref_pts);
    let tab_xi = Tabulation::new(&disc.xi.element, &ref_pts);
    let tab_w = Tabulation::new(&disc.w.element, &ref_pts);
    let (nu, nx, nw) = (tab_u.n_basis, tab_xi.n_basis, tab_w.n_basis);

    let mut a_loc = vec![T::zero(); 4 * nu * nu];
    let mut b_loc = vec![T::zero(); 2 * nu * nx];
    let mut mx_loc = vec![T::zero(); nx * nx];
    let mut mw_loc = vec![T::zero(); nw * nw];
    let mut mxw_loc = vec![T::zero(); nx * nw];
    let mut kp_loc = vec![T::zero(); nw * nw];
    let mut kt_loc = vec![T::zero(); nw * nw];

    let n_cells = mesh.n_triangles();
    let mut a_trip = Vec::with_capacity(n_cells * 4 * nu * nu);
    let mut b_trip = Vec::with_capacity(n_cells * 2 * nu * nx);
    let mut mx_trip = Vec::with_capacity(n_cells * nx * nx);
    let mut mw_trip = Vec::with_capacity(n_cells * nw * nw);
    let mut mxw_trip = Vec::with_capacity(n_cells * nx * nw);
    let mut kp_trip = Vec::with_capacity(n_cells * nw * nw);
    let mut kt_trip = Vec::with_capacity(n_cells * nw * nw);

    let mut bu = PhysicalBasis::new(nu);
    let mut bx = PhysicalBasis::new(nx);
    let mut bw = PhysicalBasis::new(nw);
    let mu = params.mu;

    for cell in 0..n_cells {
        let map = AffineMap::new(mesh, cell);
        let det = map.det.abs();
        for v in [
            &mut a_loc, &mut b_loc, &mut mx_loc, &mut mw_loc, &mut mxw_loc, &mut kp_loc, &mut kt_loc,
        ] {
            v.iter_mut().for_each(|x| *x = T::zero());
        }
        for (q, &w) in rule.weights.iter().enumerate() {
            let jxw = w * det;
            bu.fill(&tab_u, q, &map);
            bx.fill(&tab_xi, q, &map);
            bw.fill(&tab_w, q, &map);

            // Row (a, c), column (b, d): mu (delta_cd grad a . grad b + d_d a d_c b).
            for a in 0..nu {
                let ga = bu.grads[a];
                for b in 0..nu {
                    let gb = bu.grads[b];
                    let dot = ga[0] * gb[0] + ga[1] * gb[1];
                    for c in 0..2 {
                        for d in 0..2 {
                            let mut v = ga[d] * gb[c];
                            if c == d {
                                v += dot;
                            }
                            a_loc[(c * nu + a) * 2 * nu + d * nu + b] += mu * v * jxw;
                        }
                    }
                }
                for j in 0..nx {
                    let psi = bx.values[j] * jxw;
                    b_loc[a * nx + j] += ga[0] * psi;
                    b_loc[(nu + a) * nx + j] += ga[1] * psi;
                }
            }
            for i in 0..nx {
                let vi = bx.values[i] * jxw;
                for j in 0..nx {
                    mx_loc[i * nx + j] += vi * bx.values[j];
                }
                for j in 0..nw {
                    mxw_loc[i * nw + j] += vi * bw.values[j];
                }
            }
            for i in 0..nw {
                let vi = bw.values[i] * jxw;
                let gi = bw.grads[i];
                for j in 0..nw {
                    mw_loc[i * nw + j] += vi * bw.values[j];
                    kp_loc[i * nw + j] += tensor_form(&params.permeability, gi, bw.grads[j]) * jxw;
                    kt_loc[i * nw + j] += tensor_form(&params.conductivity, gi, bw.grads[j]) * jxw;
                }
            }
        }

        let un = disc.u.cell_nodes(cell);
        let xn = disc.xi.cell_nodes(cell);
        let wn = disc.w.cell_nodes(cell);
        let u_dof = |i: usize| disc.u.dof(un[i % nu], i / nu);
        for i in 0..2 * nu {
            let gi = u_dof(i);
            for j in 0..2 * nu {
                a_trip.push((gi, u_dof(j), a_loc[i * 2 * nu + j]));
            }
            for j in 0..nx {
                b_trip.push((gi, xn[j], b_loc[i * nx + j]));
            }
        }
        for i in 0..nx {
            for j in 0..nx {
                mx_trip.push((xn[i], xn[j], mx_loc[i * nx + j]));
            }
            for j in 0..nw {
                mxw_trip.push((xn[i], wn[j], mxw_loc[i * nw + j]));
            }
        }
        for i in 0..nw {
            for j in 0..nw {
                mw_trip.push((wn[i], wn[j], mw_loc[i * nw + j]));
                kp_trip.push((wn[i], wn[j], kp_loc[i * nw + j]));
                kt_trip.push((wn[i], wn[j], kt_loc[i * nw + j]));
            }
        }
    }

    let (n_u, n_xi, n_w) = (disc.n_u(), disc.n_xi(), disc.n_w());
    Ok(FormSet {
        a_elast: CsrMatrix::from_triplets(n_u, n_u, &a_trip)?,
        b_div: CsrMatrix::from_triplets(n_u, n_xi, &b_trip)?,
        mass_xi: CsrMatrix::from_triplets(n_xi, n_xi, &mx_trip)?,
        mass_w: CsrMatrix::from_triplets(n_w, n_w, &mw_trip)?,
        mass_xi_w: CsrMatrix::from_triplets(n_xi, n_w, &mxw_trip)?,
        stiff_p: CsrMatrix::from_triplets(n_w, n_w, &kp_trip)?,
        stiff_t: CsrMatrix::from_triplets(n_w, n_w, &kt_trip)?,
    })
}

/// Quadrature points mapped onto every cell, with weights times `|det J|`.
#[derive(Debug, Clone)]
pub struct CellQuadrature<T> {
    pub n_points: usize,
    pub points: Vec<Point2<T>>,
    pub jxw: Vec<T>,
    pub reference: Vec<[T; 2]>,
}

impl<T: Scalar> CellQuadrature<T> {
    pub fn new(mesh: &TriMesh<T>, exactness: usize) -> Result<Self> {
        let rule = quadrature::<T>(exactness)?;
        let reference = rule.reference_points();
        let nq = rule.len();
        let mut points = Vec::with_capacity(nq * mesh.n_triangles());
        let mut jxw = Vec::with_capacity(nq * mesh.n_triangles());
        for cell in 0..mesh.n_triangles() {
            let map = AffineMap::new(mesh, cell);
            for (r, &w) in reference.iter().zip(&rule.weights) {
                points.push(map.apply(*r));
                jxw.push(w * map.det.abs());
            }
        }
        Ok(Self {
            n_points: nq,
            points,
            jxw,
            reference,
        })
    }

    pub fn cell_points(&self, cell: usize) -> &[Point2<T>] {
        &self.points[cell * self.n_points..(cell + 1) * self.n_points]
    }

    pub fn cell_jxw(&self, cell: usize) -> &[T] {
        &self.jxw[cell * self.n_points..(cell + 1) * self.n_points]
    }
}

/// Precomputed data for repeatedly assembling `(f, phi_i)` on one space.
#[derive(Debug, Clone)]
pub struct LoadAssembler<T> {
    quad: CellQuadrature<T>,
    tab: Tabulation<T>,
}

impl<T: Scalar> LoadAssembler<T> {
    pub fn new(mesh: &TriMesh<T>, dofmap: &DofMap<T>, exactness: usize) -> Result<Self> {
        let quad = CellQuadrature::new(mesh, exactness)?;
        let tab = Tabulation::new(&dofmap.element, &quad.reference);
        Ok(Self { quad, tab })
    }

    pub fn quadrature(&self) -> &CellQuadrature<T> {
        &self.quad
    }

    /// Adds `scale * (f, phi_i)` into `out` for a scalar space.
    pub fn add_scalar(&self, dofmap: &DofMap<T>, out: &mut [T], scale: T, f: impl Fn(Point2<T>) -> T) {
        let n_cells = self.quad.points.len() / self.quad.n_points.max(1);
        for cell in 0..n_cells {
            let nodes = dofmap.cell_nodes(cell);
            for (q, (&x, &jxw)) in self.quad.cell_points(cell).iter().zip(self.quad.cell_jxw(cell)).enumerate() {
                let v = scale * f(x) * jxw;
                for (&node, &phi) in nodes.iter().zip(self.tab.values_at(q)) {
                    out[node] += v * phi;
                }
            }
        }
    }

    /// Adds `scale * (f, v_i)` into `out` for a vector space.
    pub fn add_vector(&self, dofmap: &DofMap<T>, out: &mut [T], scale: T, f: impl Fn(Point2<T>) -> [T; 2]) {
        let n_cells = self.quad.points.len() / self.quad.n_points.max(1);
        for cell in 0..n_cells {
            let nodes = dofmap.cell_nodes(cell);
            for (q, (&x, &jxw)) in self.quad.cell_points(cell).iter().zip(self.quad.cell_jxw(cell)).enumerate() {
                let v = f(x);
                let (v0, v1) = (scale * v[0] * jxw, scale * v[1] * jxw);
                for (&node, &phi) in nodes.iter().zip(self.tab.values_at(q)) {
                    out[dofmap.dof(node, 0)] += v0 * phi;
                    out[dofmap.dof(node, 1)] += v1 * phi;
                }
            }
        }
    }
}

/// `(f(., t), phi_i)` for a scalar space, using the load quadrature.
pub fn assemble_load<T: Scalar>(
    mesh: &TriMesh<T>,
    dofmap: &DofMap<T>,
    f: impl Fn(Point2<T>, T) -> T,
    t: T,
) -> Result<Vec<T>> {
    let asm = LoadAssembler::new(mesh, dofmap, LOAD_EXACTNESS)?;
    let mut out = vec![T::zero(); dofmap.n_dofs()];
    asm.add_scalar(dofmap, &mut out, T::one(), |x| f(x, t));
    Ok(out)
}

/// `(f(., t), v_i)` for a vector space, using the load quadrature.
pub fn assemble_vector_load<T: Scalar>(
    mesh: &TriMesh<T>,
    dofmap: &DofMap<T>,
    f: impl Fn(Point2<T>, T) -> [T; 2],
    t: T,
) -> Result<Vec<T>> {
    let asm = LoadAssembler::new(mesh, dofmap, LOAD_EXACTNESS)?;
    let mut out = vec![T::zero(); dofmap.n_dofs()];
    asm.add_vector(dofmap, &mut out, T::one(), |x| f(x, t));
    Ok(out)
}

#[derive(Debug, Clone)]
struct EdgePoint<T> {
    x: Point2<T>,
    normal: [T; 2],
    weight: T,
    nodes_offset: usize,
}

/// Precomputed data for the boundary integral `int_{GammaN} t_N . v`.
#[derive(Debug, Clone)]
pub struct TractionAssembler<T> {
    points: Vec<EdgePoint<T>>,
    /// Basis values of the owning cell at each point.
    values: Vec<T>,
    /// Global scalar nodes of the owning cell at each point.
    nodes: Vec<usize>,
    n_basis: usize,
}

impl<T: Scalar> TractionAssembler<T> {
    pub fn new(mesh: &TriMesh<T>, dofmap: &DofMap<T>) -> Self {
        let (s_nodes, s_weights) = gauss_legendre_unit::<T>(EDGE_POINTS);
        let n_basis = dofmap.nodes_per_cell();
        let owners = mesh.boundary_edge_owners();
        let mut points = Vec::new();
        let mut values = Vec::new();
        let mut nodes = Vec::new();
        let mut buf = vec![T::zero(); n_basis];
        for (edge, &(cell, _)) in mesh.boundary_edges.iter().zip(&owners) {
            if edge.tag != BoundaryTag::GammaN {
                continue;
            }
            let a = mesh.vertices[edge.vertices[0]];
            let b = mesh.vertices[edge.vertices[1]];
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let len = dx.hypot(dy);
            // Counter-clockwise boundary: outward normal is the tangent turned clockwise.
            let normal = [dy / len, -dx / len];
            let map = AffineMap::new(mesh, cell);
            for (&s, &w) in s_nodes.iter().zip(&s_weights) {
                let x = Point2::new(a.x + s * dx, a.y + s * dy);
                dofmap.element.eval(map.inverse(x), &mut buf);
                points.push(EdgePoint {
                    x,
                    normal,
                    weight: w * len,
                    nodes_offset: nodes.len(),
                });
                values.extend_from_slice(&buf);
                nodes.extend_from_slice(dofmap.cell_nodes(cell));
            }
        }
        Self {
            points,
            values,
            nodes,
            n_basis,
        }
    }

    /// Adds `int_{GammaN} traction(x, n) . v_i` into `out`.
    pub fn add(&self, dofmap: &DofMap<T>, out: &mut [T], traction: impl Fn(Point2<T>, [T; 2]) -> [T; 2]) {
        for (k, pt) in self.points.iter().enumerate() {
            let tr = traction(pt.x, pt.normal);
            let vals = &self.values[k * self.n_basis..(k + 1) * self.n_basis];
            let nodes = &self.nodes[pt.nodes_offset..pt.nodes_offset + self.n_basis];
            for (&node, &phi) in nodes.iter().zip(vals) {
                // Basis functions of other edges vanish here up to rounding; keep them
                // so the integral is exactly the cell-restricted one.
                out[dofmap.dof(node, 0)] += tr[0] * phi * pt.weight;
                out[dofmap.dof(node, 1)] += tr[1] * phi * pt.weight;
            }
        }
    }
}

/// Boundary load `int_{GammaN} traction(x, n, t) . v_i` on the displacement space.
pub fn assemble_neumann_traction<T: Scalar>(
    mesh: &TriMesh<T>,
    dofmap_u: &DofMap<T>,
    traction: impl Fn(Point2<T>, [T; 2], T) -> [T; 2],
    t: T,
) -> Vec<T> {
    let mut out = vec![T::zero(); dofmap_u.n_dofs()];
    TractionAssembler::new(mesh, dofmap_u).add(dofmap_u, &mut out, |x, n| traction(x, n, t));
    out
}

/// A square system with some dofs eliminated symmetrically.
///
/// Constrained rows and columns are removed and replaced by `diag_i` on the
/// diagonal. For prescribed values `g`, the right-hand side becomes
/// `b_free - A[free, fixed] g` on free rows and `diag_i g_i` on fixed rows, so
/// the solution takes the value `g_i` at fixed dofs. The diagonal sign can be
/// chosen to keep a quasi-definite block structure.
#[derive(Debug, Clone)]
pub struct DirichletSystem<T> {
    pub matrix: CsrMatrix<T>,
    fixed: Vec<usize>,
    diag: Vec<T>,
    /// `A[free, fixed]`, columns indexed by position in `fixed`.
    lifting: CsrMatrix<T>,
}

impl<T: Scalar> DirichletSystem<T> {
    pub fn new(a: &CsrMatrix<T>, fixed: &[usize], diag: &[T]) -> Result<Self> {
        let n = a.n_rows();
        if a.n_cols() != n || diag.len() != fixed.len() {
            return Err(Error::DimensionMismatch(format!(
                "constraining a {}x{} matrix with {} dofs and {} diagonal values",
                n,
                a.n_cols(),
                fixed.len(),
                diag.len()
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (k, &d) in fixed.iter().enumerate() {
            if d >= n {
                return Err(Error::IndexOutOfRange {
                    row: d,
                    col: d,
                    n_rows: n,
                    n_cols: n,
                });
            }
            position[d] = k;
        }
        let mut kept = Vec::with_capacity(a.nnz());
        let mut lift = Vec::new();
        for i in 0..n {
            if position[i] != usize::MAX {
                kept.push((i, i, diag[position[i]]));
                continue;
            }
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if position[j] == usize::MAX {
                    kept.push((i, j, v));
                } else {
                    lift.push((i, position[j], v));
                }
            }
        }
        Ok(Self {
            matrix: CsrMatrix::from_triplets(n, n, &kept)?,
            fixed: fixed.to_vec(),
            diag: diag.to_vec(),
            lifting: CsrMatrix::from_triplets(n, fixed.len(), &lift)?,
        })
    }

    /// Uniform diagonal value on every fixed dof.
    pub fn with_unit_diagonal(a: &CsrMatrix<T>, fixed: &[usize]) -> Result<Self> {
        Self::new(a, fixed, &vec![T::one(); fixed.len()])
    }

    pub fn fixed(&self) -> &[usize] {
        &self.fixed
    }

    /// Applies homogeneous data.
    pub fn constrain_rhs(&self, rhs: &mut [T]) {
        for &d in &self.fixed {
            rhs[d] = T::zero();
        }
    }

    /// Applies prescribed values, one per fixed dof in the order given at construction.
    pub fn constrain_rhs_with(&self, rhs: &mut [T], values: &[T]) {
        debug_assert_eq!(values.len(), self.fixed.len());
        if values.iter().any(|v| *v != T::zero()) {
            self.lifting.matvec_add(-T::one(), values, rhs);
        }
        for ((&d, &g), &s) in self.fixed.iter().zip(values).zip(&self.diag) {
            rhs[d] = s * g;
        }
    }
}

/// Homogeneous symmetric elimination of `dofs`: rows and columns zeroed,
/// unit diagonal, rhs entries zeroed.
pub fn apply_dirichlet<T: Scalar>(a: &CsrMatrix<T>, rhs: &[T], dofs: &[usize]) -> Result<(CsrMatrix<T>, Vec<T>)> {
    let sys = DirichletSystem::with_unit_diagonal(a, dofs)?;
    let mut b = rhs.to_vec();
    sys.constrain_rhs(&mut b);
    Ok((sys.matrix, b))
}
