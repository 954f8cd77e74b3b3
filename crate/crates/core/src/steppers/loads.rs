use crate::assembly::{CellQuadrature, Discretization, TractionAssembler, LOAD_EXACTNESS};
use crate::discretization::Tabulation;
use crate::error::Result;
use crate::model::Problem;
use crate::scalar::Scalar;

/// Right-hand side data of one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelLoads<T> {
    pub t: T,
    /// `(f, v) + int_{GammaN} t_N . v`
    pub f: Vec<T>,
    /// `(g, q)`
    pub g: Vec<T>,
    /// `(Hs, S)`
    pub hs: Vec<T>,
    /// Dirichlet values at `u_fixed`, `None` when homogeneous.
    pub u_bc: Option<Vec<T>>,
    /// Pressure and temperature values at `w_fixed`, `None` when homogeneous.
    pub p_bc: Option<Vec<T>>,
    pub temp_bc: Option<Vec<T>>,
}

/// Assembles [`LevelLoads`] for any time, evaluating the three sources once per
/// quadrature point.
#[derive(Debug, Clone)]
pub struct LoadBuilder<T> {
    quad: CellQuadrature<T>,
    tab_u: Tabulation<T>,
    tab_w: Tabulation<T>,
    traction: Option<TractionAssembler<T>>,
}

impl<T: Scalar> LoadBuilder<T> {
    pub fn new(disc: &Discretization<T>, with_traction: bool) -> Result<Self> {
        let quad = CellQuadrature::new(&disc.mesh, LOAD_EXACTNESS)?;
        let tab_u = Tabulation::new(&disc.u.element, &quad.reference);
        let tab_w = Tabulation::new(&disc.w.element, &quad.reference);
        let traction = with_traction.then(|| TractionAssembler::new(&disc.mesh, &disc.u));
        Ok(Self {
            quad,
            tab_u,
            tab_w,
            traction,
        })
    }

    pub fn build(&self, disc: &Discretization<T>, problem: &dyn Problem<T>, t: T) -> LevelLoads<T> {
        let mut f = vec![T::zero(); disc.n_u()];
        let mut g = vec![T::zero(); disc.n_w()];
        let mut hs = vec![T::zero(); disc.n_w()];
        for cell in 0..disc.mesh.n_triangles() {
            let un = disc.u.cell_nodes(cell);
            let wn = disc.w.cell_nodes(cell);
            for (q, (&x, &jxw)) in self.quad.cell_points(cell).iter().zip(self.quad.cell_jxw(cell)).enumerate() {
                let s = problem.sources(x, t);
                let (f0, f1) = (s.f[0] * jxw, s.f[1] * jxw);
                for (&node, &phi) in un.iter().zip(self.tab_u.values_at(q)) {
                    f[disc.u.dof(node, 0)] += f0 * phi;
                    f[disc.u.dof(node, 1)] += f1 * phi;
                }
                let (gq, hq) = (s.g * jxw, s.hs * jxw);
                for (&node, &phi) in wn.iter().zip(self.tab_w.values_at(q)) {
                    g[node] += gq * phi;
                    hs[node] += hq * phi;
                }
            }
        }
        if let Some(tr) = &self.traction {
            tr.add(&disc.u, &mut f, |x, n| problem.traction(x, n, t));
        }

        let (u_bc, p_bc, temp_bc) = if problem.has_boundary_data() {
            let nn = disc.u.n_nodes();
            let u_bc = disc
                .u_fixed
                .iter()
                .map(|&d| problem.boundary_u(disc.u.node_coords[d % nn], t)[d / nn])
                .collect();
            let p_bc = disc.w_fixed.iter().map(|&d| problem.boundary_p(disc.w.node_coords[d], t)).collect();
            let temp_bc = disc
                .w_fixed
                .iter()
                .map(|&d| problem.boundary_temp(disc.w.node_coords[d], t))
                .collect();
            (Some(u_bc), Some(p_bc), Some(temp_bc))
        } else {
            (None, None, None)
        };
        LevelLoads {
            t,
            f,
            g,
            hs,
            u_bc,
            p_bc,
            temp_bc,
        }
    }
}
