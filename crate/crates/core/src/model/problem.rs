use crate::assembly::Discretization;
use crate::mesh::{build_uniform_rect, clamp_left_right, Point2, TriMesh};
use crate::model::exact::{Example1, ExactSolution};
use crate::model::params::{ModelParams, Spd2};
use crate::scalar::Scalar;
use crate::steppers::State;

/// Right-hand sides of the momentum, flow and heat equations at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceValues<T> {
    pub f: [T; 2],
    pub g: T,
    pub hs: T,
}

/// Sources obtained by applying the strong operators to an exact solution:
///
/// ```text
/// f  = -div(2 mu eps(u) + lambda div(u) I) + alpha grad p + beta grad T
/// g  = d/dt(c0 p - b0 T + alpha div u) - div(K grad p)
/// Hs = d/dt(a0 T - b0 p + beta div u) - div(Theta grad T)
/// ```
pub fn manufactured_sources<T: Scalar, E: ExactSolution<T> + ?Sized>(
    exact: &E,
    params: &ModelParams<T>,
    x: Point2<T>,
    t: T,
) -> SourceValues<T> {
    let h = exact.hess_u(x, t);
    let gp = exact.grad_p(x, t);
    let gt = exact.grad_temp(x, t);
    let mut f = [T::zero(); 2];
    for i in 0..2 {
        let lap = h[i][0][0] + h[i][1][1];
        // d_i div u = sum_j d_i d_j u_j
        let grad_div = h[0][0][i] + h[1][1][i];
        f[i] = -params.mu * lap - (params.mu + params.lambda) * grad_div + params.alpha * gp[i] + params.beta * gt[i];
    }
    let div_ut = exact.div_u_t(x, t);
    let p_t = exact.p_t(x, t);
    let temp_t = exact.temp_t(x, t);
    let g = params.c0 * p_t - params.b0 * temp_t
        + params.alpha * div_ut
        + params.permeability.neg_div_grad(exact.hess_p(x, t));
    let hs = params.a0 * temp_t - params.b0 * p_t
        + params.beta * div_ut
        + params.conductivity.neg_div_grad(exact.hess_temp(x, t));
    SourceValues { f, g, hs }
}

/// Total traction `(2 mu eps(u) + (lambda div u - alpha p - beta T) I) n`.
pub fn exact_traction<T: Scalar, E: ExactSolution<T> + ?Sized>(
    exact: &E,
    params: &ModelParams<T>,
    x: Point2<T>,
    normal: [T; 2],
    t: T,
) -> [T; 2] {
    let g = exact.grad_u(x, t);
    let iso = params.lambda * (g[0][0] + g[1][1]) - params.alpha * exact.p(x, t) - params.beta * exact.temp(x, t);
    let mut out = [T::zero(); 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = params.mu * (g[i][j] + g[j][i]);
            if i == j {
                s += iso;
            }
            out[i] += s * normal[j];
        }
    }
    out
}

/// Data of an initial-boundary value problem for the four-field system.
pub trait Problem<T: Scalar>: Send + Sync {
    fn params(&self) -> &ModelParams<T>;

    fn sources(&self, x: Point2<T>, t: T) -> SourceValues<T>;

    /// Whether a traction acts on `GammaN`.
    fn has_traction(&self) -> bool {
        false
    }

    fn traction(&self, _x: Point2<T>, _normal: [T; 2], _t: T) -> [T; 2] {
        [T::zero(); 2]
    }

    /// Whether the Dirichlet data is nonzero somewhere.
    fn has_boundary_data(&self) -> bool {
        false
    }

    fn boundary_u(&self, _x: Point2<T>, _t: T) -> [T; 2] {
        [T::zero(); 2]
    }

    fn boundary_p(&self, _x: Point2<T>, _t: T) -> T {
        T::zero()
    }

    fn boundary_temp(&self, _x: Point2<T>, _t: T) -> T {
        T::zero()
    }

    fn initial_u(&self, x: Point2<T>) -> [T; 2];
    fn initial_p(&self, x: Point2<T>) -> T;
    fn initial_temp(&self, x: Point2<T>) -> T;
    /// `-lambda div u0 + alpha p0 + beta T0`, in closed form.
    fn initial_xi(&self, x: Point2<T>) -> T;

    /// The exact solution, when known.
    fn exact(&self) -> Option<&dyn ExactSolution<T>> {
        None
    }
}

/// Problem whose data is generated from an exact solution.
#[derive(Debug, Clone)]
pub struct ManufacturedProblem<T, E> {
    pub params: ModelParams<T>,
    pub exact: E,
    /// Set when the exact solution does not vanish where Dirichlet conditions apply.
    pub nonhomogeneous: bool,
}

impl<T: Scalar> ManufacturedProblem<T, Example1<T>> {
    /// The trigonometric benchmark; its Dirichlet data is zero.
    pub fn example1(params: ModelParams<T>) -> Self {
        Self {
            exact: Example1::new(&params),
            params,
            nonhomogeneous: false,
        }
    }
}

impl<T: Scalar, E: ExactSolution<T>> ManufacturedProblem<T, E> {
    pub fn new(params: ModelParams<T>, exact: E, nonhomogeneous: bool) -> Self {
        Self {
            params,
            exact,
            nonhomogeneous,
        }
    }
}

impl<T: Scalar, E: ExactSolution<T>> Problem<T> for ManufacturedProblem<T, E> {
    fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    fn sources(&self, x: Point2<T>, t: T) -> SourceValues<T> {
        manufactured_sources(&self.exact, &self.params, x, t)
    }

    fn has_traction(&self) -> bool {
        true
    }

    fn traction(&self, x: Point2<T>, normal: [T; 2], t: T) -> [T; 2] {
        exact_traction(&self.exact, &self.params, x, normal, t)
    }

    fn has_boundary_data(&self) -> bool {
        self.nonhomogeneous
    }

    fn boundary_u(&self, x: Point2<T>, t: T) -> [T; 2] {
        self.exact.u(x, t)
    }

    fn boundary_p(&self, x: Point2<T>, t: T) -> T {
        self.exact.p(x, t)
    }

    fn boundary_temp(&self, x: Point2<T>, t: T) -> T {
        self.exact.temp(x, t)
    }

    fn initial_u(&self, x: Point2<T>) -> [T; 2] {
        self.exact.u(x, T::zero())
    }

    fn initial_p(&self, x: Point2<T>) -> T {
        self.exact.p(x, T::zero())
    }

    fn initial_temp(&self, x: Point2<T>) -> T {
        self.exact.temp(x, T::zero())
    }

    fn initial_xi(&self, x: Point2<T>) -> T {
        self.exact.xi(&self.params, x, T::zero())
    }

    fn exact(&self) -> Option<&dyn ExactSolution<T>> {
        Some(&self.exact)
    }
}

/// Geometry and discretization of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec<T> {
    pub lo: Point2<T>,
    pub hi: Point2<T>,
    /// Cells per side.
    pub n: usize,
    pub dt: T,
    pub tau: T,
}

impl<T: Scalar> DomainSpec<T> {
    /// Uniform mesh of the rectangle, clamped on its left and right sides.
    pub fn mesh(&self) -> crate::error::Result<TriMesh<T>> {
        build_uniform_rect(self.n, self.n, self.lo, self.hi, clamp_left_right(self.lo, self.hi))
    }
}

/// Injection-production reservoir: homogeneous medium on `(0, 500)^2` with
/// Gaussian wells in the flow and heat equations, no body force, and a
/// uniform initial temperature.
#[derive(Debug, Clone)]
pub struct Example2<T> {
    pub params: ModelParams<T>,
    pub well_amplitude: T,
    pub well_decay: T,
    /// Well with the positive source term.
    pub source_well: Point2<T>,
    /// Well with the negative source term.
    pub sink_well: Point2<T>,
    pub initial_temperature: T,
}

impl<T: Scalar> Example2<T> {
    pub fn new() -> Self {
        let c = T::lit;
        let params = ModelParams::from_young_poisson(
            c(24.0),
            c(0.499),
            c(0.25),
            c(0.001),
            c(0.1),
            c(3e-5),
            c(1e-3),
            Spd2::isotropic(c(3.2e-16) / c(3.2e-10)),
            Spd2::isotropic(c(2.6)),
        )
        .expect("reservoir parameters are valid");
        Self {
            params,
            well_amplitude: c(100.0),
            well_decay: c(0.001),
            source_well: Point2::new(c(150.0), c(250.0)),
            sink_well: Point2::new(c(350.0), c(250.0)),
            initial_temperature: c(100.0),
        }
    }

    /// `(0, 500)^2` with `h = 10` (50 cells per side), `dt = 0.01`, `tau = 1`.
    pub fn domain() -> DomainSpec<T> {
        DomainSpec {
            lo: Point2::new(T::zero(), T::zero()),
            hi: Point2::new(T::lit(500.0), T::lit(500.0)),
            n: 50,
            dt: T::lit(0.01),
            tau: T::one(),
        }
    }

    /// `A exp(-d |x - x_src|^2) - A exp(-d |x - x_sink|^2)`
    pub fn well_term(&self, x: Point2<T>) -> T {
        let bump = |w: Point2<T>| {
            let (dx, dy) = (x.x - w.x, x.y - w.y);
            (-self.well_decay * dx * dx - self.well_decay * dy * dy).exp()
        };
        self.well_amplitude * (bump(self.source_well) - bump(self.sink_well))
    }
}

impl<T: Scalar> Default for Example2<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Problem<T> for Example2<T> {
    fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    fn sources(&self, x: Point2<T>, _t: T) -> SourceValues<T> {
        let w = self.well_term(x);
        SourceValues {
            f: [T::zero(); 2],
            g: w,
            hs: w,
        }
    }

    fn initial_u(&self, _x: Point2<T>) -> [T; 2] {
        [T::zero(); 2]
    }

    fn initial_p(&self, _x: Point2<T>) -> T {
        T::zero()
    }

    fn initial_temp(&self, _x: Point2<T>) -> T {
        self.initial_temperature
    }

    fn initial_xi(&self, _x: Point2<T>) -> T {
        self.params.beta * self.initial_temperature
    }
}

/// No sources, no tractions and zero initial data.
#[derive(Debug, Clone)]
pub struct SourceFreeProblem<T> {
    pub params: ModelParams<T>,
}

impl<T: Scalar> Problem<T> for SourceFreeProblem<T> {
    fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    fn sources(&self, _x: Point2<T>, _t: T) -> SourceValues<T> {
        SourceValues {
            f: [T::zero(); 2],
            g: T::zero(),
            hs: T::zero(),
        }
    }

    fn initial_u(&self, _x: Point2<T>) -> [T; 2] {
        [T::zero(); 2]
    }

    fn initial_p(&self, _x: Point2<T>) -> T {
        T::zero()
    }

    fn initial_temp(&self, _x: Point2<T>) -> T {
        T::zero()
    }

    fn initial_xi(&self, _x: Point2<T>) -> T {
        T::zero()
    }
}

/// Level-0 state by nodal interpolation of the initial data. `xi_prev` is a
/// copy of `xi`.
pub fn initial_state<T: Scalar>(disc: &Discretization<T>, problem: &dyn Problem<T>) -> State<T> {
    let xi = disc.xi.interpolate_scalar(|x| problem.initial_xi(x));
    State {
        level: 0,
        t: T::zero(),
        u: disc.u.interpolate_vector(|x| problem.initial_u(x)),
        xi_prev: xi.clone(),
        xi,
        p: disc.w.interpolate_scalar(|x| problem.initial_p(x)),
        temp: disc.w.interpolate_scalar(|x| problem.initial_temp(x)),
    }
}

/// `[[c0 + a^2/l, a b/l - b0], [a b/l - b0, a0 + b^2/l]]`
pub fn rd_coefficient_matrix<T: Scalar>(params: &ModelParams<T>) -> [[T; 2]; 2] {
    params.reaction_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::unit_square;

    #[test]
    fn sources_drop_coupling_terms() {
        let mut params = ModelParams::<f64>::benchmark();
        params.alpha = 0.0;
        params.beta = 0.0;
        params.b0 = 0.0;
        let ex = Example1::new(&params);
        let x = Point2::new(0.3, 0.6);
        let t = 0.4;
        let s = manufactured_sources(&ex, &params, x, t);
        let lap = ex.hess_p(x, t);
        let expect = params.c0 * ex.p_t(x, t) - (lap[0][0] + lap[1][1]);
        assert!((s.g - expect).abs() < 1e-13);
        // K = I: -div(grad p) = 2 pi^2 p.
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((-(lap[0][0] + lap[1][1]) - 2.0 * pi2 * ex.p(x, t)).abs() < 1e-12);
    }

    #[test]
    fn example2_wells() {
        let ex = Example2::<f64>::new();
        let at = |x: f64, y: f64| ex.well_term(Point2::new(x, y));
        assert!((at(150.0, 250.0) - at(350.0, 250.0) - 200.0).abs() < 1e-12);
        assert!((ex.params.permeability.kxx - 1e-6).abs() < 1e-20);
        assert!(ex.params.b0 < ex.params.c0);
        assert!(ex.params.validate(crate::model::AssumptionMode::Strict).is_ok());
    }

    #[test]
    fn example2_initial_xi_is_constant() {
        let ex = Example2::<f64>::new();
        let d = Example2::<f64>::domain();
        let mesh = build_uniform_rect(5, 5, d.lo, d.hi, clamp_left_right(d.lo, d.hi)).unwrap();
        let disc = Discretization::new(mesh, 2, 1).unwrap();
        let s = initial_state(&disc, &ex);
        assert!(s.xi.iter().all(|&v| (v - 0.1).abs() < 1e-15));
        assert!(s.temp.iter().all(|&v| v == 100.0));
    }

    #[test]
    fn example1_initial_pressure_is_nodal() {
        let mesh = unit_square::<f64>(4).unwrap();
        let disc = Discretization::new(mesh, 2, 1).unwrap();
        let problem = ManufacturedProblem::example1(ModelParams::<f64>::benchmark());
        let s = initial_state(&disc, &problem);
        let pi = std::f64::consts::PI;
        for (v, x) in s.p.iter().zip(&disc.w.node_coords) {
            assert_eq!(*v, (pi * x.x).sin() * (pi * x.y).sin());
        }
        for (v, x) in s.xi.iter().zip(&disc.xi.node_coords) {
            let e = problem.exact.xi(&problem.params, *x, 0.0);
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_problem_gives_zero_state() {
        let mesh = unit_square::<f64>(2).unwrap();
        let disc = Discretization::new(mesh, 2, 1).unwrap();
        let s = initial_state(&disc, &SourceFreeProblem { params: ModelParams::benchmark() });
        assert!(s.u.iter().chain(&s.xi).chain(&s.p).chain(&s.temp).all(|&v| v == 0.0));
    }
}
