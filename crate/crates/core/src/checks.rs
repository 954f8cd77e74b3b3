//! Self-checks of the discretization and the time steppers, small enough to
//! run on every build.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use twofloat::TwoFloat;

use crate::assembly::{assemble_forms, Discretization};
use crate::discretization::{quadrature, MAX_EXACTNESS};
use crate::error::Result;
use crate::linalg::LdlFactor;
use crate::mesh::{unit_square, Point2};
use crate::model::{
    initial_state, manufactured_sources, AssumptionMode, Example1, ExactSolution, ManufacturedProblem, ModelParams,
    PolynomialSolution, Problem, Spd2,
};
use crate::scalar::Scalar;
use crate::steppers::{
    alg3_level, max_state_difference, rd_matrix, run, saddle_matrix, simulate, Algorithm, LoadBuilder, State, StepConfig,
    StepContext, SystemSelection,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Non-fatal findings, e.g. relaxed coefficient assumptions.
    pub warnings: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
            warnings: Vec::new(),
        }
    }

    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        quadrature_exactness(),
        source_oracle(),
        assembly_oracles(),
        reaction_block_spd(),
        saddle_structure(),
        initial_xi_consistency(),
        patch_tests(),
        decoupling_equivalence(),
        lag_correctness(),
        permissive_mode(),
    ]
}

/// `int_ref x^a y^b = a! b! / (a + b + 2)!` for every rule and every monomial
/// within its exactness.
pub fn quadrature_exactness() -> CheckOutcome {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let mut worst = 0.0f64;
    for d in 1..=MAX_EXACTNESS {
        let rule = match quadrature::<f64>(d) {
            Ok(r) => r,
            Err(e) => return CheckOutcome::new("quadrature exactness", false, format!("degree {d}: {e}")),
        };
        for a in 0..=d as u32 {
            for b in 0..=(d as u32 - a) {
                let approx: f64 = rule
                    .reference_points()
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x[0].powi(a as i32) * x[1].powi(b as i32))
                    .sum();
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                worst = worst.max((approx - exact).abs() / exact);
            }
        }
    }
    CheckOutcome::new(
        "quadrature exactness",
        worst < 1e-13,
        format!("max relative monomial error {worst:.2e}"),
    )
}

/// Largest deviation between the closed-form sources and a central
/// finite-difference application of the strong operators to the exact fields,
/// scaled by `max(1, |source|)`.
///
/// Only field values are differenced, so the oracle is independent of the
/// hand-derived derivatives.
pub fn source_fd_deviation<T: Scalar, E: ExactSolution<T>>(
    exact: &E,
    params: &ModelParams<T>,
    x: Point2<T>,
    t: T,
    step: T,
) -> T {
    let h = step;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let at = |dx: T, dy: T| Point2::new(x.x + dx, x.y + dy);

    // Second differences of a scalar field g(point).
    let hess = |g: &dyn Fn(Point2<T>) -> T| -> [[T; 2]; 2] {
        let c = g(x);
        let xx = (g(at(h, T::zero())) - two * c + g(at(-h, T::zero()))) / (h * h);
        let yy = (g(at(T::zero(), h)) - two * c + g(at(T::zero(), -h))) / (h * h);
        let xy = (g(at(h, h)) - g(at(h, -h)) - g(at(-h, h)) + g(at(-h, -h))) / (four * h * h);
        [[xx, xy], [xy, yy]]
    };
    let grad = |g: &dyn Fn(Point2<T>) -> T| -> [T; 2] {
        [
            (g(at(h, T::zero())) - g(at(-h, T::zero()))) / (two * h),
            (g(at(T::zero(), h)) - g(at(T::zero(), -h))) / (two * h),
        ]
    };
    let div_u = |y: Point2<T>, s: T| -> T {
        let dux = (exact.u(Point2::new(y.x + h, y.y), s)[0] - exact.u(Point2::new(y.x - h, y.y), s)[0]) / (two * h);
        let duy = (exact.u(Point2::new(y.x, y.y + h), s)[1] - exact.u(Point2::new(y.x, y.y - h), s)[1]) / (two * h);
        dux + duy
    };
    let ddt = |g: &dyn Fn(T) -> T| (g(t + h) - g(t - h)) / (two * h);

    let h0 = hess(&|y| exact.u(y, t)[0]);
    let h1 = hess(&|y| exact.u(y, t)[1]);
    let gp = grad(&|y| exact.p(y, t));
    let gt = grad(&|y| exact.temp(y, t));
    let (mu, lam) = (params.mu, params.lambda);
    let grad_div = [h0[0][0] + h1[0][1], h0[0][1] + h1[1][1]];
    let lap = [h0[0][0] + h0[1][1], h1[0][0] + h1[1][1]];
    let f_fd: [T; 2] = std::array::from_fn(|i| {
        -mu * lap[i] - (mu + lam) * grad_div[i] + params.alpha * gp[i] + params.beta * gt[i]
    });
    let p_t = ddt(&|s| exact.p(x, s));
    let temp_t = ddt(&|s| exact.temp(x, s));
    let div_t = ddt(&|s| div_u(x, s));
    let hp = hess(&|y| exact.p(y, t));
    let ht = hess(&|y| exact.temp(y, t));
    let g_fd = params.c0 * p_t - params.b0 * temp_t + params.alpha * div_t + params.permeability.neg_div_grad(hp);
    let hs_fd =
        params.a0 * temp_t - params.b0 * p_t + params.beta * div_t + params.conductivity.neg_div_grad(ht);

    let s = manufactured_sources(exact, params, x, t);
    let dev = |a: T, b: T| (a - b).abs() / T::one().max(a.abs());
    dev(s.f[0], f_fd[0])
        .max(dev(s.f[1], f_fd[1]))
        .max(dev(s.g, g_fd))
        .max(dev(s.hs, hs_fd))
}

/// Largest [`source_fd_deviation`] for the trigonometric benchmark over
/// `count` seeded random points of `[0, 1]^2 x [0, 1]`.
pub fn source_oracle_max<T: Scalar>(params: &ModelParams<T>, count: usize, step: f64, seed: u64) -> T {
    let exact = Example1::new(params);
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (x, y, t): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
            source_fd_deviation(&exact, params, Point2::new(T::lit(x), T::lit(y)), T::lit(t), T::lit(step))
        })
        .fold(T::zero(), T::max)
}

pub fn source_oracle() -> CheckOutcome {
    // Double-double arithmetic keeps the 1e-5 step free of cancellation.
    let params = ModelParams::<TwoFloat>::benchmark();
    let worst = source_oracle_max(&params, 200, 1e-5, 7).hi();
    CheckOutcome::new(
        "source derivation oracle",
        worst < 1e-6,
        format!("max scaled deviation {worst:.2e} over 200 points"),
    )
}

/// Mass matrices sum to the domain area, stiffness rows sum to zero and a
/// rigid translation has no elastic energy.
pub fn assembly_oracles() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let params = ModelParams::<f64>::benchmark();
        let mut worst = 0.0f64;
        for (k, l) in [(2, 1), (3, 2)] {
            let disc = Discretization::new(unit_square(4)?, k, l)?;
            let forms = assemble_forms(&disc, &params)?;
            let area: f64 = forms.mass_w.values().iter().sum();
            let area_xi: f64 = forms.mass_xi.values().iter().sum();
            worst = worst.max((area - 1.0).abs()).max((area_xi - 1.0).abs());
            for m in [&forms.stiff_p, &forms.stiff_t] {
                worst = m.row_sums().iter().fold(worst, |w, v| w.max(v.abs()));
            }
            // A rigid translation has no strain.
            let shift: Vec<f64> = (0..disc.n_u()).map(|d| if d < disc.u.n_nodes() { 1.0 } else { 0.0 }).collect();
            worst = forms.a_elast.mul_vec(&shift).iter().fold(worst, |w, v| w.max(v.abs()));
        }
        Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
    })();
    CheckOutcome::from_result("assembly oracles", r)
}

/// Draws parameters satisfying the positivity and ordering assumptions.
pub fn random_admissible_params(rng: &mut StdRng) -> ModelParams<f64> {
    let young = 10f64.powf(rng.gen_range(-2.0..2.0));
    let poisson = rng.gen_range(0.01..0.4999);
    let b0 = rng.gen_range(0.0..1.0);
    let a0 = b0 + rng.gen_range(1e-6..1.0);
    let c0 = b0 + rng.gen_range(1e-6..1.0);
    let k = 10f64.powf(rng.gen_range(-9.0..1.0));
    ModelParams::from_young_poisson(
        young,
        poisson,
        rng.gen_range(1e-3..1.0),
        rng.gen_range(1e-3..1.0),
        a0,
        b0,
        c0,
        Spd2::isotropic(k),
        Spd2::isotropic(k),
    )
    .expect("sampled Poisson ratio lies in (0, 0.5)")
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
pub fn sym2_eigenvalues(m: [[f64; 2]; 2]) -> [f64; 2] {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let rad = (0.25 * (m[0][0] - m[1][1]).powi(2) + m[0][1] * m[1][0]).sqrt();
    [mean - rad, mean + rad]
}

pub fn reaction_block_spd() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let mut rng = StdRng::seed_from_u64(11);
        let mut min_eig = f64::INFINITY;
        for _ in 0..1000 {
            let params = random_admissible_params(&mut rng);
            params.validate(AssumptionMode::Strict)?;
            let m = params.reaction_matrix();
            min_eig = min_eig.min(sym2_eigenvalues(m)[0]);
        }
        // The assembled block on a small mesh must factor with positive pivots.
        let params = ModelParams::<f64>::benchmark();
        let disc = Discretization::new(unit_square(4)?, 2, 1)?;
        let forms = assemble_forms(&disc, &params)?;
        let a = rd_matrix(&forms, &params, 0.25)?;
        let (pos, neg) = LdlFactor::new(&a, "reaction-diffusion")?.inertia();
        Ok((
            min_eig > 0.0 && neg == 0 && a.asymmetry() < 1e-14,
            format!("min eigenvalue over 1000 draws {min_eig:.2e}; assembled pivots {pos}+/{neg}-"),
        ))
    })();
    CheckOutcome::from_result("reaction-diffusion block SPD", r)
}

pub fn saddle_structure() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let params = ModelParams::<f64>::benchmark();
        let mut ok = true;
        let mut notes = Vec::new();
        for (n, k) in [(2, 2), (4, 2), (8, 2), (4, 3)] {
            let disc = Discretization::new(unit_square(n)?, k, k - 1)?;
            let forms = assemble_forms(&disc, &params)?;
            let a = saddle_matrix(&forms, &params)?;
            let sys = crate::assembly::DirichletSystem::with_unit_diagonal(&a, &disc.u_fixed)?;
            let (pos, neg) = LdlFactor::new(&sys.matrix, "saddle")?.inertia();
            // Symmetric quasi-definite: one positive pivot per displacement dof,
            // one negative per xi dof.
            let good = a.asymmetry() < 1e-13 && pos == disc.n_u() && neg == disc.n_xi();
            ok &= good;
            notes.push(format!("n={n},k={k}:{pos}+/{neg}-"));
        }
        Ok((ok, notes.join(" ")))
    })();
    CheckOutcome::from_result("saddle matrix symmetric and nonsingular", r)
}

/// The interpolated `xi^0` equals `-lambda div u0 + alpha p0 + beta T0` at
/// every `xi` node.
pub fn initial_xi_consistency() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let params = ModelParams::<f64>::benchmark();
        let problem = ManufacturedProblem::example1(params);
        let disc = Discretization::new(unit_square(4)?, 2, 1)?;
        let s = initial_state(&disc, &problem);
        let worst = disc
            .xi
            .node_coords
            .iter()
            .zip(&s.xi)
            .map(|(&x, &v)| {
                let e = &problem.exact;
                let target = -params.lambda * e.div_u(x, 0.0) + params.alpha * e.p(x, 0.0) + params.beta * e.temp(x, 0.0);
                (v - target).abs()
            })
            .fold(0.0, f64::max);
        Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
    })();
    CheckOutcome::from_result("initial xi consistency", r)
}

/// Largest coefficient difference between a final state and the nodal
/// interpolant of an exact solution at the same time.
pub fn max_interpolation_gap<E: ExactSolution<f64>>(
    disc: &Discretization<f64>,
    state: &State<f64>,
    exact: &E,
    params: &ModelParams<f64>,
) -> f64 {
    let t = state.t;
    let u = disc.u.interpolate_vector(|x| exact.u(x, t));
    let xi = disc.xi.interpolate_scalar(|x| exact.xi(params, x, t));
    let p = disc.w.interpolate_scalar(|x| exact.p(x, t));
    let temp = disc.w.interpolate_scalar(|x| exact.temp(x, t));
    let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    gap(&state.u, &u)
        .max(gap(&state.xi, &xi))
        .max(gap(&state.p, &p))
        .max(gap(&state.temp, &temp))
}

pub fn patch_tests() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let params = ModelParams::<f64>::benchmark();
        let mut worst = 0.0f64;
        for (k, l) in [(2, 1), (3, 2)] {
            let problem = ManufacturedProblem::new(params, PolynomialSolution::with_degrees(k, l, &params), true);
            let disc = Discretization::new(unit_square(3)?, k, l)?;
            let forms = assemble_forms(&disc, &params)?;
            for alg in Algorithm::ALL {
                let out = run(&disc, &forms, &problem, &StepConfig::new(alg, 0.25, 1.0))?;
                worst = worst.max(max_interpolation_gap(&disc, &out.state, &problem.exact, &params));
            }
        }
        Ok((worst < 1e-9, format!("max coefficient error {worst:.2e} (4 algorithms, k=2,3)")))
    })();
    CheckOutcome::from_result("patch test", r)
}

pub fn decoupling_equivalence() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let mut params = ModelParams::<f64>::benchmark();
        params.alpha = 0.0;
        params.beta = 0.0;
        let problem = ManufacturedProblem::example1(params);
        let disc = Discretization::new(unit_square(4)?, 2, 1)?;
        let forms = assemble_forms(&disc, &params)?;
        let trajectory = |alg| -> Result<_> {
            let mut cfg = StepConfig::new(alg, 0.125, 1.0);
            cfg.mode = AssumptionMode::Permissive;
            cfg.keep_trajectory = true;
            Ok(run(&disc, &forms, &problem, &cfg)?.trajectory.expect("trajectory requested"))
        };
        let reference = trajectory(Algorithm::Coupled)?;
        let mut worst = 0.0f64;
        for alg in Algorithm::SPLIT {
            for (a, b) in trajectory(alg)?.iter().zip(&reference) {
                worst = worst.max(max_state_difference(a, b));
            }
        }
        Ok((worst < 1e-10, format!("max difference to the monolithic trajectory {worst:.2e}")))
    })();
    CheckOutcome::from_result("alpha = beta = 0 equivalence", r)
}

/// Poisons the new displacement and `xi` inside an Algorithm 3 level and
/// checks the pressure and temperature do not change.
pub fn lag_correctness() -> CheckOutcome {
    let r = (|| -> Result<(bool, String)> {
        let params = ModelParams::<f64>::benchmark();
        let problem = ManufacturedProblem::example1(params);
        let disc = Discretization::new(unit_square(4)?, 2, 1)?;
        let forms = assemble_forms(&disc, &params)?;
        let mut cfg = StepConfig::new(Algorithm::Alg3, 0.25, 0.5);
        cfg.keep_trajectory = true;
        let traj = run(&disc, &forms, &problem, &cfg)?.trajectory.expect("trajectory requested");
        let ctx = StepContext::new(&disc, &forms, &params, 0.25, SystemSelection::for_run(Algorithm::Alg3, cfg.initial_solver), 1)?;
        let loads = LoadBuilder::new(&disc, problem.has_traction())?.build(&disc, &problem, 0.75);
        let (clean, _) = alg3_level(&ctx, &traj[2], &loads, 1, false)?;
        let (poisoned, _) = alg3_level(&ctx, &traj[2], &loads, 1, true)?;
        let untouched = clean.p == poisoned.p && clean.temp == poisoned.temp;
        let poisoned_ok = poisoned.u.iter().all(|v| v.is_nan());
        Ok((
            untouched && poisoned_ok,
            format!("pressure/temperature bitwise unchanged: {untouched}"),
        ))
    })();
    CheckOutcome::from_result("lag correctness", r)
}

/// Degenerate storage coefficients run in permissive mode with a warning.
pub fn permissive_mode() -> CheckOutcome {
    let r = (|| -> Result<(bool, String, Vec<String>)> {
        let mut params = ModelParams::<f64>::benchmark();
        params.a0 = 0.0;
        params.b0 = 0.0;
        params.c0 = 0.0;
        let strict_rejects = params.validate(AssumptionMode::Strict).is_err();
        let problem = ManufacturedProblem::example1(params);
        let disc = Discretization::new(unit_square(2)?, 2, 1)?;
        let mut cfg = StepConfig::new(Algorithm::Alg3, 0.5, 1.0);
        cfg.mode = AssumptionMode::Permissive;
        let out = simulate(&disc, &problem, &cfg)?;
        let ok = strict_rejects && !out.warnings.is_empty() && out.state.is_finite();
        Ok((ok, format!("strict mode rejects: {strict_rejects}; permissive run finite"), out.warnings))
    })();
    match r {
        Ok((passed, detail, warnings)) => CheckOutcome {
            name: "permissive assumption mode",
            passed,
            detail,
            warnings,
        },
        Err(e) => CheckOutcome::new("permissive assumption mode", false, format!("error: {e}")),
    }
}
