use std::time::{Duration, Instant};

use crate::assembly::{DirichletSystem, Discretization, FormSet};
use crate::error::{Error, Result};
use crate::linalg::{gmres, CsrMatrix, DirectSolver, GmresOptions, LinearSolveReport, RESIDUAL_TOLERANCE};
use crate::model::ModelParams;
use crate::scalar::{norm2, Scalar};

use super::loads::LevelLoads;
use super::{Algorithm, CoupledSolver, State};

/// `[[A, -B], [-B^T, -M_xi / lambda]]`
pub fn saddle_matrix<T: Scalar>(forms: &FormSet<T>, params: &ModelParams<T>) -> Result<CsrMatrix<T>> {
    let n_u = forms.a_elast.n_rows();
    let n_xi = forms.mass_xi.n_rows();
    let n = n_u + n_xi;
    let mut trip = Vec::with_capacity(forms.a_elast.nnz() + 2 * forms.b_div.nnz() + forms.mass_xi.nnz());
    forms.a_elast.push_into(&mut trip, 0, 0, T::one());
    forms.b_div.push_into(&mut trip, 0, n_u, -T::one());
    forms.b_div.push_transpose_into(&mut trip, n_u, 0, -T::one());
    forms.mass_xi.push_into(&mut trip, n_u, n_u, -T::one() / params.lambda);
    CsrMatrix::from_triplets(n, n, &trip)
}

/// `[[c_p M + dt K_p, c_pT M], [c_pT M, c_T M + dt K_T]]`
pub fn rd_matrix<T: Scalar>(forms: &FormSet<T>, params: &ModelParams<T>, dt: T) -> Result<CsrMatrix<T>> {
    let n_w = forms.mass_w.n_rows();
    let [[cp, cpt], [_, ct]] = params.reaction_matrix();
    let mut trip = Vec::with_capacity(4 * forms.mass_w.nnz() + 2 * forms.stiff_p.nnz());
    forms.mass_w.push_into(&mut trip, 0, 0, cp);
    forms.stiff_p.push_into(&mut trip, 0, 0, dt);
    forms.mass_w.push_into(&mut trip, 0, n_w, cpt);
    forms.mass_w.push_into(&mut trip, n_w, 0, cpt);
    forms.mass_w.push_into(&mut trip, n_w, n_w, ct);
    forms.stiff_t.push_into(&mut trip, n_w, n_w, dt);
    CsrMatrix::from_triplets(2 * n_w, 2 * n_w, &trip)
}

/// Monolithic backward-Euler matrix on `[u, xi, p, T]`, with the flow and heat
/// rows negated so that it is symmetric and quasi-definite.
pub fn coupled_matrix<T: Scalar>(forms: &FormSet<T>, params: &ModelParams<T>, dt: T) -> Result<CsrMatrix<T>> {
    let n_u = forms.a_elast.n_rows();
    let n_xi = forms.mass_xi.n_rows();
    let n_w = forms.mass_w.n_rows();
    let (o_xi, o_p, o_t) = (n_u, n_u + n_xi, n_u + n_xi + n_w);
    let n = o_t + n_w;
    let l = params.lambda;
    let (a, b) = (params.alpha / l, params.beta / l);
    let [[cp, cpt], [_, ct]] = params.reaction_matrix();

    let mut trip = Vec::new();
    forms.a_elast.push_into(&mut trip, 0, 0, T::one());
    forms.b_div.push_into(&mut trip, 0, o_xi, -T::one());
    forms.b_div.push_transpose_into(&mut trip, o_xi, 0, -T::one());
    forms.mass_xi.push_into(&mut trip, o_xi, o_xi, -T::one() / l);
    for (off, s) in [(o_p, a), (o_t, b)] {
        forms.mass_xi_w.push_into(&mut trip, o_xi, off, s);
        forms.mass_xi_w.push_transpose_into(&mut trip, off, o_xi, s);
    }
    forms.mass_w.push_into(&mut trip, o_p, o_p, -cp);
    forms.stiff_p.push_into(&mut trip, o_p, o_p, -dt);
    forms.mass_w.push_into(&mut trip, o_p, o_t, -cpt);
    forms.mass_w.push_into(&mut trip, o_t, o_p, -cpt);
    forms.mass_w.push_into(&mut trip, o_t, o_t, -ct);
    forms.stiff_t.push_into(&mut trip, o_t, o_t, -dt);
    CsrMatrix::from_triplets(n, n, &trip)
}

/// Which coupled solver is available to [`StepContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSelection {
    pub split: bool,
    pub coupled_factor: bool,
}

impl SystemSelection {
    pub fn for_run(algorithm: Algorithm, initial: CoupledSolver) -> Self {
        match algorithm {
            Algorithm::Coupled => Self {
                split: false,
                coupled_factor: true,
            },
            _ => Self {
                split: true,
                coupled_factor: initial == CoupledSolver::Direct,
            },
        }
    }

    pub fn all() -> Self {
        Self {
            split: true,
            coupled_factor: true,
        }
    }
}

struct Constrained<T> {
    sys: DirichletSystem<T>,
    solver: DirectSolver<T>,
}

impl<T: Scalar> Constrained<T> {
    fn build(matrix: &CsrMatrix<T>, fixed: &[usize], diag: &[T], name: &str) -> Result<Self> {
        let sys = DirichletSystem::new(matrix, fixed, diag)?;
        let solver = DirectSolver::new(sys.matrix.clone(), name)?;
        Ok(Self { sys, solver })
    }
}

/// Constrained and factored systems for one `(discretization, parameters, dt)`.
/// Everything here is read-only once built, so two substeps can share it
/// across threads.
pub struct StepContext<'a, T> {
    pub disc: &'a Discretization<T>,
    pub forms: &'a FormSet<T>,
    pub params: ModelParams<T>,
    pub dt: T,
    mass_w_xi: CsrMatrix<T>,
    saddle: Option<Constrained<T>>,
    rd: Option<Constrained<T>>,
    coupled_sys: DirichletSystem<T>,
    coupled_solver: Option<DirectSolver<T>>,
    /// Wall time spent factoring, by system.
    pub factor_times: Vec<(&'static str, Duration)>,
}

impl<'a, T: Scalar> StepContext<'a, T> {
    pub fn new(
        disc: &'a Discretization<T>,
        forms: &'a FormSet<T>,
        params: &ModelParams<T>,
        dt: T,
        selection: SystemSelection,
        workers: usize,
    ) -> Result<Self> {
        let (n_u, n_xi, n_w) = (disc.n_u(), disc.n_xi(), disc.n_w());
        let mut factor_times = Vec::new();

        let (saddle, rd) = if selection.split {
            let saddle_fixed = disc.u_fixed.clone();
            let rd_fixed: Vec<usize> = disc.w_fixed.iter().copied().chain(disc.w_fixed.iter().map(|d| d + n_w)).collect();
            let build_saddle = || -> Result<(Constrained<T>, Duration)> {
                let start = Instant::now();
                let m = saddle_matrix(forms, params)?;
                let c = Constrained::build(&m, &saddle_fixed, &vec![T::one(); saddle_fixed.len()], "elasticity saddle system")?;
                Ok((c, start.elapsed()))
            };
            let build_rd = || -> Result<(Constrained<T>, Duration)> {
                let start = Instant::now();
                let m = rd_matrix(forms, params, dt)?;
                let c = Constrained::build(&m, &rd_fixed, &vec![T::one(); rd_fixed.len()], "reaction-diffusion system")?;
                Ok((c, start.elapsed()))
            };
            let (s, r) = if workers >= 2 {
                std::thread::scope(|scope| {
                    let h = scope.spawn(build_rd);
                    let s = build_saddle();
                    (s, h.join().expect("reaction-diffusion setup panicked"))
                })
            } else {
                (build_saddle(), build_rd())
            };
            let (s, ts) = s?;
            let (r, tr) = r?;
            factor_times.push(("elasticity", ts));
            factor_times.push(("reaction-diffusion", tr));
            (Some(s), Some(r))
        } else {
            (None, None)
        };

        let o_p = n_u + n_xi;
        let mut fixed = disc.u_fixed.clone();
        let mut diag = vec![T::one(); fixed.len()];
        for off in [o_p, o_p + n_w] {
            fixed.extend(disc.w_fixed.iter().map(|d| d + off));
            diag.extend(std::iter::repeat_n(-T::one(), disc.w_fixed.len()));
        }
        let start = Instant::now();
        let coupled_sys = DirichletSystem::new(&coupled_matrix(forms, params, dt)?, &fixed, &diag)?;
        let coupled_solver = if selection.coupled_factor {
            let s = DirectSolver::new(coupled_sys.matrix.clone(), "coupled system")?;
            factor_times.push(("coupled", start.elapsed()));
            Some(s)
        } else {
            None
        };

        Ok(Self {
            disc,
            forms,
            params: *params,
            dt,
            mass_w_xi: forms.mass_xi_w.transpose(),
            saddle,
            rd,
            coupled_sys,
            coupled_solver,
            factor_times,
        })
    }

    pub fn has_split_systems(&self) -> bool {
        self.saddle.is_some()
    }

    pub fn coupled_system(&self) -> &DirichletSystem<T> {
        &self.coupled_sys
    }

    pub fn saddle_system(&self) -> Option<&DirichletSystem<T>> {
        self.saddle.as_ref().map(|c| &c.sys)
    }

    pub fn rd_system(&self) -> Option<&DirichletSystem<T>> {
        self.rd.as_ref().map(|c| &c.sys)
    }

    fn saddle(&self) -> Result<&Constrained<T>> {
        self.saddle
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("elasticity system was not built for this run".into()))
    }

    fn rd(&self) -> Result<&Constrained<T>> {
        self.rd
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("reaction-diffusion system was not built for this run".into()))
    }

    fn saddle_rhs(&self, p_in: &[T], temp_in: &[T], loads: &LevelLoads<T>) -> Vec<T> {
        let n_u = self.disc.n_u();
        let l = self.params.lambda;
        let mut rhs = vec![T::zero(); n_u + self.disc.n_xi()];
        rhs[..n_u].copy_from_slice(&loads.f);
        let lower = &mut rhs[n_u..];
        self.forms.mass_xi_w.matvec_add(-self.params.alpha / l, p_in, lower);
        self.forms.mass_xi_w.matvec_add(-self.params.beta / l, temp_in, lower);
        rhs
    }

    fn rd_rhs(&self, p_n: &[T], temp_n: &[T], xi_diff: &[T], loads: &LevelLoads<T>) -> Vec<T> {
        let n_w = self.disc.n_w();
        let l = self.params.lambda;
        let [[cp, cpt], [_, ct]] = self.params.reaction_matrix();
        let mut rhs = vec![T::zero(); 2 * n_w];
        let (rp, rt) = rhs.split_at_mut(n_w);
        let m = &self.forms.mass_w;
        m.matvec_add(cp, p_n, rp);
        m.matvec_add(cpt, temp_n, rp);
        m.matvec_add(cpt, p_n, rt);
        m.matvec_add(ct, temp_n, rt);
        self.mass_w_xi.matvec_add(self.params.alpha / l, xi_diff, rp);
        self.mass_w_xi.matvec_add(self.params.beta / l, xi_diff, rt);
        for (r, &g) in rp.iter_mut().zip(&loads.g) {
            *r += self.dt * g;
        }
        for (r, &h) in rt.iter_mut().zip(&loads.hs) {
            *r += self.dt * h;
        }
        rhs
    }

    fn coupled_rhs(&self, prev: &State<T>, loads: &LevelLoads<T>) -> Vec<T> {
        let (n_u, n_xi, n_w) = (self.disc.n_u(), self.disc.n_xi(), self.disc.n_w());
        let mut rhs = vec![T::zero(); n_u + n_xi + 2 * n_w];
        rhs[..n_u].copy_from_slice(&loads.f);
        // Flow and heat rows are negated; the previous-level xi enters with the
        // opposite sign of the current one.
        let mut xi_neg = prev.xi.clone();
        xi_neg.iter_mut().for_each(|v| *v = -*v);
        let rd = self.rd_rhs(&prev.p, &prev.temp, &xi_neg, loads);
        for (r, v) in rhs[n_u + n_xi..].iter_mut().zip(rd) {
            *r = -v;
        }
        rhs
    }

    fn coupled_bc(&self, loads: &LevelLoads<T>) -> Option<Vec<T>> {
        let u = loads.u_bc.as_ref()?;
        let p = loads.p_bc.as_ref()?;
        let t = loads.temp_bc.as_ref()?;
        Some(u.iter().chain(p).chain(t).copied().collect())
    }

    fn rd_bc(loads: &LevelLoads<T>) -> Option<Vec<T>> {
        let p = loads.p_bc.as_ref()?;
        let t = loads.temp_bc.as_ref()?;
        Some(p.iter().chain(t).copied().collect())
    }

    fn split_state(&self, x: &[T], prev: &State<T>, t: T) -> State<T> {
        let (n_u, n_xi, n_w) = (self.disc.n_u(), self.disc.n_xi(), self.disc.n_w());
        let (o_p, o_t) = (n_u + n_xi, n_u + n_xi + n_w);
        State {
            level: prev.level + 1,
            t,
            u: x[..n_u].to_vec(),
            xi: x[n_u..o_p].to_vec(),
            p: x[o_p..o_t].to_vec(),
            temp: x[o_t..].to_vec(),
            xi_prev: prev.xi.clone(),
        }
    }
}

fn constrain<T: Scalar>(sys: &DirichletSystem<T>, rhs: &mut [T], values: Option<&[T]>) {
    match values {
        Some(v) => sys.constrain_rhs_with(rhs, v),
        None => sys.constrain_rhs(rhs),
    }
}

/// Solves the constrained elasticity saddle system with `(p_in, T_in)` in the
/// constitutive row. Returns `(u, xi)`.
pub fn elasticity_substep<T: Scalar>(
    ctx: &StepContext<'_, T>,
    p_in: &[T],
    temp_in: &[T],
    loads: &LevelLoads<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let c = ctx.saddle()?;
    let mut rhs = ctx.saddle_rhs(p_in, temp_in, loads);
    constrain(&c.sys, &mut rhs, loads.u_bc.as_deref());
    let (mut x, _) = c.solver.solve(&rhs)?;
    let xi = x.split_off(ctx.disc.n_u());
    Ok((x, xi))
}

/// Solves the pressure-temperature system with the given `xi` increment.
/// Returns `(p, T)`.
pub fn reaction_diffusion_substep<T: Scalar>(
    ctx: &StepContext<'_, T>,
    p_n: &[T],
    temp_n: &[T],
    xi_diff: &[T],
    loads: &LevelLoads<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let c = ctx.rd()?;
    let mut rhs = ctx.rd_rhs(p_n, temp_n, xi_diff, loads);
    let bc = StepContext::rd_bc(loads);
    constrain(&c.sys, &mut rhs, bc.as_deref());
    let (mut x, _) = c.solver.solve(&rhs)?;
    let temp = x.split_off(ctx.disc.n_w());
    Ok((x, temp))
}

/// One monolithic backward-Euler step from `prev` to the time of `loads`.
pub fn coupled_step<T: Scalar>(ctx: &StepContext<'_, T>, prev: &State<T>, loads: &LevelLoads<T>) -> Result<State<T>> {
    let solver = ctx
        .coupled_solver
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("coupled system was not factored for this run".into()))?;
    let mut rhs = ctx.coupled_rhs(prev, loads);
    constrain(&ctx.coupled_sys, &mut rhs, ctx.coupled_bc(loads).as_deref());
    let (x, _) = solver.solve(&rhs)?;
    Ok(ctx.split_state(&x, prev, loads.t))
}

/// Outcome of the first (monolithic) step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStepReport<T> {
    pub solver: CoupledSolver,
    pub iterations: usize,
    pub relative_residual: T,
    /// The iterative solve missed its target and a direct solve was used instead.
    pub fell_back: bool,
}

/// The first step, shared by every algorithm: the monolithic system from level 0
/// to level 1. The returned state keeps `xi^0` as `xi_prev`.
pub fn initial_step<T: Scalar>(
    ctx: &StepContext<'_, T>,
    state0: &State<T>,
    loads: &LevelLoads<T>,
    solver: CoupledSolver,
) -> Result<State<T>> {
    initial_step_with_report(ctx, state0, loads, solver).map(|(s, _)| s)
}

pub fn initial_step_with_report<T: Scalar>(
    ctx: &StepContext<'_, T>,
    state0: &State<T>,
    loads: &LevelLoads<T>,
    solver: CoupledSolver,
) -> Result<(State<T>, InitialStepReport<T>)> {
    if solver == CoupledSolver::Direct || !ctx.has_split_systems() {
        let s = coupled_step(ctx, state0, loads)?;
        return Ok((
            s,
            InitialStepReport {
                solver: CoupledSolver::Direct,
                iterations: 0,
                relative_residual: T::zero(),
                fell_back: false,
            },
        ));
    }
    let mut rhs = ctx.coupled_rhs(state0, loads);
    constrain(&ctx.coupled_sys, &mut rhs, ctx.coupled_bc(loads).as_deref());
    let (x, rep) = block_preconditioned_gmres(ctx, &rhs)?;
    if rep.relative_residual <= T::lit(RESIDUAL_TOLERANCE) {
        return Ok((
            ctx.split_state(&x, state0, loads.t),
            InitialStepReport {
                solver: CoupledSolver::Gmres,
                iterations: rep.iterations,
                relative_residual: rep.relative_residual,
                fell_back: false,
            },
        ));
    }
    let direct = DirectSolver::new(ctx.coupled_sys.matrix.clone(), "coupled system")?;
    let (x, rep) = direct.solve(&rhs)?;
    Ok((
        ctx.split_state(&x, state0, loads.t),
        InitialStepReport {
            solver: CoupledSolver::Direct,
            iterations: rep.iterations,
            relative_residual: rep.relative_residual,
            fell_back: true,
        },
    ))
}

/// GMRES on the constrained coupled system, right-preconditioned by the block
/// lower-triangular operator built from the elasticity and reaction-diffusion
/// factorizations.
fn block_preconditioned_gmres<T: Scalar>(ctx: &StepContext<'_, T>, rhs: &[T]) -> Result<(Vec<T>, LinearSolveReport<T>)> {
    let saddle = ctx.saddle()?;
    let rd = ctx.rd()?;
    let (n_u, n_xi, n_w) = (ctx.disc.n_u(), ctx.disc.n_xi(), ctx.disc.n_w());
    let o_p = n_u + n_xi;
    let l = ctx.params.lambda;
    let (a, b) = (ctx.params.alpha / l, ctx.params.beta / l);
    let w_fixed = &ctx.disc.w_fixed;

    let precond = |r: &[T], z: &mut [T]| {
        let top = saddle.solver.factor().solve(&r[..o_p]);
        z[..o_p].copy_from_slice(&top);
        let xi = &top[n_u..];
        let mut lower = vec![T::zero(); 2 * n_w];
        {
            let (lp, lt) = lower.split_at_mut(n_w);
            ctx.mass_w_xi.matvec_add(a, xi, lp);
            ctx.mass_w_xi.matvec_add(b, xi, lt);
            for &d in w_fixed {
                lp[d] = T::zero();
                lt[d] = T::zero();
            }
        }
        for (v, &ri) in lower.iter_mut().zip(&r[o_p..]) {
            *v -= ri;
        }
        rd.solver.factor().solve_in_place(&mut lower);
        z[o_p..].copy_from_slice(&lower);
    };
    let matrix = &ctx.coupled_sys.matrix;
    let mut x = vec![T::zero(); rhs.len()];
    let outcome = gmres(
        |v, out| matrix.matvec(v, out),
        precond,
        rhs,
        &mut x,
        GmresOptions {
            rel_tol: T::lit(1e-12),
            restart: 50,
            max_iter: 200,
        },
    );
    // Residual from scratch, independent of the Krylov recurrence.
    let mut r = matrix.mul_vec(&x);
    for (ri, &bi) in r.iter_mut().zip(rhs) {
        *ri = bi - *ri;
    }
    let b_norm = norm2(rhs);
    let rel = if b_norm == T::zero() { norm2(&r) } else { norm2(&r) / b_norm };
    Ok((
        x,
        LinearSolveReport {
            relative_residual: rel,
            factor_nnz: 0,
            iterations: outcome.iterations,
        },
    ))
}
