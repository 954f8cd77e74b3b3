//! Backward-Euler time stepping: the monolithic scheme and three schemes that
//! split each step into an elasticity and a reaction-diffusion solve after a
//! shared monolithic first step.

mod loads;
mod systems;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use loads::{LevelLoads, LoadBuilder};
pub use systems::{
    coupled_matrix, coupled_step, elasticity_substep, initial_step, initial_step_with_report, rd_matrix,
    reaction_diffusion_substep, saddle_matrix, InitialStepReport, StepContext, SystemSelection,
};

use crate::assembly::{Discretization, FormSet};
use crate::error::{Error, Result};
use crate::model::{initial_state, AssumptionMode, Problem};
use crate::scalar::Scalar;

/// Coefficient vectors at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub level: usize,
    pub t: T,
    pub u: Vec<T>,
    pub xi: Vec<T>,
    pub p: Vec<T>,
    pub temp: Vec<T>,
    /// `xi` one level earlier.
    pub xi_prev: Vec<T>,
}

impl<T: Scalar> State<T> {
    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.xi).chain(&self.p).chain(&self.temp).all(|v| v.is_finite())
    }
}

/// Largest coefficient difference over `u`, `xi`, `p` and `T`.
pub fn max_state_difference<T: Scalar>(a: &State<T>, b: &State<T>) -> T {
    let pairs = [(&a.u, &b.u), (&a.xi, &b.xi), (&a.p, &b.p), (&a.temp, &b.temp)];
    pairs
        .iter()
        .flat_map(|(x, y)| x.iter().zip(y.iter()))
        .map(|(&x, &y)| (x - y).abs())
        .fold(T::zero(), T::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Monolithic solve at every level.
    Coupled,
    /// Elasticity with the previous `(p, T)`, then reaction-diffusion with the new `xi` increment.
    Alg1,
    /// Reaction-diffusion with the lagged `xi` increment, then elasticity with the new `(p, T)`.
    Alg2,
    /// Both subproblems from level-`n` data, run concurrently.
    Alg3,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Coupled, Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg3];
    pub const SPLIT: [Algorithm; 3] = [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg3];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Coupled => "coupled",
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg3 => "alg3",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "coupled" | "monolithic" => Ok(Algorithm::Coupled),
            "alg1" | "1" => Ok(Algorithm::Alg1),
            "alg2" | "2" => Ok(Algorithm::Alg2),
            "alg3" | "3" => Ok(Algorithm::Alg3),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected coupled, alg1, alg2 or alg3)"
            ))),
        }
    }
}

/// Solver for the monolithic first step of the split algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoupledSolver {
    /// Factor the coupled matrix.
    Direct,
    /// Preconditioned GMRES reusing the two subproblem factorizations.
    #[default]
    Gmres,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig<T> {
    pub dt: T,
    pub tau: T,
    pub algorithm: Algorithm,
    /// Threads for Algorithm 3; 1 runs its two solves one after the other.
    pub workers: usize,
    pub initial_solver: CoupledSolver,
    pub mode: AssumptionMode,
    /// Keep every level, not just the last one.
    pub keep_trajectory: bool,
}

impl<T: Scalar> StepConfig<T> {
    pub fn new(algorithm: Algorithm, dt: T, tau: T) -> Self {
        Self {
            dt,
            tau,
            algorithm,
            workers: if algorithm == Algorithm::Alg3 { 2 } else { 1 },
            initial_solver: CoupledSolver::default(),
            mode: AssumptionMode::Strict,
            keep_trajectory: false,
        }
    }

    /// `tau / dt`, which must be a positive integer up to `1e-12` relative.
    pub fn n_steps(&self) -> Result<usize> {
        if !(self.dt > T::zero() && self.tau > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "time step and final time must be positive (dt={}, tau={})",
                self.dt, self.tau
            )));
        }
        let ratio = self.tau / self.dt;
        let n = ratio.round();
        if (ratio - n).abs() > T::lit(1e-12) * ratio || n < T::one() {
            return Err(Error::InvalidConfig(format!(
                "final time {} is not an integer multiple of the time step {}",
                self.tau, self.dt
            )));
        }
        n.to_usize()
            .ok_or_else(|| Error::InvalidConfig(format!("step count {n} out of range")))
    }

    /// Time of level `n`.
    pub fn time_of(&self, level: usize) -> T {
        T::from_usize_lossy(level) * self.dt
    }
}

/// Accumulated wall time per phase of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTimings {
    /// Building, constraining and factoring the systems.
    pub setup: Duration,
    /// Right-hand-side data (sources, tractions, boundary values).
    pub loads: Duration,
    pub initial: Duration,
    pub elasticity: Duration,
    pub reaction_diffusion: Duration,
    pub coupled: Duration,
    /// Level time not spent inside either subproblem solve (thread hand-off).
    pub join: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub state: State<T>,
    pub timings: PhaseTimings,
    pub initial: InitialStepReport<T>,
    pub warnings: Vec<String>,
    /// Levels `0..=N` when requested.
    pub trajectory: Option<Vec<State<T>>>,
}

/// Elapsed wall time of the two solves of one split level.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LevelTimings {
    pub elasticity: Duration,
    pub reaction_diffusion: Duration,
    pub wall: Duration,
}

/// One level of Algorithm 3 from `state` (level `n`, holding `xi^{n-1}`).
///
/// The elasticity solve uses `(p^n, T^n)` and the reaction-diffusion solve the
/// lagged increment `xi^n - xi^{n-1}`, so neither reads the other's output.
/// With `poison` set, the new `(u, xi)` are overwritten with NaN as soon as
/// they exist and the elasticity solve is forced to finish first; a correct
/// lag leaves `(p, T)` untouched.
pub fn alg3_level<T: Scalar>(
    ctx: &StepContext<'_, T>,
    state: &State<T>,
    loads: &LevelLoads<T>,
    workers: usize,
    poison: bool,
) -> Result<(State<T>, LevelTimings)> {
    let start = Instant::now();
    let elasticity = || {
        let t0 = Instant::now();
        let out = elasticity_substep(ctx, &state.p, &state.temp, loads).map(|(mut u, mut xi)| {
            if poison {
                u.iter_mut().for_each(|v| *v = T::nan());
                xi.iter_mut().for_each(|v| *v = T::nan());
            }
            (u, xi)
        });
        (out, t0.elapsed())
    };
    let rd = || {
        let t0 = Instant::now();
        let diff: Vec<T> = state.xi.iter().zip(&state.xi_prev).map(|(&a, &b)| a - b).collect();
        (reaction_diffusion_substep(ctx, &state.p, &state.temp, &diff, loads), t0.elapsed())
    };
    let (e, r) = if workers >= 2 && !poison {
        std::thread::scope(|scope| {
            let h = scope.spawn(rd);
            let e = elasticity();
            (e, h.join().expect("reaction-diffusion worker panicked"))
        })
    } else {
        let e = elasticity();
        (e, rd())
    };
    let ((u, xi), te) = (e.0?, e.1);
    let ((p, temp), tr) = (r.0?, r.1);
    let next = State {
        level: state.level + 1,
        t: loads.t,
        u,
        xi,
        p,
        temp,
        xi_prev: state.xi.clone(),
    };
    Ok((
        next,
        LevelTimings {
            elasticity: te,
            reaction_diffusion: tr,
            wall: start.elapsed(),
        },
    ))
}

fn sequential_level<T: Scalar>(
    ctx: &StepContext<'_, T>,
    algorithm: Algorithm,
    state: &State<T>,
    loads: &LevelLoads<T>,
) -> Result<(State<T>, LevelTimings)> {
    let start = Instant::now();
    let diff = |new: &[T], old: &[T]| -> Vec<T> { new.iter().zip(old).map(|(&a, &b)| a - b).collect() };
    let (u, xi, p, temp, te, tr) = match algorithm {
        Algorithm::Alg1 => {
            let t0 = Instant::now();
            let (u, xi) = elasticity_substep(ctx, &state.p, &state.temp, loads)?;
            let te = t0.elapsed();
            let t0 = Instant::now();
            let (p, temp) = reaction_diffusion_substep(ctx, &state.p, &state.temp, &diff(&xi, &state.xi), loads)?;
            (u, xi, p, temp, te, t0.elapsed())
        }
        Algorithm::Alg2 => {
            let t0 = Instant::now();
            let (p, temp) =
                reaction_diffusion_substep(ctx, &state.p, &state.temp, &diff(&state.xi, &state.xi_prev), loads)?;
            let tr = t0.elapsed();
            let t0 = Instant::now();
            let (u, xi) = elasticity_substep(ctx, &p, &temp, loads)?;
            (u, xi, p, temp, t0.elapsed(), tr)
        }
        _ => unreachable!("sequential_level handles Alg1 and Alg2"),
    };
    Ok((
        State {
            level: state.level + 1,
            t: loads.t,
            u,
            xi,
            p,
            temp,
            xi_prev: state.xi.clone(),
        },
        LevelTimings {
            elasticity: te,
            reaction_diffusion: tr,
            wall: start.elapsed(),
        },
    ))
}

/// Runs `config.algorithm` from the interpolated initial data to `tau`.
///
/// Every algorithm takes the monolithic first step to level 1 and then
/// advances level `n` to `n + 1` for `n = 1..N-1`, with loads at `t_{n+1}`.
/// Algorithms 2 and 3 use `xi^1 - xi^0` as their first lagged increment.
pub fn run<T: Scalar>(
    disc: &Discretization<T>,
    forms: &FormSet<T>,
    problem: &dyn Problem<T>,
    config: &StepConfig<T>,
) -> Result<RunOutput<T>> {
    let total_start = Instant::now();
    let warnings = problem.params().validate(config.mode)?;
    let n_steps = config.n_steps()?;
    let mut timings = PhaseTimings::default();

    let t0 = Instant::now();
    let selection = SystemSelection::for_run(config.algorithm, config.initial_solver);
    let ctx = StepContext::new(disc, forms, problem.params(), config.dt, selection, config.workers)?;
    let builder = LoadBuilder::new(disc, problem.has_traction())?;
    timings.setup = t0.elapsed();

    let state0 = initial_state(disc, problem);
    let mut trajectory = config.keep_trajectory.then(|| vec![state0.clone()]);

    let t0 = Instant::now();
    let loads = builder.build(disc, problem, config.time_of(1));
    timings.loads += t0.elapsed();
    let t0 = Instant::now();
    let (mut state, initial) =
        initial_step_with_report(&ctx, &state0, &loads, config.initial_solver).map_err(|e| e.at_level(1))?;
    timings.initial = t0.elapsed();
    if let Some(tr) = trajectory.as_mut() {
        tr.push(state.clone());
    }

    for level in 2..=n_steps {
        let t0 = Instant::now();
        let loads = builder.build(disc, problem, config.time_of(level));
        timings.loads += t0.elapsed();
        let next = match config.algorithm {
            Algorithm::Coupled => {
                let t0 = Instant::now();
                let s = coupled_step(&ctx, &state, &loads);
                timings.coupled += t0.elapsed();
                s
            }
            alg => {
                let r = if alg == Algorithm::Alg3 {
                    alg3_level(&ctx, &state, &loads, config.workers, false)
                } else {
                    sequential_level(&ctx, alg, &state, &loads)
                };
                r.map(|(s, lt)| {
                    timings.elasticity += lt.elasticity;
                    timings.reaction_diffusion += lt.reaction_diffusion;
                    let busy = if alg == Algorithm::Alg3 && config.workers >= 2 {
                        lt.elasticity.max(lt.reaction_diffusion)
                    } else {
                        lt.elasticity + lt.reaction_diffusion
                    };
                    timings.join += lt.wall.saturating_sub(busy);
                    s
                })
            }
        };
        state = next.map_err(|e| e.at_level(level))?;
        if let Some(tr) = trajectory.as_mut() {
            tr.push(state.clone());
        }
    }
    if !state.is_finite() {
        return Err(Error::SolveFailed {
            system: format!("{} run", config.algorithm),
            residual: f64::NAN,
        }
        .at_level(state.level));
    }
    timings.total = total_start.elapsed();
    Ok(RunOutput {
        state,
        timings,
        initial,
        warnings,
        trajectory,
    })
}

/// Assembles the forms and calls [`run`].
pub fn simulate<T: Scalar>(
    disc: &Discretization<T>,
    problem: &dyn Problem<T>,
    config: &StepConfig<T>,
) -> Result<RunOutput<T>> {
    let forms = crate::assembly::assemble_forms(disc, problem.params())?;
    run(disc, &forms, problem, config)
}
