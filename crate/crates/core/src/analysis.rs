//! Error norms against closed-form solutions, convergence studies and timing
//! comparisons.

use std::time::Duration;

use crate::assembly::{assemble_forms, Discretization, LOAD_EXACTNESS};
use crate::discretization::{quadrature, AffineMap, DofMap, Tabulation};
use crate::error::{Error, Result};
use crate::mesh::unit_square;
use crate::model::{ExactSolution, ModelParams, Problem};
use crate::scalar::Scalar;
use crate::steppers::{run, Algorithm, PhaseTimings, State, StepConfig};

/// Final-time errors: full `H^1` norms for `u`, `p`, `T` and the `L^2` norm for `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport<T> {
    pub t: T,
    pub u_h1: T,
    pub xi_l2: T,
    pub p_h1: T,
    pub temp_h1: T,
}

impl<T: Scalar> ErrorReport<T> {
    pub fn as_array(&self) -> [T; 4] {
        [self.u_h1, self.xi_l2, self.p_h1, self.temp_h1]
    }
}

struct FieldEval<'a, T> {
    dofmap: &'a DofMap<T>,
    tab: Tabulation<T>,
}

impl<'a, T: Scalar> FieldEval<'a, T> {
    fn new(dofmap: &'a DofMap<T>, pts: &[[T; 2]]) -> Self {
        Self {
            dofmap,
            tab: Tabulation::new(&dofmap.element, pts),
        }
    }

    /// Value and physical gradient of component `c` of `coef` at point `q` of `cell`.
    fn eval(&self, coef: &[T], cell: usize, q: usize, c: usize, map: &AffineMap<T>) -> (T, [T; 2]) {
        let mut v = T::zero();
        let mut g = [T::zero(); 2];
        for ((&node, &phi), &dphi) in self
            .dofmap
            .cell_nodes(cell)
            .iter()
            .zip(self.tab.values_at(q))
            .zip(self.tab.grads_at(q))
        {
            let a = coef[self.dofmap.dof(node, c)];
            v += a * phi;
            g[0] += a * dphi[0];
            g[1] += a * dphi[1];
        }
        (v, map.grad(g))
    }
}

/// Errors of `state` against `exact` at `state.t`, with the load quadrature.
pub fn error_report<T: Scalar>(
    disc: &Discretization<T>,
    state: &State<T>,
    exact: &dyn ExactSolution<T>,
    params: &ModelParams<T>,
) -> Result<ErrorReport<T>> {
    error_report_with(disc, state, exact, params, LOAD_EXACTNESS)
}

/// [`error_report`] with an explicit quadrature exactness.
pub fn error_report_with<T: Scalar>(
    disc: &Discretization<T>,
    state: &State<T>,
    exact: &dyn ExactSolution<T>,
    params: &ModelParams<T>,
    exactness: usize,
) -> Result<ErrorReport<T>> {
    let rule = quadrature::<T>(exactness)?;
    let pts = rule.reference_points();
    let fu = FieldEval::new(&disc.u, &pts);
    let fx = FieldEval::new(&disc.xi, &pts);
    let fw = FieldEval::new(&disc.w, &pts);
    let t = state.t;
    let sq = |v: T| v * v;
    let [mut eu, mut ex, mut ep, mut et] = [T::zero(); 4];
    for cell in 0..disc.mesh.n_triangles() {
        let map = AffineMap::new(&disc.mesh, cell);
        let det = map.det.abs();
        for (q, (&r, &w)) in pts.iter().zip(&rule.weights).enumerate() {
            let jxw = w * det;
            let x = map.apply(r);
            let u = exact.u(x, t);
            let gu = exact.grad_u(x, t);
            for c in 0..2 {
                let (v, g) = fu.eval(&state.u, cell, q, c, &map);
                eu += (sq(v - u[c]) + sq(g[0] - gu[c][0]) + sq(g[1] - gu[c][1])) * jxw;
            }
            let (v, _) = fx.eval(&state.xi, cell, q, 0, &map);
            ex += sq(v - exact.xi(params, x, t)) * jxw;
            let (v, g) = fw.eval(&state.p, cell, q, 0, &map);
            let ge = exact.grad_p(x, t);
            ep += (sq(v - exact.p(x, t)) + sq(g[0] - ge[0]) + sq(g[1] - ge[1])) * jxw;
            let (v, g) = fw.eval(&state.temp, cell, q, 0, &map);
            let ge = exact.grad_temp(x, t);
            et += (sq(v - exact.temp(x, t)) + sq(g[0] - ge[0]) + sq(g[1] - ge[1])) * jxw;
        }
    }
    Ok(ErrorReport {
        t,
        u_h1: eu.sqrt(),
        xi_l2: ex.sqrt(),
        p_h1: ep.sqrt(),
        temp_h1: et.sqrt(),
    })
}

/// `ln(e_coarse / e_fine) / ln(ratio)`; `None` when an error is not positive
/// or the ratio does not exceed one.
pub fn observed_rate(e_coarse: f64, e_fine: f64, ratio: f64) -> Option<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0 && ratio > 1.0) || !e_coarse.is_finite() || !e_fine.is_finite() {
        return None;
    }
    Some((e_coarse / e_fine).ln() / ratio.ln())
}

/// Which refinement the observed rates are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateBase {
    MeshSize,
    TimeStep,
}

/// One level of a refinement schedule: `n` cells per side and the time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub n: usize,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub dt: f64,
    pub errors: ErrorReport<f64>,
    /// Rates for `(u, xi, p, T)`; zero in the first row, `None` where undefined.
    pub rates: [Option<f64>; 4],
}

impl ConvergenceRow {
    pub fn h_label(&self) -> String {
        format!("1/{}", self.n)
    }
}

/// Fills in the rate columns of consecutive rows.
pub fn attach_rates(rows: &mut [ConvergenceRow], base: RateBase) {
    for i in 0..rows.len() {
        if i == 0 {
            rows[0].rates = [Some(0.0); 4];
            continue;
        }
        let (c, f) = (&rows[i - 1], &rows[i]);
        let ratio = match base {
            RateBase::MeshSize => f.n as f64 / c.n as f64,
            RateBase::TimeStep => c.dt / f.dt,
        };
        let (ec, ef) = (c.errors.as_array(), f.errors.as_array());
        let rates = std::array::from_fn(|k| observed_rate(ec[k], ef[k], ratio));
        rows[i].rates = rates;
    }
}

/// Settings shared by every row of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudySettings {
    pub k: usize,
    pub l: usize,
    pub tau: f64,
    pub base: RateBase,
    /// Template for each run; `dt` and `tau` are overwritten per row.
    pub step: StepConfig<f64>,
}

/// Runs `algorithm` on the unit square for every refinement and reports the
/// errors at `tau` with observed rates.
pub fn convergence_study(
    problem: &dyn Problem<f64>,
    schedule: &[Refinement],
    algorithm: Algorithm,
    settings: &StudySettings,
) -> Result<Vec<ConvergenceRow>> {
    convergence_study_with(problem, schedule, algorithm, settings, |_| {})
}

/// [`convergence_study`] with a callback after each finished row.
pub fn convergence_study_with(
    problem: &dyn Problem<f64>,
    schedule: &[Refinement],
    algorithm: Algorithm,
    settings: &StudySettings,
    mut on_row: impl FnMut(&ConvergenceRow),
) -> Result<Vec<ConvergenceRow>> {
    let exact = problem
        .exact()
        .ok_or_else(|| Error::InvalidConfig("convergence studies need a problem with a known solution".into()))?;
    let mut rows = Vec::with_capacity(schedule.len());
    for r in schedule {
        let disc = Discretization::new(unit_square(r.n)?, settings.k, settings.l)?;
        let forms = assemble_forms(&disc, problem.params())?;
        let mut cfg = settings.step;
        cfg.algorithm = algorithm;
        cfg.dt = r.dt;
        cfg.tau = settings.tau;
        let out = run(&disc, &forms, problem, &cfg)?;
        let errors = error_report(&disc, &out.state, exact, problem.params())?;
        rows.push(ConvergenceRow {
            n: r.n,
            dt: r.dt,
            errors,
            rates: [None; 4],
        });
        attach_rates(&mut rows, settings.base);
        on_row(rows.last().expect("row just pushed"));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub dt: f64,
    /// Median over repetitions of the whole run (setup, loads and solves;
    /// form assembly and error evaluation excluded).
    pub median: Duration,
    pub samples: Vec<Duration>,
    /// Phase breakdown of the median repetition.
    pub phases: PhaseTimings,
    pub errors: ErrorReport<f64>,
}

/// Times each algorithm on one discretization, `repetitions` times each,
/// interleaving algorithms so slow drifts affect all of them alike.
pub fn benchmark(
    algorithms: &[Algorithm],
    problem: &dyn Problem<f64>,
    refinement: Refinement,
    settings: &StudySettings,
    repetitions: usize,
) -> Result<Vec<TimingReport>> {
    let exact = problem
        .exact()
        .ok_or_else(|| Error::InvalidConfig("benchmarks report errors and need a known solution".into()))?;
    let reps = repetitions.max(1);
    let disc = Discretization::new(unit_square(refinement.n)?, settings.k, settings.l)?;
    let forms = assemble_forms(&disc, problem.params())?;
    let mut samples: Vec<Vec<(Duration, PhaseTimings)>> = vec![Vec::new(); algorithms.len()];
    let mut finals: Vec<Option<State<f64>>> = vec![None; algorithms.len()];
    for _ in 0..reps {
        for (i, &alg) in algorithms.iter().enumerate() {
            let mut cfg = settings.step;
            cfg.algorithm = alg;
            cfg.dt = refinement.dt;
            cfg.tau = settings.tau;
            cfg.workers = if alg == Algorithm::Alg3 { settings.step.workers.max(2) } else { 1 };
            let out = run(&disc, &forms, problem, &cfg)?;
            samples[i].push((out.timings.total, out.timings));
            finals[i] = Some(out.state);
        }
    }
    algorithms
        .iter()
        .zip(samples)
        .zip(finals)
        .map(|((&alg, mut s), state)| {
            let all: Vec<Duration> = s.iter().map(|(d, _)| *d).collect();
            s.sort_by_key(|(d, _)| *d);
            let (median, phases) = s[s.len() / 2];
            let state = state.expect("at least one repetition");
            Ok(TimingReport {
                algorithm: alg,
                n: refinement.n,
                dt: refinement.dt,
                median,
                samples: all,
                phases,
                errors: error_report(&disc, &state, exact, problem.params())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{initial_state, ManufacturedProblem, ZeroSolution};

    #[test]
    fn rates() {
        assert!((observed_rate(5.29628e-01, 1.45381e-01, 2.0).unwrap() - 1.865).abs() < 5e-3);
        assert_eq!(observed_rate(0.3, 0.3, 2.0), Some(0.0));
        assert!((observed_rate(8.0, 1.0, 2.0).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(observed_rate(0.0, 1.0, 2.0), None);
        assert_eq!(observed_rate(1.0, 1.0, 1.0), None);
    }

    #[test]
    fn zero_state_has_zero_error_against_zero() {
        let disc = Discretization::new(unit_square::<f64>(2).unwrap(), 2, 1).unwrap();
        let params = ModelParams::benchmark();
        let problem = ManufacturedProblem::new(params, ZeroSolution, false);
        let s = initial_state(&disc, &problem);
        let e = error_report(&disc, &s, &ZeroSolution, &params).unwrap();
        assert_eq!(e.as_array(), [0.0; 4]);
    }

    #[test]
    fn interpolant_error_is_positive_and_small() {
        let params = ModelParams::benchmark();
        let problem = ManufacturedProblem::example1(params);
        let mut last = f64::INFINITY;
        for n in [4, 8] {
            let disc = Discretization::new(unit_square::<f64>(n).unwrap(), 2, 1).unwrap();
            let s = initial_state(&disc, &problem);
            let e = error_report(&disc, &s, &problem.exact, &params).unwrap();
            assert!(e.as_array().iter().all(|&v| v > 0.0));
            assert!(e.p_h1 < last);
            last = e.p_h1;
        }
    }

    #[test]
    fn single_row_has_zero_rates() {
        let mut rows = vec![ConvergenceRow {
            n: 4,
            dt: 0.25,
            errors: ErrorReport::default(),
            rates: [None; 4],
        }];
        attach_rates(&mut rows, RateBase::MeshSize);
        assert_eq!(rows[0].rates, [Some(0.0); 4]);
    }
}
