//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! Exits 0 after reporting unless `ACCEPTANCE_STRICT=1`, in which case any
//! failing criterion makes the exit status nonzero.

use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use thermoporo::analysis::{attach_rates, observed_rate, ConvergenceRow, ErrorReport, RateBase};
use thermoporo::assembly::{assemble_forms, Discretization, DirichletSystem};
use thermoporo::checks::{self, max_interpolation_gap};
use thermoporo::linalg::LdlFactor;
use thermoporo::mesh::{unit_square, Point2};
use thermoporo::model::{AssumptionMode, Example2, ManufacturedProblem, ModelParams, PolynomialSolution};
use thermoporo::steppers::{max_state_difference, run, saddle_matrix, Algorithm, State, StepConfig};
use thermoporo_cli::commands::{self, Blocks};
use thermoporo_cli::config::{RunConfig, Settings, TableId};
use thermoporo_cli::output::validate_vtk;
use thermoporo_cli::reference;

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

type Check = Result<Outcome, String>;

fn resolve(pairs: &[(&str, &str)]) -> Result<RunConfig, String> {
    let mut s = Settings::default();
    for (k, v) in pairs {
        s.set(k, *v);
    }
    RunConfig::resolve(&s).map_err(|e| e.to_string())
}

fn table_blocks(table: TableId, dir: &Path) -> Result<Blocks, String> {
    let name = table.to_string();
    let out = dir.join(format!("{name}.csv"));
    let cfg = resolve(&[("table", &name), ("out", &out.display().to_string())])?;
    let blocks = commands::convergence(&cfg, &mut io::sink()).map_err(|e| e.to_string())?;
    let csv = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let expected = 1 + blocks.iter().map(|(_, r)| r.len()).sum::<usize>();
    if csv.lines().count() != expected {
        return Err(format!("{name}.csv has {} lines, expected {expected}", csv.lines().count()));
    }
    Ok(blocks)
}

const FIELDS: [&str; 4] = ["u", "xi", "p", "T"];

/// Entry-by-entry comparison against a published table.
struct Comparison {
    errors: (usize, usize),
    rates: (usize, usize),
    worst_error: (f64, String),
    worst_rate: (f64, String),
    /// Entries outside tolerance per field.
    misses: [usize; 4],
}

impl Comparison {
    fn passed(&self) -> bool {
        self.errors.0 == self.errors.1 && self.rates.0 == self.rates.1
    }

    fn summary(&self) -> String {
        let rates = if self.rates.1 == 0 {
            String::new()
        } else {
            format!(
                ", rates {}/{} (worst {:+.2} at {})",
                self.rates.0, self.rates.1, self.worst_rate.0, self.worst_rate.1
            )
        };
        let misses: Vec<String> = FIELDS
            .iter()
            .zip(self.misses)
            .filter(|(_, m)| *m > 0)
            .map(|(f, m)| format!("{f} {m}"))
            .collect();
        format!(
            "errors {}/{} within tolerance (worst {:+.1}% at {}){rates}{}",
            self.errors.0,
            self.errors.1,
            100.0 * self.worst_error.0,
            self.worst_error.1,
            if misses.is_empty() {
                String::new()
            } else {
                format!("; misses by field: {}", misses.join(", "))
            }
        )
    }
}

fn compare(table: TableId, blocks: &Blocks, rows: usize, rel_tol: f64, rate_tol: Option<f64>) -> Comparison {
    let mut c = Comparison {
        errors: (0, 0),
        rates: (0, 0),
        worst_error: (0.0, String::new()),
        worst_rate: (0.0, String::new()),
        misses: [0; 4],
    };
    for (alg, ours) in blocks {
        let published = reference::block(table.index(), *alg).expect("published block");
        for (i, (o, p)) in ours.iter().zip(published.rows).take(rows).enumerate() {
            let e = o.errors.as_array();
            for f in 0..4 {
                let at = format!("{} {} {}", alg.name(), o.h_label(), FIELDS[f]);
                let dev = e[f] / p.errors[f] - 1.0;
                c.errors.1 += 1;
                if dev.abs() <= rel_tol {
                    c.errors.0 += 1;
                } else {
                    c.misses[f] += 1;
                }
                if dev.abs() > c.worst_error.0.abs() {
                    c.worst_error = (dev, at.clone());
                }
                if let (Some(tol), true) = (rate_tol, i > 0) {
                    let d = o.rates[f].map_or(f64::INFINITY, |r| r - p.rates[f]);
                    c.rates.1 += 1;
                    if d.abs() <= tol {
                        c.rates.0 += 1;
                    } else {
                        c.misses[f] += 1;
                    }
                    if d.abs() > c.worst_rate.0.abs() {
                        c.worst_rate = (d, at);
                    }
                }
            }
        }
    }
    c
}

fn table_regression(table: TableId, rel_tol: f64) -> Result<(Comparison, f64), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t0 = Instant::now();
    let blocks = table_blocks(table, dir.path())?;
    let rows = table.preset().default_rows;
    Ok((compare(table, &blocks, rows, rel_tol, Some(0.1)), t0.elapsed().as_secs_f64()))
}

fn criterion1() -> Check {
    let (c, secs) = table_regression(TableId::T2, 0.02)?;
    let mut o = Outcome::new(c.passed(), format!("T2 {}", c.summary()));
    o.notes.push(format!("T2 ran in {secs:.1} s"));
    Ok(o)
}

fn criterion2() -> Check {
    let mut passed = true;
    let mut parts = Vec::new();
    let mut notes = Vec::new();
    for (table, tol) in [(TableId::T3, 0.02), (TableId::T4, 0.05), (TableId::T5, 0.02)] {
        let (c, secs) = table_regression(table, tol)?;
        passed &= c.passed();
        parts.push(format!("{table} ({:.0}%): {}", 100.0 * tol, c.summary()));
        notes.push(format!("{table} ran in {secs:.1} s"));
    }
    let t5 = resolve(&[("table", "T5")])?;
    notes.push(format!(
        "T5 resolved in {:?} mode; strict mode rejects it: {}",
        t5.mode,
        resolve(&[("table", "T5"), ("mode", "strict")]).is_err()
    ));
    Ok(Outcome {
        passed,
        detail: parts.join(" | "),
        notes,
    })
}

fn criterion3() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let blocks = table_blocks(TableId::T6, dir.path())?;
    let c = compare(TableId::T6, &blocks, 3, 0.02, None);
    let floor = [2.9, 2.9, 1.9, 1.9];
    let mut rates_ok = true;
    let mut last = Vec::new();
    for (alg, rows) in &blocks {
        let r = rows.last().expect("rows").rates;
        rates_ok &= r.iter().zip(floor).all(|(r, f)| r.is_some_and(|r| r >= f));
        last.push(format!(
            "{} ({})",
            alg.name(),
            r.iter().map(|r| r.map_or("NA".into(), |v| format!("{v:.2}"))).collect::<Vec<_>>().join(", ")
        ));
    }
    Ok(Outcome::new(
        c.errors.0 == c.errors.1 && rates_ok,
        format!(
            "rows 1-3 {}; last-row rates {} (need >= 2.9, 2.9, 1.9, 1.9)",
            c.summary(),
            last.join(" ")
        ),
    ))
}

/// Largest coefficient difference per field.
fn field_differences(a: &State<f64>, b: &State<f64>) -> [f64; 4] {
    let d = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    [d(&a.u, &b.u), d(&a.xi, &b.xi), d(&a.p, &b.p), d(&a.temp, &b.temp)]
}

fn criterion4() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let blocks = table_blocks(TableId::T1, dir.path())?;
    let mut passed = true;
    let mut parts = Vec::new();
    let mut notes = Vec::new();
    for (alg, rows) in &blocks {
        let r = rows.last().expect("rows").rates;
        passed &= r.iter().all(|r| r.is_some_and(|v| v >= 0.85));
        parts.push(format!(
            "{} ({})",
            alg.name(),
            r.iter().map(|r| r.map_or("NA".into(), |v| format!("{v:.2}"))).collect::<Vec<_>>().join(", ")
        ));
        let p: Vec<f64> = rows.iter().map(|r| r.errors.p_h1).collect();
        let monotone = p.windows(2).all(|w| w[1] <= 1.05 * w[0]);
        notes.push(format!(
            "{}: p H1 errors {} (halving dt never grows it by more than 5%: {monotone})",
            alg.name(),
            p.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" -> ")
        ));
    }

    // Diagnostic only: differences to a dt = 1/128 run on the same mesh
    // remove the spatial error from the measured rates.
    let cfg = resolve(&[("table", "T1")])?;
    let params = cfg.params;
    let problem = ManufacturedProblem::example1(params);
    let disc = Discretization::new(unit_square(32).map_err(|e| e.to_string())?, 3, 2).map_err(|e| e.to_string())?;
    let forms = assemble_forms(&disc, &params).map_err(|e| e.to_string())?;
    for alg in Algorithm::SPLIT {
        let state = |dt: f64| -> Result<State<f64>, String> {
            run(&disc, &forms, &problem, &StepConfig::new(alg, dt, 1.0))
                .map(|o| o.state)
                .map_err(|e| e.to_string())
        };
        let reference = state(1.0 / 128.0)?;
        let diffs: Vec<[f64; 4]> = [8.0, 16.0]
            .iter()
            .map(|m| state(1.0 / m).map(|s| field_differences(&s, &reference)))
            .collect::<Result<_, _>>()?;
        let rates: Vec<String> = (0..4)
            .map(|f| observed_rate(diffs[0][f], diffs[1][f], 2.0).map_or("NA".into(), |v| format!("{v:.2}")))
            .collect();
        notes.push(format!(
            "diagnostic {}: rates of the max coefficient difference to a dt=1/128 run (dt 1/8 -> 1/16): {}",
            alg.name(),
            rates.join(", ")
        ));
    }
    Ok(Outcome {
        passed,
        detail: format!("h=1/32, k=3, l=2, last-row temporal rates (u, xi, p, T) {}; need >= 0.85", parts.join(" ")),
        notes,
    })
}

fn criterion5() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("bench.csv").display().to_string();
    let cfg = resolve(&[("table", "T7"), ("repetitions", "5"), ("workers", "2"), ("out", &out)])?;
    let reports = commands::bench(&cfg, &mut io::sink()).map_err(|e| e.to_string())?;
    let median = |alg| {
        reports
            .iter()
            .find(|r| r.algorithm == alg)
            .map(|r| r.median.as_secs_f64())
            .expect("all algorithms timed")
    };
    let coupled = median(Algorithm::Coupled);
    let ratio = |alg| median(alg) / coupled;
    let (r1, r2, r3) = (ratio(Algorithm::Alg1), ratio(Algorithm::Alg2), ratio(Algorithm::Alg3));
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut o = Outcome::new(
        r1 <= 1.05 && r2 <= 1.05 && r3 <= 0.9,
        format!(
            "medians over 5 runs: coupled {coupled:.3} s; alg1/coupled {r1:.2}, alg2/coupled {r2:.2} (need <= 1.05), alg3/coupled {r3:.2} (need <= 0.90)"
        ),
    );
    o.notes.push(format!("{cpus} CPU(s) available; alg3 ran with 2 workers"));
    for r in &reports {
        if let Some(p) = reference::TIMINGS
            .iter()
            .find(|p| p.algorithm == r.algorithm && p.n == r.n && 1.0 / p.dt_inv as f64 == r.dt)
        {
            let e = [r.errors.u_h1, r.errors.xi_l2, r.errors.p_h1];
            let dev: Vec<String> = e.iter().zip(p.errors).map(|(a, b)| format!("{:+.1}%", 100.0 * (a / b - 1.0))).collect();
            o.notes.push(format!(
                "{} errors vs the published timing table (u, xi, p): {} (informational)",
                r.algorithm.name(),
                dev.join(", ")
            ));
        }
    }
    Ok(o)
}

fn criterion6() -> Check {
    let mut worst = 0.0f64;
    let mut cases = Vec::new();
    for (n, k, l, dt) in [(8, 2, 1, 0.125), (4, 3, 2, 0.125)] {
        let mut params = ModelParams::<f64>::benchmark();
        params.alpha = 0.0;
        params.beta = 0.0;
        let problem = ManufacturedProblem::example1(params);
        let disc = Discretization::new(unit_square(n).map_err(|e| e.to_string())?, k, l).map_err(|e| e.to_string())?;
        let forms = assemble_forms(&disc, &params).map_err(|e| e.to_string())?;
        let trajectory = |alg| -> Result<Vec<State<f64>>, String> {
            let mut cfg = StepConfig::new(alg, dt, 1.0);
            cfg.mode = AssumptionMode::Permissive;
            cfg.keep_trajectory = true;
            cfg.workers = 2;
            let out = run(&disc, &forms, &problem, &cfg).map_err(|e| e.to_string())?;
            Ok(out.trajectory.expect("trajectory requested"))
        };
        let reference = trajectory(Algorithm::Coupled)?;
        for alg in Algorithm::SPLIT {
            let t = trajectory(alg)?;
            if t.len() != reference.len() {
                return Err(format!("{} trajectory has {} levels", alg.name(), t.len()));
            }
            for (a, b) in t.iter().zip(&reference) {
                worst = worst.max(max_state_difference(a, b));
            }
        }
        cases.push(format!("h=1/{n} k={k} l={l} dt={dt}"));
    }
    Ok(Outcome::new(
        worst <= 1e-10,
        format!(
            "alpha = beta = 0, every level, all coefficients: max difference to the monolithic trajectory {worst:.2e} (need <= 1e-10; {})",
            cases.join(", ")
        ),
    ))
}

fn criterion7() -> Check {
    let params = ModelParams::<f64>::benchmark();
    let mut worst = 0.0f64;
    let mut cases = Vec::new();
    for (k, l) in [(2, 1), (3, 1), (3, 2)] {
        let problem = ManufacturedProblem::new(params, PolynomialSolution::with_degrees(k, l, &params), true);
        let disc = Discretization::new(unit_square(3).map_err(|e| e.to_string())?, k, l).map_err(|e| e.to_string())?;
        let forms = assemble_forms(&disc, &params).map_err(|e| e.to_string())?;
        for alg in Algorithm::ALL {
            let mut cfg = StepConfig::new(alg, 0.25, 1.0);
            cfg.workers = 2;
            let out = run(&disc, &forms, &problem, &cfg).map_err(|e| e.to_string())?;
            worst = worst.max(max_interpolation_gap(&disc, &out.state, &problem.exact, &params));
        }
        cases.push(format!("({k},{l})"));
    }
    Ok(Outcome::new(
        worst <= 1e-9,
        format!(
            "polynomial in space, linear in time, (k,l) in {}: max coefficient error at tau {worst:.2e} over 4 algorithms (need <= 1e-9)",
            cases.join(" ")
        ),
    ))
}

fn criterion8() -> Check {
    let o = checks::source_oracle();
    Ok(Outcome::new(o.passed, o.detail))
}

fn criterion9() -> Check {
    let spd = checks::reaction_block_spd();
    let mut passed = spd.passed;
    let mut parts = vec![format!("reaction block: {}", spd.detail)];

    // Saddle matrix on every mesh the suites use.
    let mut meshes = Vec::new();
    let benchmark = ModelParams::<f64>::benchmark();
    let mut cases: Vec<(String, Discretization<f64>, ModelParams<f64>)> = Vec::new();
    for (n, k) in [(4, 2), (8, 2), (16, 2), (32, 2), (40, 2), (4, 3), (8, 3), (16, 3), (32, 3)] {
        let disc = Discretization::new(unit_square(n).map_err(|e| e.to_string())?, k, k - 1).map_err(|e| e.to_string())?;
        cases.push((format!("1/{n},k={k}"), disc, benchmark));
    }
    let ex2 = Example2::<f64>::new();
    let mesh = Example2::<f64>::domain().mesh().map_err(|e| e.to_string())?;
    cases.push(("reservoir".into(), Discretization::new(mesh, 2, 1).map_err(|e| e.to_string())?, ex2.params));
    let mut saddle_ok = true;
    for (name, disc, params) in &cases {
        let forms = assemble_forms(disc, params).map_err(|e| e.to_string())?;
        let a = saddle_matrix(&forms, params).map_err(|e| e.to_string())?;
        let sys = DirichletSystem::with_unit_diagonal(&a, &disc.u_fixed).map_err(|e| e.to_string())?;
        let (pos, neg) = LdlFactor::new(&sys.matrix, "saddle").map_err(|e| e.to_string())?.inertia();
        let scale = a.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let good = a.asymmetry() <= 1e-13 * scale && pos == disc.n_u() && neg == disc.n_xi();
        saddle_ok &= good;
        if !good {
            meshes.push(format!("{name} FAILED ({pos}+/{neg}-)"));
        } else {
            meshes.push(name.clone());
        }
    }
    passed &= saddle_ok;
    parts.push(format!(
        "saddle matrix symmetric with inertia (n_u+, n_xi-) on {} meshes: {}",
        cases.len(),
        if saddle_ok { "yes".to_string() } else { meshes.join(", ") }
    ));

    // Rate columns recomputed from the published error columns.
    let mut worst = 0.0f64;
    let mut count = 0;
    for (t, table) in (1..=6).filter_map(|i| reference::table(i).map(|b| (i, b))) {
        for block in table {
            let mut rows: Vec<ConvergenceRow> = block
                .rows
                .iter()
                .map(|r| ConvergenceRow {
                    n: r.n,
                    dt: 1.0 / r.dt_inv as f64,
                    errors: ErrorReport {
                        t: 1.0,
                        u_h1: r.errors[0],
                        xi_l2: r.errors[1],
                        p_h1: r.errors[2],
                        temp_h1: r.errors[3],
                    },
                    rates: [None; 4],
                })
                .collect();
            attach_rates(&mut rows, if t == 1 { RateBase::TimeStep } else { RateBase::MeshSize });
            for (ours, published) in rows.iter().zip(block.rows).skip(1) {
                for f in 0..4 {
                    let d = ours.rates[f].map_or(f64::INFINITY, |r| (r - published.rates[f]).abs());
                    worst = worst.max(d);
                    count += 1;
                }
            }
        }
    }
    let rates_ok = worst <= 0.01;
    passed &= rates_ok;
    parts.push(format!("{count} published rates recomputed, worst deviation {worst:.3} (need <= 0.01)"));
    Ok(Outcome::new(passed, parts.join("; ")))
}

fn criterion10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("example2");
    let cfg = resolve(&[("scenario", "example2"), ("out", &out.display().to_string())])?;
    if (cfg.n, cfg.dt, cfg.tau) != (50, 0.01, 1.0) {
        return Err(format!("unexpected reservoir configuration {:?}", (cfg.n, cfg.dt, cfg.tau)));
    }
    let report = commands::run(&cfg, &mut io::sink()).map_err(|e| e.to_string())?;
    let finite = report.output.state.is_finite() && report.extrema.iter().all(|(_, e)| e.is_finite());
    for name in ["u", "xi", "p", "T"] {
        let text = std::fs::read_to_string(out.join(format!("{name}.vtk"))).map_err(|e| e.to_string())?;
        if let Err(e) = validate_vtk(&text) {
            return Ok(Outcome::new(false, format!("{name}.vtk invalid: {e}")));
        }
    }
    let p = report.extrema.iter().find(|(n, _)| *n == "p").map(|(_, e)| *e).expect("pressure extrema");
    let injection = Point2::new(350.0, 250.0);
    let production = Point2::new(150.0, 250.0);
    let near = |at: (f64, f64), w: Point2<f64>| Point2::new(at.0, at.1).distance(w) <= 20.0;
    let max_ok = near(p.max_at, injection);
    let min_ok = near(p.min_at, production);
    let mut o = Outcome::new(
        finite && max_ok && min_ok,
        format!(
            "tau = {} reached in {} levels, fields finite: {finite}, 4 VTK files valid; p max {:.4e} at ({}, {}) (need within 20 of (350, 250): {max_ok}), p min {:.4e} at ({}, {}) (need within 20 of (150, 250): {min_ok})",
            report.output.state.t,
            report.output.state.level,
            p.max,
            p.max_at.0,
            p.max_at.1,
            p.min,
            p.min_at.0,
            p.min_at.1
        ),
    );
    o.notes.push(
        "the reservoir source term is positive at (150, 250) and negative at (350, 250), so the pressure peaks at (150, 250)".into(),
    );
    Ok(o)
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [Criterion; 10] = [
        ("Table 2 regression", criterion1),
        ("robustness tables T3-T5", criterion2),
        ("higher-order table T6", criterion3),
        ("temporal study", criterion4),
        ("timing", criterion5),
        ("decoupling equivalence", criterion6),
        ("patch-test exactness", criterion7),
        ("source-derivation oracle", criterion8),
        ("structural checks", criterion9),
        ("reservoir scenario", criterion10),
    ];
    let mut passed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(o)) => o,
            Ok(Err(e)) => Outcome::new(false, format!("error: {e}")),
            Err(_) => Outcome::new(false, "panicked"),
        };
        passed += usize::from(outcome.passed);
        println!(
            "criterion {:>2} {}: {} [{:.1} s] {}",
            i + 1,
            name,
            if outcome.passed { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64(),
            outcome.detail
        );
        for n in &outcome.notes {
            println!("    note: {n}");
        }
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if strict && passed < criteria.len() {
        std::process::exit(1);
    }
}
