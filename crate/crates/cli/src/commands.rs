//! The four subcommands. Each returns its results so callers other than the
//! binary (tests, the acceptance runner) can inspect them.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thermoporo::analysis::{
    benchmark, convergence_study, error_report, ConvergenceRow, ErrorReport, Refinement, StudySettings,
    TimingReport,
};
use thermoporo::assembly::Discretization;
use thermoporo::checks::{run_all, CheckOutcome};
use thermoporo::model::{Example2, ManufacturedProblem, Problem, SourceFreeProblem};
use thermoporo::steppers::{simulate, Algorithm, RunOutput};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig, Scenario};
use crate::output;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Solver(#[from] thermoporo::Error),
    #[error("{0} of {1} checks failed")]
    ChecksFailed(usize, usize),
}

impl CliError {
    /// 1 for usage, configuration and output-path problems, 2 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Write { .. } => 1,
            CliError::Solver(e) => solver_exit_code(e),
            CliError::ChecksFailed(..) => 2,
        }
    }
}

fn solver_exit_code(e: &thermoporo::Error) -> i32 {
    use thermoporo::Error as E;
    match e {
        E::AtLevel { source, .. } => solver_exit_code(source),
        E::InvalidMesh(_) | E::UnsupportedDegree(_) | E::UnsupportedQuadrature(_) | E::InvalidParameters(_)
        | E::InvalidConfig(_) => 1,
        _ => 2,
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn write_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    };
    CliError::Write {
        path: path.to_path_buf(),
        source,
    }
}

/// Creates the file (and its parent directory) before any work is done so an
/// unwritable path fails fast.
fn create_file(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(write_error(dir))?;
    }
    File::create(path).map(BufWriter::new).map_err(write_error(path))
}

fn manufactured(cfg: &RunConfig, what: &str) -> Result<ManufacturedProblem<f64, thermoporo::model::Example1<f64>>> {
    if cfg.scenario != Scenario::Example1 {
        return Err(CliError::Usage(format!(
            "{what} needs the example1 scenario (known exact solution), not {}",
            cfg.scenario
        )));
    }
    Ok(ManufacturedProblem::example1(cfg.params))
}

fn settings(cfg: &RunConfig) -> StudySettings {
    StudySettings {
        k: cfg.k,
        l: cfg.l,
        tau: cfg.tau,
        base: cfg.base,
        step: cfg.step_config(Algorithm::Coupled),
    }
}

pub type Blocks = Vec<(Algorithm, Vec<ConvergenceRow>)>;

/// Runs the refinement schedule for every selected algorithm (Algorithms 1 to
/// 3 by default), `cfg.jobs` algorithms at a time.
pub fn convergence(cfg: &RunConfig, progress: &mut dyn Write) -> Result<Blocks> {
    if cfg.schedule.is_empty() {
        return Err(CliError::Usage(
            "convergence needs --table or a 'schedule = n:dt, ...' setting".into(),
        ));
    }
    if cfg.table == Some(crate::config::TableId::T7) {
        return Err(CliError::Usage("T7 is the timing configuration; use the bench command".into()));
    }
    let problem = manufactured(cfg, "convergence")?;
    let mut out = match &cfg.out {
        Some(p) => Some((p.clone(), create_file(p)?)),
        None => None,
    };
    let algorithms = cfg.algorithms.clone().unwrap_or_else(|| Algorithm::SPLIT.to_vec());
    let _ = writeln!(progress, "{}", cfg.describe());
    let study = settings(cfg);

    let mut blocks: Blocks = Vec::with_capacity(algorithms.len());
    for group in algorithms.chunks(cfg.jobs.max(1)) {
        let results: Vec<Result<Vec<ConvergenceRow>>> = std::thread::scope(|s| {
            let handles: Vec<_> = group
                .iter()
                .map(|&alg| {
                    let (problem, study) = (&problem, &study);
                    let schedule = &cfg.schedule;
                    s.spawn(move || convergence_study(problem, schedule, alg, study).map_err(CliError::from))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("study thread panicked")).collect()
        });
        for (&alg, rows) in group.iter().zip(results) {
            let rows = rows?;
            for row in &rows {
                let _ = writeln!(
                    progress,
                    "  {:<7} h={:<5} dt={:<7} u {} xi {} p {} T {}",
                    alg.name(),
                    row.h_label(),
                    output::reciprocal_label(row.dt),
                    output::sci(row.errors.u_h1),
                    output::sci(row.errors.xi_l2),
                    output::sci(row.errors.p_h1),
                    output::sci(row.errors.temp_h1),
                );
            }
            blocks.push((alg, rows));
        }
    }

    match &mut out {
        Some((path, file)) => output::convergence_csv(file, &blocks).map_err(|e| csv_error(path, e))?,
        None => output::convergence_csv(io::stdout().lock(), &blocks)
            .map_err(|e| csv_error(Path::new("<stdout>"), e))?,
    }
    Ok(blocks)
}

/// Times every selected algorithm (all four by default) at `(n, dt)`.
pub fn bench(cfg: &RunConfig, progress: &mut dyn Write) -> Result<Vec<TimingReport>> {
    let problem = manufactured(cfg, "bench")?;
    let mut out = match &cfg.out {
        Some(p) => Some((p.clone(), create_file(p)?)),
        None => None,
    };
    let algorithms = cfg.algorithms.clone().unwrap_or_else(|| Algorithm::ALL.to_vec());
    let _ = writeln!(
        progress,
        "timing h = 1/{}, dt = {}, {} repetitions, {} workers for alg3",
        cfg.n,
        output::reciprocal_label(cfg.dt),
        cfg.repetitions,
        cfg.workers
    );
    let refinement = Refinement { n: cfg.n, dt: cfg.dt };
    let reports = benchmark(&algorithms, &problem, refinement, &settings(cfg), cfg.repetitions)?;
    for r in &reports {
        let _ = writeln!(progress, "  {:<7} median {:.3} s", r.algorithm.name(), r.median.as_secs_f64());
    }
    match &mut out {
        Some((path, file)) => output::bench_csv(file, &reports).map_err(|e| csv_error(path, e))?,
        None => output::bench_csv(io::stdout().lock(), &reports).map_err(|e| csv_error(Path::new("<stdout>"), e))?,
    }
    Ok(reports)
}

#[derive(Debug)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub disc: Discretization<f64>,
    pub output: RunOutput<f64>,
    pub errors: Option<ErrorReport<f64>>,
    pub extrema: Vec<(&'static str, output::Extrema)>,
    pub files: Vec<PathBuf>,
}

fn problem_for(cfg: &RunConfig) -> Box<dyn Problem<f64>> {
    match cfg.scenario {
        Scenario::Example1 => Box::new(ManufacturedProblem::example1(cfg.params)),
        Scenario::Example2 => Box::new(Example2 {
            params: cfg.params,
            ..Example2::new()
        }),
        Scenario::Custom => Box::new(SourceFreeProblem { params: cfg.params }),
    }
}

/// Runs one algorithm (Algorithm 3 by default) to `tau` and writes the final
/// fields as VTK files plus a summary into the output directory.
pub fn run(cfg: &RunConfig, progress: &mut dyn Write) -> Result<RunReport> {
    let algorithm = match cfg.algorithms.as_deref() {
        None => Algorithm::Alg3,
        Some([alg]) => *alg,
        Some(_) => return Err(CliError::Usage("run takes exactly one algorithm".into())),
    };
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(write_error(&dir))?;
    let summary_path = dir.join("summary.txt");
    let mut summary_file = create_file(&summary_path)?;

    let _ = writeln!(progress, "{} with {}", cfg.describe(), algorithm.name());
    let problem = problem_for(cfg);
    let disc = Discretization::new(cfg.domain_spec().mesh()?, cfg.k, cfg.l)?;
    let out = simulate(&disc, problem.as_ref(), &cfg.step_config(algorithm))?;
    if !out.state.is_finite() {
        return Err(thermoporo::Error::SolveFailed {
            system: "final state".into(),
            residual: f64::NAN,
        }
        .into());
    }
    let errors = problem
        .exact()
        .map(|exact| error_report(&disc, &out.state, exact, problem.params()))
        .transpose()?;
    let extrema = output::field_extrema(&disc, &out.state);

    let mut files = Vec::new();
    for (name, field) in output::vertex_fields(&disc, &out.state) {
        let path = dir.join(format!("{name}.vtk"));
        let file = create_file(&path)?;
        output::write_vtk(file, &disc, name, &field, out.state.t).map_err(write_error(&path))?;
        files.push(path);
    }
    if cfg.dump_coefficients {
        let path = dir.join("coefficients.csv");
        let file = create_file(&path)?;
        output::coefficients_csv(file, &disc, &out.state).map_err(|e| csv_error(&path, e))?;
        files.push(path);
    }

    let report = RunReport {
        algorithm,
        disc,
        output: out,
        errors,
        extrema,
        files,
    };
    let text = summary(cfg, &report);
    summary_file
        .write_all(text.as_bytes())
        .and_then(|_| summary_file.flush())
        .map_err(write_error(&summary_path))?;
    let mut report = report;
    report.files.push(summary_path);
    let _ = write!(progress, "{text}");
    Ok(report)
}

pub fn summary(cfg: &RunConfig, r: &RunReport) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let d = &r.disc;
    let out = &r.output;
    let _ = writeln!(s, "scenario            {}", cfg.scenario);
    let _ = writeln!(s, "algorithm           {}", r.algorithm.name());
    let _ = writeln!(s, "degrees             k = {}, l = {}", cfg.k, cfg.l);
    let _ = writeln!(
        s,
        "mesh                {} x {} cells, {} vertices, {} triangles, h = {}",
        cfg.n,
        cfg.n,
        d.mesh.n_vertices(),
        d.mesh.n_triangles(),
        output::sci(d.mesh.h)
    );
    let _ = writeln!(
        s,
        "time                dt = {}, tau = {}, levels = {}",
        output::full(cfg.dt),
        output::full(cfg.tau),
        out.state.level
    );
    let (nu, nxi, nw) = (d.u.n_dofs(), d.xi.n_dofs(), d.w.n_dofs());
    let _ = writeln!(
        s,
        "dofs                u {nu}, xi {nxi}, p {nw}, T {nw}, total {}",
        nu + nxi + 2 * nw
    );
    let init = &out.initial;
    let _ = writeln!(
        s,
        "initial step        {}, {} iterations, relative residual {}{}",
        format!("{:?}", init.solver).to_lowercase(),
        init.iterations,
        output::sci(init.relative_residual),
        if init.fell_back { ", fell back to direct" } else { "" }
    );
    let _ = writeln!(s, "timings (s)");
    s.push_str(&output::timing_lines(&out.timings));
    let _ = writeln!(s, "extrema");
    for (name, e) in &r.extrema {
        let _ = writeln!(
            s,
            "  {name:<4} min {} at ({}, {})  max {} at ({}, {})",
            output::sci(e.min),
            e.min_at.0,
            e.min_at.1,
            output::sci(e.max),
            e.max_at.0,
            e.max_at.1
        );
    }
    if let Some(e) = &r.errors {
        let _ = writeln!(
            s,
            "errors              u_H1 {}, xi_L2 {}, p_H1 {}, T_H1 {}",
            output::sci(e.u_h1),
            output::sci(e.xi_l2),
            output::sci(e.p_h1),
            output::sci(e.temp_h1)
        );
    }
    for w in &out.warnings {
        let _ = writeln!(s, "warning             {w}");
    }
    s
}

/// Runs the invariant suite; one line per check, warnings on their own lines.
pub fn validate(progress: &mut dyn Write) -> Result<Vec<CheckOutcome>> {
    let outcomes = run_all();
    for o in &outcomes {
        let _ = writeln!(
            progress,
            "{} {:<24} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        for w in &o.warnings {
            let _ = writeln!(progress, "WARN {:<24} {w}", o.name);
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed, outcomes.len()));
    }
    Ok(outcomes)
}
