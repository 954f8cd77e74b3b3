//! Flat `key = value` configuration, presets for the published tables, and
//! resolution into a validated [`RunConfig`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thermoporo::analysis::{RateBase, Refinement};
use thermoporo::mesh::Point2;
use thermoporo::model::{AssumptionMode, DomainSpec, Example2, ModelParams, Spd2};
use thermoporo::steppers::{Algorithm, CoupledSolver, StepConfig};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}, line {line}: expected 'key = value', found '{text}'")]
    Syntax { origin: String, line: usize, text: String },
    #[error("unknown setting '{0}'")]
    UnknownKey(String),
    #[error("invalid value '{value}' for '{key}': {reason}")]
    Value { key: String, value: String, reason: String },
    #[error("{0}")]
    Conflict(String),
}

type Result<T> = std::result::Result<T, ConfigError>;

/// Ordered `(key, value)` pairs; later entries override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(pub Vec<(String, String)>);

impl Settings {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = parse_pair(line).ok_or_else(|| ConfigError::Syntax {
                origin: origin.to_string(),
                line: i + 1,
                text: raw.trim().to_string(),
            })?;
            out.push((key, value));
        }
        Ok(Self(out))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.push((key.to_string(), value.into()));
    }

    /// Parses a command-line `key=value` override.
    pub fn push_override(&mut self, arg: &str) -> Result<()> {
        let (key, value) = parse_pair(arg).ok_or_else(|| ConfigError::Syntax {
            origin: "command line".into(),
            line: 1,
            text: arg.to_string(),
        })?;
        self.0.push((key, value));
        Ok(())
    }

    fn last(&self, key: &str) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn parse_pair(line: &str) -> Option<(String, String)> {
    let (key, value) = line.split_once('=')?;
    let key = key.trim().to_ascii_lowercase();
    if key.is_empty() {
        return None;
    }
    Some((key, value.trim().to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Manufactured solution on the unit square.
    Example1,
    /// Injection-production reservoir.
    Example2,
    /// No sources and zero initial data.
    Custom,
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "example1" => Ok(Scenario::Example1),
            "example2" => Ok(Scenario::Example2),
            "custom" => Ok(Scenario::Custom),
            _ => Err("expected example1, example2 or custom".into()),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Example1 => "example1",
            Scenario::Example2 => "example2",
            Scenario::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

impl TableId {
    pub const CONVERGENCE: [TableId; 6] = [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn preset(self) -> Preset {
        let sched = |pairs: &[(usize, usize)]| -> Vec<Refinement> {
            pairs.iter().map(|&(n, m)| Refinement { n, dt: 1.0 / m as f64 }).collect()
        };
        let spatial = sched(&[(4, 4), (8, 16), (16, 64), (32, 256)]);
        let base = Preset {
            description: "",
            k: 2,
            l: 1,
            schedule: spatial,
            default_rows: 4,
            base: RateBase::MeshSize,
            poisson: 0.3,
            tensor: 1.0,
            storage: None,
            mode: AssumptionMode::Strict,
        };
        match self {
            TableId::T1 => Preset {
                description: "temporal study on a reduced mesh (h = 1/32 instead of 1/100), k = 3, l = 2",
                k: 3,
                l: 2,
                schedule: sched(&[(32, 4), (32, 8), (32, 16)]),
                default_rows: 3,
                base: RateBase::TimeStep,
                ..base
            },
            TableId::T2 => Preset {
                description: "spatial study, k = 2, l = 1, nu = 0.3",
                ..base
            },
            TableId::T3 => Preset {
                description: "nearly incompressible solid, nu = 0.499",
                poisson: 0.499,
                ..base
            },
            TableId::T4 => Preset {
                description: "small permeability and conductivity, K = Theta = 1e-9 I",
                tensor: 1e-9,
                ..base
            },
            TableId::T5 => Preset {
                description: "vanishing storage coefficients a0 = b0 = c0 = 0 (permissive mode)",
                storage: Some(0.0),
                mode: AssumptionMode::Permissive,
                ..base
            },
            TableId::T6 => Preset {
                description: "higher order pair k = 3, l = 2 (fourth row optional, set rows = 4)",
                k: 3,
                l: 2,
                schedule: sched(&[(4, 4), (8, 32), (16, 256), (32, 2048)]),
                default_rows: 3,
                ..base
            },
            TableId::T7 => Preset {
                description: "timing configuration, h = 1/40, dt = 1/16, k = 2, l = 1",
                schedule: sched(&[(40, 16)]),
                default_rows: 1,
                ..base
            },
        }
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "T1" | "1" => Ok(TableId::T1),
            "T2" | "2" => Ok(TableId::T2),
            "T3" | "3" => Ok(TableId::T3),
            "T4" | "4" => Ok(TableId::T4),
            "T5" | "5" => Ok(TableId::T5),
            "T6" | "6" => Ok(TableId::T6),
            "T7" | "7" => Ok(TableId::T7),
            _ => Err("expected T1 to T7".into()),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.index())
    }
}

/// Parameter set and refinement schedule of a published table.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub description: &'static str,
    pub k: usize,
    pub l: usize,
    /// Every published row, including optional long-running ones.
    pub schedule: Vec<Refinement>,
    /// Rows run unless `rows` is set.
    pub default_rows: usize,
    pub base: RateBase,
    pub poisson: f64,
    /// `K = Theta = tensor * I`.
    pub tensor: f64,
    /// `a0 = b0 = c0` when set.
    pub storage: Option<f64>,
    pub mode: AssumptionMode,
}

/// Material coefficients before the Lamé parameters are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub young: f64,
    pub poisson: f64,
    pub alpha: f64,
    pub beta: f64,
    pub a0: f64,
    pub b0: f64,
    pub c0: f64,
    pub permeability: Spd2<f64>,
    pub conductivity: Spd2<f64>,
}

impl Coefficients {
    fn from_params(p: &ModelParams<f64>) -> Self {
        Self {
            young: p.young,
            poisson: p.poisson,
            alpha: p.alpha,
            beta: p.beta,
            a0: p.a0,
            b0: p.b0,
            c0: p.c0,
            permeability: p.permeability,
            conductivity: p.conductivity,
        }
    }

    pub fn params(&self) -> thermoporo::Result<ModelParams<f64>> {
        ModelParams::from_young_poisson(
            self.young,
            self.poisson,
            self.alpha,
            self.beta,
            self.a0,
            self.b0,
            self.c0,
            self.permeability,
            self.conductivity,
        )
    }
}

/// Fully resolved settings of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub table: Option<TableId>,
    /// Explicit algorithm selection; commands pick their own default.
    pub algorithms: Option<Vec<Algorithm>>,
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub dt: f64,
    pub tau: f64,
    /// Refinements of a convergence study.
    pub schedule: Vec<Refinement>,
    pub base: RateBase,
    pub coefficients: Coefficients,
    pub params: ModelParams<f64>,
    pub domain: (Point2<f64>, Point2<f64>),
    pub mode: AssumptionMode,
    /// Threads for Algorithm 3.
    pub workers: usize,
    /// Algorithm blocks of a study run concurrently.
    pub jobs: usize,
    pub repetitions: usize,
    pub initial_solver: CoupledSolver,
    pub out: Option<PathBuf>,
    /// Write every nodal coefficient next to the summary.
    pub dump_coefficients: bool,
}

const KEYS: &[&str] = &[
    "scenario",
    "table",
    "algorithm",
    "k",
    "l",
    "n",
    "dt",
    "tau",
    "schedule",
    "rows",
    "rate_base",
    "nu",
    "e",
    "alpha",
    "beta",
    "a0",
    "b0",
    "c0",
    "k_tensor",
    "theta",
    "domain",
    "mode",
    "workers",
    "jobs",
    "repetitions",
    "initial_solver",
    "out",
    "coefficients",
];

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

/// Parses a number, accepting fractions such as `1/64`.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| "not a number".to_string())?;
            let b: f64 = b.trim().parse().map_err(|_| "not a number".to_string())?;
            a / b
        }
        None => s.parse().map_err(|_| "not a number".to_string())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err("not finite".into())
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    parse_number(value).map_err(|e| invalid(key, value, e))
}

fn positive(key: &str, value: &str) -> Result<f64> {
    let v = number(key, value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, value, "must be positive"))
    }
}

fn count(key: &str, value: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(invalid(key, value, "expected a positive integer")),
    }
}

fn tensor(key: &str, value: &str) -> Result<Spd2<f64>> {
    let parts: Vec<&str> = value.split(',').collect();
    let nums = parts.iter().map(|p| number(key, p)).collect::<Result<Vec<_>>>()?;
    match nums[..] {
        [s] => Ok(Spd2::isotropic(s)),
        [xx, xy, yy] => Ok(Spd2::new(xx, xy, yy)),
        _ => Err(invalid(key, value, "expected one value or 'kxx, kxy, kyy'")),
    }
}

fn algorithms(key: &str, value: &str) -> Result<Vec<Algorithm>> {
    if value.eq_ignore_ascii_case("all") {
        return Ok(Algorithm::ALL.to_vec());
    }
    if value.eq_ignore_ascii_case("split") {
        return Ok(Algorithm::SPLIT.to_vec());
    }
    let mut out = Vec::new();
    for part in value.split(',') {
        let alg: Algorithm = part.parse().map_err(|e: thermoporo::Error| invalid(key, value, e.to_string()))?;
        if !out.contains(&alg) {
            out.push(alg);
        }
    }
    Ok(out)
}

fn schedule(key: &str, value: &str) -> Result<Vec<Refinement>> {
    let mut out = Vec::new();
    for part in value.split(',') {
        let (n, dt) = part
            .split_once(':')
            .ok_or_else(|| invalid(key, value, "expected 'n:dt' pairs separated by commas"))?;
        out.push(Refinement {
            n: count(key, n.trim())?,
            dt: positive(key, dt)?,
        });
    }
    Ok(out)
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}

impl RunConfig {
    /// Applies the settings on top of the scenario or table defaults and
    /// checks the result for conflicts.
    pub fn resolve(settings: &Settings) -> Result<Self> {
        for (key, _) in &settings.0 {
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey(key.clone()));
            }
        }
        let table = settings
            .last("table")
            .map(|v| v.parse::<TableId>().map_err(|e| invalid("table", v, e)))
            .transpose()?;
        let scenario = match settings.last("scenario") {
            Some(v) => v.parse::<Scenario>().map_err(|e| invalid("scenario", v, e))?,
            None => Scenario::Example1,
        };
        if let (Some(t), true) = (table, scenario != Scenario::Example1) {
            return Err(ConfigError::Conflict(format!(
                "table {t} is defined for the example1 scenario, not {scenario}"
            )));
        }

        let mut cfg = Self::defaults(scenario, table);
        let mut rows = None;
        for (key, value) in &settings.0 {
            let (key, value) = (key.as_str(), value.as_str());
            let c = &mut cfg.coefficients;
            match key {
                "scenario" | "table" => {}
                "algorithm" => cfg.algorithms = Some(algorithms(key, value)?),
                "k" => cfg.k = count(key, value)?,
                "l" => cfg.l = count(key, value)?,
                "n" => cfg.n = count(key, value)?,
                "dt" => cfg.dt = positive(key, value)?,
                "tau" => cfg.tau = positive(key, value)?,
                "schedule" => cfg.schedule = schedule(key, value)?,
                "rows" => rows = Some(count(key, value)?),
                "rate_base" => {
                    cfg.base = match value.to_ascii_lowercase().as_str() {
                        "h" | "mesh" => RateBase::MeshSize,
                        "dt" | "time" => RateBase::TimeStep,
                        _ => return Err(invalid(key, value, "expected h or dt")),
                    }
                }
                "nu" => c.poisson = number(key, value)?,
                "e" => c.young = number(key, value)?,
                "alpha" => c.alpha = number(key, value)?,
                "beta" => c.beta = number(key, value)?,
                "a0" => c.a0 = number(key, value)?,
                "b0" => c.b0 = number(key, value)?,
                "c0" => c.c0 = number(key, value)?,
                "k_tensor" => c.permeability = tensor(key, value)?,
                "theta" => c.conductivity = tensor(key, value)?,
                "domain" => {
                    let v = value.split(',').map(|p| number(key, p)).collect::<Result<Vec<_>>>()?;
                    match v[..] {
                        [x0, y0, x1, y1] if x1 > x0 && y1 > y0 => {
                            cfg.domain = (Point2::new(x0, y0), Point2::new(x1, y1))
                        }
                        _ => return Err(invalid(key, value, "expected 'x0, y0, x1, y1' with x1 > x0, y1 > y0")),
                    }
                }
                "mode" => {
                    cfg.mode = match value.to_ascii_lowercase().as_str() {
                        "strict" => AssumptionMode::Strict,
                        "permissive" => AssumptionMode::Permissive,
                        _ => return Err(invalid(key, value, "expected strict or permissive")),
                    }
                }
                "workers" => cfg.workers = count(key, value)?,
                "jobs" => cfg.jobs = count(key, value)?,
                "repetitions" => cfg.repetitions = count(key, value)?,
                "initial_solver" => {
                    cfg.initial_solver = match value.to_ascii_lowercase().as_str() {
                        "gmres" => CoupledSolver::Gmres,
                        "direct" => CoupledSolver::Direct,
                        _ => return Err(invalid(key, value, "expected gmres or direct")),
                    }
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                "coefficients" => cfg.dump_coefficients = boolean(key, value)?,
                _ => unreachable!("keys checked above"),
            }
        }

        if let Some(r) = rows {
            let full = table.map(|t| t.preset().schedule).unwrap_or_else(|| cfg.schedule.clone());
            if r > full.len() {
                return Err(invalid("rows", &r.to_string(), format!("the schedule has {} rows", full.len())));
            }
            cfg.schedule = full[..r].to_vec();
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn defaults(scenario: Scenario, table: Option<TableId>) -> Self {
        let (params, domain) = match scenario {
            Scenario::Example2 => (Example2::<f64>::new().params, Example2::<f64>::domain()),
            _ => (
                ModelParams::benchmark(),
                DomainSpec {
                    lo: Point2::new(0.0, 0.0),
                    hi: Point2::new(1.0, 1.0),
                    n: 16,
                    dt: 1.0 / 64.0,
                    tau: 1.0,
                },
            ),
        };
        let mut cfg = Self {
            scenario,
            table,
            algorithms: None,
            k: 2,
            l: 1,
            n: domain.n,
            dt: domain.dt,
            tau: domain.tau,
            schedule: Vec::new(),
            base: RateBase::MeshSize,
            coefficients: Coefficients::from_params(&params),
            params,
            domain: (domain.lo, domain.hi),
            mode: AssumptionMode::Strict,
            workers: 2,
            jobs: 1,
            repetitions: 3,
            initial_solver: CoupledSolver::default(),
            out: None,
            dump_coefficients: false,
        };
        if let Some(t) = table {
            let p = t.preset();
            cfg.k = p.k;
            cfg.l = p.l;
            cfg.base = p.base;
            cfg.mode = p.mode;
            cfg.coefficients.poisson = p.poisson;
            cfg.coefficients.permeability = Spd2::isotropic(p.tensor);
            cfg.coefficients.conductivity = Spd2::isotropic(p.tensor);
            if let Some(s) = p.storage {
                cfg.coefficients.a0 = s;
                cfg.coefficients.b0 = s;
                cfg.coefficients.c0 = s;
            }
            cfg.schedule = p.schedule[..p.default_rows].to_vec();
            let last = cfg.schedule[cfg.schedule.len() - 1];
            cfg.n = last.n;
            cfg.dt = last.dt;
        }
        cfg
    }

    fn check(&mut self) -> Result<()> {
        if !(2..=3).contains(&self.k) {
            return Err(invalid("k", &self.k.to_string(), "supported displacement degrees are 2 and 3"));
        }
        if !(1..=3).contains(&self.l) {
            return Err(invalid("l", &self.l.to_string(), "supported pressure degrees are 1, 2 and 3"));
        }
        self.params = self
            .coefficients
            .params()
            .map_err(|e| ConfigError::Conflict(e.to_string()))?;
        self.params
            .validate(self.mode)
            .map_err(|e| ConfigError::Conflict(format!("{e} (set mode = permissive to run anyway)")))?;
        let mut runs: Vec<f64> = self.schedule.iter().map(|r| r.dt).collect();
        runs.push(self.dt);
        for dt in runs {
            StepConfig::new(Algorithm::Coupled, dt, self.tau)
                .n_steps()
                .map_err(|e| ConfigError::Conflict(e.to_string()))?;
        }
        Ok(())
    }

    pub fn domain_spec(&self) -> DomainSpec<f64> {
        DomainSpec {
            lo: self.domain.0,
            hi: self.domain.1,
            n: self.n,
            dt: self.dt,
            tau: self.tau,
        }
    }

    pub fn step_config(&self, algorithm: Algorithm) -> StepConfig<f64> {
        let mut step = StepConfig::new(algorithm, self.dt, self.tau);
        step.workers = if algorithm == Algorithm::Alg3 { self.workers } else { 1 };
        step.initial_solver = self.initial_solver;
        step.mode = self.mode;
        step
    }

    /// Human-readable one-line description of the configured problem.
    pub fn describe(&self) -> String {
        let what = match self.table {
            Some(t) => format!("{t}: {}", t.preset().description),
            None => format!("scenario {}", self.scenario),
        };
        format!("{what}; k = {}, l = {}, tau = {}", self.k, self.l, self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(pairs: &[(&str, &str)]) -> Result<RunConfig> {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.set(k, *v);
        }
        RunConfig::resolve(&s)
    }

    #[test]
    fn parses_files_with_comments() {
        let s = Settings::parse("# header\nn = 8\n\ndt=1/16 # step\nalgorithm = alg3\n", "test").unwrap();
        assert_eq!(s.0.len(), 3);
        let cfg = RunConfig::resolve(&s).unwrap();
        assert_eq!(cfg.n, 8);
        assert_eq!(cfg.dt, 1.0 / 16.0);
        assert_eq!(cfg.algorithms, Some(vec![Algorithm::Alg3]));
    }

    #[test]
    fn rejects_bad_lines_and_keys() {
        assert!(matches!(Settings::parse("n 8", "x"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(resolve(&[("mesh", "8")]), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(resolve(&[("k", "4")]), Err(ConfigError::Value { .. })));
        assert!(matches!(resolve(&[("dt", "-1")]), Err(ConfigError::Value { .. })));
        assert!(matches!(resolve(&[("dt", "0.3")]), Err(ConfigError::Conflict(_))));
    }

    #[test]
    fn later_values_win() {
        let cfg = resolve(&[("n", "8"), ("n", "12")]).unwrap();
        assert_eq!(cfg.n, 12);
    }

    #[test]
    fn presets_carry_published_parameters() {
        let t3 = resolve(&[("table", "T3")]).unwrap();
        assert_eq!(t3.params.poisson, 0.499);
        assert_eq!(t3.schedule.len(), 4);
        let t4 = resolve(&[("table", "t4")]).unwrap();
        assert_eq!(t4.params.permeability, Spd2::isotropic(1e-9));
        let t5 = resolve(&[("table", "T5")]).unwrap();
        assert_eq!((t5.params.a0, t5.params.b0, t5.params.c0), (0.0, 0.0, 0.0));
        assert_eq!(t5.mode, AssumptionMode::Permissive);
        let t6 = resolve(&[("table", "T6")]).unwrap();
        assert_eq!((t6.k, t6.l, t6.schedule.len()), (3, 2, 3));
        let t6 = resolve(&[("table", "T6"), ("rows", "4")]).unwrap();
        assert_eq!(t6.schedule[3].dt, 1.0 / 2048.0);
        let t1 = resolve(&[("table", "T1")]).unwrap();
        assert_eq!(t1.base, RateBase::TimeStep);
        assert!(t1.schedule.iter().all(|r| r.n == 32));
    }

    #[test]
    fn strict_mode_conflicts_with_vanishing_storage() {
        let err = resolve(&[("table", "T5"), ("mode", "strict")]).unwrap_err();
        assert!(matches!(err, ConfigError::Conflict(_)), "{err}");
    }

    #[test]
    fn tables_belong_to_example1() {
        assert!(matches!(
            resolve(&[("scenario", "example2"), ("table", "T2")]),
            Err(ConfigError::Conflict(_))
        ));
    }

    #[test]
    fn example2_defaults() {
        let cfg = resolve(&[("scenario", "example2")]).unwrap();
        assert_eq!((cfg.n, cfg.dt, cfg.tau), (50, 0.01, 1.0));
        assert_eq!(cfg.domain.1, Point2::new(500.0, 500.0));
        assert_eq!(cfg.params.poisson, 0.499);
    }

    #[test]
    fn anisotropic_tensors_and_fractions() {
        let cfg = resolve(&[("k_tensor", "2, 0.5, 1"), ("theta", "1/10")]).unwrap();
        assert_eq!(cfg.params.permeability, Spd2::new(2.0, 0.5, 1.0));
        assert_eq!(cfg.params.conductivity, Spd2::isotropic(0.1));
        assert!(resolve(&[("k_tensor", "1, 2")]).is_err());
        assert!(resolve(&[("k_tensor", "1, 2, 1")]).is_err());
    }
}
