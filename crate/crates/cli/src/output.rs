//! CSV tables, legacy VTK snapshots and plain-text summaries.

use std::fmt::Write as _;
use std::io::{self, Write};

use thermoporo::analysis::{ConvergenceRow, TimingReport};
use thermoporo::assembly::Discretization;
use thermoporo::steppers::{Algorithm, PhaseTimings, State};

/// Scientific notation with five decimals and a two-digit exponent, as in
/// `5.29628e-01`.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Shortest representation that round-trips.
pub fn full(x: f64) -> String {
    format!("{x:e}")
}

pub fn rate(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v:.2}"),
        None => "NA".to_string(),
    }
}

/// `1/m` when `x` is the reciprocal of an integer, otherwise the full value.
pub fn reciprocal_label(x: f64) -> String {
    let m = (1.0 / x).round();
    if m >= 1.0 && (1.0 / m - x).abs() <= 1e-12 * x {
        format!("1/{m}")
    } else {
        full(x)
    }
}

pub const CONVERGENCE_HEADER: [&str; 15] = [
    "algorithm",
    "h",
    "dt",
    "err_u_H1",
    "rate_u",
    "err_xi_L2",
    "rate_xi",
    "err_p_H1",
    "rate_p",
    "err_T_H1",
    "rate_T",
    "err_u_H1_full",
    "err_xi_L2_full",
    "err_p_H1_full",
    "err_T_H1_full",
];

pub fn convergence_csv<W: Write>(out: W, blocks: &[(Algorithm, Vec<ConvergenceRow>)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONVERGENCE_HEADER)?;
    for (alg, rows) in blocks {
        for r in rows {
            let e = r.errors.as_array();
            let mut rec = vec![alg.name().to_string(), r.h_label(), reciprocal_label(r.dt)];
            for (&v, &q) in e.iter().zip(&r.rates) {
                rec.push(sci(v));
                rec.push(rate(q));
            }
            rec.extend(e.iter().map(|&v| full(v)));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const BENCH_HEADER: [&str; 17] = [
    "algorithm",
    "h",
    "dt",
    "err_u_H1",
    "err_xi_L2",
    "err_p_H1",
    "err_T_H1",
    "median_s",
    "repetitions",
    "setup_s",
    "loads_s",
    "initial_s",
    "elasticity_s",
    "reaction_diffusion_s",
    "coupled_s",
    "join_s",
    "total_s",
];

fn secs(d: std::time::Duration) -> String {
    format!("{:.6}", d.as_secs_f64())
}

fn phase_columns(p: &PhaseTimings) -> [String; 8] {
    [
        secs(p.setup),
        secs(p.loads),
        secs(p.initial),
        secs(p.elasticity),
        secs(p.reaction_diffusion),
        secs(p.coupled),
        secs(p.join),
        secs(p.total),
    ]
}

pub fn bench_csv<W: Write>(out: W, reports: &[TimingReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_HEADER)?;
    for r in reports {
        let mut rec = vec![r.algorithm.name().to_string(), format!("1/{}", r.n), reciprocal_label(r.dt)];
        rec.extend(r.errors.as_array().iter().map(|&v| sci(v)));
        rec.push(secs(r.median));
        rec.push(r.samples.len().to_string());
        rec.extend(phase_columns(&r.phases));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Field restricted to the mesh vertices (the first nodes of every space).
#[derive(Debug, Clone, PartialEq)]
pub enum VertexField {
    Scalar(Vec<f64>),
    Vector(Vec<[f64; 2]>),
}

/// Vertex values of `u`, `xi`, `p`, `T` with their file stems.
pub fn vertex_fields(disc: &Discretization<f64>, state: &State<f64>) -> Vec<(&'static str, VertexField)> {
    let nv = disc.mesh.n_vertices();
    let u = (0..nv)
        .map(|v| [state.u[disc.u.dof(v, 0)], state.u[disc.u.dof(v, 1)]])
        .collect();
    let scalar = |dm: &thermoporo::discretization::DofMap<f64>, x: &[f64]| -> Vec<f64> {
        (0..nv).map(|v| x[dm.dof(v, 0)]).collect()
    };
    vec![
        ("u", VertexField::Vector(u)),
        ("xi", VertexField::Scalar(scalar(&disc.xi, &state.xi))),
        ("p", VertexField::Scalar(scalar(&disc.w, &state.p))),
        ("T", VertexField::Scalar(scalar(&disc.w, &state.temp))),
    ]
}

/// Legacy ASCII VTK unstructured grid with one point-data array.
pub fn write_vtk<W: Write>(
    mut out: W,
    disc: &Discretization<f64>,
    name: &str,
    field: &VertexField,
    t: f64,
) -> io::Result<()> {
    let mesh = &disc.mesh;
    writeln!(out, "# vtk DataFile Version 2.0")?;
    writeln!(out, "thermoporo {name} t={}", full(t))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.n_vertices())?;
    for v in &mesh.vertices {
        writeln!(out, "{} {} 0", full(v.x), full(v.y))?;
    }
    let nt = mesh.n_triangles();
    writeln!(out, "CELLS {nt} {}", 4 * nt)?;
    for [a, b, c] in &mesh.triangles {
        writeln!(out, "3 {a} {b} {c}")?;
    }
    writeln!(out, "CELL_TYPES {nt}")?;
    for _ in 0..nt {
        writeln!(out, "5")?;
    }
    writeln!(out, "POINT_DATA {}", mesh.n_vertices())?;
    match field {
        VertexField::Scalar(values) => {
            writeln!(out, "SCALARS {name} double 1")?;
            writeln!(out, "LOOKUP_TABLE default")?;
            for v in values {
                writeln!(out, "{}", full(*v))?;
            }
        }
        VertexField::Vector(values) => {
            writeln!(out, "VECTORS {name} double")?;
            for [x, y] in values {
                writeln!(out, "{} {} 0", full(*x), full(*y))?;
            }
        }
    }
    out.flush()
}

/// Shape of a parsed legacy VTK file.
#[derive(Debug, Clone, PartialEq)]
pub struct VtkInfo {
    pub points: usize,
    pub cells: usize,
    pub name: String,
    pub components: usize,
    pub values: Vec<f64>,
}

/// Parses a file written by [`write_vtk`] and checks the legacy-format
/// structure: header, counts, triangle connectivity and finite point data.
pub fn validate_vtk(text: &str) -> Result<VtkInfo, String> {
    let mut lines = text.lines();
    let mut next = |what: &str| lines.next().ok_or_else(|| format!("missing {what}"));
    if next("header")? != "# vtk DataFile Version 2.0" {
        return Err("bad version header".into());
    }
    next("title")?;
    if next("format")? != "ASCII" {
        return Err("not ASCII".into());
    }
    if next("dataset")? != "DATASET UNSTRUCTURED_GRID" {
        return Err("not an unstructured grid".into());
    }
    let words = |line: &str| line.split_whitespace().map(str::to_string).collect::<Vec<_>>();
    let count = |w: &[String], key: &str, pos: usize| -> Result<usize, String> {
        if w.first().map(String::as_str) != Some(key) {
            return Err(format!("expected {key}"));
        }
        w.get(pos).and_then(|v| v.parse().ok()).ok_or_else(|| format!("bad {key} count"))
    };
    let floats = |line: &str, n: usize| -> Result<Vec<f64>, String> {
        let v: Vec<f64> = line.split_whitespace().map(|t| t.parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        if v.len() != n || v.iter().any(|x| !x.is_finite()) {
            return Err(format!("expected {n} finite values in '{line}'"));
        }
        Ok(v)
    };
    let points = count(&words(next("POINTS")?), "POINTS", 1)?;
    for _ in 0..points {
        floats(next("point")?, 3)?;
    }
    let w = words(next("CELLS")?);
    let cells = count(&w, "CELLS", 1)?;
    if count(&w, "CELLS", 2)? != 4 * cells {
        return Err("CELLS size is not 4 per triangle".into());
    }
    for _ in 0..cells {
        let ids: Vec<usize> = next("cell")?
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if ids.len() != 4 || ids[0] != 3 || ids[1..].iter().any(|&i| i >= points) {
            return Err("bad triangle connectivity".into());
        }
    }
    if count(&words(next("CELL_TYPES")?), "CELL_TYPES", 1)? != cells {
        return Err("CELL_TYPES count mismatch".into());
    }
    for _ in 0..cells {
        if next("cell type")?.trim() != "5" {
            return Err("cell type is not VTK_TRIANGLE".into());
        }
    }
    if count(&words(next("POINT_DATA")?), "POINT_DATA", 1)? != points {
        return Err("POINT_DATA count mismatch".into());
    }
    let w = words(next("data header")?);
    let (name, components) = match w.first().map(String::as_str) {
        Some("SCALARS") => {
            if next("lookup table")? != "LOOKUP_TABLE default" {
                return Err("missing LOOKUP_TABLE".into());
            }
            (w.get(1).cloned().unwrap_or_default(), 1)
        }
        Some("VECTORS") => (w.get(1).cloned().unwrap_or_default(), 3),
        _ => return Err("expected SCALARS or VECTORS".into()),
    };
    let mut values = Vec::with_capacity(points * components);
    for _ in 0..points {
        values.extend(floats(next("value")?, components)?);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err("trailing data".into());
    }
    Ok(VtkInfo {
        points,
        cells,
        name,
        components,
        values,
    })
}

/// Smallest and largest nodal value with their positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub min_at: (f64, f64),
    pub max: f64,
    pub max_at: (f64, f64),
}

impl Extrema {
    fn of(values: impl Iterator<Item = (f64, (f64, f64))>) -> Option<Self> {
        let mut e: Option<Extrema> = None;
        for (v, at) in values {
            let cur = e.get_or_insert(Extrema {
                min: v,
                min_at: at,
                max: v,
                max_at: at,
            });
            if v < cur.min {
                cur.min = v;
                cur.min_at = at;
            }
            if v > cur.max {
                cur.max = v;
                cur.max_at = at;
            }
        }
        e
    }

    pub fn is_finite(&self) -> bool {
        self.min.is_finite() && self.max.is_finite()
    }
}

/// Extrema over every nodal coefficient of `u_x, u_y, xi, p, T`.
pub fn field_extrema(disc: &Discretization<f64>, state: &State<f64>) -> Vec<(&'static str, Extrema)> {
    let at = |dm: &thermoporo::discretization::DofMap<f64>, node: usize| {
        let c = dm.node_coords[node];
        (c.x, c.y)
    };
    let scalar = |dm: &thermoporo::discretization::DofMap<f64>, x: &[f64]| {
        Extrema::of((0..dm.node_coords.len()).map(|i| (x[dm.dof(i, 0)], at(dm, i))))
    };
    let comp = |c: usize| {
        Extrema::of((0..disc.u.node_coords.len()).map(|i| (state.u[disc.u.dof(i, c)], at(&disc.u, i))))
    };
    [
        ("u_x", comp(0)),
        ("u_y", comp(1)),
        ("xi", scalar(&disc.xi, &state.xi)),
        ("p", scalar(&disc.w, &state.p)),
        ("T", scalar(&disc.w, &state.temp)),
    ]
    .into_iter()
    .filter_map(|(n, e)| e.map(|e| (n, e)))
    .collect()
}

/// Every nodal coefficient as CSV: field, component, node, x, y, value.
pub fn coefficients_csv<W: Write>(out: W, disc: &Discretization<f64>, state: &State<f64>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["field", "component", "node", "x", "y", "value"])?;
    let mut dump = |name: &str, dm: &thermoporo::discretization::DofMap<f64>, x: &[f64], comps: usize| {
        for (node, c) in dm.node_coords.iter().enumerate() {
            for k in 0..comps {
                w.write_record([
                    name.to_string(),
                    k.to_string(),
                    node.to_string(),
                    full(c.x),
                    full(c.y),
                    full(x[dm.dof(node, k)]),
                ])?;
            }
        }
        csv::Result::Ok(())
    };
    dump("u", &disc.u, &state.u, 2)?;
    dump("xi", &disc.xi, &state.xi, 1)?;
    dump("p", &disc.w, &state.p, 1)?;
    dump("T", &disc.w, &state.temp, 1)?;
    w.flush()?;
    Ok(())
}

/// Phase timings as aligned `name seconds` lines.
pub fn timing_lines(p: &PhaseTimings) -> String {
    let names = [
        "setup",
        "loads",
        "initial",
        "elasticity",
        "reaction_diffusion",
        "coupled",
        "join",
        "total",
    ];
    let mut s = String::new();
    for (n, v) in names.iter().zip(phase_columns(p)) {
        let _ = writeln!(s, "  {n:<20} {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_format_matches_published_style() {
        assert_eq!(sci(0.529628), "5.29628e-01");
        assert_eq!(sci(1.2e-10), "1.20000e-10");
        assert_eq!(sci(12345.0), "1.23450e+04");
        assert_eq!(sci(0.0), "0.00000e+00");
        assert_eq!(sci(-3.71832e-2), "-3.71832e-02");
        assert_eq!(sci(f64::NAN), "NaN");
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [0.1, 1.0 / 3.0, 3.7183213e-2, 5e-324] {
            assert_eq!(full(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn labels_and_rates() {
        assert_eq!(reciprocal_label(1.0 / 256.0), "1/256");
        assert_eq!(reciprocal_label(0.01), "1/100");
        assert_eq!(reciprocal_label(0.3), "3e-1");
        assert_eq!(rate(Some(1.996)), "2.00");
        assert_eq!(rate(None), "NA");
    }
}
