use thermoporo::assembly::{assemble_forms, assemble_load, assemble_neumann_traction, apply_dirichlet, Discretization};
use thermoporo::discretization::{build_dofmap, gauss_legendre_unit, AffineMap, SpaceKind};
use thermoporo::linalg::{solve, CsrMatrix};
use thermoporo::mesh::{unit_square, BoundaryTag, Point2};
use thermoporo::model::{exact_traction, Example1, ModelParams};

/// Five-point finite differences for `-lap p = 1`, zero on the boundary, on an
/// `m x m` grid; returns the centre value.
fn fd_poisson_centre(m: usize) -> f64 {
    let h = 1.0 / m as f64;
    let n = m - 1;
    let id = |i: usize, j: usize| (j - 1) * n + (i - 1);
    let mut trip = Vec::with_capacity(5 * n * n);
    for j in 1..m {
        for i in 1..m {
            let r = id(i, j);
            trip.push((r, r, 4.0 / (h * h)));
            for (ii, jj) in [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)] {
                if ii >= 1 && ii < m && jj >= 1 && jj < m {
                    trip.push((r, id(ii, jj), -1.0 / (h * h)));
                }
            }
        }
    }
    let a = CsrMatrix::from_triplets(n * n, n * n, &trip).unwrap();
    let (x, _) = solve(&a, &vec![1.0; n * n]).unwrap();
    x[id(m / 2, m / 2)]
}

#[test]
fn poisson_centre_value_matches_finite_differences() {
    let reference = fd_poisson_centre(256);
    assert!((reference - 0.0737).abs() < 5e-5, "reference {reference}");

    let params = ModelParams::<f64>::benchmark();
    let disc = Discretization::new(unit_square(16).unwrap(), 2, 1).unwrap();
    let forms = assemble_forms(&disc, &params).unwrap();
    let b = assemble_load(&disc.mesh, &disc.w, |_, _| 1.0, 0.0).unwrap();
    let (a, b) = apply_dirichlet(&forms.stiff_p, &b, &disc.w_fixed).unwrap();
    let (p, report) = solve(&a, &b).unwrap();
    assert!(report.relative_residual < 1e-12);
    let centre = disc
        .w
        .node_coords
        .iter()
        .position(|c| (c.x - 0.5).abs() < 1e-12 && (c.y - 0.5).abs() < 1e-12)
        .unwrap();
    assert!((p[centre] - reference).abs() < 5e-4, "P1 {} vs FD {reference}", p[centre]);
}

#[test]
fn exact_traction_matches_fine_edge_quadrature() {
    let params = ModelParams::<f64>::benchmark();
    let exact = Example1::new(&params);
    let mesh = unit_square::<f64>(4).unwrap();
    let dm = build_dofmap(&mesh, SpaceKind::Vector, 2).unwrap();
    let traction = |x: Point2<f64>, n: [f64; 2], t: f64| exact_traction(&exact, &params, x, n, t);
    let assembled = assemble_neumann_traction(&mesh, &dm, traction, 0.0);

    // Composite 8-point Gauss-Legendre over 32 pieces of every edge.
    let (s, w) = gauss_legendre_unit::<f64>(8);
    let pieces = 32;
    let mut oracle = vec![0.0; dm.n_dofs()];
    let mut vals = vec![0.0; dm.nodes_per_cell()];
    for (edge, &(cell, _)) in mesh.boundary_edges.iter().zip(&mesh.boundary_edge_owners()) {
        if edge.tag != BoundaryTag::GammaN {
            continue;
        }
        let a = mesh.vertices[edge.vertices[0]];
        let b = mesh.vertices[edge.vertices[1]];
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len = dx.hypot(dy);
        let normal = [dy / len, -dx / len];
        let map = AffineMap::new(&mesh, cell);
        for piece in 0..pieces {
            for (&si, &wi) in s.iter().zip(&w) {
                let r = (piece as f64 + si) / pieces as f64;
                let x = Point2::new(a.x + r * dx, a.y + r * dy);
                let tr = traction(x, normal, 0.0);
                dm.element.eval(map.inverse(x), &mut vals);
                for (&node, &phi) in dm.cell_nodes(cell).iter().zip(&vals) {
                    for c in 0..2 {
                        oracle[dm.dof(node, c)] += tr[c] * phi * wi * len / pieces as f64;
                    }
                }
            }
        }
    }
    let worst = assembled.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "max deviation {worst:e}");
}
