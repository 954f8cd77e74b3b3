use thermoporo::assembly::Discretization;
use thermoporo::mesh::Point2;
use thermoporo::model::{Example2, Problem};
use thermoporo::steppers::{simulate, Algorithm, StepConfig};

fn argext(values: &[f64], coords: &[Point2<f64>], max: bool) -> (f64, Point2<f64>) {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if (max && v > values[best]) || (!max && v < values[best]) {
            best = i;
        }
    }
    (values[best], coords[best])
}

#[test]
fn reservoir_runs_to_final_time() {
    let problem = Example2::<f64>::new();
    let domain = Example2::<f64>::domain();
    let disc = Discretization::new(domain.mesh().unwrap(), 2, 1).unwrap();
    let out = simulate(&disc, &problem, &StepConfig::new(Algorithm::Alg3, domain.dt, domain.tau)).unwrap();
    assert_eq!(out.state.level, 100);
    assert!((out.state.t - 1.0).abs() < 1e-12);
    assert!(out.state.is_finite());

    let (pmax, at_max) = argext(&out.state.p, &disc.w.node_coords, true);
    let (pmin, at_min) = argext(&out.state.p, &disc.w.node_coords, false);
    println!("p max {pmax:e} at ({}, {}), min {pmin:e} at ({}, {})", at_max.x, at_max.y, at_min.x, at_min.y);
    assert!(pmax > 0.0 && pmin < 0.0);
    // The pressure follows the sign of the well term: it peaks where the source is positive.
    assert!(at_max.distance(problem.source_well) <= 30.0);
    assert!(at_min.distance(problem.sink_well) <= 30.0);
    assert!(problem.sources(at_max, 1.0).g > 0.0);
}
