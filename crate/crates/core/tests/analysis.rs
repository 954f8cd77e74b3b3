use thermoporo::analysis::{
    benchmark, convergence_study, error_report, error_report_with, RateBase, Refinement, StudySettings,
};
use thermoporo::assembly::Discretization;
use thermoporo::mesh::unit_square;
use thermoporo::model::{AssumptionMode, ManufacturedProblem, ModelParams};
use thermoporo::steppers::{simulate, Algorithm, StepConfig};

fn settings(k: usize, l: usize, base: RateBase) -> StudySettings {
    StudySettings {
        k,
        l,
        tau: 1.0,
        base,
        step: StepConfig::new(Algorithm::Alg1, 1.0, 1.0),
    }
}

#[test]
fn error_norms_are_quadrature_stable() {
    let params = ModelParams::<f64>::benchmark();
    let problem = ManufacturedProblem::example1(params);
    // Coarser meshes and k = 3 miss 1e-9: the trigonometric fields are not
    // resolved by either rule there (gaps up to 3e-5 relative at h = 1/4).
    for (n, dt, k, l) in [(16, 1.0 / 64.0, 2, 1), (32, 1.0 / 256.0, 2, 1)] {
        let disc = Discretization::new(unit_square(n).unwrap(), k, l).unwrap();
        let out = simulate(&disc, &problem, &StepConfig::new(Algorithm::Alg3, dt, 1.0)).unwrap();
        let e8 = error_report_with(&disc, &out.state, &problem.exact, &params, 8).unwrap().as_array();
        let e10 = error_report_with(&disc, &out.state, &problem.exact, &params, 10).unwrap().as_array();
        for (a, b) in e8.iter().zip(&e10) {
            assert!((a - b).abs() <= 1e-9 * b, "n={n}: {a:e} vs {b:e}");
        }
    }
}

#[test]
fn benchmark_errors_match_standalone_runs() {
    let params = ModelParams::benchmark();
    let problem = ManufacturedProblem::example1(params);
    let refinement = Refinement { n: 6, dt: 0.125 };
    let reports = benchmark(&Algorithm::ALL, &problem, refinement, &settings(2, 1, RateBase::MeshSize), 3).unwrap();
    assert_eq!(reports.len(), 4);
    let disc = Discretization::new(unit_square(6).unwrap(), 2, 1).unwrap();
    for r in &reports {
        assert_eq!(r.samples.len(), 3);
        assert!(r.samples.contains(&r.median));
        let out = simulate(&disc, &problem, &StepConfig::new(r.algorithm, 0.125, 1.0)).unwrap();
        let e = error_report(&disc, &out.state, &problem.exact, &params).unwrap();
        for (a, b) in e.as_array().iter().zip(&r.errors.as_array()) {
            assert!((a - b).abs() <= 1e-12 * b, "{}: {a:e} vs {b:e}", r.algorithm);
        }
    }
}

#[test]
fn uncoupled_studies_match_the_monolithic_rows() {
    let mut params = ModelParams::benchmark();
    params.alpha = 0.0;
    params.beta = 0.0;
    let problem = ManufacturedProblem::example1(params);
    let schedule = [Refinement { n: 2, dt: 0.5 }, Refinement { n: 4, dt: 0.125 }];
    let mut s = settings(2, 1, RateBase::MeshSize);
    s.step.mode = AssumptionMode::Permissive;
    let reference = convergence_study(&problem, &schedule, Algorithm::Coupled, &s).unwrap();
    for alg in Algorithm::SPLIT {
        let rows = convergence_study(&problem, &schedule, alg, &s).unwrap();
        for (a, b) in rows.iter().zip(&reference) {
            for (x, y) in a.errors.as_array().iter().zip(&b.errors.as_array()) {
                assert!((x - y).abs() < 1e-10, "{alg}");
            }
        }
    }
}

#[test]
fn spatial_rates_approach_the_element_orders() {
    let params = ModelParams::benchmark();
    let problem = ManufacturedProblem::example1(params);
    let schedule = [Refinement { n: 4, dt: 1.0 / 4.0 }, Refinement { n: 8, dt: 1.0 / 16.0 }, Refinement { n: 16, dt: 1.0 / 64.0 }];
    let rows = convergence_study(&problem, &schedule, Algorithm::Alg3, &settings(2, 1, RateBase::MeshSize)).unwrap();
    assert_eq!(rows[0].rates, [Some(0.0); 4]);
    let last = rows.last().unwrap().rates.map(Option::unwrap);
    assert!(last[0] > 1.8 && last[1] > 1.8 && last[2] > 0.9 && last[3] > 0.9, "{last:?}");
    assert_eq!(rows[2].h_label(), "1/16");
}

#[test]
fn studies_need_a_known_solution() {
    let problem = thermoporo::model::Example2::<f64>::new();
    let r = convergence_study(&problem, &[Refinement { n: 2, dt: 0.5 }], Algorithm::Alg1, &settings(2, 1, RateBase::MeshSize));
    assert!(r.is_err());
}
