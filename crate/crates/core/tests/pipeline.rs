use std::f64::consts::PI;

use scuq_core::experiments::{run, solve_field, ExperimentConfig, ExperimentId};
use scuq_core::pipeline::{field_pipeline, SolutionField};
use scuq_core::statistics::{candidate_pdf, l1_pdf_error_with, mc_reference, Binning, WidthConvention};
use scuq_core::surrogate::{build_surrogate, sample_surrogate, SurrogateMethod, SurrogateOptions};
use scuq_core::{CollocationSet, Error, RandomVariable};

fn cosine(x: f64) -> f64 {
    3.0 * (PI * x).cos()
}

#[test]
fn surrogates_reject_bad_node_sets() {
    let rv = RandomVariable::uniform(-1.0, 1.0).unwrap();
    let opts = SurrogateOptions::default();
    let six = CollocationSet::from_fn(rv.uniform_nodes(6).unwrap(), cosine).unwrap();
    match build_surrogate(SurrogateMethod::Cweno, &six, &rv, &opts) {
        Err(Error::Config(msg)) => assert!(msg.contains("cweno"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let uniform = CollocationSet::from_fn(rv.uniform_nodes(9).unwrap(), cosine).unwrap();
    match build_surrogate(SurrogateMethod::Gpc, &uniform, &rv, &opts) {
        Err(Error::Config(msg)) => assert!(msg.contains("gpc"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sampling_at_the_nodes_returns_the_data() {
    let rv = RandomVariable::uniform(-1.0, 1.0).unwrap();
    let colloc = CollocationSet::from_fn(rv.uniform_nodes(16).unwrap(), cosine).unwrap();
    let s = build_surrogate(SurrogateMethod::Cweno, &colloc, &rv, &SurrogateOptions::default()).unwrap();
    let samples = scuq_core::SampleSet {
        values: colloc.nodes().to_vec(),
        seed: 0,
        law: rv,
    };
    for (v, u) in sample_surrogate(&s, &samples).unwrap().iter().zip(colloc.values()) {
        assert!((v - u).abs() < 1e-10);
    }
}

#[test]
fn interp_bspline_error_drops_from_7_to_16_nodes() {
    let rv = RandomVariable::uniform(-1.0, 1.0).unwrap();
    let reference = mc_reference(cosine, &rv, 200_000, 5).unwrap();
    let error = |n: usize| {
        let colloc = CollocationSet::from_fn(rv.uniform_nodes(n).unwrap(), cosine).unwrap();
        let s = build_surrogate(SurrogateMethod::BsplineInterp, &colloc, &rv, &SurrogateOptions::default()).unwrap();
        let values = sample_surrogate(&s, &reference.samples).unwrap();
        let pdf = candidate_pdf(&values, &reference.pdf, Binning::SharedCount).unwrap();
        l1_pdf_error_with(&reference.pdf, &pdf, Binning::SharedCount).unwrap()
    };
    assert!(error(16) < error(7));
}

#[test]
fn sampling_is_deterministic() {
    let rv = RandomVariable::normal(0.0, 0.33).unwrap();
    let colloc = CollocationSet::from_fn(rv.uniform_nodes(12).unwrap(), cosine).unwrap();
    let samples = rv.sample(1_000_000, 9).unwrap();
    for method in [SurrogateMethod::Cweno, SurrogateMethod::SpSpline] {
        let s = build_surrogate(method, &colloc, &rv, &SurrogateOptions::default()).unwrap();
        assert_eq!(sample_surrogate(&s, &samples).unwrap(), sample_surrogate(&s, &samples).unwrap());
    }
}

#[test]
fn interpolatory_errors_decrease_with_n() {
    let rv = RandomVariable::uniform(-1.0, 1.0).unwrap();
    let reference = mc_reference(cosine, &rv, 1_000_000, 11).unwrap();
    for method in SurrogateMethod::ALL.into_iter().filter(|m| m.interpolates()) {
        let errors: Vec<f64> = [8, 12, 16, 20]
            .iter()
            .map(|&n| {
                let colloc = CollocationSet::from_fn(method.nodes(&rv, n).unwrap(), cosine).unwrap();
                let s = build_surrogate(method, &colloc, &rv, &SurrogateOptions::default()).unwrap();
                let values = sample_surrogate(&s, &reference.samples).unwrap();
                let pdf = candidate_pdf(&values, &reference.pdf, Binning::SharedCount).unwrap();
                l1_pdf_error_with(&reference.pdf, &pdf, Binning::SharedCount).unwrap()
            })
            .collect();
        let rises = errors.windows(2).filter(|w| w[1] > w[0]).count();
        assert!(rises <= 1, "{method}: {errors:?}");
    }
}

#[test]
fn field_constant_in_xi_has_zero_spread() {
    let rv = RandomVariable::uniform(-1.0, 1.0).unwrap();
    let nodes = rv.uniform_nodes(9).unwrap();
    let x: Vec<f64> = (0..20).map(|j| j as f64 / 19.0).collect();
    let profile: Vec<f64> = x.iter().map(|&x| 1.0 + x * x).collect();
    let values = nodes.iter().map(|_| vec![profile.clone()]).collect();
    let field = SolutionField::new(x, nodes, vec!["u".into()], values).unwrap();
    let samples = rv.sample(10_000, 1).unwrap();
    for method in SurrogateMethod::ALL.into_iter().filter(|&m| m != SurrogateMethod::Gpc) {
        let stats = field_pipeline(&field, 0, method, &rv, &samples, &SurrogateOptions::default(), WidthConvention::Padded).unwrap();
        for (j, u) in profile.iter().enumerate() {
            assert!(stats.std[j].abs() < 1e-10, "{method}");
            assert!((stats.mean[j] - u).abs() < 1e-10, "{method}");
        }
    }
}

#[test]
fn euler_density_statistics_track_direct_monte_carlo() {
    let mut config = ExperimentConfig::defaults(ExperimentId::Ex3Euler);
    config.solver.dx = 1.0 / 100.0;
    let rv = config.law;
    let nodes = rv.uniform_nodes(21).unwrap();
    let field = solve_field(&config, &nodes).unwrap();
    let rho = field.component("rho").unwrap();
    let samples = rv.sample(20_000, 3).unwrap();
    let stats = field_pipeline(&field, rho, SurrogateMethod::Cweno, &rv, &samples, &SurrogateOptions::default(), WidthConvention::Native).unwrap();

    // direct Monte Carlo over a small set of independent solves
    let direct_nodes = rv.sample(200, 17).unwrap().values;
    let direct = solve_field(&config, &direct_nodes).unwrap();
    for j in (0..field.cells()).step_by(7) {
        let column: Vec<f64> = (0..direct_nodes.len()).map(|k| direct.values[k][rho][j]).collect();
        let mean = column.iter().sum::<f64>() / column.len() as f64;
        assert!(stats.mean[j].is_finite() && stats.std[j].is_finite());
        assert!((stats.mean[j] - mean).abs() < 0.02, "x = {}: {} vs {mean}", field.x[j], stats.mean[j]);
        let pdf = &stats.pdfs[j];
        let negative = pdf.edges().windows(2).zip(pdf.densities()).any(|(e, &p)| e[1] <= 0.0 && p > 0.0);
        assert!(!negative, "negative density at x = {}", field.x[j]);
    }
}

#[test]
fn closed_form_runs_are_byte_identical() {
    let mut config = ExperimentConfig::defaults(ExperimentId::Ex2);
    config.m = 50_000;
    config.n = vec![7, 9, 12];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = run(&config, a.path()).unwrap();
    run(&config, b.path()).unwrap();
    assert_eq!(ma.files.len(), 3 + 5 * 3 + 1);
    for file in ma.files.iter().chain(std::iter::once(&"manifest.json".to_string())) {
        let fa = std::fs::read(a.path().join(file)).unwrap();
        let fb = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(fa, fb, "{file}");
    }
    let fits = std::fs::read_to_string(a.path().join("fits.csv")).unwrap();
    assert_eq!(fits.lines().count(), 6);
    assert!(!fits.contains('\r'));
}
