//! The four numerical experiments: configuration, validation and execution.
//!
//! Examples 1 and 2 push closed-form functions of ξ through every surrogate and
//! compare histogram PDFs against a Monte Carlo reference. Examples 3 and 4 solve
//! the Euler and shallow-water equations at every collocation node and reduce the
//! resulting fields cell by cell.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpc::{gauss_rule, Family, GpcExpansion};
use crate::pipeline::{field_pipeline, sample_moments, SolutionField};
use crate::random_space::{CollocationSet, Law, RandomVariable};
use crate::solvers::{solve, Euler, Grid1D, Model, SolverParams, Swe};
use crate::statistics::{
    candidate_pdf, l1_pdf_error_with, mc_reference, power_law_fit, write_pdf_csv, Binning, PowerLawFit,
    WidthConvention,
};
use crate::surrogate::{build_surrogate, sample_surrogate, Surrogate, SurrogateMethod, SurrogateOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentId {
    #[serde(rename = "ex1-uniform")]
    Ex1Uniform,
    #[serde(rename = "ex1-normal")]
    Ex1Normal,
    #[serde(rename = "ex2")]
    Ex2,
    #[serde(rename = "ex3-euler")]
    Ex3Euler,
    #[serde(rename = "ex4-swe")]
    Ex4Swe,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 5] = [
        ExperimentId::Ex1Uniform,
        ExperimentId::Ex1Normal,
        ExperimentId::Ex2,
        ExperimentId::Ex3Euler,
        ExperimentId::Ex4Swe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Ex1Uniform => "ex1-uniform",
            ExperimentId::Ex1Normal => "ex1-normal",
            ExperimentId::Ex2 => "ex2",
            ExperimentId::Ex3Euler => "ex3-euler",
            ExperimentId::Ex4Swe => "ex4-swe",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentId::Ex1Uniform => "U = 3 cos(πξ), ξ ~ U[-1, 1]: PDF convergence and moments",
            ExperimentId::Ex1Normal => "U = 3 cos(πξ), ξ ~ N(0, 0.33²) truncated at ±6σ",
            ExperimentId::Ex2 => "U = ∓3 cos(πξ) with a jump at ξ = 0.1, ξ ~ U[-1, 1]",
            ExperimentId::Ex3Euler => "Sod shock tube with perturbed left density, ξ ~ N(0, 1/6²)",
            ExperimentId::Ex4Swe => "Dam break over a stochastic bottom, ξ ~ U[-1, 1]",
        }
    }

    /// PDE experiments reduce a solution field; the others a closed-form function.
    pub fn is_field(self) -> bool {
        matches!(self, ExperimentId::Ex3Euler | ExperimentId::Ex4Swe)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub dx: f64,
    pub cfl: f64,
    /// Minmod limiter parameter.
    pub theta: f64,
    pub t_final: f64,
    /// Ratio of specific heats (Euler).
    pub gamma: f64,
    /// Gravitational acceleration (shallow water).
    pub g: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dx: 1.0 / 200.0,
            cfl: 0.45,
            theta: 1.3,
            t_final: 0.1644,
            gamma: 1.4,
            g: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub methods: Vec<SurrogateMethod>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub law: RandomVariable<f64>,
    pub binning: Binning,
    pub moments: WidthConvention,
    /// Branch point of the discontinuous function (Example 2).
    pub threshold: f64,
    pub surrogate: SurrogateOptions,
    pub solver: SolverConfig,
}

impl ExperimentConfig {
    /// Default settings of each experiment.
    pub fn defaults(id: ExperimentId) -> Self {
        let ns: Vec<usize> = (7..=20).chain([40, 60]).collect();
        let uniform = RandomVariable::uniform(-1.0, 1.0).expect("valid law");
        let (n, m, law, solver) = match id {
            ExperimentId::Ex1Uniform | ExperimentId::Ex2 => (ns, 1_000_000, uniform, SolverConfig::default()),
            ExperimentId::Ex1Normal => (
                ns,
                1_000_000,
                RandomVariable::normal(0.0, 0.33).expect("valid law"),
                SolverConfig::default(),
            ),
            ExperimentId::Ex3Euler => (
                vec![101],
                100_000,
                RandomVariable::normal(0.0, 1.0 / 6.0).expect("valid law"),
                SolverConfig::default(),
            ),
            ExperimentId::Ex4Swe => (
                vec![16],
                100_000,
                uniform,
                SolverConfig {
                    dx: 1.0 / 400.0,
                    t_final: 0.8,
                    ..SolverConfig::default()
                },
            ),
        };
        Self {
            experiment: id,
            methods: SurrogateMethod::ALL.to_vec(),
            n,
            m,
            seed: 2024,
            threads: None,
            output_dir: None,
            law,
            binning: Binning::default(),
            moments: WidthConvention::default(),
            threshold: 0.1,
            surrogate: SurrogateOptions::default(),
            solver,
        }
    }

    /// Parses a TOML document; keys it omits take the experiment's defaults.
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, Vec<String>> {
        let table: toml::Table = toml::from_str(text).map_err(|e| vec![e.to_string()])?;
        let id = match table.get("experiment") {
            Some(toml::Value::String(s)) => s.parse::<ExperimentId>().map_err(|e| vec![format!("`experiment`: {e}")])?,
            Some(_) => return Err(vec!["`experiment` must be a string".into()]),
            None => return Err(vec!["missing field `experiment`".into()]),
        };
        let mut merged = toml::Table::try_from(Self::defaults(id)).map_err(|e| vec![e.to_string()])?;
        merge(&mut merged, table);
        let config: Self = merged.try_into().map_err(|e: toml::de::Error| vec![e.to_string().trim().to_string()])?;
        let violations = config.violations();
        if violations.is_empty() {
            Ok(config)
        } else {
            Err(violations)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|v| Error::Config(v.join("; ")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Range and consistency checks; empty when the configuration is runnable.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.methods.is_empty() {
            v.push("`methods` must not be empty".into());
        }
        if self.n.is_empty() {
            v.push("`N` must not be empty".into());
        }
        if self.n.windows(2).any(|w| w[0] >= w[1]) {
            v.push("`N` must be strictly increasing".into());
        }
        if self.m == 0 {
            v.push("`M` must be positive".into());
        }
        if let Some(&smallest) = self.n.first() {
            for method in &self.methods {
                if smallest < method.min_nodes() {
                    v.push(format!(
                        "`N` = {smallest} is below the {} minimum of {} nodes",
                        method,
                        method.min_nodes()
                    ));
                }
            }
            if let Some(c) = self.surrogate.approx_controls {
                if self.methods.contains(&SurrogateMethod::BsplineApprox) && (c < 4 || c >= smallest) {
                    v.push(format!("`surrogate.approx_controls` = {c} must lie in [4, N) for every N"));
                }
            }
        }
        if self.threads == Some(0) {
            v.push("`threads` must be positive".into());
        }
        if let Err(e) = self.surrogate.cweno.validate() {
            v.push(format!("`surrogate.cweno`: {e}"));
        }
        if !self.threshold.is_finite() {
            v.push("`threshold` must be finite".into());
        }
        if self.experiment.is_field() {
            let s = &self.solver;
            if !(s.dx > 0.0 && s.dx.is_finite()) {
                v.push("`solver.dx` must be positive".into());
            }
            if let Err(e) = self.solver_params().validate() {
                v.push(format!("`solver`: {e}"));
            }
            if self.experiment == ExperimentId::Ex3Euler && !(s.gamma > 1.0) {
                v.push("`solver.gamma` must exceed 1".into());
            }
            if self.experiment == ExperimentId::Ex4Swe && !(s.g > 0.0) {
                v.push("`solver.g` must be positive".into());
            }
        }
        v
    }

    fn solver_params(&self) -> SolverParams {
        SolverParams {
            cfl: self.solver.cfl,
            theta: self.solver.theta,
            t_final: self.solver.t_final,
            ..SolverParams::default()
        }
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (key, value) in over {
        match (base.get_mut(&key), value) {
            // a replaced law is taken whole, since its fields depend on its kind
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) if key != "law" => merge(b, o),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

/// Parses and checks a configuration file without running it.
pub fn validate_file(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)?;
    Ok(match ExperimentConfig::from_toml_str(&text) {
        Ok(_) => Vec::new(),
        Err(v) => v,
    })
}

/// Names and one-line descriptions of the available experiments.
pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    ExperimentId::ALL.iter().map(|e| (e.name(), e.description())).collect()
}

/// Closed-form test function of Examples 1 and 2.
pub fn closed_form(id: ExperimentId, threshold: f64) -> impl Fn(f64) -> f64 + Sync + Copy {
    let jump = id == ExperimentId::Ex2;
    move |xi: f64| {
        let u = 3.0 * (PI * xi).cos();
        if jump && xi < threshold {
            -u
        } else {
            u
        }
    }
}

/// Exact mean and standard deviation of the closed-form functions.
pub fn exact_moments(config: &ExperimentConfig) -> Option<(f64, f64)> {
    match (config.experiment, config.law.law()) {
        (ExperimentId::Ex1Uniform, Law::Uniform { a, b }) => {
            let mean = 3.0 * ((PI * b).sin() - (PI * a).sin()) / (PI * (b - a));
            let second = 4.5 + 4.5 * ((2.0 * PI * b).sin() - (2.0 * PI * a).sin()) / (2.0 * PI * (b - a));
            Some((mean, (second - mean * mean).sqrt()))
        }
        (ExperimentId::Ex1Normal, Law::Normal { mu, sigma, .. }) => {
            // E[cos(kξ)] = cos(kμ) exp(-(kσ)²/2); truncation at ±6σ is negligible
            let mean = 3.0 * (PI * mu).cos() * (-(PI * sigma).powi(2) / 2.0).exp();
            let second = 4.5 + 4.5 * (2.0 * PI * mu).cos() * (-2.0 * (PI * sigma).powi(2)).exp();
            Some((mean, (second - mean * mean).sqrt()))
        }
        (ExperimentId::Ex2, Law::Uniform { a, b }) => {
            let t = config.threshold.clamp(a, b);
            let s = |x: f64| 3.0 * (PI * x).sin() / PI;
            let mean = (-(s(t) - s(a)) + (s(b) - s(t))) / (b - a);
            let second = 4.5 + 4.5 * ((2.0 * PI * b).sin() - (2.0 * PI * a).sin()) / (2.0 * PI * (b - a));
            Some((mean, (second - mean * mean).sqrt()))
        }
        _ => None,
    }
}

/// L¹ errors of one method over the `N` list and their power-law fits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodConvergence {
    pub method: SurrogateMethod,
    pub ns: Vec<usize>,
    pub errors: Vec<f64>,
    /// Fit over all non-zero errors.
    pub fit: Option<PowerLawFit>,
    /// Fit over the errors above the resolution floor, up to the first `N` reaching it.
    pub prefloor_fit: Option<PowerLawFit>,
    /// First `N` whose error is at or below the resolution floor.
    pub floor_n: Option<usize>,
}

/// Moment estimates for one `(method, N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub method: String,
    pub n: usize,
    pub estimator: &'static str,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub experiment: ExperimentId,
    pub version: &'static str,
    pub seed: u64,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bins: Option<usize>,
    /// Resolution floor `2 / M` of the L¹ error between histograms of a shared sample set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution_floor: Option<f64>,
    /// L¹ distance between two references drawn with independent seeds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_noise: Option<f64>,
    pub solver_runs: usize,
    pub files: Vec<String>,
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub convergence: Vec<MethodConvergence>,
    #[serde(skip)]
    pub moments: Vec<MomentRow>,
}

/// Splits errors into the full fit, the pre-floor fit and the first `N` at the floor.
pub fn convergence_fits(ns: &[usize], errors: &[f64], floor: f64) -> (Option<PowerLawFit>, Option<PowerLawFit>, Option<usize>) {
    let positive: (Vec<f64>, Vec<f64>) = ns
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&n, &e)| (n as f64, e))
        .unzip();
    let fit = power_law_fit(&positive.0, &positive.1).ok();
    let floor_at = errors.iter().position(|&e| e <= floor);
    let upto = floor_at.unwrap_or(errors.len());
    let pre: (Vec<f64>, Vec<f64>) = ns[..upto]
        .iter()
        .zip(&errors[..upto])
        .map(|(&n, &e)| (n as f64, e))
        .unzip();
    let prefloor = power_law_fit(&pre.0, &pre.1).ok();
    (fit, prefloor, floor_at.map(|k| ns[k]))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

struct Csv {
    out: std::io::BufWriter<std::fs::File>,
}

impl Csv {
    fn create(path: &Path, header: &str) -> Result<Self> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "{header}")?;
        Ok(Self { out })
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Runs the experiment, writing every artifact into `out_dir`.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<RunManifest> {
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(Error::Config(violations.join("; ")));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut manifest = if config.experiment.is_field() {
        run_field(config, out_dir)?
    } else {
        run_closed_form(config, out_dir)?
    };
    manifest.files.sort();
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(out_dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}

/// Runs with `threads` workers (all cores when `None`).
pub fn run_with_threads(config: &ExperimentConfig, out_dir: &Path, threads: Option<usize>) -> Result<RunManifest> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run(config, out_dir))
}

fn run_closed_form(config: &ExperimentConfig, out_dir: &Path) -> Result<RunManifest> {
    let rv = config.law;
    let f = closed_form(config.experiment, config.threshold);
    let reference = mc_reference(f, &rv, config.m, config.seed)?;
    let independent = mc_reference(f, &rv, config.m, config.seed.wrapping_add(1))?;
    let noise = l1_pdf_error_with(
        &reference.pdf,
        &candidate_pdf(&independent.values, &reference.pdf, config.binning)?,
        config.binning,
    )?;
    drop(independent);
    let floor = 2.0 / config.m as f64;

    let mut files = vec!["pdf_reference.csv".to_string()];
    write_pdf_csv(&out_dir.join("pdf_reference.csv"), &reference.pdf)?;
    let (ref_mean, ref_var) = sample_moments(&reference.values, &reference.pdf, config.moments);
    let mut moments = vec![MomentRow {
        method: "reference".into(),
        n: config.m,
        estimator: "pdf",
        mean: ref_mean,
        std: ref_var.sqrt(),
    }];

    let mut convergence = Vec::new();
    for &method in &config.methods {
        let mut errors = Vec::with_capacity(config.n.len());
        for &n in &config.n {
            let nodes = method.nodes(&rv, n)?;
            let colloc = CollocationSet::from_fn(nodes, f)?;
            let surrogate = build_surrogate(method, &colloc, &rv, &config.surrogate)?;
            let values = sample_surrogate(&surrogate, &reference.samples)?;
            let pdf = candidate_pdf(&values, &reference.pdf, config.binning)?;
            errors.push(l1_pdf_error_with(&reference.pdf, &pdf, config.binning)?.max(0.0));
            let file = format!("pdf_{method}_N{n}.csv");
            write_pdf_csv(&out_dir.join(&file), &pdf)?;
            files.push(file);

            let own = if config.binning == Binning::SharedCount {
                pdf
            } else {
                crate::statistics::build_pdf(&values, reference.pdf.n_bins())?
            };
            let (mean, var) = sample_moments(&values, &own, config.moments);
            moments.push(MomentRow {
                method: method.name().into(),
                n,
                estimator: "pdf",
                mean,
                std: var.max(0.0).sqrt(),
            });
            if let Surrogate::Gpc(expansion) = &surrogate {
                let (mean, var) = expansion.moments();
                moments.push(MomentRow {
                    method: method.name().into(),
                    n,
                    estimator: "expansion",
                    mean,
                    std: var.sqrt(),
                });
            }
        }
        let (fit, prefloor_fit, floor_n) = convergence_fits(&config.n, &errors, floor);
        convergence.push(MethodConvergence {
            method,
            ns: config.n.clone(),
            errors,
            fit,
            prefloor_fit,
            floor_n,
        });
    }

    let mut errors_csv = Csv::create(&out_dir.join("errors.csv"), "method,N,l1_error,K,k")?;
    let mut fits_csv = Csv::create(
        &out_dir.join("fits.csv"),
        "method,K,k,residual,prefloor_K,prefloor_k,floor_N",
    )?;
    for c in &convergence {
        for (n, e) in c.ns.iter().zip(&c.errors) {
            errors_csv.row(&[
                c.method.to_string(),
                n.to_string(),
                e.to_string(),
                opt(c.fit.map(|f| f.amplitude)),
                opt(c.fit.map(|f| f.exponent)),
            ])?;
        }
        fits_csv.row(&[
            c.method.to_string(),
            opt(c.fit.map(|f| f.amplitude)),
            opt(c.fit.map(|f| f.exponent)),
            opt(c.fit.map(|f| f.residual)),
            opt(c.prefloor_fit.map(|f| f.amplitude)),
            opt(c.prefloor_fit.map(|f| f.exponent)),
            c.floor_n.map(|n| n.to_string()).unwrap_or_default(),
        ])?;
    }
    errors_csv.finish()?;
    fits_csv.finish()?;

    let exact = exact_moments(config);
    let mut moments_csv = Csv::create(
        &out_dir.join("moments.csv"),
        "method,N,estimator,mean,std,mean_error,std_error",
    )?;
    for row in &moments {
        moments_csv.row(&[
            row.method.clone(),
            row.n.to_string(),
            row.estimator.to_string(),
            row.mean.to_string(),
            row.std.to_string(),
            opt(exact.map(|(m, _)| (row.mean - m).abs())),
            opt(exact.map(|(_, s)| (row.std - s).abs())),
        ])?;
    }
    moments_csv.finish()?;
    files.extend(["errors.csv", "fits.csv", "moments.csv"].map(String::from));

    Ok(RunManifest {
        experiment: config.experiment,
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        m: config.m,
        n_bins: Some(reference.pdf.n_bins()),
        resolution_floor: Some(floor),
        reference_noise: Some(noise),
        solver_runs: 0,
        files,
        config: config.clone(),
        convergence,
        moments,
    })
}

/// Deterministic solves at every node; the field keeps the model's output columns.
pub fn solve_field(config: &ExperimentConfig, nodes: &[f64]) -> Result<SolutionField<f64>> {
    let s = &config.solver;
    let params = config.solver_params();
    let solutions: Vec<Columns> = match config.experiment {
        ExperimentId::Ex3Euler => {
            let grid = Grid1D::with_spacing(0.0, 1.0, s.dx)?;
            let model = Euler::new(s.gamma);
            nodes
                .par_iter()
                .map(|&xi| {
                    let init = model.state_from_primitive(&grid, |x| {
                        if x <= 0.5 {
                            (1.0 + 0.1 * xi, 0.0, 1.0)
                        } else {
                            (0.125, 0.0, 0.1)
                        }
                    })?;
                    let sol = solve(&model, &grid, init, &params).map_err(|e| at_node(e, xi))?;
                    Ok(columns(grid.centers(), model.output(&sol.state)))
                })
                .collect::<Result<_>>()?
        }
        ExperimentId::Ex4Swe => {
            let grid = Grid1D::with_spacing(-1.0, 1.0, s.dx)?;
            nodes
                .par_iter()
                .map(|&xi| {
                    let model = Swe::new(s.g, &grid, ex4_bottom(xi), 1.0)?;
                    let init = model.state_from_surface(&grid, |x| (if x < 0.0 { 1.0 } else { 0.5 }, 0.0))?;
                    let sol = solve(&model, &grid, init, &params).map_err(|e| at_node(e, xi))?;
                    Ok(columns(grid.centers(), model.output(&sol.state)))
                })
                .collect::<Result<_>>()?
        }
        other => return Err(Error::Config(format!("{other} has no solution field"))),
    };
    let x = solutions[0].0.clone();
    let names = solutions[0].1.clone();
    let values = solutions.into_iter().map(|(_, _, v)| v).collect();
    SolutionField::new(x, nodes.to_vec(), names, values)
}

/// Bottom topography of the shallow-water example for one value of ξ.
pub fn ex4_bottom(xi: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x: f64| {
        if x.abs() < 0.2 {
            0.125 * xi + 0.125 * ((5.0 * PI * x).cos() + 2.0)
        } else {
            0.125 * xi + 0.125
        }
    }
}

/// Cell centers, output names and output columns of one solve.
type Columns = (Vec<f64>, Vec<String>, Vec<Vec<f64>>);

fn columns(x: Vec<f64>, out: Vec<(&'static str, Vec<f64>)>) -> Columns {
    let (names, values) = out.into_iter().map(|(n, v)| (n.to_string(), v)).unzip();
    (x, names, values)
}

fn at_node(e: Error, xi: f64) -> Error {
    match e {
        Error::State { cell, time, detail } => Error::State {
            cell,
            time,
            detail: format!("{detail} (ξ = {xi})"),
        },
        other => other,
    }
}

/// Field component analysed in each PDE experiment.
pub fn field_component(id: ExperimentId) -> &'static str {
    match id {
        ExperimentId::Ex3Euler => "rho",
        _ => "w",
    }
}

fn run_field(config: &ExperimentConfig, out_dir: &Path) -> Result<RunManifest> {
    let rv = config.law;
    let samples = rv.sample(config.m, config.seed)?;
    let solutions_dir = out_dir.join("solutions");
    let mut files = Vec::new();
    let mut solver_runs = 0;
    let component_name = field_component(config.experiment);

    for &n in &config.n {
        // gPC collocates at Gauss nodes, every other method at uniform nodes
        let uniform = rv.uniform_nodes(n)?;
        let mut fields: Vec<(bool, SolutionField<f64>)> = Vec::new();
        if config.methods.iter().any(|m| *m != SurrogateMethod::Gpc) {
            fields.push((false, solve_field(config, &uniform)?));
        }
        if config.methods.contains(&SurrogateMethod::Gpc) {
            let gauss = gauss_rule(Family::for_law(&rv), n, &rv)?.nodes;
            fields.push((true, solve_field(config, &gauss)?));
        }
        for (is_gauss, field) in &fields {
            solver_runs += field.nodes.len();
            let prefix = format!("{}_N{n}", if *is_gauss { "gauss" } else { "uniform" });
            for f in field.write_snapshots(&solutions_dir, &prefix)? {
                files.push(format!("solutions/{f}"));
            }
        }
        for &method in &config.methods {
            let field = &fields
                .iter()
                .find(|(g, _)| *g == (method == SurrogateMethod::Gpc))
                .expect("field solved")
                .1;
            let component = field.component(component_name)?;
            let stats = field_pipeline(field, component, method, &rv, &samples, &config.surrogate, config.moments)?;
            let curves = format!("curves_{method}_N{n}.csv");
            stats.write_curves(&out_dir.join(&curves))?;
            let surface = format!("pdf_surface_{method}_N{n}.csv");
            stats.write_pdf_surface(&out_dir.join(&surface))?;
            files.extend([curves, surface]);
        }
    }

    Ok(RunManifest {
        experiment: config.experiment,
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        m: config.m,
        n_bins: None,
        resolution_floor: None,
        reference_noise: None,
        solver_runs,
        files,
        config: config.clone(),
        convergence: Vec::new(),
        moments: Vec::new(),
    })
}

/// The gPC expansion of a closed-form function, for moment checks.
pub fn gpc_expansion(config: &ExperimentConfig, n: usize) -> Result<GpcExpansion<f64>> {
    let rule = gauss_rule(Family::for_law(&config.law), n, &config.law)?;
    let f = closed_form(config.experiment, config.threshold);
    let colloc = CollocationSet::from_fn(rule.nodes.clone(), f)?;
    GpcExpansion::fit(&colloc, &rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for id in ExperimentId::ALL {
            let c = ExperimentConfig::defaults(id);
            assert!(c.violations().is_empty(), "{id}: {:?}", c.violations());
            let round = ExperimentConfig::from_toml_str(&c.to_toml()).unwrap();
            assert_eq!(round, c);
        }
    }

    #[test]
    fn negative_samples_named() {
        let v = ExperimentConfig::from_toml_str("experiment = \"ex1-uniform\"\nM = -5\n").unwrap_err();
        assert!(v.iter().any(|m| m.contains("`M`")), "{v:?}");
    }

    #[test]
    fn stencil_minimum_enforced() {
        let v = ExperimentConfig::from_toml_str("experiment = \"ex4-swe\"\nN = [6]\nmethods = [\"cweno\"]\n").unwrap_err();
        assert!(v.iter().any(|m| m.contains("cweno")), "{v:?}");
    }

    #[test]
    fn partial_overrides_keep_defaults() {
        let c = ExperimentConfig::from_toml_str("experiment = \"ex4-swe\"\n[solver]\ncfl = 0.4\n").unwrap();
        assert_eq!(c.solver.cfl, 0.4);
        assert_eq!(c.solver.t_final, 0.8);
    }

    #[test]
    fn exact_moments_match_quadrature() {
        for id in [ExperimentId::Ex1Uniform, ExperimentId::Ex1Normal, ExperimentId::Ex2] {
            let c = ExperimentConfig::defaults(id);
            let (mean, std) = exact_moments(&c).unwrap();
            let f = closed_form(id, c.threshold);
            let (lo, hi) = c.law.support();
            // midpoint rule against the density
            let n = 400_000;
            let h = (hi - lo) / n as f64;
            let density = |x: f64| match c.law.law() {
                Law::Uniform { a, b } => 1.0 / (b - a),
                Law::Normal { mu, sigma, .. } => (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt()),
            };
            let (mut m1, mut m2) = (0.0, 0.0);
            for k in 0..n {
                let x = lo + (k as f64 + 0.5) * h;
                m1 += f(x) * density(x) * h;
                m2 += f(x).powi(2) * density(x) * h;
            }
            assert!((m1 - mean).abs() < 1e-6, "{id}: {m1} vs {mean}");
            assert!(((m2 - m1 * m1).sqrt() - std).abs() < 1e-6, "{id}");
        }
    }
}
