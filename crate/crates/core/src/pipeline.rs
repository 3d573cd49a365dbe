//! Solution fields over `(x, ξ)` and the per-cell surrogate pipeline.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{input_err, Result};
use crate::random_space::{CollocationSet, RandomVariable, SampleSet};
use crate::scalar::Scalar;
use crate::statistics::{auto_bins, build_pdf, moments_from_pdf, EmpiricalPdf, WidthConvention};
use crate::surrogate::{build_surrogate, Surrogate, SurrogateMethod, SurrogateOptions};

/// Deterministic solutions on a common x-grid, one per collocation node.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<T> {
    pub x: Vec<T>,
    pub nodes: Vec<T>,
    pub names: Vec<String>,
    /// `values[node][component][cell]`.
    pub values: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> SolutionField<T> {
    pub fn new(x: Vec<T>, nodes: Vec<T>, names: Vec<String>, values: Vec<Vec<Vec<T>>>) -> Result<Self> {
        if values.len() != nodes.len() {
            return input_err(format!("{} solutions for {} nodes", values.len(), nodes.len()));
        }
        for v in &values {
            if v.len() != names.len() || v.iter().any(|c| c.len() != x.len()) {
                return input_err("solution shape does not match the grid and component names");
            }
        }
        Ok(Self { x, nodes, names, values })
    }

    pub fn cells(&self) -> usize {
        self.x.len()
    }

    pub fn component(&self, name: &str) -> Result<usize> {
        match self.names.iter().position(|n| n == name) {
            Some(k) => Ok(k),
            None => input_err(format!("no component `{name}` in {:?}", self.names)),
        }
    }

    /// Collocation data of one component in one cell.
    pub fn collocation(&self, component: usize, cell: usize) -> Result<CollocationSet<T>> {
        let values = self.values.iter().map(|v| v[component][cell]).collect();
        CollocationSet::new(self.nodes.clone(), values)
    }

    /// One `x,<components>` CSV per node plus `manifest.csv` (`node,xi,file`).
    pub fn write_snapshots(&self, dir: &Path, prefix: &str) -> Result<Vec<String>> {
        std::fs::create_dir_all(dir)?;
        let mut files = Vec::with_capacity(self.nodes.len());
        for (k, solution) in self.values.iter().enumerate() {
            let file = format!("{prefix}_node{k:03}.csv");
            let columns: Vec<(&str, Vec<T>)> = self
                .names
                .iter()
                .zip(solution)
                .map(|(n, c)| (n.as_str(), c.clone()))
                .collect();
            crate::solvers::write_snapshot_csv(&dir.join(&file), &self.x, &columns)?;
            files.push(file);
        }
        let manifest = format!("{prefix}_manifest.csv");
        let mut out = std::io::BufWriter::new(std::fs::File::create(dir.join(&manifest))?);
        writeln!(out, "node,xi,file")?;
        for (k, (xi, file)) in self.nodes.iter().zip(&files).enumerate() {
            writeln!(out, "{k},{xi},{file}")?;
        }
        out.flush()?;
        files.push(manifest);
        Ok(files)
    }
}

/// One surrogate per spatial cell, all on the same node set.
#[derive(Debug, Clone)]
pub struct FieldSurrogate<T> {
    pub method: SurrogateMethod,
    pub nodes: Vec<T>,
    pub cells: Vec<Surrogate<T>>,
}

impl<T: Scalar> FieldSurrogate<T> {
    pub fn build(
        field: &SolutionField<T>,
        component: usize,
        method: SurrogateMethod,
        rv: &RandomVariable<T>,
        options: &SurrogateOptions,
    ) -> Result<Self> {
        let cells = (0..field.cells())
            .into_par_iter()
            .map(|j| build_surrogate(method, &field.collocation(component, j)?, rv, options))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            method,
            nodes: field.nodes.clone(),
            cells,
        })
    }
}

/// Per-cell statistics of a field surrogate.
#[derive(Debug, Clone)]
pub struct FieldStatistics<T> {
    pub x: Vec<T>,
    pub mean: Vec<T>,
    pub std: Vec<T>,
    pub pdfs: Vec<EmpiricalPdf<T>>,
}

/// Mean and variance of sampled values through their histogram; data constant to
/// rounding has zero variance and its own value as mean.
pub fn sample_moments<T: Scalar>(values: &[T], pdf: &EmpiricalPdf<T>, convention: WidthConvention) -> (T, T) {
    let (lo, hi) = values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
    if hi - lo <= T::lit(1e-12) * scale {
        return ((lo + hi) * T::half(), T::zero());
    }
    moments_from_pdf(pdf, convention)
}

/// Builds one surrogate per cell, samples it at `samples`, and reduces each cell to a
/// histogram and its moments.
pub fn field_pipeline<T: Scalar>(
    field: &SolutionField<T>,
    component: usize,
    method: SurrogateMethod,
    rv: &RandomVariable<T>,
    samples: &SampleSet<T>,
    options: &SurrogateOptions,
    convention: WidthConvention,
) -> Result<FieldStatistics<T>> {
    let surrogate = FieldSurrogate::build(field, component, method, rv, options)?;
    let per_cell = surrogate
        .cells
        .par_iter()
        .map(|s| {
            let values = s.eval_many(&samples.values)?;
            let pdf = build_pdf(&values, field_bins(&values)?)?;
            let (mean, var) = sample_moments(&values, &pdf, convention);
            Ok((mean, var.max(T::zero()).sqrt(), pdf))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut stats = FieldStatistics {
        x: field.x.clone(),
        mean: Vec::with_capacity(per_cell.len()),
        std: Vec::with_capacity(per_cell.len()),
        pdfs: Vec::with_capacity(per_cell.len()),
    };
    for (m, s, p) in per_cell {
        stats.mean.push(m);
        stats.std.push(s);
        stats.pdfs.push(p);
    }
    Ok(stats)
}

/// Automatic bin count, capped at `⌈√M⌉`.
///
/// Cells far from any wave are nearly constant in ξ; round-off there gives a
/// tiny interquartile range and an unbounded Freedman–Diaconis count.
pub fn field_bins<T: Scalar>(values: &[T]) -> Result<usize> {
    let cap = (values.len() as f64).sqrt().ceil() as usize;
    Ok(auto_bins(values)?.min(cap.max(1)))
}

impl<T: Scalar> FieldStatistics<T> {
    /// `x,mean,std`.
    pub fn write_curves(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "x,mean,std")?;
        for ((x, m), s) in self.x.iter().zip(&self.mean).zip(&self.std) {
            writeln!(out, "{x},{m},{s}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// `x,bin_midpoint,density`.
    pub fn write_pdf_surface(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "x,bin_midpoint,density")?;
        for (x, pdf) in self.x.iter().zip(&self.pdfs) {
            for (u, p) in pdf.midpoints().iter().zip(pdf.densities()) {
                writeln!(out, "{x},{u},{p}")?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// How far a surrogate leaves the range of its nodal data, scanned at `probes`
/// equally spaced points over `[lo, hi]`.
pub fn overshoot<T: Scalar>(surrogate: &Surrogate<T>, data: &CollocationSet<T>, lo: T, hi: T, probes: usize) -> Result<T> {
    let (dmin, dmax) = data
        .values()
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(v), b.max(v)));
    let mut worst = T::zero();
    for k in 0..=probes {
        let x = lo + (hi - lo) * T::from_count(k) / T::from_count(probes);
        let v = surrogate.eval(x)?;
        worst = worst.max(v - dmax).max(dmin - v);
    }
    Ok(worst)
}
