//! Histogram PDFs, moments, Monte Carlo references, L¹ PDF distance and power-law fits.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input_err, Result};
use crate::random_space::{RandomVariable, SampleSet};
use crate::scalar::Scalar;

/// Bin width used by [`moments_from_pdf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthConvention {
    /// `ΔU = (u_max - u_min) / (n_bins + 1)`.
    #[default]
    Padded,
    /// `ΔU = (u_max - u_min) / n_bins`, the histogram's own width.
    Native,
}

/// How candidate histograms are binned against a reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binning {
    /// The reference's bin count over the candidate's own data range; bins are
    /// compared by index.
    #[default]
    SharedCount,
    /// The reference's bin edges; candidate data outside them counts as error.
    SharedEdges,
}

/// Equal-width histogram density.
///
/// Densities are normalized against the native width, so `Σ p_i w = 1` when every
/// datum falls inside the edges. Data binned on foreign edges may fall outside;
/// that mass is kept in `below` / `above`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPdf<T> {
    edges: Vec<T>,
    densities: Vec<T>,
    counts: Vec<u64>,
    below: u64,
    above: u64,
    total: usize,
}

impl<T: Scalar> EmpiricalPdf<T> {
    pub fn n_bins(&self) -> usize {
        self.densities.len()
    }

    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn u_min(&self) -> T {
        self.edges[0]
    }

    pub fn u_max(&self) -> T {
        self.edges[self.edges.len() - 1]
    }

    pub fn densities(&self) -> &[T] {
        &self.densities
    }

    pub fn native_width(&self) -> T {
        (self.u_max() - self.u_min()) / T::from_count(self.n_bins())
    }

    pub fn padded_width(&self) -> T {
        (self.u_max() - self.u_min()) / T::from_count(self.n_bins() + 1)
    }

    pub fn midpoints(&self) -> Vec<T> {
        self.edges.windows(2).map(|e| (e[0] + e[1]) * T::half()).collect()
    }

    /// Probability mass below and above the edges.
    pub fn outside_mass(&self) -> (T, T) {
        (self.fraction(self.below), self.fraction(self.above))
    }

    /// Number of binned data, including any outside the edges.
    pub fn sample_count(&self) -> usize {
        self.total
    }

    /// Probability mass of each bin.
    pub fn bin_masses(&self) -> Vec<T> {
        self.counts.iter().map(|&c| self.fraction(c)).collect()
    }

    fn fraction(&self, count: u64) -> T {
        T::from_u64(count).expect("count") / T::from_count(self.total)
    }

    /// `Σ p_i w_native`.
    pub fn total_mass(&self) -> T {
        let w = self.native_width();
        self.densities.iter().map(|&p| p * w).sum()
    }
}

fn data_range<T: Scalar>(data: &[T]) -> Result<(T, T)> {
    if data.is_empty() {
        return input_err("empty data");
    }
    let mut lo = data[0];
    let mut hi = data[0];
    for &v in data {
        if !v.is_finite() {
            return input_err(format!("non-finite datum {v}"));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Quantile with linear interpolation between order statistics; reorders `data`.
fn quantile<T: Scalar>(data: &mut [T], q: f64) -> T {
    let pos = q * (data.len() - 1) as f64;
    let k = pos.floor() as usize;
    let frac = T::lit(pos - k as f64);
    let cmp = |a: &T, b: &T| a.partial_cmp(b).expect("finite data");
    let (_, &mut lower, upper) = data.select_nth_unstable_by(k, cmp);
    if frac == T::zero() || upper.is_empty() {
        return lower;
    }
    let next = upper.iter().copied().fold(T::infinity(), T::min);
    lower + (next - lower) * frac
}

/// Automatic bin count: the smaller of the Sturges and Freedman–Diaconis widths.
pub fn auto_bins<T: Scalar>(data: &[T]) -> Result<usize> {
    let (lo, hi) = data_range(data)?;
    let range = hi - lo;
    if range == T::zero() {
        return Ok(1);
    }
    let n = T::from_count(data.len());
    let sturges = range / (n.log2() + T::one());
    let mut copy = data.to_vec();
    let q3 = quantile(&mut copy, 0.75);
    let q1 = quantile(&mut copy, 0.25);
    let fd = T::two() * (q3 - q1) * n.powf(-T::one() / T::lit(3.0));
    let width = if fd > T::zero() { fd.min(sturges) } else { sturges };
    Ok((range / width).ceil().to_usize().unwrap_or(1).max(1))
}

fn bin_counts<T: Scalar>(data: &[T], edges: &[T]) -> (Vec<u64>, u64, u64) {
    let n_bins = edges.len() - 1;
    let lo = edges[0];
    let hi = edges[n_bins];
    let norm = T::from_count(n_bins) / (hi - lo);
    let zero = || (vec![0u64; n_bins], 0u64, 0u64);
    data.par_chunks(1 << 16)
        .map(|chunk| {
            let (mut counts, mut below, mut above) = zero();
            for &v in chunk {
                if v < lo {
                    below += 1;
                    continue;
                }
                if v > hi {
                    above += 1;
                    continue;
                }
                let mut k = ((v - lo) * norm).to_usize().unwrap_or(0).min(n_bins - 1);
                // guard against rounding in the index computation
                if v < edges[k] {
                    k -= 1;
                } else if k + 1 < n_bins && v >= edges[k + 1] {
                    k += 1;
                }
                counts[k] += 1;
            }
            (counts, below, above)
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.0.iter_mut().zip(&b.0) {
                *x += y;
            }
            (a.0, a.1 + b.1, a.2 + b.2)
        })
}

fn linspace<T: Scalar>(lo: T, hi: T, n_bins: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_count(n_bins);
    let mut edges: Vec<T> = (0..=n_bins).map(|k| lo + step * T::from_count(k)).collect();
    edges[n_bins] = hi;
    edges
}

fn from_counts<T: Scalar>(edges: Vec<T>, counts: (Vec<u64>, u64, u64), total: usize) -> EmpiricalPdf<T> {
    let n_bins = edges.len() - 1;
    let total_t = T::from_count(total);
    let w = (edges[n_bins] - edges[0]) / T::from_count(n_bins);
    let densities = counts
        .0
        .iter()
        .map(|&c| T::from_u64(c).expect("count") / (total_t * w))
        .collect();
    EmpiricalPdf {
        edges,
        densities,
        counts: counts.0,
        below: counts.1,
        above: counts.2,
        total,
    }
}

/// Histogram with `n_bins` equal bins over `[min, max]` of the data (last bin closed).
///
/// Constant data gets the unit-width interval centred on the value.
pub fn build_pdf<T: Scalar>(data: &[T], n_bins: usize) -> Result<EmpiricalPdf<T>> {
    if n_bins == 0 {
        return input_err("a histogram needs at least one bin");
    }
    let (mut lo, mut hi) = data_range(data)?;
    if lo == hi {
        lo = lo - T::half();
        hi = hi + T::half();
    }
    let edges = linspace(lo, hi, n_bins);
    let counts = bin_counts(data, &edges);
    Ok(from_counts(edges, counts, data.len()))
}

/// Histogram of `data` on the bin edges of `like`.
pub fn build_pdf_on_edges<T: Scalar>(data: &[T], like: &EmpiricalPdf<T>) -> Result<EmpiricalPdf<T>> {
    data_range(data)?;
    let edges = like.edges.clone();
    let counts = bin_counts(data, &edges);
    Ok(from_counts(edges, counts, data.len()))
}

/// Histogram of candidate `data` binned against `reference`.
pub fn candidate_pdf<T: Scalar>(data: &[T], reference: &EmpiricalPdf<T>, binning: Binning) -> Result<EmpiricalPdf<T>> {
    match binning {
        Binning::SharedCount => build_pdf(data, reference.n_bins()),
        Binning::SharedEdges => build_pdf_on_edges(data, reference),
    }
}

/// Mean and variance `Σ p_i U_i ΔU`, `Σ p_i (U_i - mean)² ΔU`.
pub fn moments_from_pdf<T: Scalar>(pdf: &EmpiricalPdf<T>, convention: WidthConvention) -> (T, T) {
    let du = match convention {
        WidthConvention::Padded => pdf.padded_width(),
        WidthConvention::Native => pdf.native_width(),
    };
    let mids = pdf.midpoints();
    let mean: T = pdf.densities.iter().zip(&mids).map(|(&p, &u)| p * u * du).sum();
    let var: T = pdf
        .densities
        .iter()
        .zip(&mids)
        .map(|(&p, &u)| p * (u - mean) * (u - mean) * du)
        .sum();
    (mean, var)
}

/// Monte Carlo reference: closed-form values at `m` samples and their auto-binned histogram.
#[derive(Debug, Clone)]
pub struct Reference<T> {
    pub samples: SampleSet<T>,
    pub values: Vec<T>,
    pub pdf: EmpiricalPdf<T>,
}

pub fn mc_reference<T: Scalar>(
    f: impl Fn(T) -> T + Sync,
    rv: &RandomVariable<T>,
    m: usize,
    seed: u64,
) -> Result<Reference<T>> {
    let samples = rv.sample(m, seed)?;
    let values: Vec<T> = samples.values.par_iter().map(|&x| f(x)).collect();
    let pdf = build_pdf(&values, auto_bins(&values)?)?;
    Ok(Reference { samples, values, pdf })
}

/// `Σ |p̃_i - p_i| w` over shared bins plus the mass either PDF places outside them.
pub fn l1_pdf_error<T: Scalar>(reference: &EmpiricalPdf<T>, candidate: &EmpiricalPdf<T>) -> Result<T> {
    if reference.edges != candidate.edges {
        return input_err("PDFs must share bin edges");
    }
    Ok(mass_distance(reference, candidate))
}

/// `Σ |p̃_i w̃ - p_i w|` over bin indices, for histograms with equal bin counts over
/// their own ranges.
pub fn l1_pdf_error_by_index<T: Scalar>(reference: &EmpiricalPdf<T>, candidate: &EmpiricalPdf<T>) -> Result<T> {
    if reference.n_bins() != candidate.n_bins() {
        return input_err(format!(
            "bin counts differ: {} vs {}",
            reference.n_bins(),
            candidate.n_bins()
        ));
    }
    Ok(mass_distance(reference, candidate))
}

/// L¹ distance under the given binning.
pub fn l1_pdf_error_with<T: Scalar>(
    reference: &EmpiricalPdf<T>,
    candidate: &EmpiricalPdf<T>,
    binning: Binning,
) -> Result<T> {
    match binning {
        Binning::SharedCount => l1_pdf_error_by_index(reference, candidate),
        Binning::SharedEdges => l1_pdf_error(reference, candidate),
    }
}

fn mass_distance<T: Scalar>(a: &EmpiricalPdf<T>, b: &EmpiricalPdf<T>) -> T {
    // exact zero for identical counts
    let (na, nb) = (a.total as u128, b.total as u128);
    let scale = T::one() / T::lit((na * nb) as f64);
    let term = |x: u64, y: u64| {
        let (l, r) = (x as u128 * nb, y as u128 * na);
        T::lit(l.abs_diff(r) as f64) * scale
    };
    a.counts.iter().zip(&b.counts).map(|(&x, &y)| term(x, y)).sum::<T>()
        + term(a.below, 0)
        + term(a.above, 0)
        + term(0, b.below)
        + term(0, b.above)
}

/// `error ≈ K N^{-k}` fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    #[serde(rename = "K")]
    pub amplitude: f64,
    #[serde(rename = "k")]
    pub exponent: f64,
    /// RMS of the log-space residuals.
    pub residual: f64,
}

pub fn power_law_fit(ns: &[f64], errors: &[f64]) -> Result<PowerLawFit> {
    if ns.len() != errors.len() {
        return input_err("N and error lists differ in length");
    }
    if ns.len() < 2 {
        return input_err("a power-law fit needs at least two points");
    }
    if let Some(e) = errors.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
        return input_err(format!("errors must be positive and finite, got {e}"));
    }
    if ns.iter().any(|&n| !(n > 0.0)) {
        return input_err("N values must be positive");
    }
    let x: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let len = x.len() as f64;
    let mx = x.iter().sum::<f64>() / len;
    let my = y.iter().sum::<f64>() / len;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return input_err("a power-law fit needs at least two distinct N");
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>()
        / len)
        .sqrt();
    Ok(PowerLawFit {
        amplitude: intercept.exp(),
        exponent: -slope,
        residual,
    })
}

/// Writes `bin_midpoint,density`.
pub fn write_pdf_csv<T: Scalar>(path: &Path, pdf: &EmpiricalPdf<T>) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "bin_midpoint,density")?;
    for (u, p) in pdf.midpoints().iter().zip(&pdf.densities) {
        writeln!(out, "{u},{p}")?;
    }
    out.flush()?;
    Ok(())
}
