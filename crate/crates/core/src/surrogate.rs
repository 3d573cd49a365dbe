//! Common surrogate contract over the five methods, and dense sampling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cweno::{Cweno, CwenoParams, STENCIL};
use crate::error::{config_err, Error, Result};
use crate::gpc::{gauss_rule, Family, GpcExpansion};
use crate::random_space::{CollocationSet, RandomVariable, SampleSet};
use crate::scalar::Scalar;
use crate::splines::{check_range, CubicBSpline, ShapePreservingSpline};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateMethod {
    Gpc,
    BsplineInterp,
    BsplineApprox,
    SpSpline,
    Cweno,
}

impl SurrogateMethod {
    pub const ALL: [SurrogateMethod; 5] = [
        SurrogateMethod::Gpc,
        SurrogateMethod::BsplineInterp,
        SurrogateMethod::BsplineApprox,
        SurrogateMethod::SpSpline,
        SurrogateMethod::Cweno,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SurrogateMethod::Gpc => "gpc",
            SurrogateMethod::BsplineInterp => "bspline_interp",
            SurrogateMethod::BsplineApprox => "bspline_approx",
            SurrogateMethod::SpSpline => "sp_spline",
            SurrogateMethod::Cweno => "cweno",
        }
    }

    /// Smallest node count the method accepts.
    pub fn min_nodes(self) -> usize {
        match self {
            SurrogateMethod::Gpc => 1,
            SurrogateMethod::BsplineInterp => 4,
            SurrogateMethod::BsplineApprox => 6,
            SurrogateMethod::SpSpline => 3,
            SurrogateMethod::Cweno => STENCIL,
        }
    }

    /// Whether the surrogate reproduces the collocation data.
    pub fn interpolates(self) -> bool {
        self != SurrogateMethod::BsplineApprox
    }

    /// Collocation nodes for `n` points: Gauss nodes for gPC, uniform nodes over the support otherwise.
    pub fn nodes<T: Scalar>(self, rv: &RandomVariable<T>, n: usize) -> Result<Vec<T>> {
        self.check_count(n)?;
        match self {
            SurrogateMethod::Gpc => Ok(gauss_rule(Family::for_law(rv), n, rv)?.nodes),
            _ => rv.uniform_nodes(n),
        }
    }

    pub fn check_count(self, n: usize) -> Result<()> {
        if n < self.min_nodes() {
            return config_err(format!(
                "{} needs at least {} collocation nodes, got {n}",
                self.name(),
                self.min_nodes()
            ));
        }
        Ok(())
    }
}

impl fmt::Display for SurrogateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurrogateMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        SurrogateMethod::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// Method-specific tuning shared by every build.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateOptions {
    pub cweno: CwenoParams,
    /// Control coefficients of the approximating B-spline; derived from `N` when unset.
    pub approx_controls: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Surrogate<T> {
    Gpc(GpcExpansion<T>),
    BSpline(CubicBSpline<T>),
    SpSpline(ShapePreservingSpline<T>),
    Cweno(Cweno<T>),
}

impl<T: Scalar> Surrogate<T> {
    /// Evaluation at `xi`; the splines and CWENO reject points outside the node range,
    /// gPC evaluates everywhere.
    pub fn eval(&self, xi: T) -> Result<T> {
        match self {
            Surrogate::Gpc(e) => Ok(e.eval(xi)),
            Surrogate::BSpline(s) => s.eval(xi),
            Surrogate::SpSpline(s) => s.eval(xi),
            Surrogate::Cweno(s) => s.eval(xi),
        }
    }

    /// Node range for the piecewise surrogates, `None` for gPC.
    pub fn domain(&self) -> Option<(T, T)> {
        match self {
            Surrogate::Gpc(_) => None,
            Surrogate::BSpline(s) => Some(s.range()),
            Surrogate::SpSpline(s) => Some(s.range()),
            Surrogate::Cweno(s) => Some(s.range()),
        }
    }

    #[inline]
    fn eval_unchecked(&self, xi: T) -> T {
        match self {
            Surrogate::Gpc(e) => e.eval(xi),
            Surrogate::BSpline(s) => s.eval_unchecked(xi),
            Surrogate::SpSpline(s) => s.eval_unchecked(xi),
            Surrogate::Cweno(s) => s.eval_unchecked(xi),
        }
    }

    /// Evaluations at many points, in order.
    pub fn eval_many(&self, xs: &[T]) -> Result<Vec<T>> {
        if let Some((lo, hi)) = self.domain() {
            if let Some(&bad) = xs.iter().find(|&&x| !(x >= lo && x <= hi)) {
                check_range(bad, lo, hi)?;
            }
        }
        Ok(xs.par_iter().with_min_len(4096).map(|&x| self.eval_unchecked(x)).collect())
    }
}

pub fn build_surrogate<T: Scalar>(
    method: SurrogateMethod,
    colloc: &CollocationSet<T>,
    rv: &RandomVariable<T>,
    options: &SurrogateOptions,
) -> Result<Surrogate<T>> {
    method.check_count(colloc.len())?;
    let named = |e: Error| match e {
        Error::Input(msg) | Error::Config(msg) => Error::Config(format!("{}: {msg}", method.name())),
        other => other,
    };
    let built = match method {
        SurrogateMethod::Gpc => {
            let rule = gauss_rule(Family::for_law(rv), colloc.len(), rv).map_err(named)?;
            Surrogate::Gpc(GpcExpansion::fit(colloc, &rule).map_err(named)?)
        }
        SurrogateMethod::BsplineInterp => Surrogate::BSpline(CubicBSpline::interpolate(colloc).map_err(named)?),
        SurrogateMethod::BsplineApprox => Surrogate::BSpline(
            match options.approx_controls {
                Some(c) => CubicBSpline::approximate_with(colloc, c),
                None => CubicBSpline::approximate(colloc),
            }
            .map_err(named)?,
        ),
        SurrogateMethod::SpSpline => Surrogate::SpSpline(ShapePreservingSpline::fit(colloc).map_err(named)?),
        SurrogateMethod::Cweno => Surrogate::Cweno(Cweno::build_with(colloc, &options.cweno).map_err(named)?),
    };
    Ok(built)
}

/// Surrogate values at every sample, in sample order.
pub fn sample_surrogate<T: Scalar>(surrogate: &Surrogate<T>, samples: &SampleSet<T>) -> Result<Vec<T>> {
    surrogate.eval_many(&samples.values)
}
