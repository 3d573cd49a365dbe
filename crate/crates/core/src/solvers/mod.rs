//! Semi-discrete second-order central-upwind finite-volume solver in one space
//! dimension, with SSP-RK3 time stepping.
//!
//! Models supply the reconstruction of interface values, the physical flux,
//! the one-sided characteristic speeds and an optional source term. The flux
//! assembly, the time loop and the free (zero-order extrapolation) boundaries are
//! shared.

mod euler;
mod grid;
mod swe;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{input_err, Error, Result};
use crate::scalar::Scalar;

pub use euler::{euler_flux, Euler, EulerState};
pub use grid::Grid1D;
pub use swe::{swe_flux, Swe};

/// Largest number of conserved components of the bundled models.
pub const MAX_COMPONENTS: usize = 3;

/// Point value of the conserved vector; unused trailing entries are zero.
pub type Point<T> = [T; MAX_COMPONENTS];

/// Cell averages, stored component by component.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    components: Vec<Vec<T>>,
}

impl<T: Scalar> State<T> {
    pub fn new(components: Vec<Vec<T>>) -> Result<Self> {
        if components.is_empty() || components.len() > MAX_COMPONENTS {
            return input_err(format!("{} components", components.len()));
        }
        let cells = components[0].len();
        if components.iter().any(|c| c.len() != cells) {
            return input_err("components differ in length");
        }
        Ok(Self { components })
    }

    pub fn cells(&self) -> usize {
        self.components[0].len()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, m: usize) -> &[T] {
        &self.components[m]
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    #[inline]
    pub fn point(&self, j: usize) -> Point<T> {
        let mut p = [T::zero(); MAX_COMPONENTS];
        for (m, c) in self.components.iter().enumerate() {
            p[m] = c[j];
        }
        p
    }

    /// `self + dt * Σ c_k rate_k`.
    fn advance(&self, dt: T, terms: &[(T, &Self)]) -> Self {
        let components = (0..self.components.len())
            .map(|m| {
                (0..self.cells())
                    .map(|j| {
                        let inc = terms.iter().fold(T::zero(), |acc, (c, r)| acc + *c * r.components[m][j]);
                        self.components[m][j] + dt * inc
                    })
                    .collect()
            })
            .collect();
        Self { components }
    }
}

/// A hyperbolic balance law `U_t + F(U)_x = S`.
pub trait Model<T: Scalar>: Sync {
    fn n_components(&self) -> usize;

    /// Column names of the conserved components.
    fn names(&self) -> Vec<&'static str>;

    /// Fills the states left (`minus`) and right (`plus`) of each of the `J + 1`
    /// interfaces. Cells outside the grid are free-boundary copies of the edge cells.
    fn reconstruct(&self, state: &State<T>, theta: T, minus: &mut [Point<T>], plus: &mut [Point<T>]) -> Result<()>;

    fn flux(&self, u: &Point<T>) -> Point<T>;

    /// Smallest and largest characteristic speed at `u`.
    fn speeds(&self, u: &Point<T>) -> (T, T);

    /// Cell-average source for cell `j` given the interface states.
    fn source(&self, _j: usize, _dx: T, _minus: &[Point<T>], _plus: &[Point<T>]) -> Point<T> {
        [T::zero(); MAX_COMPONENTS]
    }

    /// Physical admissibility of cell averages.
    fn check(&self, _state: &State<T>) -> Result<()> {
        Ok(())
    }

    /// Named output columns: conserved components followed by derived ones.
    fn output(&self, state: &State<T>) -> Vec<(&'static str, Vec<T>)> {
        self.names()
            .into_iter()
            .zip(state.components())
            .map(|(n, c)| (n, c.clone()))
            .collect()
    }
}

/// Cell-wise free-boundary extension with two ghost cells per side.
pub(crate) fn extend<T: Scalar>(values: &[T]) -> Vec<T> {
    let n = values.len();
    let mut ext = Vec::with_capacity(n + 4);
    ext.extend([values[0], values[0]]);
    ext.extend_from_slice(values);
    ext.extend([values[n - 1], values[n - 1]]);
    ext
}

#[inline]
fn minmod3<T: Scalar>(a: T, b: T, c: T) -> T {
    if a > T::zero() && b > T::zero() && c > T::zero() {
        a.min(b).min(c)
    } else if a < T::zero() && b < T::zero() && c < T::zero() {
        a.max(b).max(c)
    } else {
        T::zero()
    }
}

/// Generalized minmod slopes (per cell width) of the extended array; the two outermost
/// cells on each side get zero slope.
pub(crate) fn limited_slopes<T: Scalar>(ext: &[T], theta: T) -> Vec<T> {
    let mut s = vec![T::zero(); ext.len()];
    for e in 1..ext.len() - 1 {
        let back = ext[e] - ext[e - 1];
        let fwd = ext[e + 1] - ext[e];
        s[e] = minmod3(theta * back, (ext[e + 1] - ext[e - 1]) * T::half(), theta * fwd);
    }
    s
}

/// Right-hand side and the largest one-sided speed over all interfaces.
#[derive(Debug, Clone)]
pub struct Rhs<T> {
    pub rate: State<T>,
    pub max_speed: T,
}

/// Central-upwind semi-discretization `dU_j/dt = -(H_{j+1/2} - H_{j-1/2}) / Δx + S_j`.
pub fn central_upwind_rhs<T: Scalar, M: Model<T>>(state: &State<T>, model: &M, grid: &Grid1D<T>, theta: T) -> Result<Rhs<T>> {
    let cells = grid.cells();
    if state.cells() != cells {
        return input_err(format!("state has {} cells, grid {cells}", state.cells()));
    }
    let nc = model.n_components();
    let zero = [T::zero(); MAX_COMPONENTS];
    let mut minus = vec![zero; cells + 1];
    let mut plus = vec![zero; cells + 1];
    model.reconstruct(state, theta, &mut minus, &mut plus)?;

    let mut max_speed = T::zero();
    let tiny = T::epsilon() * T::epsilon();
    let fluxes: Vec<Point<T>> = minus
        .iter()
        .zip(&plus)
        .map(|(um, up)| {
            let (lm_min, lm_max) = model.speeds(um);
            let (lp_min, lp_max) = model.speeds(up);
            let a_plus = lm_max.max(lp_max).max(T::zero());
            let a_minus = lm_min.min(lp_min).min(T::zero());
            max_speed = max_speed.max(a_plus).max(-a_minus);
            let fm = model.flux(um);
            let fp = model.flux(up);
            let mut h = zero;
            let span = a_plus - a_minus;
            for m in 0..nc {
                h[m] = if span > tiny {
                    (a_plus * fm[m] - a_minus * fp[m]) / span + a_plus * a_minus / span * (up[m] - um[m])
                } else {
                    (fm[m] + fp[m]) * T::half()
                };
            }
            h
        })
        .collect();

    let dx = grid.dx();
    let mut rate = vec![vec![T::zero(); cells]; nc];
    for j in 0..cells {
        let s = model.source(j, dx, &minus, &plus);
        for m in 0..nc {
            rate[m][j] = -(fluxes[j + 1][m] - fluxes[j][m]) / dx + s[m];
        }
    }
    Ok(Rhs {
        rate: State { components: rate },
        max_speed,
    })
}

/// One step of the three-stage strong-stability-preserving Runge–Kutta method.
pub fn ssp_rk3_step<T: Scalar>(
    state: &State<T>,
    dt: T,
    mut rhs: impl FnMut(&State<T>) -> Result<State<T>>,
) -> Result<State<T>> {
    // u1 = u + dt L0, u2 = 3/4 u + 1/4 (u1 + dt L1), u+ = 1/3 u + 2/3 (u2 + dt L2),
    // written as increments of u so that a vanishing rate leaves u untouched
    let one = T::one();
    let sixth = one / T::lit(6.0);
    let l0 = rhs(state)?;
    let u1 = state.advance(dt, &[(one, &l0)]);
    let l1 = rhs(&u1)?;
    let quarter = T::lit(0.25);
    let u2 = state.advance(dt, &[(quarter, &l0), (quarter, &l1)]);
    let l2 = rhs(&u2)?;
    Ok(state.advance(dt, &[(sixth, &l0), (sixth, &l1), (T::lit(4.0) * sixth, &l2)]))
}

/// `Δt = cfl Δx / max speed`, or `cfl Δx` for a state at rest.
pub fn cfl_dt<T: Scalar, M: Model<T>>(state: &State<T>, model: &M, grid: &Grid1D<T>, cfl: T, theta: T) -> Result<T> {
    let speed = central_upwind_rhs(state, model, grid, theta)?.max_speed;
    Ok(dt_from_speed(speed, grid.dx(), cfl))
}

fn dt_from_speed<T: Scalar>(speed: T, dx: T, cfl: T) -> T {
    if speed > T::zero() {
        cfl * dx / speed
    } else {
        cfl * dx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    pub cfl: f64,
    /// Minmod parameter in `[1, 2]`.
    pub theta: f64,
    pub t_final: f64,
    pub max_steps: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            cfl: 0.45,
            theta: 1.3,
            t_final: 0.1,
            max_steps: 1_000_000,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return crate::error::config_err(format!("cfl must lie in (0, 1), got {}", self.cfl));
        }
        if !(1.0..=2.0).contains(&self.theta) {
            return crate::error::config_err(format!("theta must lie in [1, 2], got {}", self.theta));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return crate::error::config_err(format!("t_final must be positive, got {}", self.t_final));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub state: State<T>,
    pub time: T,
    pub steps: usize,
}

fn at_time<T: Scalar>(e: Error, time: T) -> Error {
    match e {
        Error::State { cell, detail, .. } => Error::State {
            cell,
            time: time.as_f64(),
            detail,
        },
        other => other,
    }
}

const MAX_RETRIES: usize = 20;

/// Marches `initial` to `params.t_final`, clipping the last step to land on it exactly.
pub fn solve<T: Scalar, M: Model<T>>(model: &M, grid: &Grid1D<T>, initial: State<T>, params: &SolverParams) -> Result<Solution<T>> {
    params.validate()?;
    let theta = T::lit(params.theta);
    let cfl = T::lit(params.cfl);
    let t_final = T::lit(params.t_final);
    model.check(&initial)?;
    let mut state = initial;
    let mut time = T::zero();
    let mut steps = 0;
    while time < t_final {
        if steps >= params.max_steps {
            return Err(Error::State {
                cell: 0,
                time: time.as_f64(),
                detail: format!("step limit {} reached", params.max_steps),
            });
        }
        let first = central_upwind_rhs(&state, model, grid, theta).map_err(|e| at_time(e, time))?;
        let mut dt = dt_from_speed(first.max_speed, grid.dx(), cfl);
        let mut last;
        let mut retries = 0;
        let next = loop {
            last = time + dt >= t_final;
            if last {
                dt = t_final - time;
            }
            // later stages may see faster waves than the first; each stage must
            // respect Δt a ≤ Δx / 2 for the update to stay admissible
            let mut stage_speed = first.max_speed;
            let mut cached = Some(first.rate.clone());
            let stepped = ssp_rk3_step(&state, dt, |u| match cached.take() {
                Some(rate) => Ok(rate),
                None => {
                    let rhs = central_upwind_rhs(u, model, grid, theta)?;
                    stage_speed = stage_speed.max(rhs.max_speed);
                    Ok(rhs.rate)
                }
            });
            let admissible = stage_speed * dt <= T::half() * grid.dx();
            match stepped {
                Ok(next) if admissible && model.check(&next).is_ok() => break next,
                _ if retries < MAX_RETRIES => {
                    retries += 1;
                    dt = if admissible { dt * T::half() } else { dt_from_speed(stage_speed, grid.dx(), cfl) };
                }
                Ok(next) => {
                    model.check(&next).map_err(|e| at_time(e, time))?;
                    break next;
                }
                Err(e) => return Err(at_time(e, time)),
            }
        };
        state = next;
        time = if last { t_final } else { time + dt };
        steps += 1;
    }
    Ok(Solution { state, time, steps })
}

/// Writes `x,<component>,...` for one solution.
pub fn write_snapshot_csv<T: Scalar>(path: &Path, x: &[T], columns: &[(&str, Vec<T>)]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "x")?;
    for (name, _) in columns {
        write!(out, ",{name}")?;
    }
    writeln!(out)?;
    for (j, xj) in x.iter().enumerate() {
        write!(out, "{xj}")?;
        for (_, c) in columns {
            write!(out, ",{}", c[j])?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}
