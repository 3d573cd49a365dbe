use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{extend, limited_slopes, Grid1D, Model, Point, State, MAX_COMPONENTS};

/// Cell averages `(ρ, ρu, E)`.
pub type EulerState<T> = State<T>;

/// Ideal-gas Euler equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler<T> {
    pub gamma: T,
}

fn state_err<T>(cell: usize, detail: String) -> Result<T> {
    Err(Error::State { cell, time: 0.0, detail })
}

#[inline]
fn pressure<T: Scalar>(gamma: T, u: &Point<T>) -> T {
    (gamma - T::one()) * (u[2] - u[1] * u[1] / (T::two() * u[0]))
}

/// `(ρu, ρu² + P, u(E + P))` with `P = (γ - 1)(E - ρu²/2)`.
pub fn euler_flux<T: Scalar>(u: &Point<T>, gamma: T) -> Result<Point<T>> {
    if !(u[0] > T::zero()) {
        return state_err(0, format!("non-positive density {}", u[0]));
    }
    Ok(Euler { gamma }.flux(u))
}

impl<T: Scalar> Euler<T> {
    pub fn new(gamma: T) -> Self {
        Self { gamma }
    }

    /// Conserved cell values from point values of density, velocity and pressure at the cell centers.
    pub fn state_from_primitive(
        &self,
        grid: &Grid1D<T>,
        primitive: impl Fn(T) -> (T, T, T),
    ) -> Result<EulerState<T>> {
        let mut comps: Vec<Vec<T>> = (0..3).map(|_| Vec::with_capacity(grid.cells())).collect();
        for x in grid.centers() {
            let (rho, u, p) = primitive(x);
            comps[0].push(rho);
            comps[1].push(rho * u);
            comps[2].push(p / (self.gamma - T::one()) + T::half() * rho * u * u);
        }
        let state = State::new(comps)?;
        self.check(&state)?;
        Ok(state)
    }

    fn conserved(&self, rho: T, u: T, p: T) -> Point<T> {
        [rho, rho * u, p / (self.gamma - T::one()) + T::half() * rho * u * u]
    }
}

impl<T: Scalar> Model<T> for Euler<T> {
    fn n_components(&self) -> usize {
        3
    }

    fn names(&self) -> Vec<&'static str> {
        vec!["rho", "rho_u", "E"]
    }

    fn reconstruct(&self, state: &State<T>, theta: T, minus: &mut [Point<T>], plus: &mut [Point<T>]) -> Result<()> {
        let cells = state.cells();
        let mut prim: Vec<Vec<T>> = (0..3).map(|_| Vec::with_capacity(cells)).collect();
        for j in 0..cells {
            let u = state.point(j);
            let p = pressure(self.gamma, &u);
            if !(u[0] > T::zero() && p > T::zero()) {
                return state_err(j, format!("density {} / pressure {p}", u[0]));
            }
            prim[0].push(u[0]);
            prim[1].push(u[1] / u[0]);
            prim[2].push(p);
        }
        let ext: Vec<Vec<T>> = prim.iter().map(|q| extend(q)).collect();
        let slopes: Vec<Vec<T>> = ext.iter().map(|q| limited_slopes(q, theta)).collect();
        let face = |e: usize, sign: T| -> [T; 3] {
            [0, 1, 2].map(|m| ext[m][e] + sign * T::half() * slopes[m][e])
        };
        for i in 0..=cells {
            let l = face(i + 1, T::one());
            let r = face(i + 2, -T::one());
            for (q, cell) in [(l, i.saturating_sub(1)), (r, i.min(cells - 1))] {
                if !(q[0] > T::zero() && q[2] > T::zero()) {
                    return state_err(cell, format!("reconstructed density {} / pressure {}", q[0], q[2]));
                }
            }
            minus[i] = self.conserved(l[0], l[1], l[2]);
            plus[i] = self.conserved(r[0], r[1], r[2]);
        }
        Ok(())
    }

    fn flux(&self, u: &Point<T>) -> Point<T> {
        let vel = u[1] / u[0];
        let p = pressure(self.gamma, u);
        let mut f = [T::zero(); MAX_COMPONENTS];
        f[0] = u[1];
        f[1] = u[1] * vel + p;
        f[2] = vel * (u[2] + p);
        f
    }

    fn speeds(&self, u: &Point<T>) -> (T, T) {
        let vel = u[1] / u[0];
        let c = (self.gamma * pressure(self.gamma, u) / u[0]).max(T::zero()).sqrt();
        (vel - c, vel + c)
    }

    fn check(&self, state: &State<T>) -> Result<()> {
        for j in 0..state.cells() {
            let u = state.point(j);
            let p = pressure(self.gamma, &u);
            if !(u[0] > T::zero() && p > T::zero() && u.iter().all(|v| v.is_finite())) {
                return state_err(j, format!("density {} / pressure {p}", u[0]));
            }
        }
        Ok(())
    }
}
