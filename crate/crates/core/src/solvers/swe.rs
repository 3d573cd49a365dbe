use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{extend, limited_slopes, Grid1D, Model, Point, State, MAX_COMPONENTS};

/// Saint-Venant shallow-water equations over a fixed bottom `Z(x)`, in the
/// well-balanced, positivity-preserving central-upwind form: the water surface
/// `w = h + Z` is reconstructed, `Z` is sampled at the interfaces and the cell
/// value of `Z` is the mean of its two interface values.
#[derive(Debug, Clone, PartialEq)]
pub struct Swe<T> {
    pub g: T,
    kappa: T,
    /// `Z` at interfaces `-2 ..= J + 2`.
    z_faces: Vec<T>,
    /// `Z` at cells `-2 ..= J + 1`.
    z_cells: Vec<T>,
}

/// Velocity `2 h (hu) / (h² + max(h², κ²))`, which equals `hu / h` wherever `h >= κ`.
#[inline]
fn velocity<T: Scalar>(h: T, hu: T, kappa: T) -> T {
    if h <= T::zero() {
        return T::zero();
    }
    let h2 = h * h;
    T::two() * h * hu / (h2 + h2.max(kappa * kappa))
}

/// `(hu, hu²/h + g h²/2)`; zero for a dry state.
pub fn swe_flux<T: Scalar>(u: &Point<T>, g: T) -> Point<T> {
    flux_with(u, g, T::zero())
}

#[inline]
fn flux_with<T: Scalar>(u: &Point<T>, g: T, kappa: T) -> Point<T> {
    let h = u[0].max(T::zero());
    let vel = velocity(h, u[1], kappa);
    let mut f = [T::zero(); MAX_COMPONENTS];
    f[0] = u[1];
    f[1] = u[1] * vel + T::half() * g * h * h;
    f
}

impl<T: Scalar> Swe<T> {
    /// `depth_scale` sets the desingularization threshold `κ = 1e-8 · depth_scale`.
    pub fn new(g: T, grid: &Grid1D<T>, bottom: impl Fn(T) -> T, depth_scale: T) -> Result<Self> {
        if !(g > T::zero()) {
            return crate::error::config_err(format!("gravity must be positive, got {g}"));
        }
        let cells = grid.cells() as isize;
        let z_faces: Vec<T> = (-2..=cells + 2).map(|i| bottom(grid.interface(i))).collect();
        let z_cells = z_faces.windows(2).map(|w| (w[0] + w[1]) * T::half()).collect();
        Ok(Self {
            g,
            kappa: T::lit(1e-8) * depth_scale,
            z_faces,
            z_cells,
        })
    }

    fn cells(&self) -> usize {
        self.z_cells.len() - 4
    }

    /// Cell value of the bottom for interior cell `j`.
    pub fn bottom_cell(&self, j: usize) -> T {
        self.z_cells[j + 2]
    }

    /// Bottom at interface `i` (`0..=J`).
    pub fn bottom_face(&self, i: usize) -> T {
        self.z_faces[i + 2]
    }

    /// `(h, hu)` from the water surface and velocity at the cell centers; `h` is clipped at zero.
    pub fn state_from_surface(&self, grid: &Grid1D<T>, surface: impl Fn(T) -> (T, T)) -> Result<State<T>> {
        let mut h = Vec::with_capacity(grid.cells());
        let mut hu = Vec::with_capacity(grid.cells());
        for (j, x) in grid.centers().into_iter().enumerate() {
            let (w, u) = surface(x);
            let depth = (w - self.bottom_cell(j)).max(T::zero());
            h.push(depth);
            hu.push(depth * u);
        }
        State::new(vec![h, hu])
    }
}

impl<T: Scalar> Model<T> for Swe<T> {
    fn n_components(&self) -> usize {
        2
    }

    fn names(&self) -> Vec<&'static str> {
        vec!["h", "hu"]
    }

    fn reconstruct(&self, state: &State<T>, theta: T, minus: &mut [Point<T>], plus: &mut [Point<T>]) -> Result<()> {
        let cells = state.cells();
        debug_assert_eq!(cells, self.cells());
        let h = extend(state.component(0));
        let hu = extend(state.component(1));
        let w: Vec<T> = h.iter().zip(&self.z_cells).map(|(&h, &z)| h + z).collect();
        let sw = limited_slopes(&w, theta);
        let shu = limited_slopes(&hu, theta);

        // faces of extended cell e: left at z_faces[e], right at z_faces[e + 1]
        let faces = |e: usize| -> (Point<T>, Point<T>) {
            let (zl, zr) = (self.z_faces[e], self.z_faces[e + 1]);
            let mut wl = w[e] - T::half() * sw[e];
            let mut wr = w[e] + T::half() * sw[e];
            if wr < zr {
                wr = zr;
                wl = T::two() * w[e] - zr;
            } else if wl < zl {
                wl = zl;
                wr = T::two() * w[e] - zl;
            }
            let side = |wf: T, z: T, q: T| {
                let depth = (wf - z).max(T::zero());
                let vel = velocity(depth, q, self.kappa);
                let mut p = [T::zero(); MAX_COMPONENTS];
                p[0] = depth;
                p[1] = depth * vel;
                p
            };
            (
                side(wl, zl, hu[e] - T::half() * shu[e]),
                side(wr, zr, hu[e] + T::half() * shu[e]),
            )
        };
        let mut prev_right = faces(1).1;
        for i in 0..=cells {
            let (left, right) = faces(i + 2);
            minus[i] = prev_right;
            plus[i] = left;
            prev_right = right;
        }
        Ok(())
    }

    fn flux(&self, u: &Point<T>) -> Point<T> {
        flux_with(u, self.g, self.kappa)
    }

    fn speeds(&self, u: &Point<T>) -> (T, T) {
        let h = u[0].max(T::zero());
        let vel = velocity(h, u[1], self.kappa);
        let c = (self.g * h).sqrt();
        (vel - c, vel + c)
    }

    fn source(&self, j: usize, dx: T, minus: &[Point<T>], plus: &[Point<T>]) -> Point<T> {
        let dz = self.z_faces[j + 3] - self.z_faces[j + 2];
        let mut s = [T::zero(); MAX_COMPONENTS];
        s[1] = -self.g * dz / dx * (minus[j + 1][0] + plus[j][0]) * T::half();
        s
    }

    fn check(&self, state: &State<T>) -> Result<()> {
        for j in 0..state.cells() {
            let (h, hu) = (state.component(0)[j], state.component(1)[j]);
            if !(h >= T::zero() && h.is_finite() && hu.is_finite()) {
                return Err(Error::State {
                    cell: j,
                    time: 0.0,
                    detail: format!("water depth {h}, discharge {hu}"),
                });
            }
        }
        Ok(())
    }

    fn output(&self, state: &State<T>) -> Vec<(&'static str, Vec<T>)> {
        let w = state
            .component(0)
            .iter()
            .enumerate()
            .map(|(j, &h)| h + self.bottom_cell(j))
            .collect();
        vec![
            ("h", state.component(0).to_vec()),
            ("hu", state.component(1).to_vec()),
            ("w", w),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_examples() {
        let f = swe_flux(&[1.0_f64, 0.0, 0.0], 1.0);
        assert_eq!((f[0], f[1]), (0.0, 0.5));
        let f = swe_flux(&[0.0_f64, 0.0, 0.0], 1.0);
        assert_eq!((f[0], f[1]), (0.0, 0.0));
        let f = swe_flux(&[0.5_f64, 1.0, 0.0], 1.0);
        assert!((f[0] - 1.0).abs() < 1e-15 && (f[1] - 2.125).abs() < 1e-15);
    }
}
