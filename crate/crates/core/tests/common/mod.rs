//! Test oracles shared by the integration suites.
#![allow(dead_code)]

/// Exact solution of the Riemann problem for the ideal-gas Euler equations.
#[derive(Debug, Clone, Copy)]
pub struct ExactRiemann {
    pub gamma: f64,
    pub left: (f64, f64, f64),
    pub right: (f64, f64, f64),
    pub p_star: f64,
    pub u_star: f64,
}

impl ExactRiemann {
    /// `left` / `right` are `(ρ, u, p)`.
    pub fn new(gamma: f64, left: (f64, f64, f64), right: (f64, f64, f64)) -> Self {
        let (p_star, u_star) = star_state(gamma, left, right);
        Self {
            gamma,
            left,
            right,
            p_star,
            u_star,
        }
    }

    /// `(ρ, u, p)` at similarity coordinate `s = (x - x0) / t`.
    pub fn sample(&self, s: f64) -> (f64, f64, f64) {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        let side = |state: (f64, f64, f64), dir: f64, s: f64| {
            // dir = -1 for the left wave, +1 for the right wave, with s measured in that frame
            let (rho, u, p) = state;
            let c = (g * p / rho).sqrt();
            if ps > p {
                let ratio = ps / p;
                let gm = (g - 1.0) / (g + 1.0);
                let shock = u + dir * c * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
                if dir * (s - shock) >= 0.0 {
                    (rho, u, p)
                } else {
                    (rho * (ratio + gm) / (gm * ratio + 1.0), us, ps)
                }
            } else {
                let head = u + dir * c;
                let c_star = c * (ps / p).powf((g - 1.0) / (2.0 * g));
                let tail = us + dir * c_star;
                if dir * (s - head) >= 0.0 {
                    (rho, u, p)
                } else if dir * (s - tail) <= 0.0 {
                    (rho * (ps / p).powf(1.0 / g), us, ps)
                } else {
                    let k = 2.0 / (g + 1.0);
                    let vel = k * (-dir * c + (g - 1.0) / 2.0 * u + s);
                    let cf = k * (c - dir * (g - 1.0) / 2.0 * (u - s));
                    let rho_f = rho * (cf / c).powf(2.0 / (g - 1.0));
                    (rho_f, vel, p * (cf / c).powf(2.0 * g / (g - 1.0)))
                }
            }
        };
        if s <= us {
            side(self.left, -1.0, s)
        } else {
            side(self.right, 1.0, s)
        }
    }
}

fn pressure_function(g: f64, p: f64, state: (f64, f64, f64)) -> (f64, f64) {
    let (rho, _, pk) = state;
    let c = (g * pk / rho).sqrt();
    if p > pk {
        let a = 2.0 / ((g + 1.0) * rho);
        let b = (g - 1.0) / (g + 1.0) * pk;
        let q = (a / (p + b)).sqrt();
        ((p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (b + p)))
    } else {
        let r = p / pk;
        let e = (g - 1.0) / (2.0 * g);
        (2.0 * c / (g - 1.0) * (r.powf(e) - 1.0), 1.0 / (rho * c) * r.powf(-(g + 1.0) / (2.0 * g)))
    }
}

/// Newton iteration on `f_L(p) + f_R(p) + Δu = 0`.
fn star_state(g: f64, left: (f64, f64, f64), right: (f64, f64, f64)) -> (f64, f64) {
    let du = right.1 - left.1;
    let mut p = 0.5 * (left.2 + right.2);
    for _ in 0..100 {
        let (fl, dl) = pressure_function(g, p, left);
        let (fr, dr) = pressure_function(g, p, right);
        let next = (p - (fl + fr + du) / (dl + dr)).max(1e-12);
        let done = (next - p).abs() / (0.5 * (next + p)) < 1e-15;
        p = next;
        if done {
            break;
        }
    }
    let (fl, _) = pressure_function(g, p, left);
    let (fr, _) = pressure_function(g, p, right);
    (p, 0.5 * (left.1 + right.1) + 0.5 * (fr - fl))
}

/// The Sod problem of the Euler examples.
pub fn sod() -> ExactRiemann {
    ExactRiemann::new(1.4, (1.0, 0.0, 1.0), (0.125, 0.0, 0.1))
}
