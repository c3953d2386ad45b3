//! Fixed-step Runge–Kutta integration of the moment equations.
//!
//! This engine shares nothing with the closed form beyond the drift
//! coefficients themselves: it marches `u, v, w` through
//!
//! ```text
//! du/dt = -2 eta_a u + 2 xi_a w + d_aa
//! dv/dt = -2 eta_b v + 2 xi_b w
//! dw/dt = -(eta_a + eta_b) w + xi_b u + xi_a v + d_ab
//! ```
//!
//! with classical fourth-order steps, so it serves as an independent check
//! on the spectral decomposition and the ramp assembly.

use crate::closed_form::{MomentState, OVERFLOW_HORIZON};
use crate::error::{Error, Result};
use crate::params::{DriftDiffusion, SystemParams};

/// Steps with `dt * max_rate` above this are rejected outright.
pub const STEP_RATE_LIMIT: f64 = 0.1;
/// Relative singularity threshold of the steady-state solve.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Moment-equation integrator for one drift/diffusion coefficient set.
#[derive(Debug, Clone, Copy)]
pub struct MomentOde {
    drift: DriftDiffusion,
}

impl MomentOde {
    /// Wraps an existing coefficient set.
    pub fn new(drift: DriftDiffusion) -> Self {
        MomentOde { drift }
    }

    /// Builds the coefficient set from physical parameters first.
    pub fn from_params(params: &SystemParams) -> Result<Self> {
        let reduced = params.reduced()?;
        Ok(MomentOde::new(reduced.drift_diffusion(params)))
    }

    /// The coefficient set being integrated.
    pub fn drift(&self) -> &DriftDiffusion {
        &self.drift
    }

    /// Right-hand side of the moment equations at `[u, v, w]`.
    pub fn rhs(&self, y: [f64; 3]) -> [f64; 3] {
        let d = &self.drift;
        let [u, v, w] = y;
        [
            -2.0 * d.eta_a * u + 2.0 * d.xi_a * w + d.d_aa,
            -2.0 * d.eta_b * v + 2.0 * d.xi_b * w,
            -(d.eta_a + d.eta_b) * w + d.xi_b * u + d.xi_a * v + d.d_ab,
        ]
    }

    /// One classical fourth-order step of size `h`.
    pub fn step(&self, y: [f64; 3], h: f64) -> [f64; 3] {
        let k1 = self.rhs(y);
        let k2 = self.rhs(shift(y, h / 2.0, k1));
        let k3 = self.rhs(shift(y, h / 2.0, k2));
        let k4 = self.rhs(shift(y, h, k3));
        let mut out = y;
        for i in 0..3 {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }

    /// Integrates from two-mode vacuum at `t = 0` and samples the state at
    /// every grid point, taking a shortened final step onto each target.
    pub fn integrate(&self, t_grid: &[f64], dt: f64) -> Result<Vec<MomentState>> {
        validate_grid(t_grid)?;
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidGrid("step size must be positive and finite"));
        }
        let max_rate = self.drift.max_rate();
        if dt * max_rate > STEP_RATE_LIMIT {
            return Err(Error::StepTooLarge { dt, max_rate, limit: STEP_RATE_LIMIT });
        }
        let total_steps = (t_grid.last().copied().unwrap_or(0.0) / dt).ceil();
        if total_steps > 5e7 {
            return Err(Error::InvalidGrid(
                "time grid needs too many integrator steps; increase the step size",
            ));
        }

        let mut out = Vec::with_capacity(t_grid.len());
        let mut y = [0.0f64; 3];
        let mut t = 0.0f64;
        for &target in t_grid {
            let span = target - t;
            let n = (span / dt + 1e-12).floor() as u64;
            for _ in 0..n {
                y = self.step(y, dt);
            }
            let rem = span - n as f64 * dt;
            if rem > 1e-14 {
                y = self.step(y, rem);
            }
            t = target;
            let mag = y[0].abs().max(y[1].abs()).max(y[2].abs());
            if !mag.is_finite() || mag > 1e304 {
                let exponent = if mag.is_finite() { mag.ln() } else { f64::INFINITY };
                return Err(Error::NumericalInstability { t, exponent, horizon: OVERFLOW_HORIZON });
            }
            out.push(MomentState { t, u: y[0], v: y[1], w: y[2] });
        }
        Ok(out)
    }

    /// Fixed point of the moment flow, from an exact 3x3 solve.
    ///
    /// This is the long-time limit only when the relaxation spectrum is
    /// stable; the solve itself fails with `SingularDrift` at a marginal
    /// spectrum, where no isolated fixed point exists.
    pub fn steady_state(&self) -> Result<MomentState> {
        let d = &self.drift;
        let sum = d.eta_a + d.eta_b;
        let minor = d.eta_a * d.eta_b - d.xi_a * d.xi_b;
        let det = 4.0 * sum * minor;
        let scale =
            4.0 * (d.eta_a.abs() + d.eta_b.abs()) * (d.eta_a.abs() * d.eta_b.abs() + d.xi_a.abs() * d.xi_b.abs());
        if det.abs() <= SINGULARITY_TOL * scale.max(1e-300) {
            return Err(Error::SingularDrift { det });
        }
        let det_u = 2.0 * d.d_aa * (d.eta_b * sum - d.xi_a * d.xi_b) + 4.0 * d.xi_a * d.eta_b * d.d_ab;
        let pair = 2.0 * d.eta_a * d.d_ab + d.xi_b * d.d_aa;
        let det_v = 2.0 * d.xi_b * pair;
        let det_w = 2.0 * d.eta_b * pair;
        Ok(MomentState {
            t: f64::INFINITY,
            u: det_u / det,
            v: det_v / det,
            w: det_w / det,
        })
    }
}

fn shift(y: [f64; 3], h: f64, k: [f64; 3]) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Sample grids must be finite, nonnegative, and nondecreasing.
pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidGrid("time grid must not be empty"));
    }
    let mut prev = 0.0f64;
    for &t in t_grid {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidGrid("time grid entries must be finite and nonnegative"));
        }
        if t < prev {
            return Err(Error::InvalidGrid("time grid must be nondecreasing"));
        }
        prev = t;
    }
    Ok(())
}
