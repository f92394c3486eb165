//! Calibration routines: beam-splitter scheduling, pulse shaping, rate
//! matching, gate-time optimization, and dual-rail pulse calibration.

mod dual_rail;
mod gate_time;
mod raman_match;

pub use dual_rail::calibrate_dual_rail_pi;
pub use gate_time::optimize_effective_gate_time;
pub use raman_match::{match_raman_rates, MatchOptions, MatchOutcome, MatchRecord, TuneKnobs};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{cyclic_to_angular, TWO_PI};

/// A full-swap schedule built from N beam-splitter segments.
///
/// theta = pi/2N per segment; the detuning is the unique Delta >= 0 that
/// produces that angle at the given sideband rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterPlan {
    /// Sideband rate, cyclic Hz.
    pub omega_hz: f64,
    /// Number of beam-splitter segments.
    pub n: u32,
    /// Common drive detuning, cyclic Hz.
    pub delta_hz: f64,
    /// Beam-splitter angle, radians.
    pub theta_rad: f64,
    /// Time between bus-empty instants, seconds.
    pub tau_bs_s: f64,
    /// Full swap time N * tau_bs, seconds.
    pub tau_swap_s: f64,
}

/// Beam-splitter angle theta(Omega, Delta) = (pi/2)(1 - Delta/sqrt(8(Omega/2)^2 + Delta^2)).
pub fn beam_splitter_angle(omega_hz: f64, delta_hz: f64) -> f64 {
    let w = cyclic_to_angular(omega_hz);
    let d = cyclic_to_angular(delta_hz);
    let root = (8.0 * (w / 2.0).powi(2) + d * d).sqrt();
    (PI / 2.0) * (1.0 - d / root)
}

/// Time between bus-empty instants, tau_BS = 2 pi / sqrt(8(Omega/2)^2 + Delta^2).
pub fn beam_splitter_time(omega_hz: f64, delta_hz: f64) -> f64 {
    let w = cyclic_to_angular(omega_hz);
    let d = cyclic_to_angular(delta_hz);
    TWO_PI / (8.0 * (w / 2.0).powi(2) + d * d).sqrt()
}

/// Solve for the detuning giving theta = pi/2N and assemble the schedule.
///
/// The inversion is closed-form: Delta = Omega (N-1) sqrt(2 / (2N - 1)).
pub fn plan_beam_splitter(omega_hz: f64, n: u32) -> Result<BeamSplitterPlan> {
    if omega_hz <= 0.0 {
        return Err(Error::InvalidParameter("sideband rate must be positive".into()));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let nf = n as f64;
    let delta_hz = omega_hz * (nf - 1.0) * (2.0 / (2.0 * nf - 1.0)).sqrt();
    let theta_rad = beam_splitter_angle(omega_hz, delta_hz);
    let tau_bs_s = beam_splitter_time(omega_hz, delta_hz);
    Ok(BeamSplitterPlan {
        omega_hz,
        n,
        delta_hz,
        theta_rad,
        tau_bs_s,
        tau_swap_s: nf * tau_bs_s,
    })
}

/// Smoothed flat-top pulse: total length T, equal-area length t_eff, edge
/// parameter sigma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseShape {
    /// Total pulse length, seconds.
    pub total_s: f64,
    /// Effective (equal-area) length, seconds.
    pub t_eff_s: f64,
    /// Half the smoothed-edge duration on each side, seconds.
    pub sigma_s: f64,
}

impl PulseShape {
    pub fn new(total_s: f64, t_eff_s: f64, sigma_s: f64) -> Result<Self> {
        let p = Self { total_s, t_eff_s, sigma_s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_eff_s > 0.0 && self.t_eff_s <= self.total_s) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < t_eff <= T, got t_eff = {:.3e}, T = {:.3e}",
                self.t_eff_s, self.total_s
            )));
        }
        if self.sigma_s <= 0.0 {
            return Err(Error::InvalidParameter("sigma must be positive".into()));
        }
        Ok(())
    }

    /// Same shape with a different effective length.
    pub fn with_t_eff(&self, t_eff_s: f64) -> Result<Self> {
        Self::new(self.total_s, t_eff_s, self.sigma_s)
    }

    /// Envelope value in [0, 1] at time t from pulse start; zero outside [0, T].
    ///
    /// [1 + tanh(2(t - t~)/sigma) tanh(2(T - t~ - t)/sigma)]/2, t~ = (T - t_eff)/2.
    pub fn value(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.total_s {
            return 0.0;
        }
        let t_edge = (self.total_s - self.t_eff_s) / 2.0;
        let rising = (2.0 * (t - t_edge) / self.sigma_s).tanh();
        let falling = (2.0 * (self.total_s - t_edge - t) / self.sigma_s).tanh();
        (1.0 + rising * falling) / 2.0
    }

    /// Numeric area under the envelope (Simpson's rule).
    pub fn integral(&self) -> f64 {
        let n = 2000;
        let h = self.total_s / n as f64;
        let mut acc = self.value(0.0) + self.value(self.total_s);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.value(k as f64 * h);
        }
        acc * h / 3.0
    }
}

/// The envelope function of a pulse shape, for use as a Hamiltonian drive.
pub fn shaped_envelope(pulse: &PulseShape) -> impl Fn(f64) -> f64 + Send + Sync + Clone {
    let p = *pulse;
    move |t| p.value(t)
}
