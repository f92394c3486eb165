//! Damped swap-oscillation fits and per-gate loss extraction.

use std::f64::consts::{PI, SQRT_2};

use rustfft::{num_complex::Complex as FftComplex, FftPlanner};

use super::levmar::{fit_curve, FitResult};
use crate::error::{Error, Result};
use crate::units::{angular_to_cyclic, cyclic_to_angular};

/// Fitted parameters of a damped qubit-qubit swap oscillation:
///
/// P_e(t) = P_e(0) [ exp(-t/tau) cos(Omega~ t / (2 sqrt 2) + phi)
///                 + (1 - exp(-t/tau)) / 2 ]^2
///
/// with Omega~ = Omega sqrt(1 - (2 / (sqrt 2 Omega tau))^2) tied to the
/// fitted (Omega, tau).
#[derive(Debug, Clone)]
pub struct SwapFit {
    /// Sideband rate, cyclic Hz.
    pub omega_hz: f64,
    /// Damping-corrected rate Omega~, cyclic Hz (derived from omega and tau).
    pub omega_eff_hz: f64,
    /// Envelope decay time, seconds.
    pub tau_s: f64,
    /// Phase offset, radians.
    pub phase_rad: f64,
    /// Initial excited population.
    pub p_e0: f64,
    /// Envelope-ratio loss per swap, tau_swap / tau with tau_swap = sqrt(2) pi / Omega.
    pub loss_per_swap: f64,
    /// 1-sigma uncertainties (omega_hz, tau_s, phase, p_e0).
    pub stderr: [f64; 4],
    /// Residual RMS of the fit.
    pub residual_rms: f64,
}

impl SwapFit {
    /// Population swap time sqrt(2) pi / Omega, seconds.
    pub fn tau_swap_s(&self) -> f64 {
        SQRT_2 * PI / cyclic_to_angular(self.omega_hz)
    }

    /// Population oscillation period 2 sqrt(2) pi / Omega, seconds.
    pub fn period_s(&self) -> f64 {
        2.0 * self.tau_swap_s()
    }
}

/// Omega~ from Omega (angular) and tau; NaN when overdamped.
fn omega_eff_angular(omega_ang: f64, tau_s: f64) -> f64 {
    let x = 2.0 / (SQRT_2 * omega_ang * tau_s);
    omega_ang * (1.0 - x * x).sqrt()
}

/// The fit model, time in seconds, omega angular.
fn swap_model(omega_ang: f64, tau_s: f64, phase: f64, p_e0: f64, t: f64) -> f64 {
    let om_eff = omega_eff_angular(omega_ang, tau_s);
    let env = (-t / tau_s).exp();
    let bracket = env * (om_eff * t / (2.0 * SQRT_2) + phase).cos() + 0.5 * (1.0 - env);
    p_e0 * bracket * bracket
}

/// Dominant nonzero frequency of a uniformly sampled real trace, Hz.
pub(crate) fn dominant_frequency(times: &[f64], values: &[f64]) -> Result<f64> {
    let n = times.len();
    if n < 8 {
        return Err(Error::FitFailure("too few samples for a frequency estimate".into()));
    }
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<FftComplex<f64>> =
        values.iter().map(|&v| FftComplex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let (k_peak, _) = buf
        .iter()
        .take(half)
        .enumerate()
        .skip(1)
        .map(|(k, z)| (k, z.norm()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or_else(|| Error::FitFailure("empty spectrum".into()))?;
    Ok(k_peak as f64 / (n as f64 * dt))
}

/// Fit a measured excited-state trace to the damped swap model.
///
/// Initial guesses come from the FFT peak (rate) and the envelope of the
/// oscillation (decay). Needs >= 4 oscillation periods sampled at >= 8
/// points per period.
pub fn fit_swap_decay(times: &[f64], populations: &[f64]) -> Result<SwapFit> {
    if times.len() != populations.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), got: populations.len() });
    }
    let f_pop = dominant_frequency(times, populations)?;
    let span = times[times.len() - 1] - times[0];
    let periods = span * f_pop;
    if periods < 4.0 {
        return Err(Error::FitFailure(format!(
            "trace covers {periods:.1} oscillation periods, need >= 4"
        )));
    }
    let rate = (times.len() - 1) as f64 / span;
    if rate < 8.0 * f_pop {
        return Err(Error::FitFailure(format!(
            "sampling rate {:.3e}/s is below 8 points per period",
            rate
        )));
    }

    // Population oscillates at Omega / (2 sqrt 2 pi) (angular Omega).
    let omega_guess_ang = f_pop * 2.0 * SQRT_2 * PI;
    // Envelope guess: compare oscillation amplitude in the first and last
    // thirds of the trace.
    let third = times.len() / 3;
    let amp = |chunk: &[f64]| -> f64 {
        let lo = chunk.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = chunk.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo).max(1e-6)
    };
    let a_early = amp(&populations[..third]);
    let a_late = amp(&populations[populations.len() - third..]);
    let tau_guess = if a_late < a_early * 0.95 {
        (times[times.len() - third] - times[third / 2]) / (a_early / a_late).ln()
    } else {
        10.0 * span
    };
    let p0_guess = populations[0].clamp(0.05, 1.5);

    // Parametrize tau as exp(u) to keep it positive.
    let model = |p: &[f64], t: f64| swap_model(p[0], p[1].exp(), p[2], p[3], t);
    let initial = [omega_guess_ang, tau_guess.max(span * 0.05).ln(), 0.0, p0_guess];
    let fit: FitResult = fit_curve(model, times, populations, &initial, 400)?;

    let omega_ang = fit.params[0].abs();
    let tau_s = fit.params[1].exp();
    let x = 2.0 / (SQRT_2 * omega_ang * tau_s);
    if x >= 1.0 {
        return Err(Error::FitFailure(format!(
            "overdamped trace: Omega tau = {:.3}, effective rate is imaginary",
            omega_ang * tau_s
        )));
    }
    let omega_hz = angular_to_cyclic(omega_ang);
    let tau_swap = SQRT_2 * PI / omega_ang;
    Ok(SwapFit {
        omega_hz,
        omega_eff_hz: angular_to_cyclic(omega_eff_angular(omega_ang, tau_s)),
        tau_s,
        phase_rad: fit.params[2],
        p_e0: fit.params[3],
        loss_per_swap: tau_swap / tau_s,
        stderr: [
            angular_to_cyclic(fit.stderr(0)),
            fit.stderr(1) * tau_s, // d tau / d u = tau
            fit.stderr(2),
            fit.stderr(3),
        ],
        residual_rms: fit.residual_rms,
    })
}

/// Generate the model trace for given parameters (used by tests and the
/// self-consistency check).
pub fn swap_model_trace(
    omega_hz: f64,
    tau_s: f64,
    phase_rad: f64,
    p_e0: f64,
    times: &[f64],
) -> Vec<f64> {
    times
        .iter()
        .map(|&t| swap_model(cyclic_to_angular(omega_hz), tau_s, phase_rad, p_e0, t))
        .collect()
}

/// Envelope-ratio loss per swap: (sqrt(2) pi / Omega) / tau.
pub fn loss_per_swap(fit: &SwapFit) -> f64 {
    fit.tau_swap_s() / fit.tau_s
}

/// Exponential fit of a gate train, P(k) = A r^k + C.
#[derive(Debug, Clone)]
pub struct GateTrainFit {
    /// Loss per gate, 1 - r.
    pub loss_per_gate: f64,
    pub amplitude: f64,
    pub offset: f64,
    /// RMS of the fit residuals.
    pub residual_rms: f64,
    /// Magnitude of the alternating (+1/-1 with gate parity) residual
    /// component; a coherent-miscalibration diagnostic.
    pub alternating_residual: f64,
}

/// Fit accumulated gate error to an exponential decay per gate count.
pub fn fit_gate_train(gate_counts: &[usize], populations: &[f64]) -> Result<GateTrainFit> {
    if gate_counts.len() != populations.len() {
        return Err(Error::DimensionMismatch {
            expected: gate_counts.len(),
            got: populations.len(),
        });
    }
    if gate_counts.len() < 5 {
        return Err(Error::FitFailure("need at least 5 gate-train points".into()));
    }
    let xs: Vec<f64> = gate_counts.iter().map(|&k| k as f64).collect();
    // Rough log-linear seed on the positive part.
    let r_seed = {
        let first = populations.first().copied().unwrap_or(1.0).max(1e-3);
        let last = populations.last().copied().unwrap_or(0.5).max(1e-3);
        let k_span = xs[xs.len() - 1] - xs[0];
        ((last / first).ln() / k_span.max(1.0)).exp().clamp(0.5, 1.1)
    };
    let model = |p: &[f64], k: f64| p[0] * p[1].powf(k) + p[2];
    let fit = fit_curve(model, &xs, populations, &[populations[0], r_seed, 0.0], 300)?;
    let r = fit.params[1];
    if !(0.0..1.0 + 1e-9).contains(&r) {
        return Err(Error::FitFailure(format!("gate train does not decay (r = {r:.4})")));
    }
    let residuals: Vec<f64> =
        xs.iter().zip(populations).map(|(&k, &y)| y - model(&fit.params, k)).collect();
    let alternating = residuals
        .iter()
        .zip(gate_counts)
        .map(|(e, &k)| e * if k % 2 == 0 { 1.0 } else { -1.0 })
        .sum::<f64>()
        .abs()
        * 2.0
        / residuals.len() as f64;
    Ok(GateTrainFit {
        loss_per_gate: 1.0 - r,
        amplitude: fit.params[0],
        offset: fit.params[2],
        residual_rms: fit.residual_rms,
        alternating_residual: alternating,
    })
}
