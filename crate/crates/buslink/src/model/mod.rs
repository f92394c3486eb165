//! Device model: mode parameters, drive settings, and derived operators.

mod hamiltonians;
mod sidebands;

pub use hamiltonians::{
    collapse_operators, effective_dual_rail, raman_hamiltonian, sideband_hamiltonian,
    sideband_hamiltonian_rotating, EffectiveDualRail,
};
pub use sidebands::{
    frequency_matching, sideband_rate_from_pumps, stark_shifted_resonance, PumpMatching,
};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::HilbertSpace;
use crate::tuneup::PulseShape;
use crate::units::TWO_PI;

/// Which measured dephasing time feeds the qubit dephasing rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DephasingChoice {
    #[default]
    Ramsey,
    Echo,
}

/// One of the two transmon modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSpec {
    /// Mode frequency omega/2pi in Hz.
    pub frequency_hz: f64,
    /// Relaxation time in seconds.
    pub t1_s: f64,
    /// Ramsey decay time in seconds.
    pub t2_ramsey_s: f64,
    /// Hahn echo decay time in seconds.
    pub t2_echo_s: f64,
    /// Truncation dimension.
    pub dim: usize,
}

impl QubitSpec {
    pub fn validate(&self) -> Result<()> {
        if self.frequency_hz <= 0.0 {
            return Err(Error::InvalidParameter("qubit frequency must be positive".into()));
        }
        if self.t1_s <= 0.0 || self.t2_ramsey_s <= 0.0 || self.t2_echo_s <= 0.0 {
            return Err(Error::InvalidParameter("coherence times must be positive".into()));
        }
        for (name, t2) in [("T2R", self.t2_ramsey_s), ("T2E", self.t2_echo_s)] {
            if t2 > 2.0 * self.t1_s * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {t2:.3e} s exceeds 2 T1 = {:.3e} s",
                    2.0 * self.t1_s
                )));
            }
        }
        if self.dim < 2 {
            return Err(Error::InvalidParameter("qubit dim must be >= 2".into()));
        }
        Ok(())
    }

    pub fn t2_s(&self, choice: DephasingChoice) -> f64 {
        match choice {
            DephasingChoice::Ramsey => self.t2_ramsey_s,
            DephasingChoice::Echo => self.t2_echo_s,
        }
    }

    /// Pure dephasing rate gamma_phi = 1/T2 - 1/(2 T1), in 1/s.
    pub fn dephasing_rate(&self, choice: DephasingChoice) -> f64 {
        let t2 = self.t2_s(choice);
        if t2.is_infinite() && self.t1_s.is_infinite() {
            return 0.0;
        }
        1.0 / t2 - 1.0 / (2.0 * self.t1_s)
    }
}

/// The shared bus mode of the interconnect cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BusSpec {
    /// Mode frequency omega/2pi in Hz.
    pub frequency_hz: f64,
    /// Single-photon lifetime tau_b in seconds.
    pub lifetime_s: f64,
    /// Truncation dimension.
    pub dim: usize,
}

impl BusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.frequency_hz <= 0.0 {
            return Err(Error::InvalidParameter("bus frequency must be positive".into()));
        }
        if self.lifetime_s <= 0.0 {
            return Err(Error::InvalidParameter("bus lifetime must be positive".into()));
        }
        if self.dim < 2 {
            return Err(Error::InvalidParameter("bus dim must be >= 2".into()));
        }
        Ok(())
    }

    /// Quality factor Q = omega * tau (angular frequency times lifetime).
    pub fn q_factor(&self) -> f64 {
        TWO_PI * self.frequency_hz * self.lifetime_s
    }

    /// Lifetime implied by a quality factor at this mode's frequency.
    pub fn lifetime_from_q(frequency_hz: f64, q: f64) -> f64 {
        q / (TWO_PI * frequency_hz)
    }
}

/// Static cross-Kerr couplings, all cyclic Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossKerr {
    pub q1_bus_hz: f64,
    pub q2_bus_hz: f64,
    pub q1_q2_hz: f64,
    /// Cross-Kerr terms are omitted from protocol Hamiltonians unless enabled.
    pub enabled: bool,
}

impl Default for CrossKerr {
    fn default() -> Self {
        Self { q1_bus_hz: 0.0, q2_bus_hz: 0.0, q1_q2_hz: 0.0, enabled: false }
    }
}

/// Identifies one of the two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitId {
    Q1,
    Q2,
}

impl QubitId {
    /// 1-based index used in config files and messages.
    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Self::Q1),
            2 => Ok(Self::Q2),
            other => Err(Error::InvalidParameter(format!("qubit index {other} not in {{1, 2}}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Q1 => "q1",
            Self::Q2 => "q2",
        }
    }
}

/// Full two-qubit + bus device description.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub q1: QubitSpec,
    pub q2: QubitSpec,
    pub bus: BusSpec,
    pub cross_kerr: CrossKerr,
    pub dephasing: DephasingChoice,
}

impl NetworkModel {
    pub fn new(
        q1: QubitSpec,
        q2: QubitSpec,
        bus: BusSpec,
        cross_kerr: CrossKerr,
        dephasing: DephasingChoice,
    ) -> Result<Self> {
        q1.validate()?;
        q2.validate()?;
        bus.validate()?;
        for chi in [cross_kerr.q1_bus_hz, cross_kerr.q2_bus_hz, cross_kerr.q1_q2_hz] {
            if !chi.is_finite() {
                return Err(Error::InvalidParameter("cross-Kerr values must be finite".into()));
            }
        }
        Ok(Self { q1, q2, bus, cross_kerr, dephasing })
    }

    /// Cross-check a user-supplied bus quality factor against omega * tau.
    pub fn check_bus_q(&self, user_q: f64) -> Result<()> {
        let derived = self.bus.q_factor();
        let rel = (derived - user_q).abs() / user_q.abs();
        if rel > 0.01 {
            return Err(Error::InvalidParameter(format!(
                "supplied Q_b = {user_q:.3e} differs from omega_b * tau_b = {derived:.3e} by {:.1}%",
                rel * 100.0
            )));
        }
        Ok(())
    }

    pub fn qubit(&self, id: QubitId) -> &QubitSpec {
        match id {
            QubitId::Q1 => &self.q1,
            QubitId::Q2 => &self.q2,
        }
    }

    /// The composite Hilbert space, modes ordered (q1, q2, bus).
    pub fn space(&self) -> Arc<HilbertSpace> {
        HilbertSpace::new(&[("q1", self.q1.dim), ("q2", self.q2.dim), ("bus", self.bus.dim)])
            .expect("validated dims")
    }

    /// Space for a single qubit plus the bus, used by per-qubit sideband runs.
    pub fn qubit_bus_space(&self, id: QubitId) -> Arc<HilbertSpace> {
        let q = self.qubit(id);
        HilbertSpace::new(&[(id.label(), q.dim), ("bus", self.bus.dim)]).expect("validated dims")
    }
}

/// Sideband drive settings for both pumps. All frequencies cyclic Hz.
#[derive(Debug, Clone, Default)]
pub struct DriveConfig {
    /// Sideband rate on qubit 1.
    pub omega1_hz: f64,
    /// Sideband rate on qubit 2.
    pub omega2_hz: f64,
    /// Common detuning Delta of both Raman drives from the bus.
    pub detuning_hz: f64,
    /// Relative detuning delta between the pumps (applied to qubit 2).
    pub relative_detuning_hz: f64,
    /// Pump phases entering as exp(i phi_i) on a_i† b.
    pub phase1_rad: f64,
    pub phase2_rad: f64,
    /// Pulse envelopes; None means constant-on.
    pub envelope1: Option<PulseShape>,
    pub envelope2: Option<PulseShape>,
}

impl DriveConfig {
    pub fn constant(omega1_hz: f64, omega2_hz: f64, detuning_hz: f64) -> Result<Self> {
        let cfg = Self { omega1_hz, omega2_hz, detuning_hz, ..Default::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega1_hz < 0.0 || self.omega2_hz < 0.0 {
            return Err(Error::InvalidParameter("sideband rates must be >= 0".into()));
        }
        if !self.detuning_hz.is_finite() || !self.relative_detuning_hz.is_finite() {
            return Err(Error::InvalidParameter("detunings must be finite".into()));
        }
        Ok(())
    }

    /// Common rate when both pumps are matched; error when they differ.
    pub fn common_omega_hz(&self) -> Result<f64> {
        let rel = (self.omega1_hz - self.omega2_hz).abs() / self.omega1_hz.abs().max(1.0);
        if rel > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "pump rates differ ({} vs {} Hz); this operation assumes matched rates",
                self.omega1_hz, self.omega2_hz
            )));
        }
        Ok(self.omega1_hz)
    }
}

/// Josephson-junction and pump parameters behind the four-wave-mixing rate.
#[derive(Debug, Clone, Copy)]
pub struct JunctionParams {
    /// Josephson energy, cyclic Hz.
    pub e_j_hz: f64,
    /// Zero-point phase participation of the transmon mode.
    pub phi_a: f64,
    /// Zero-point phase participation of the bus mode.
    pub phi_b: f64,
    /// Pump amplitudes, cyclic Hz.
    pub eps1_hz: f64,
    pub eps2_hz: f64,
    /// Pump frequencies, cyclic Hz.
    pub pump1_hz: f64,
    pub pump2_hz: f64,
    /// Transmon and bus mode frequencies, cyclic Hz.
    pub qubit_freq_hz: f64,
    pub bus_freq_hz: f64,
}

impl JunctionParams {
    pub fn validate(&self) -> Result<()> {
        if self.phi_a.abs() >= 1.0 || self.phi_b.abs() >= 1.0 {
            return Err(Error::InvalidParameter("phase participations must satisfy |phi| < 1".into()));
        }
        if self.pump1_hz <= 0.0 || self.pump2_hz <= 0.0 {
            return Err(Error::InvalidParameter("pump frequencies must be positive".into()));
        }
        Ok(())
    }

    /// Displacement amplitude xi_i = eps_i / (omega_a - omega_i) for pump i.
    pub fn displacement(&self, pump: usize) -> f64 {
        let (eps, w) = match pump {
            1 => (self.eps1_hz, self.pump1_hz),
            2 => (self.eps2_hz, self.pump2_hz),
            _ => panic!("pump index must be 1 or 2"),
        };
        eps / (self.qubit_freq_hz - w)
    }
}

/// Linear drive-power dependence of the qubit and bus Stark shifts.
#[derive(Debug, Clone, Copy)]
pub struct StarkModel {
    /// Qubit shift per unit drive power, Hz/power-unit.
    pub slope_qubit_hz: f64,
    /// Bus shift per unit drive power, Hz/power-unit.
    pub slope_bus_hz: f64,
}

/// The reference device of the experiment (frequencies in Hz, times in s).
pub fn reference_device() -> NetworkModel {
    NetworkModel::new(
        QubitSpec {
            frequency_hz: 4675.5e6,
            t1_s: 62e-6,
            t2_ramsey_s: 22e-6,
            t2_echo_s: 34e-6,
            dim: 2,
        },
        QubitSpec {
            frequency_hz: 5510.7e6,
            t1_s: 25e-6,
            t2_ramsey_s: 8e-6,
            t2_echo_s: 20e-6,
            dim: 2,
        },
        BusSpec { frequency_hz: 5173.1e6, lifetime_s: 6.2e-6, dim: 3 },
        CrossKerr { q1_bus_hz: 3.0e6, q2_bus_hz: 9.2e6, q1_q2_hz: 8.0e3, enabled: false },
        DephasingChoice::Ramsey,
    )
    .expect("reference parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_bus_q_is_2e5() {
        let model = reference_device();
        let q = model.bus.q_factor();
        assert!((q - 2.0e5).abs() / 2.0e5 < 0.02, "Q_b = {q:.4e}");
        model.check_bus_q(2.0e5).unwrap();
        assert!(model.check_bus_q(1.5e5).is_err());
    }

    #[test]
    fn q_lifetime_round_trip() {
        let model = reference_device();
        let tau = BusSpec::lifetime_from_q(model.bus.frequency_hz, model.bus.q_factor());
        assert!((tau - model.bus.lifetime_s).abs() < 1e-12);
    }

    #[test]
    fn t2_limit_enforced() {
        let mut q = reference_device().q1;
        q.t2_ramsey_s = 2.1 * q.t1_s;
        assert!(q.validate().is_err());
    }

    #[test]
    fn dephasing_rate_table_values() {
        let model = reference_device();
        // gamma_phi(q2, Ramsey) = 1/8us - 1/50us
        let got = model.q2.dephasing_rate(DephasingChoice::Ramsey);
        let want = 1.0 / 8e-6 - 1.0 / 50e-6;
        assert!((got - want).abs() < 1e-6);
    }

    #[test]
    fn qubit_id_from_index() {
        assert_eq!(QubitId::from_index(1).unwrap(), QubitId::Q1);
        assert_eq!(QubitId::from_index(2).unwrap(), QubitId::Q2);
        assert!(QubitId::from_index(3).is_err());
    }

    #[test]
    fn drive_config_rejects_negative_rate() {
        assert!(DriveConfig::constant(-1.0, 5e6, 0.0).is_err());
    }
}
