//! Hamiltonian and collapse-operator construction from device parameters.

use std::sync::Arc;

use num_complex::Complex64;

use super::{DriveConfig, NetworkModel, QubitId};
use crate::error::{Error, Result};
use crate::quantum::{real_envelope, HilbertSpace, Operator, TimeDependentHamiltonian};
use crate::units::cyclic_to_angular;

/// Exchange term exp(i phase) a† b scaled by Omega/2 (angular), for the mode
/// pair (qubit_label, "bus") on the given space.
fn exchange_term(
    space: &Arc<HilbertSpace>,
    qubit_label: &str,
    omega_hz: f64,
    phase_rad: f64,
) -> Result<Operator> {
    let a = Operator::annihilation(space, qubit_label)?;
    let b = Operator::annihilation(space, "bus")?;
    let w = cyclic_to_angular(omega_hz);
    let coeff = Complex64::from_polar(w / 2.0, phase_rad);
    Ok(a.dag().mul(&b).scale(coeff))
}

/// Single-qubit sideband Hamiltonian in the frame where the detuning sits on
/// the bus: H = Delta b†b + (Omega/2)(a†b + h.c.).
///
/// Built on the two-mode (qubit, bus) space of the chosen qubit.
pub fn sideband_hamiltonian(
    network: &NetworkModel,
    qubit: QubitId,
    omega_hz: f64,
    delta_hz: f64,
) -> Result<(Arc<HilbertSpace>, TimeDependentHamiltonian)> {
    if omega_hz < 0.0 {
        return Err(Error::InvalidParameter("sideband rate must be >= 0".into()));
    }
    let space = network.qubit_bus_space(qubit);
    let exch = exchange_term(&space, qubit.label(), omega_hz, 0.0)?.plus_hc();
    let nb = Operator::number(&space, "bus")?.scale_real(cyclic_to_angular(delta_hz));
    let h = TimeDependentHamiltonian::new(exch.add(&nb))?;
    Ok((space, h))
}

/// The same sideband process with the detuning carried by a rotating
/// coupling instead: H(t) = (Omega/2)(exp(-i Delta t) a†b + h.c.).
///
/// Population dynamics agree with [`sideband_hamiltonian`]; the two builders
/// differ only by the rotating frame of the bus mode.
pub fn sideband_hamiltonian_rotating(
    network: &NetworkModel,
    qubit: QubitId,
    omega_hz: f64,
    delta_hz: f64,
) -> Result<(Arc<HilbertSpace>, TimeDependentHamiltonian)> {
    if omega_hz < 0.0 {
        return Err(Error::InvalidParameter("sideband rate must be >= 0".into()));
    }
    let space = network.qubit_bus_space(qubit);
    let exch = exchange_term(&space, qubit.label(), omega_hz, 0.0)?;
    let mut h = TimeDependentHamiltonian::zero(Arc::clone(&space));
    let d = cyclic_to_angular(delta_hz);
    h.add_drive_pair(exch, Arc::new(move |t| Complex64::from_polar(1.0, -d * t)))?;
    Ok((space, h))
}

/// Two-pump Raman Hamiltonian on the full (q1, q2, bus) space, in the frame
/// rotating with each pump:
///
/// H = Delta n1 + (Delta - delta) n2
///   + sum_i env_i(t) (Omega_i/2)(exp(i phi_i) a_i† b + h.c.)
///   [+ optional static cross-Kerr terms -chi n_i n_j]
pub fn raman_hamiltonian(
    network: &NetworkModel,
    drive: &DriveConfig,
) -> Result<TimeDependentHamiltonian> {
    drive.validate()?;
    let space = network.space();
    let n1 = Operator::number(&space, "q1")?;
    let n2 = Operator::number(&space, "q2")?;
    let delta = cyclic_to_angular(drive.detuning_hz);
    let delta2 = cyclic_to_angular(drive.detuning_hz - drive.relative_detuning_hz);
    let mut static_part = n1.scale_real(delta).add(&n2.scale_real(delta2));

    if network.cross_kerr.enabled {
        let nb = Operator::number(&space, "bus")?;
        let chi = &network.cross_kerr;
        static_part = static_part
            .add(&n1.mul(&nb).scale_real(-cyclic_to_angular(chi.q1_bus_hz)))
            .add(&n2.mul(&nb).scale_real(-cyclic_to_angular(chi.q2_bus_hz)))
            .add(&n1.mul(&n2).scale_real(-cyclic_to_angular(chi.q1_q2_hz)));
    }

    let mut h = TimeDependentHamiltonian::new(static_part)?;
    let pumps = [
        ("q1", drive.omega1_hz, drive.phase1_rad, drive.envelope1),
        ("q2", drive.omega2_hz, drive.phase2_rad, drive.envelope2),
    ];
    for (label, omega_hz, phase, envelope) in pumps {
        if omega_hz == 0.0 {
            continue;
        }
        let term = exchange_term(&space, label, omega_hz, phase)?;
        match envelope {
            Some(pulse) => {
                pulse.validate()?;
                h.add_drive_pair(term, real_envelope(move |t| pulse.value(t)))?;
            }
            None => {
                let mut static_plus = h.static_part().clone();
                static_plus = static_plus.add(&term.plus_hc());
                // Rebuild to keep the static part a single operator.
                let mut rebuilt = TimeDependentHamiltonian::new(static_plus)?;
                for (op, env) in h.drive_terms() {
                    rebuilt.add_drive(op.clone(), Arc::clone(env))?;
                }
                h = rebuilt;
            }
        }
    }
    Ok(h)
}

/// Collapse operators for every mode present in `space`, with rates from the
/// device model: sqrt(1/T1) a_i and sqrt(2 gamma_phi) a_i†a_i per qubit,
/// sqrt(1/tau_b) b for the bus. Dephasing is omitted when gamma_phi <= 0;
/// infinite times contribute nothing.
pub fn collapse_operators_on(
    network: &NetworkModel,
    space: &Arc<HilbertSpace>,
) -> Result<Vec<Operator>> {
    let mut ops = Vec::new();
    for label in space.labels() {
        match label.as_str() {
            "q1" | "q2" => {
                let q = if label == "q1" { &network.q1 } else { &network.q2 };
                q.validate()?;
                let relax_rate = 1.0 / q.t1_s;
                if relax_rate > 0.0 && relax_rate.is_finite() {
                    ops.push(Operator::annihilation(space, label)?.scale_real(relax_rate.sqrt()));
                }
                let gamma_phi = q.dephasing_rate(network.dephasing);
                if gamma_phi > 0.0 && gamma_phi.is_finite() {
                    ops.push(
                        Operator::number(space, label)?.scale_real((2.0 * gamma_phi).sqrt()),
                    );
                }
            }
            "bus" => {
                let rate = 1.0 / network.bus.lifetime_s;
                if rate > 0.0 && rate.is_finite() {
                    ops.push(Operator::annihilation(space, "bus")?.scale_real(rate.sqrt()));
                }
            }
            other => {
                return Err(Error::UnknownMode(other.to_string()));
            }
        }
    }
    Ok(ops)
}

/// Collapse operators on the full (q1, q2, bus) space.
pub fn collapse_operators(network: &NetworkModel) -> Result<Vec<Operator>> {
    collapse_operators_on(network, &network.space())
}

/// Effective dual-rail generator from a Schrieffer-Wolff reduction of the
/// detuned Raman Hamiltonian.
#[derive(Debug, Clone)]
pub struct EffectiveDualRail {
    /// Omega_R = Omega^2 (2 Delta - delta) / (2 Delta (Delta - delta)), cyclic Hz.
    ///
    /// Quoted in the convention where 1/Omega_R is the full logical flip
    /// (|eg> -> |ge>) time; the population oscillation runs at Omega_R / 2.
    pub omega_r_hz: f64,
    /// Dressed-basis Hamiltonian on the full space, including the -b†b shift.
    pub hamiltonian: TimeDependentHamiltonian,
    /// False when Delta / Omega < 3 (perturbative reduction unreliable).
    pub perturbative_ok: bool,
}

impl EffectiveDualRail {
    /// Duration of a full logical flip (pi pulse), seconds.
    pub fn pi_time_s(&self) -> f64 {
        1.0 / self.omega_r_hz
    }

    /// Duration of a half flip (pi/2 pulse), seconds.
    pub fn half_pi_time_s(&self) -> f64 {
        0.5 / self.omega_r_hz
    }
}

/// Build the effective {|eg>, |ge>} generator for a detuned symmetric drive.
pub fn effective_dual_rail(
    network: &NetworkModel,
    drive: &DriveConfig,
) -> Result<EffectiveDualRail> {
    drive.validate()?;
    let omega = drive.common_omega_hz()?;
    let delta = drive.detuning_hz;
    let rel = drive.relative_detuning_hz;
    if delta == 0.0 || delta == rel {
        return Err(Error::InvalidParameter(
            "detunings are singular: need Delta != 0 and Delta != delta".into(),
        ));
    }
    let omega_r_hz = omega * omega * (2.0 * delta - rel) / (2.0 * delta * (delta - rel));

    let space = network.space();
    let n1 = Operator::number(&space, "q1")?;
    let n2 = Operator::number(&space, "q2")?;
    let nb = Operator::number(&space, "bus")?;
    let a1 = Operator::annihilation(&space, "q1")?;
    let a2 = Operator::annihilation(&space, "q2")?;

    let d = cyclic_to_angular(delta);
    let d2 = cyclic_to_angular(delta - rel);
    let w = cyclic_to_angular(omega);
    let shift1 = d * (1.0 + w * w / (4.0 * d * d));
    let shift2 = d2 * (1.0 + w * w / (4.0 * d2 * d2));
    // Second-order coupling J = (Omega/2)^2 (1/Delta + 1/(Delta - delta)) / 2
    // = Omega_R / 4 in angular units; the virtual bus level shifts by -2J.
    // The exchange-to-bus-shift ratio of 1:2 is what reproduces the full
    // three-mode dynamics (logical flip time 1/Omega_R).
    let j = cyclic_to_angular(omega_r_hz) / 4.0;
    let exchange = a1.dag().mul(&a2).plus_hc();
    let static_part = n1
        .scale_real(shift1)
        .add(&n2.scale_real(shift2))
        .add(&exchange.scale_real(j))
        .add(&nb.scale_real(-2.0 * j));

    Ok(EffectiveDualRail {
        omega_r_hz,
        hamiltonian: TimeDependentHamiltonian::new(static_part)?,
        perturbative_ok: omega == 0.0 || delta.abs() / omega >= 3.0,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    use super::*;
    use crate::model::reference_device;
    use crate::quantum::{
        evolve_unitary, expectation_real, state_fidelity, SolverOptions, StateVector,
    };
    use crate::units::TWO_PI;

    fn grid(t_end: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
    }

    #[test]
    fn full_swap_at_pi_over_omega() {
        // Omega/2pi = 5 MHz, Delta = 0, |e0>: full swap to |g1> at 100 ns.
        let model = reference_device();
        let (space, h) = sideband_hamiltonian(&model, QubitId::Q1, 5e6, 0.0).unwrap();
        let rho0 = StateVector::fock(&space, &[1, 0]).unwrap().to_density();
        let t_swap = PI / cyclic_to_angular(5e6);
        assert_abs_diff_eq!(t_swap * 1e9, 100.0, epsilon = 1e-9);
        let traj =
            evolve_unitary(&h, &rho0, &grid(t_swap, 10), SolverOptions::default()).unwrap();
        let p_g1 = traj.final_state().population(&[0, 1]).unwrap();
        assert!(p_g1 > 1.0 - 1e-7, "P(g1) = {p_g1}");
    }

    #[test]
    fn zero_rate_gives_zero_operator() {
        let model = reference_device();
        let (_, h) = sideband_hamiltonian(&model, QubitId::Q2, 0.0, 0.0).unwrap();
        assert!(h.at(0.0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn detuned_transfer_maximum_is_half() {
        // Omega = Delta: max |g1> population = Omega^2/(Omega^2 + Delta^2) = 1/2.
        let model = reference_device();
        let (space, h) = sideband_hamiltonian(&model, QubitId::Q1, 5e6, 5e6).unwrap();
        let rho0 = StateVector::fock(&space, &[1, 0]).unwrap().to_density();
        // Generalized Rabi period; sample the first full cycle densely.
        let w = cyclic_to_angular(5e6);
        let period = TWO_PI / (w * w + w * w).sqrt();
        let traj =
            evolve_unitary(&h, &rho0, &grid(period, 200), SolverOptions::default()).unwrap();
        let max_p = traj
            .populations(&[0, 1])
            .unwrap()
            .into_iter()
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(max_p, 0.5, epsilon = 1e-4);
    }

    #[test]
    fn frame_equivalence_static_vs_rotating() {
        let model = reference_device();
        let (space, h_static) = sideband_hamiltonian(&model, QubitId::Q1, 5e6, 3e6).unwrap();
        let (_, h_rot) = sideband_hamiltonian_rotating(&model, QubitId::Q1, 5e6, 3e6).unwrap();
        let rho0 = StateVector::fock(&space, &[1, 0]).unwrap().to_density();
        let times = grid(400e-9, 40);
        let a = evolve_unitary(&h_static, &rho0, &times, SolverOptions::default()).unwrap();
        let b = evolve_unitary(&h_rot, &rho0, &times, SolverOptions::default()).unwrap();
        let pa = a.populations(&[1, 0]).unwrap();
        let pb = b.populations(&[1, 0]).unwrap();
        for (x, y) in pa.iter().zip(&pb) {
            assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }

    #[test]
    fn hamiltonians_hermitian_at_random_times() {
        let model = reference_device();
        let drive = DriveConfig {
            omega1_hz: 5e6,
            omega2_hz: 4.8e6,
            detuning_hz: 31.43e6,
            relative_detuning_hz: 0.4e6,
            phase1_rad: 0.3,
            phase2_rad: -1.1,
            envelope1: Some(crate::tuneup::PulseShape::new(160e-9, 120e-9, 4e-9).unwrap()),
            envelope2: None,
        };
        let h = raman_hamiltonian(&model, &drive).unwrap();
        let mut x = 0.77_f64;
        let times: Vec<f64> = (0..20)
            .map(|_| {
                x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
                x * 200e-9
            })
            .collect();
        h.require_hermitian_at(&times).unwrap();

        let (_, hr) = sideband_hamiltonian_rotating(&model, QubitId::Q2, 5e6, 2e6).unwrap();
        hr.require_hermitian_at(&times).unwrap();
    }

    #[test]
    fn raman_oscillation_period() {
        // Matched resonant pumps swap q1 -> q2 in sqrt(2) pi / Omega and
        // return in twice that.
        let model = reference_device();
        let drive = DriveConfig::constant(5e6, 5e6, 0.0).unwrap();
        let h = raman_hamiltonian(&model, &drive).unwrap();
        let space = model.space();
        let rho0 = StateVector::fock(&space, &[1, 0, 0]).unwrap().to_density();
        let tau_swap = 2f64.sqrt() * PI / cyclic_to_angular(5e6);
        let times = vec![0.0, tau_swap, 2.0 * tau_swap];
        let traj = evolve_unitary(&h, &rho0, &times, SolverOptions::default()).unwrap();
        assert!(traj.states()[1].population(&[0, 1, 0]).unwrap() > 1.0 - 1e-7);
        assert!(traj.states()[2].population(&[1, 0, 0]).unwrap() > 1.0 - 1e-7);
    }

    #[test]
    fn single_pump_reduces_to_sideband_dynamics() {
        // Omega2 = 0: q1 population matches the two-mode sideband solve.
        let model = reference_device();
        let drive = DriveConfig {
            omega1_hz: 5e6,
            omega2_hz: 0.0,
            detuning_hz: 0.0,
            ..Default::default()
        };
        let h3 = raman_hamiltonian(&model, &drive).unwrap();
        let space3 = model.space();
        let rho3 = StateVector::fock(&space3, &[1, 0, 0]).unwrap().to_density();
        let (space2, h2) = sideband_hamiltonian(&model, QubitId::Q1, 5e6, 0.0).unwrap();
        let rho2 = StateVector::fock(&space2, &[1, 0]).unwrap().to_density();
        let times = grid(300e-9, 30);
        let t3 = evolve_unitary(&h3, &rho3, &times, SolverOptions::default()).unwrap();
        let t2 = evolve_unitary(&h2, &rho2, &times, SolverOptions::default()).unwrap();
        let p3 = t3.populations(&[1, 0, 0]).unwrap();
        let p2 = t2.populations(&[1, 0]).unwrap();
        for (x, y) in p3.iter().zip(&p2) {
            assert!((x - y).abs() < 1e-7);
        }
    }

    #[test]
    fn dark_state_is_stationary() {
        // (|eg0> - |ge0>)/sqrt(2) is a null vector of the symmetric exchange.
        let model = reference_device();
        let drive = DriveConfig::constant(5e6, 5e6, 0.0).unwrap();
        let h = raman_hamiltonian(&model, &drive).unwrap();
        let space = model.space();
        let dark = StateVector::superposition(
            &space,
            &[
                (Complex64::new(1.0, 0.0), &[1, 0, 0][..]),
                (Complex64::new(-1.0, 0.0), &[0, 1, 0][..]),
            ],
        )
        .unwrap();
        let rho0 = dark.to_density();
        let traj =
            evolve_unitary(&h, &rho0, &grid(500e-9, 20), SolverOptions::default()).unwrap();
        for state in traj.states() {
            assert!(state_fidelity(state, &dark).unwrap() > 1.0 - 1e-8);
        }
    }

    #[test]
    fn excitation_number_conserved() {
        let model = reference_device();
        let drive = DriveConfig {
            omega1_hz: 5e6,
            omega2_hz: 5e6,
            detuning_hz: 7e6,
            relative_detuning_hz: 1e6,
            ..Default::default()
        };
        let h = raman_hamiltonian(&model, &drive).unwrap();
        let space = model.space();
        let n_total = Operator::number(&space, "q1")
            .unwrap()
            .add(&Operator::number(&space, "q2").unwrap())
            .add(&Operator::number(&space, "bus").unwrap());
        let rho0 = StateVector::fock(&space, &[1, 0, 0]).unwrap().to_density();
        let tight = SolverOptions { rtol: 1e-10, atol: 1e-13, ..Default::default() };
        let traj = evolve_unitary(&h, &rho0, &grid(400e-9, 20), tight).unwrap();
        for state in traj.states() {
            let n = expectation_real(state, &n_total).unwrap();
            assert!((n - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn collapse_operator_census() {
        let model = reference_device();
        // Ramsey choice: 2 relaxation + 2 dephasing + 1 bus decay.
        assert_eq!(collapse_operators(&model).unwrap().len(), 5);

        // T2 = 2 T1 on both qubits: dephasing drops out.
        let mut t1_limited = model.clone();
        t1_limited.q1.t2_ramsey_s = 2.0 * t1_limited.q1.t1_s;
        t1_limited.q2.t2_ramsey_s = 2.0 * t1_limited.q2.t1_s;
        assert_eq!(collapse_operators(&t1_limited).unwrap().len(), 3);

        // Lossless device: no collapse operators at all.
        let mut ideal = model.clone();
        ideal.q1.t1_s = f64::INFINITY;
        ideal.q1.t2_ramsey_s = f64::INFINITY;
        ideal.q1.t2_echo_s = f64::INFINITY;
        ideal.q2.t1_s = f64::INFINITY;
        ideal.q2.t2_ramsey_s = f64::INFINITY;
        ideal.q2.t2_echo_s = f64::INFINITY;
        ideal.bus.lifetime_s = f64::INFINITY;
        assert_eq!(collapse_operators(&ideal).unwrap().len(), 0);
    }

    #[test]
    fn effective_dual_rail_rate() {
        // delta = 0: Omega_R = Omega^2 / Delta; 6.6 MHz at Delta/2pi = 31.43 MHz
        // gives 1.386 MHz.
        let model = reference_device();
        let drive = DriveConfig::constant(6.6e6, 6.6e6, 31.43e6).unwrap();
        let eff = effective_dual_rail(&model, &drive).unwrap();
        assert_abs_diff_eq!(eff.omega_r_hz / 1e6, 1.386, epsilon = 5e-4);
        assert!(eff.perturbative_ok);

        let zero = effective_dual_rail(
            &model,
            &DriveConfig {
                omega1_hz: 0.0,
                omega2_hz: 0.0,
                detuning_hz: 31.43e6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(zero.omega_r_hz, 0.0);

        assert!(effective_dual_rail(&model, &DriveConfig::constant(5e6, 5e6, 0.0).unwrap())
            .is_err());
    }

    #[test]
    fn effective_matches_full_model_populations() {
        // Delta/Omega = 5, delta = 0: the two-level reduction tracks the full
        // three-mode unitary solve within 5% over one Rabi period.
        let model = reference_device();
        let omega = 5e6;
        let drive = DriveConfig::constant(omega, omega, 5.0 * omega).unwrap();
        let eff = effective_dual_rail(&model, &drive).unwrap();
        let h_full = raman_hamiltonian(&model, &drive).unwrap();
        let space = model.space();
        let rho0 = StateVector::fock(&space, &[1, 0, 0]).unwrap().to_density();
        // Population period is twice the logical flip time.
        let period = 2.0 * eff.pi_time_s();
        let times = grid(period, 50);
        let full = evolve_unitary(&h_full, &rho0, &times, SolverOptions::default()).unwrap();
        let reduced =
            evolve_unitary(&eff.hamiltonian, &rho0, &times, SolverOptions::default()).unwrap();
        let pf = full.populations(&[0, 1, 0]).unwrap();
        let pr = reduced.populations(&[0, 1, 0]).unwrap();
        for (x, y) in pf.iter().zip(&pr) {
            assert!((x - y).abs() < 0.05, "full {x} vs effective {y}");
        }
    }
}
