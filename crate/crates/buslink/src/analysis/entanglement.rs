//! Two-qubit entanglement measures and correlators.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::eig::{eigh, func_hermitian};
use crate::quantum::DensityMatrix;

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 || rho.space().dims() != [2, 2] {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    rho.validate()?;
    Ok(())
}

/// Wootters concurrence of a two-qubit state (spin-flip eigenvalue
/// construction).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let m = rho.matrix();
    // rho~ = (Y x Y) rho* (Y x Y)
    let mut yy = Array2::<Complex64>::zeros((4, 4));
    // Y x Y in the (gg, ge, eg, ee) basis has entries +-1 on the anti-diagonal.
    yy[[0, 3]] = Complex64::new(-1.0, 0.0);
    yy[[1, 2]] = Complex64::new(1.0, 0.0);
    yy[[2, 1]] = Complex64::new(1.0, 0.0);
    yy[[3, 0]] = Complex64::new(-1.0, 0.0);
    let conj = m.mapv(|z| z.conj());
    let rho_tilde = yy.dot(&conj).dot(&yy);
    // Eigenvalues of rho rho~ via the Hermitian form sqrt(rho) rho~ sqrt(rho).
    let sqrt_rho = func_hermitian(m, |x| x.max(0.0).sqrt());
    let herm = sqrt_rho.dot(&rho_tilde).dot(&sqrt_rho);
    let (evals, _) = eigh(&herm);
    let mut lambdas: Vec<f64> = evals.iter().map(|&e| e.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Correlator curve <X X_phi> with X_phi = cos(phi) X + sin(phi) Y on qubit 2.
#[derive(Debug, Clone)]
pub struct XxCurve {
    pub phis: Vec<f64>,
    pub values: Vec<f64>,
    /// Amplitude of the sinusoid (exact, from the two quadratures).
    pub amplitude: f64,
    /// Phase of the maximum.
    pub phase: f64,
}

fn pauli_x() -> Array2<Complex64> {
    let mut x = Array2::zeros((2, 2));
    x[[0, 1]] = Complex64::new(1.0, 0.0);
    x[[1, 0]] = Complex64::new(1.0, 0.0);
    x
}

fn pauli_y() -> Array2<Complex64> {
    let mut y = Array2::zeros((2, 2));
    y[[0, 1]] = Complex64::new(0.0, -1.0);
    y[[1, 0]] = Complex64::new(0.0, 1.0);
    y
}

fn kron4(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    crate::quantum::operator::kron(a, b)
}

fn trace_with(rho: &DensityMatrix, op: &Array2<Complex64>) -> f64 {
    let prod = rho.matrix().dot(op);
    (0..4).map(|i| prod[[i, i]].re).sum()
}

/// Evaluate <X X_phi> on the given phase grid.
pub fn xx_correlator(rho: &DensityMatrix, phis: &[f64]) -> Result<XxCurve> {
    require_two_qubit(rho)?;
    let xx = kron4(&pauli_x(), &pauli_x());
    let xy = kron4(&pauli_x(), &pauli_y());
    let v_c = trace_with(rho, &xx);
    let v_s = trace_with(rho, &xy);
    let values: Vec<f64> = phis.iter().map(|&p| v_c * p.cos() + v_s * p.sin()).collect();
    Ok(XxCurve {
        phis: phis.to_vec(),
        values,
        amplitude: (v_c * v_c + v_s * v_s).sqrt(),
        phase: v_s.atan2(v_c),
    })
}

/// Fidelity to the closest odd-parity Bell state (|eg> + e^{i phi}|ge>)/sqrt 2,
/// maximized over the free phase: (P_eg + P_ge)/2 + |<eg| rho |ge>|.
pub fn bell_fidelity(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let m = rho.matrix();
    // Basis order (gg, ge, eg, ee): |ge> = index 1, |eg> = index 2.
    let f = 0.5 * (m[[1, 1]].re + m[[2, 2]].re) + m[[2, 1]].norm();
    Ok(f.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::quantum::{HilbertSpace, StateVector};

    fn two_qubits() -> Arc<HilbertSpace> {
        HilbertSpace::new(&[("q1", 2), ("q2", 2)]).unwrap()
    }

    fn bell(phase: Complex64, flip: bool) -> DensityMatrix {
        let space = two_qubits();
        let (a, b): (&[usize], &[usize]) =
            if flip { (&[0, 0], &[1, 1]) } else { (&[1, 0], &[0, 1]) };
        StateVector::superposition(&space, &[(Complex64::new(1.0, 0.0), a), (phase, b)])
            .unwrap()
            .to_density()
    }

    #[test]
    fn bell_states_have_unit_concurrence() {
        for flip in [false, true] {
            for phase in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)] {
                let rho = bell(phase, flip);
                assert_abs_diff_eq!(concurrence(&rho).unwrap(), 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn product_states_have_zero_concurrence() {
        let space = two_qubits();
        for occ in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let rho = StateVector::fock(&space, &occ).unwrap().to_density();
            assert_abs_diff_eq!(concurrence(&rho).unwrap(), 0.0, epsilon = 1e-9);
        }
        // Separable mixture.
        let space = two_qubits();
        let mix = {
            let a = StateVector::fock(&space, &[0, 1]).unwrap().to_density();
            let b = StateVector::fock(&space, &[1, 0]).unwrap().to_density();
            DensityMatrix::new(
                Arc::clone(&space),
                a.matrix().mapv(|z| z * 0.5) + b.matrix().mapv(|z| z * 0.5),
            )
            .unwrap()
        };
        assert_abs_diff_eq!(concurrence(&mix).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn werner_state_closed_form() {
        // p Bell + (1-p) I/4 at p = 0.9: C = (3p - 1)/2 = 0.85.
        let p = 0.9;
        let space = two_qubits();
        let bell_rho = bell(Complex64::new(1.0, 0.0), false);
        let mut m = bell_rho.matrix().mapv(|z| z * p);
        for i in 0..4 {
            m[[i, i]] += Complex64::new((1.0 - p) / 4.0, 0.0);
        }
        let werner = DensityMatrix::new(space, m).unwrap();
        assert_abs_diff_eq!(concurrence(&werner).unwrap(), 0.85, epsilon = 1e-9);
    }

    #[test]
    fn xx_curve_of_ideal_bell_is_cos_phi() {
        let rho = bell(Complex64::new(1.0, 0.0), false);
        let phis: Vec<f64> = (0..33).map(|k| k as f64 * 2.0 * std::f64::consts::PI / 32.0).collect();
        let curve = xx_correlator(&rho, &phis).unwrap();
        for (phi, v) in phis.iter().zip(&curve.values) {
            assert_abs_diff_eq!(*v, phi.cos(), epsilon = 1e-9);
        }
        assert_abs_diff_eq!(curve.amplitude, 1.0, epsilon = 1e-9);
        assert!(curve.amplitude <= 1.0 + 1e-9);
    }

    #[test]
    fn xx_curve_of_maximally_mixed_vanishes() {
        let space = two_qubits();
        let mixed = DensityMatrix::new(
            space,
            Array2::eye(4).mapv(|z: f64| Complex64::new(z / 4.0, 0.0)),
        )
        .unwrap();
        let phis = [0.0, 0.8, 1.6, 2.4];
        let curve = xx_correlator(&mixed, &phis).unwrap();
        for v in curve.values {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(curve.amplitude, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn xx_amplitude_equals_twice_coherence() {
        // Partially dephased Bell-like state.
        let rho_pure = bell(Complex64::new(0.6, 0.8), false);
        let mut m = rho_pure.matrix().clone();
        m[[1, 2]] *= 0.7;
        m[[2, 1]] *= 0.7;
        let rho = DensityMatrix::new(two_qubits(), m).unwrap();
        let curve = xx_correlator(&rho, &[0.0]).unwrap();
        let coherence = rho.matrix()[[2, 1]].norm();
        assert_abs_diff_eq!(curve.amplitude, 2.0 * coherence, epsilon = 1e-9);
    }

    #[test]
    fn xx_curve_is_2pi_periodic() {
        let rho = bell(Complex64::new(0.0, 1.0), false);
        let curve = xx_correlator(&rho, &[0.3, 0.3 + 2.0 * std::f64::consts::PI]).unwrap();
        assert_abs_diff_eq!(curve.values[0], curve.values[1], epsilon = 1e-12);
    }

    #[test]
    fn bell_fidelity_on_known_states() {
        let rho = bell(Complex64::new(0.0, 1.0), false);
        assert_abs_diff_eq!(bell_fidelity(&rho).unwrap(), 1.0, epsilon = 1e-9);
        let space = two_qubits();
        let mixed = DensityMatrix::new(
            space,
            Array2::eye(4).mapv(|z: f64| Complex64::new(z / 4.0, 0.0)),
        )
        .unwrap();
        assert_abs_diff_eq!(bell_fidelity(&mixed).unwrap(), 0.25, epsilon = 1e-9);
    }

    use ndarray::Array2;
    use num_complex::Complex64;
}
