//! Adaptive Runge-Kutta integration of the Lindblad master equation.
//!
//! drho/dt = -i[H(t), rho] + sum_k ( L_k rho L_k† - 1/2 {L_k† L_k, rho} )
//!
//! The density matrix is integrated in dense form with an embedded
//! Dormand-Prince 5(4) pair and per-element error control. Hilbert
//! dimensions in this crate are small, so dense stepping is cheap and there
//! are no stiff terms at the simulated rates.

use ndarray::Array2;
use num_complex::Complex64;

use super::hamiltonian::TimeDependentHamiltonian;
use super::operator::{expectation_real, DensityMatrix, Operator};
use crate::error::{Error, Result};

/// Integration controls. Defaults: rtol 1e-8, atol 1e-10.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Hard cap on accepted + rejected steps per solve.
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { rtol: 1e-8, atol: 1e-10, max_steps: 20_000_000 }
    }
}

/// Time grid plus the density matrix at each grid point.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }

    /// Real expectation value of a Hermitian observable along the trajectory.
    pub fn expectations(&self, obs: &Operator) -> Result<Vec<f64>> {
        self.states.iter().map(|rho| expectation_real(rho, obs)).collect()
    }

    /// Population of one basis state along the trajectory.
    pub fn populations(&self, occupations: &[usize]) -> Result<Vec<f64>> {
        self.states.iter().map(|rho| rho.population(occupations)).collect()
    }
}

struct LindbladRhs<'a> {
    hamiltonian: &'a TimeDependentHamiltonian,
    collapse: Vec<(Array2<Complex64>, Array2<Complex64>, Array2<Complex64>)>, // (L, L†, L†L)
}

impl<'a> LindbladRhs<'a> {
    fn new(hamiltonian: &'a TimeDependentHamiltonian, collapse_ops: &[Operator]) -> Result<Self> {
        let dim = hamiltonian.space().dim();
        let mut collapse = Vec::with_capacity(collapse_ops.len());
        for op in collapse_ops {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: op.dim() });
            }
            let l = op.matrix().clone();
            let ld = super::operator::dagger(&l);
            let ldl = ld.dot(&l);
            collapse.push((l, ld, ldl));
        }
        Ok(Self { hamiltonian, collapse })
    }

    fn eval(&self, t: f64, rho: &Array2<Complex64>) -> Array2<Complex64> {
        let h = self.hamiltonian.at(t);
        let mut out = h.dot(rho) - rho.dot(&h);
        out.mapv_inplace(|z| Complex64::new(z.im, -z.re)); // multiply by -i
        let half = Complex64::new(0.5, 0.0);
        for (l, ld, ldl) in &self.collapse {
            out = out + l.dot(rho).dot(ld) - half * (ldl.dot(rho) + rho.dot(ldl));
        }
        out
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate the Lindblad equation, returning the state at each output time.
///
/// `times` must be strictly increasing; the initial state is taken at
/// `times[0]`. Collapse operators carry their rates folded in (L = sqrt(gamma) A).
pub fn evolve_lindblad(
    hamiltonian: &TimeDependentHamiltonian,
    collapse_ops: &[Operator],
    rho0: &DensityMatrix,
    times: &[f64],
    options: SolverOptions,
) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("empty output time grid".into()));
    }
    for w in times.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter("output times must be strictly increasing".into()));
        }
    }
    let dim = hamiltonian.space().dim();
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: rho0.dim() });
    }
    rho0.validate()?;
    let span = times[times.len() - 1] - times[0];
    let herm_samples = [times[0], times[0] + 0.37 * span, times[0] + span];
    hamiltonian.require_hermitian_at(&herm_samples)?;

    let rhs = LindbladRhs::new(hamiltonian, collapse_ops)?;
    let mut states = Vec::with_capacity(times.len());
    states.push(rho0.clone());

    let mut y = rho0.matrix().clone();
    let mut t = times[0];
    let n_elem = (dim * dim) as f64;
    let mut k: Vec<Array2<Complex64>> = Vec::with_capacity(7);
    let mut f_now = rhs.eval(t, &y);

    // Initial step size from the scale of the derivative.
    let y_norm = y.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
    let f_norm = f_now.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut h = if span == 0.0 {
        0.0
    } else if f_norm > 0.0 {
        (0.01 * y_norm / f_norm).min(span / 10.0)
    } else {
        span / 10.0
    };
    let h_min = span * 1e-14;
    let mut steps = 0usize;

    for (&t_target, _) in times.iter().zip(times.iter()).skip(1) {
        while t < t_target {
            if steps >= options.max_steps {
                return Err(Error::IntegratorTolerance { achieved: f64::NAN, t });
            }
            steps += 1;
            let mut h_step = h.min(t_target - t);
            let hit_boundary = h_step >= t_target - t;

            // Stage evaluations (k1 is the FSAL derivative from the last step).
            k.clear();
            k.push(f_now.clone());
            for s in 1..7 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    let a = A[s - 1][j];
                    if a != 0.0 {
                        ys.scaled_add(Complex64::new(a * h_step, 0.0), kj);
                    }
                }
                k.push(rhs.eval(t + C[s] * h_step, &ys));
            }

            let mut y5 = y.clone();
            let mut err = Array2::<Complex64>::zeros(y.raw_dim());
            for (j, kj) in k.iter().enumerate() {
                if B5[j] != 0.0 {
                    y5.scaled_add(Complex64::new(B5[j] * h_step, 0.0), kj);
                }
                let db = B5[j] - B4[j];
                if db != 0.0 {
                    err.scaled_add(Complex64::new(db * h_step, 0.0), kj);
                }
            }

            let mut err_norm_sq = 0.0;
            for (e, (yi, y5i)) in err.iter().zip(y.iter().zip(y5.iter())) {
                let scale = options.atol + options.rtol * yi.norm().max(y5i.norm());
                let r = e.norm() / scale;
                err_norm_sq += r * r;
            }
            let err_norm = (err_norm_sq / n_elem).sqrt();

            if err_norm <= 1.0 {
                t = if hit_boundary { t_target } else { t + h_step };
                y = y5;
                // FSAL: last stage derivative is f(t_new, y_new).
                f_now = k[6].clone();
                let grow = if err_norm > 0.0 { 0.9 * err_norm.powf(-0.2) } else { 5.0 };
                h = h_step * grow.clamp(0.2, 5.0);
            } else {
                h_step *= (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
                if h_step < h_min {
                    return Err(Error::IntegratorTolerance { achieved: err_norm, t });
                }
                h = h_step;
            }
        }

        let trace: Complex64 = (0..dim).map(|i| y[[i, i]]).sum();
        if (trace.re - 1.0).abs() > 1e-8 || trace.im.abs() > 1e-8 {
            return Err(Error::IntegratorTolerance { achieved: (trace.re - 1.0).abs(), t });
        }
        states.push(DensityMatrix::from_parts_unchecked(
            std::sync::Arc::clone(rho0.space()),
            y.clone(),
        ));
    }

    Ok(Trajectory { times: times.to_vec(), states })
}

/// Convenience: evolve with no collapse operators (unitary limit).
pub fn evolve_unitary(
    hamiltonian: &TimeDependentHamiltonian,
    rho0: &DensityMatrix,
    times: &[f64],
    options: SolverOptions,
) -> Result<Trajectory> {
    evolve_lindblad(hamiltonian, &[], rho0, times, options)
}
