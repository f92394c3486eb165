//! Time-dependent Hamiltonians as a static part plus driven terms.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use super::operator::{hermiticity_deviation, Operator, HERMITICITY_RTOL};
use super::space::HilbertSpace;
use crate::error::{Error, Result};

/// Scalar envelope of a drive term. Values may be complex (rotating phases).
pub type Envelope = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Wrap a real-valued envelope.
pub fn real_envelope(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Envelope {
    Arc::new(move |t| Complex64::new(f(t), 0.0))
}

/// H(t) = static + sum_i envelope_i(t) * term_i.
///
/// Terms with complex envelopes must be added together with their conjugate
/// partners (see [`TimeDependentHamiltonian::add_drive_pair`]) so that H(t)
/// stays Hermitian.
#[derive(Clone)]
pub struct TimeDependentHamiltonian {
    space: Arc<HilbertSpace>,
    static_part: Operator,
    drive_terms: Vec<(Operator, Envelope)>,
}

impl std::fmt::Debug for TimeDependentHamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimeDependentHamiltonian")
            .field("dim", &self.space.dim())
            .field("n_drive_terms", &self.drive_terms.len())
            .finish()
    }
}

impl TimeDependentHamiltonian {
    /// Start from a static (Hermitian) part; may be the zero operator.
    pub fn new(static_part: Operator) -> Result<Self> {
        static_part.require_hermitian()?;
        Ok(Self {
            space: Arc::clone(static_part.space()),
            static_part,
            drive_terms: Vec::new(),
        })
    }

    pub fn zero(space: Arc<HilbertSpace>) -> Self {
        Self {
            static_part: Operator::zeros(Arc::clone(&space)),
            space,
            drive_terms: Vec::new(),
        }
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn static_part(&self) -> &Operator {
        &self.static_part
    }

    pub fn drive_terms(&self) -> &[(Operator, Envelope)] {
        &self.drive_terms
    }

    /// Add a Hermitian term with a real envelope.
    pub fn add_drive(&mut self, term: Operator, envelope: Envelope) -> Result<()> {
        if term.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), got: term.dim() });
        }
        self.drive_terms.push((term, envelope));
        Ok(())
    }

    /// Add `env(t) * term + conj(env(t)) * term†` as a Hermitian pair.
    pub fn add_drive_pair(&mut self, term: Operator, envelope: Envelope) -> Result<()> {
        let dag = term.dag();
        let env2 = Arc::clone(&envelope);
        self.add_drive(term, envelope)?;
        self.add_drive(dag, Arc::new(move |t| env2(t).conj()))?;
        Ok(())
    }

    /// Dense H(t).
    pub fn at(&self, t: f64) -> Array2<Complex64> {
        let mut h = self.static_part.matrix().clone();
        for (term, env) in &self.drive_terms {
            let f = env(t);
            if f != Complex64::default() {
                h.scaled_add(f, term.matrix());
            }
        }
        h
    }

    pub fn is_static(&self) -> bool {
        self.drive_terms.is_empty()
    }

    /// Check H(t) is Hermitian at the given sample times.
    pub fn require_hermitian_at(&self, times: &[f64]) -> Result<()> {
        for &t in times {
            let dev = hermiticity_deviation(&self.at(t));
            if dev > HERMITICITY_RTOL {
                return Err(Error::NotHermitian { deviation: dev });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotating_pair_stays_hermitian() {
        let space = HilbertSpace::new(&[("q", 2), ("bus", 3)]).unwrap();
        let a = Operator::annihilation(&space, "q").unwrap();
        let b = Operator::annihilation(&space, "bus").unwrap();
        let exchange = a.dag().mul(&b);
        let mut h = TimeDependentHamiltonian::zero(Arc::clone(&space));
        let delta = 2.0e6;
        h.add_drive_pair(
            exchange,
            Arc::new(move |t| Complex64::new(0.0, delta * t).exp()),
        )
        .unwrap();
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 13.7e-9).collect();
        h.require_hermitian_at(&times).unwrap();
    }

    #[test]
    fn non_hermitian_static_rejected() {
        let space = HilbertSpace::new(&[("q", 2)]).unwrap();
        let a = Operator::annihilation(&space, "q").unwrap();
        assert!(TimeDependentHamiltonian::new(a).is_err());
    }
}
