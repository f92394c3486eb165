//! Operators, state vectors, and density matrices on a tensor-product space.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::eig::{eigh, func_hermitian};
use super::space::HilbertSpace;
use crate::error::{Error, Result};

pub(crate) const HERMITICITY_RTOL: f64 = 1e-12;
pub(crate) const DENSITY_HERM_TOL: f64 = 1e-10;
pub(crate) const DENSITY_TRACE_TOL: f64 = 1e-8;
pub(crate) const DENSITY_EIG_FLOOR: f64 = -1e-7;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kronecker product of two dense complex matrices.
pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::<Complex64>::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            if aij == Complex64::default() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(m: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = m.t().to_owned();
    out.mapv_inplace(|z| z.conj());
    out
}

/// Relative deviation from Hermiticity, ||M - M†||_F / max(||M||_F, 1).
pub fn hermiticity_deviation(m: &Array2<Complex64>) -> f64 {
    let norm: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let dev: f64 = {
        let d = m - &dagger(m);
        d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    };
    dev / norm.max(1.0)
}

/// A dense operator tied to a Hilbert space.
#[derive(Debug, Clone)]
pub struct Operator {
    space: Arc<HilbertSpace>,
    matrix: Array2<Complex64>,
}

impl Operator {
    pub fn from_matrix(space: Arc<HilbertSpace>, matrix: Array2<Complex64>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.nrows() });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: Arc<HilbertSpace>) -> Self {
        let d = space.dim();
        Self { space, matrix: Array2::zeros((d, d)) }
    }

    pub fn identity(space: Arc<HilbertSpace>) -> Self {
        let d = space.dim();
        Self { space, matrix: Array2::eye(d) }
    }

    /// Truncated lowering operator for one mode, embedded with identities on
    /// the other modes. Matrix elements <n-1| a |n> = sqrt(n).
    pub fn annihilation(space: &Arc<HilbertSpace>, mode_label: &str) -> Result<Self> {
        let k = space.mode_index(mode_label)?;
        let mut factor = Array2::<Complex64>::zeros((1, 1));
        factor[[0, 0]] = c(1.0);
        for (m, &d) in space.dims().iter().enumerate() {
            let block = if m == k {
                let mut a = Array2::<Complex64>::zeros((d, d));
                for n in 1..d {
                    a[[n - 1, n]] = c((n as f64).sqrt());
                }
                a
            } else {
                Array2::eye(d)
            };
            factor = kron(&factor, &block);
        }
        Ok(Self { space: Arc::clone(space), matrix: factor })
    }

    /// Number operator a†a for one mode.
    pub fn number(space: &Arc<HilbertSpace>, mode_label: &str) -> Result<Self> {
        let a = Self::annihilation(space, mode_label)?;
        Ok(a.dag().mul(&a))
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn dag(&self) -> Self {
        Self { space: Arc::clone(&self.space), matrix: dagger(&self.matrix) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { space: Arc::clone(&self.space), matrix: self.matrix.dot(&other.matrix) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { space: Arc::clone(&self.space), matrix: &self.matrix + &other.matrix }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { space: Arc::clone(&self.space), matrix: self.matrix.mapv(|z| z * factor) }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c(factor))
    }

    /// `self + self†` divided by nothing: convenience for building `X + h.c.`.
    pub fn plus_hc(&self) -> Self {
        self.add(&self.dag())
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.matrix)
    }

    /// Fail unless Hermitian to the crate tolerance (relative norm).
    pub fn require_hermitian(&self) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITICITY_RTOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(())
    }

    fn check_same_space(&self, other_dim: usize) -> Result<()> {
        if self.dim() != other_dim {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other_dim });
        }
        Ok(())
    }
}

/// A normalized pure state.
#[derive(Debug, Clone)]
pub struct StateVector {
    space: Arc<HilbertSpace>,
    amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// Build from raw amplitudes; must be normalized to 1e-9.
    pub fn new(space: Arc<HilbertSpace>, amplitudes: Array1<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: amplitudes.len() });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!("state vector norm {norm} != 1")));
        }
        Ok(Self { space, amplitudes })
    }

    /// Product Fock state |n_0, n_1, ...>.
    pub fn fock(space: &Arc<HilbertSpace>, occupations: &[usize]) -> Result<Self> {
        let idx = space.flat_index(occupations)?;
        let mut amp = Array1::<Complex64>::zeros(space.dim());
        amp[idx] = c(1.0);
        Ok(Self { space: Arc::clone(space), amplitudes: amp })
    }

    /// Normalized superposition of Fock states with the given weights.
    pub fn superposition(
        space: &Arc<HilbertSpace>,
        terms: &[(Complex64, &[usize])],
    ) -> Result<Self> {
        let mut amp = Array1::<Complex64>::zeros(space.dim());
        for (w, occ) in terms {
            amp[space.flat_index(occ)?] += *w;
        }
        let norm: f64 = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero superposition".into()));
        }
        amp.mapv_inplace(|z| z / norm);
        Ok(Self { space: Arc::clone(space), amplitudes: amp })
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix {
        let d = self.amplitudes.len();
        let mut rho = Array2::<Complex64>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                rho[[i, j]] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix { space: Arc::clone(&self.space), matrix: rho }
    }
}

/// A density matrix; Hermitian, unit trace, positive to numerical tolerance.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: Arc<HilbertSpace>,
    matrix: Array2<Complex64>,
}

impl DensityMatrix {
    /// Build from a raw matrix, validating the density-matrix invariants.
    pub fn new(space: Arc<HilbertSpace>, matrix: Array2<Complex64>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.nrows() });
        }
        let rho = Self { space, matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Internal constructor for matrices produced by trusted numerics.
    pub(crate) fn from_parts_unchecked(space: Arc<HilbertSpace>, matrix: Array2<Complex64>) -> Self {
        Self { space, matrix }
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.matrix[[i, i]]).sum()
    }

    /// Purity Tr rho^2.
    pub fn purity(&self) -> f64 {
        let sq = self.matrix.dot(&self.matrix);
        (0..self.dim()).map(|i| sq[[i, i]].re).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = &self.matrix - &dagger(&self.matrix);
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (evals, _) = eigh(&self.matrix);
        evals[0]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.matrix).0
    }

    /// Check Hermiticity (1e-10 abs), trace (1 +- 1e-8), positivity (>= -1e-7).
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > DENSITY_HERM_TOL {
            return Err(Error::InvalidState(format!("not Hermitian, deviation {herm:.3e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = self.min_eigenvalue();
        if min < DENSITY_EIG_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Project onto the closest positive semidefinite unit-trace matrix.
    ///
    /// Negative eigenvalues are never clipped silently during evolution; this
    /// is an explicit opt-in for downstream fidelity-style calls.
    pub fn project_psd(&self) -> Self {
        let clipped = func_hermitian(&self.matrix, |x| x.max(0.0));
        let tr: f64 = (0..self.dim()).map(|i| clipped[[i, i]].re).sum();
        let matrix = clipped.mapv(|z| z / tr);
        Self { space: Arc::clone(&self.space), matrix }
    }

    /// Population of one basis state given by per-mode occupations.
    pub fn population(&self, occupations: &[usize]) -> Result<f64> {
        let idx = self.space.flat_index(occupations)?;
        Ok(self.matrix[[idx, idx]].re)
    }
}

/// Tr[rho obs].
pub fn expectation(rho: &DensityMatrix, obs: &Operator) -> Result<Complex64> {
    obs.check_same_space(rho.dim())?;
    let prod = rho.matrix().dot(obs.matrix());
    Ok((0..rho.dim()).map(|i| prod[[i, i]]).sum())
}

/// Tr[rho obs] for Hermitian observables; asserts the imaginary part is tiny.
pub fn expectation_real(rho: &DensityMatrix, obs: &Operator) -> Result<f64> {
    let val = expectation(rho, obs)?;
    if val.im.abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "expectation of Hermitian observable has imaginary part {:.3e}",
            val.im
        )));
    }
    Ok(val.re)
}

/// Reduced density matrix on the kept modes (in their original order).
pub fn partial_trace(rho: &DensityMatrix, keep_labels: &[&str]) -> Result<DensityMatrix> {
    if keep_labels.is_empty() {
        return Err(Error::InvalidParameter("partial trace needs a nonempty keep set".into()));
    }
    let space = rho.space();
    let mut keep: Vec<usize> = Vec::with_capacity(keep_labels.len());
    for label in keep_labels {
        keep.push(space.mode_index(label)?);
    }
    keep.sort_unstable();
    keep.dedup();

    let kept_modes: Vec<(&str, usize)> = keep
        .iter()
        .map(|&k| (space.labels()[k].as_str(), space.dims()[k]))
        .collect();
    let reduced_space = HilbertSpace::new(&kept_modes)?;
    let dr = reduced_space.dim();
    let mut out = Array2::<Complex64>::zeros((dr, dr));

    let dim = space.dim();
    for row in 0..dim {
        let occ_row = space.occupations(row);
        for col in 0..dim {
            let occ_col = space.occupations(col);
            // Off-diagonal in any traced mode contributes nothing.
            let traced_match = (0..space.n_modes())
                .filter(|m| !keep.contains(m))
                .all(|m| occ_row[m] == occ_col[m]);
            if !traced_match {
                continue;
            }
            let kr: Vec<usize> = keep.iter().map(|&m| occ_row[m]).collect();
            let kc: Vec<usize> = keep.iter().map(|&m| occ_col[m]).collect();
            let i = reduced_space.flat_index(&kr)?;
            let j = reduced_space.flat_index(&kc)?;
            out[[i, j]] += rho.matrix()[[row, col]];
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(reduced_space, out))
}

/// Fidelity <psi| rho |psi> with a normalized pure target.
pub fn state_fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    if target.amplitudes().len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: target.amplitudes().len(),
        });
    }
    let norm: f64 = target.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("target norm {norm} != 1")));
    }
    let mut f = Complex64::default();
    let d = rho.dim();
    for i in 0..d {
        for j in 0..d {
            f += target.amplitudes()[i].conj() * rho.matrix()[[i, j]] * target.amplitudes()[j];
        }
    }
    let val = f.re;
    if !(-1e-9..=1.0 + 1e-9).contains(&val) {
        return Err(Error::InvalidState(format!("fidelity {val} out of [0, 1]")));
    }
    Ok(val.clamp(0.0, 1.0))
}
