//! Tensor-product Hilbert space of truncated modes.

use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered collection of truncated bosonic/qubit modes.
///
/// The total dimension is the product of the per-mode truncations. Mode 0 is
/// the slowest-varying index in the tensor-product ordering (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl HilbertSpace {
    /// Build a space from `(label, dim)` pairs. Dims must be >= 2 and labels unique.
    pub fn new(modes: &[(&str, usize)]) -> Result<Arc<Self>> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter("space needs at least one mode".into()));
        }
        let mut labels = Vec::with_capacity(modes.len());
        let mut dims = Vec::with_capacity(modes.len());
        for (label, dim) in modes {
            if *dim < 2 {
                return Err(Error::InvalidParameter(format!(
                    "mode '{label}' has dim {dim}, need >= 2"
                )));
            }
            if labels.iter().any(|l: &String| l == label) {
                return Err(Error::InvalidParameter(format!("duplicate mode label '{label}'")));
            }
            labels.push(label.to_string());
            dims.push(*dim);
        }
        Ok(Arc::new(Self { dims, labels }))
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Total Hilbert-space dimension (product of mode dims).
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Index of a mode by label.
    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn mode_dim(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.mode_index(label)?])
    }

    /// Flat basis index for the given per-mode occupation numbers.
    pub fn flat_index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                got: occupations.len(),
            });
        }
        let mut idx = 0;
        for (k, (&n, &d)) in occupations.iter().zip(&self.dims).enumerate() {
            if n >= d {
                return Err(Error::InvalidParameter(format!(
                    "occupation {n} out of range for mode {k} (dim {d})"
                )));
            }
            idx = idx * d + n;
        }
        Ok(idx)
    }

    /// Per-mode occupation numbers for a flat basis index.
    pub fn occupations(&self, mut flat: usize) -> Vec<usize> {
        let mut occ = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            occ[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        occ
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let space = HilbertSpace::new(&[("q1", 2), ("q2", 2), ("bus", 3)]).unwrap();
        assert_eq!(space.dim(), 12);
        for flat in 0..space.dim() {
            let occ = space.occupations(flat);
            assert_eq!(space.flat_index(&occ).unwrap(), flat);
        }
        assert_eq!(space.flat_index(&[1, 0, 2]).unwrap(), 1 * 6 + 0 * 3 + 2);
    }

    #[test]
    fn rejects_bad_modes() {
        assert!(HilbertSpace::new(&[("q", 1)]).is_err());
        assert!(HilbertSpace::new(&[("q", 2), ("q", 2)]).is_err());
        assert!(HilbertSpace::new(&[]).is_err());
    }

    #[test]
    fn unknown_label() {
        let space = HilbertSpace::new(&[("q1", 2)]).unwrap();
        assert!(matches!(space.mode_index("bus"), Err(Error::UnknownMode(_))));
    }
}
