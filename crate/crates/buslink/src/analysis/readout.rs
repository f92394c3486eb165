//! Readout confusion matrices, shot sampling, and correction.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::levmar::solve_linear;
use crate::error::{Error, Result};

/// Per-qubit readout channel P(measured m | prepared s), m, s in {g, e}.
///
/// Columns (prepared state) sum to one. The two-qubit channel is the tensor
/// product of the per-qubit matrices: readout errors are treated as
/// independent between the qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionMatrix {
    /// q1: [[P(g|g), P(g|e)], [P(e|g), P(e|e)]]
    pub q1: [[f64; 2]; 2],
    /// q2, same layout.
    pub q2: [[f64; 2]; 2],
}

impl ConfusionMatrix {
    /// Build from assignment fidelities P(g|g) and P(e|e) per qubit.
    pub fn from_fidelities(q1_gg: f64, q1_ee: f64, q2_gg: f64, q2_ee: f64) -> Result<Self> {
        for f in [q1_gg, q1_ee, q2_gg, q2_ee] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidParameter(format!(
                    "assignment fidelity {f} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            q1: [[q1_gg, 1.0 - q1_ee], [1.0 - q1_gg, q1_ee]],
            q2: [[q2_gg, 1.0 - q2_ee], [1.0 - q2_gg, q2_ee]],
        })
    }

    /// Ideal readout.
    pub fn identity() -> Self {
        Self { q1: [[1.0, 0.0], [0.0, 1.0]], q2: [[1.0, 0.0], [0.0, 1.0]] }
    }

    /// The 4x4 two-qubit channel, outcome order (gg, ge, eg, ee) with the
    /// first letter for qubit 1 (row-major index 2*m1 + m2).
    pub fn two_qubit(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for m1 in 0..2 {
            for m2 in 0..2 {
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        m[2 * m1 + m2][2 * s1 + s2] = self.q1[m1][s1] * self.q2[m2][s2];
                    }
                }
            }
        }
        m
    }

    /// Forward channel: measured probabilities from true probabilities.
    pub fn apply(&self, p_true: &[f64; 4]) -> [f64; 4] {
        let m = self.two_qubit();
        let mut out = [0.0; 4];
        for (i, row) in m.iter().enumerate() {
            out[i] = row.iter().zip(p_true).map(|(a, b)| a * b).sum();
        }
        out
    }
}

/// Sample two-qubit readout counts through the confusion channel.
///
/// `p_true` are the diagonal populations in (gg, ge, eg, ee) order. Shots are
/// drawn with a counter-based seeded generator: identical seeds give
/// identical counts.
pub fn sample_readout(
    p_true: &[f64; 4],
    cm: &ConfusionMatrix,
    shots: u64,
    seed: u64,
) -> [u64; 4] {
    let p_meas = cm.apply(p_true);
    let total: f64 = p_meas.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let mut x: f64 = rng.gen::<f64>() * total;
        let mut outcome = 3;
        for (k, &p) in p_meas.iter().enumerate() {
            if x < p {
                outcome = k;
                break;
            }
            x -= p;
        }
        counts[outcome] += 1;
    }
    counts
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Invert the readout channel on observed counts.
///
/// Solves cm * p_true = p_measured and projects the solution onto the
/// probability simplex (p >= 0, sum p = 1).
pub fn correct_readout(counts: &[u64; 4], cm: &ConfusionMatrix) -> Result<[f64; 4]> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidParameter("no counts to correct".into()));
    }
    let p_meas: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    correct_probabilities(&p_meas, cm)
}

/// Same inversion applied to already-normalized probabilities.
pub fn correct_probabilities(p_meas: &[f64], cm: &ConfusionMatrix) -> Result<[f64; 4]> {
    if p_meas.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: p_meas.len() });
    }
    let m = cm.two_qubit();
    let flat: Vec<f64> = m.iter().flatten().copied().collect();
    let solved = solve_linear(&flat, p_meas, 4)
        .map_err(|_| Error::Singular("confusion matrix is singular".into()))?;
    let projected = project_simplex(&solved);
    Ok([projected[0], projected[1], projected[2], projected[3]])
}
