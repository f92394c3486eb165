//! Dense Hermitian eigensolver (cyclic Jacobi with complex rotations).
//!
//! The matrices in this crate are small (dim <= a few dozen), so a Jacobi
//! sweep is accurate, dependency-free, and deterministic.

use ndarray::Array2;
use num_complex::Complex64;

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
///
/// The input is not checked for Hermiticity beyond using only its Hermitian
/// part `(A + A†)/2`; callers validate where it matters.
pub fn eigh(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigh needs a square matrix");
    // Work on the Hermitian part to be robust against rounding.
    let mut m = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = 0.5 * (a[[i, j]] + a[[j, i]].conj());
        }
    }
    let mut v = Array2::<Complex64>::eye(n);

    let norm: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-14 * norm.max(1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let g = apq.norm();
                if g <= tol / (n as f64) {
                    continue;
                }
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                // Phase that makes the pivot real, then a real Jacobi rotation.
                let phase = apq / g;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: col_p' = c*col_p - s*conj(phase)*col_q
                //          col_q' = s*phase*col_p + c*col_q
                let sp = Complex64::new(s, 0.0) * phase;
                let spc = sp.conj();
                for i in 0..n {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = c * mip - spc * miq;
                    m[[i, q]] = sp * mip + c * miq;
                }
                for j in 0..n {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = c * mpj - sp * mqj;
                    m[[q, j]] = spc * mpj + c * mqj;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - spc * viq;
                    v[[i, q]] = sp * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals_raw: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| evals_raw[i].partial_cmp(&evals_raw[j]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| evals_raw[i]).collect();
    let mut vecs = Array2::<Complex64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for i in 0..n {
            vecs[[i, col]] = v[[i, src]];
        }
    }
    (evals, vecs)
}

/// Hermitian matrix function f(A) = V f(Λ) V†.
pub fn func_hermitian(a: &Array2<Complex64>, f: impl Fn(f64) -> f64) -> Array2<Complex64> {
    let n = a.nrows();
    let (evals, vecs) = eigh(a);
    let mut out = Array2::<Complex64>::zeros((n, n));
    for k in 0..n {
        let fk = f(evals[k]);
        if fk == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] += Complex64::new(fk, 0.0) * vecs[[i, k]] * vecs[[j, k]].conj();
            }
        }
    }
    out
}
