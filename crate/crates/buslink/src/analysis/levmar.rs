//! Damped least squares (Levenberg-Marquardt) with numeric Jacobians.
//!
//! Small, dependency-free fitter: the curve models in this crate have <= 5
//! parameters and tens-to-hundreds of points.

use crate::error::{Error, Result};

/// Fit outcome: parameters, covariance (row-major p x p), residual RMS.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: Vec<f64>,
    pub covariance: Vec<f64>,
    pub residual_rms: f64,
    pub iterations: usize,
}

impl FitResult {
    /// 1-sigma uncertainty of parameter `i` from the residual covariance.
    pub fn stderr(&self, i: usize) -> f64 {
        let p = self.params.len();
        self.covariance[i * p + i].max(0.0).sqrt()
    }
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &[f64], b: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut m = vec![0.0; n * (n + 1)];
    for i in 0..n {
        m[i * (n + 1)..i * (n + 1) + n].copy_from_slice(&a[i * n..(i + 1) * n]);
        m[i * (n + 1) + n] = b[i];
    }
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[r * (n + 1) + col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot < 1e-300 {
            return Err(Error::Singular("linear system has a zero pivot".into()));
        }
        if pivot_row != col {
            for k in 0..=n {
                m.swap(col * (n + 1) + k, pivot_row * (n + 1) + k);
            }
        }
        let diag = m[col * (n + 1) + col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * (n + 1) + col] / diag;
            if f == 0.0 {
                continue;
            }
            for k in col..=n {
                m[r * (n + 1) + k] -= f * m[col * (n + 1) + k];
            }
        }
    }
    Ok((0..n).map(|i| m[i * (n + 1) + n] / m[i * (n + 1) + i]).collect())
}

/// Invert a symmetric positive-ish matrix by solving against unit vectors.
fn invert(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let x = solve_linear(a, &e, n)?;
        for row in 0..n {
            inv[row * n + col] = x[row];
        }
    }
    Ok(inv)
}

/// Nonlinear least squares: minimize sum_i (y_i - f(params, x_i))^2.
///
/// The Jacobian is computed by central differences with relative steps.
pub fn fit_curve(
    model: impl Fn(&[f64], f64) -> f64,
    xs: &[f64],
    ys: &[f64],
    initial: &[f64],
    max_iterations: usize,
) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), got: ys.len() });
    }
    let n = xs.len();
    let p = initial.len();
    if n <= p {
        return Err(Error::FitFailure(format!("{n} points cannot constrain {p} parameters")));
    }

    let residuals = |params: &[f64]| -> Vec<f64> {
        xs.iter().zip(ys).map(|(&x, &y)| y - model(params, x)).collect()
    };
    let sse = |r: &[f64]| -> f64 { r.iter().map(|e| e * e).sum() };

    let mut params = initial.to_vec();
    let mut r = residuals(&params);
    let mut cost = sse(&r);
    let mut lambda = 1e-3;
    let mut iterations = 0;

    for _ in 0..max_iterations_cap(max_iterations) {
        iterations += 1;
        // Numeric Jacobian of the residuals, J[i][j] = d r_i / d param_j.
        let mut jac = vec![0.0; n * p];
        for j in 0..p {
            let step = 1e-6 * params[j].abs().max(1e-9);
            let mut up = params.clone();
            up[j] += step;
            let mut dn = params.clone();
            dn[j] -= step;
            let ru = residuals(&up);
            let rd = residuals(&dn);
            for i in 0..n {
                jac[i * p + j] = (ru[i] - rd[i]) / (2.0 * step);
            }
        }
        // Normal equations JtJ delta = -Jt r, damped on the diagonal.
        let mut jtj = vec![0.0; p * p];
        let mut jtr = vec![0.0; p];
        for i in 0..n {
            for a in 0..p {
                jtr[a] -= jac[i * p + a] * r[i];
                for b in 0..p {
                    jtj[a * p + b] += jac[i * p + a] * jac[i * p + b];
                }
            }
        }

        let mut improved = false;
        for _try in 0..12 {
            let mut damped = jtj.clone();
            for a in 0..p {
                damped[a * p + a] += lambda * jtj[a * p + a].max(1e-12);
            }
            let Ok(delta) = solve_linear(&damped, &jtr, p) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = params.iter().zip(&delta).map(|(v, d)| v + d).collect();
            let rt = residuals(&trial);
            let ct = sse(&rt);
            if ct.is_finite() && ct < cost {
                let rel = (cost - ct) / cost.max(1e-300);
                params = trial;
                r = rt;
                cost = ct;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < 1e-12 {
                    return finish(model, xs, ys, params, cost, iterations);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // Damping saturated: treat the current point as converged.
            return finish(model, xs, ys, params, cost, iterations);
        }
    }
    finish(model, xs, ys, params, cost, iterations)
}

fn max_iterations_cap(requested: usize) -> usize {
    requested.clamp(1, 10_000)
}

fn finish(
    model: impl Fn(&[f64], f64) -> f64,
    xs: &[f64],
    ys: &[f64],
    params: Vec<f64>,
    cost: f64,
    iterations: usize,
) -> Result<FitResult> {
    let n = xs.len();
    let p = params.len();
    // Final Jacobian for the covariance estimate.
    let mut jac = vec![0.0; n * p];
    for j in 0..p {
        let step = 1e-6 * params[j].abs().max(1e-9);
        let mut up = params.clone();
        up[j] += step;
        let mut dn = params.clone();
        dn[j] -= step;
        for i in 0..n {
            let ru = ys[i] - model(&up, xs[i]);
            let rd = ys[i] - model(&dn, xs[i]);
            jac[i * p + j] = (ru - rd) / (2.0 * step);
        }
    }
    let mut jtj = vec![0.0; p * p];
    for i in 0..n {
        for a in 0..p {
            for b in 0..p {
                jtj[a * p + b] += jac[i * p + a] * jac[i * p + b];
            }
        }
    }
    let sigma2 = cost / (n - p) as f64;
    let covariance = match invert(&jtj, p) {
        Ok(inv) => inv.iter().map(|v| v * sigma2).collect(),
        Err(_) => vec![f64::NAN; p * p],
    };
    Ok(FitResult { params, covariance, residual_rms: (cost / n as f64).sqrt(), iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_linear_system() {
        // [2 1; 1 3] x = [5; 10] -> x = [1, 3]
        let x = solve_linear(&[2.0, 1.0, 1.0, 3.0], &[5.0, 10.0], 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_system_rejected() {
        assert!(solve_linear(&[1.0, 2.0, 2.0, 4.0], &[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn fits_exponential() {
        let xs: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let truth = [2.5, 0.7];
        let ys: Vec<f64> = xs.iter().map(|&x| truth[0] * (-truth[1] * x).exp()).collect();
        let fit = fit_curve(
            |p, x| p[0] * (-p[1] * x).exp(),
            &xs,
            &ys,
            &[1.0, 0.3],
            200,
        )
        .unwrap();
        assert!((fit.params[0] - 2.5).abs() < 1e-6);
        assert!((fit.params[1] - 0.7).abs() < 1e-6);
        assert!(fit.residual_rms < 1e-9);
    }

    #[test]
    fn fits_damped_cosine_with_noise() {
        let xs: Vec<f64> = (0..400).map(|k| k as f64 * 0.05).collect();
        let truth = [1.0, 0.15, 2.0, 0.3];
        // Deterministic pseudo-noise.
        let mut state = 123u64;
        let mut noise = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64 - 1.0) * 0.005
        };
        let model =
            |p: &[f64], x: f64| p[0] * (-p[1] * x).exp() * (p[2] * x + p[3]).cos();
        let ys: Vec<f64> = xs.iter().map(|&x| model(&truth, x) + noise()).collect();
        let fit = fit_curve(model, &xs, &ys, &[0.8, 0.1, 2.1, 0.0], 300).unwrap();
        assert!((fit.params[2] - 2.0).abs() < 1e-3, "freq {}", fit.params[2]);
        assert!((fit.params[1] - 0.15).abs() < 5e-3, "decay {}", fit.params[1]);
        // Covariance-based uncertainty is positive and small.
        assert!(fit.stderr(2) > 0.0 && fit.stderr(2) < 1e-2);
    }
}
