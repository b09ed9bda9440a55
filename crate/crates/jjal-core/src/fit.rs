//! Damped least-squares engine and the fit families built on it.
//!
//! The engine is a plain Levenberg-Marquardt loop with multiplicative
//! damping on the normal-equation diagonal, forward-difference Jacobians
//! and box bounds by clamping. Model functions here have at most nine
//! parameters and tens to thousands of residuals, so the normal equations
//! are solved directly by Cholesky factorization; no sparsity, no trust
//! region machinery.
//!
//! Step control: solve (J^T J + lambda diag(J^T J)) delta = -J^T r, accept
//! a step that lowers the sum of squares and divide lambda by 10, reject
//! otherwise and multiply by 10. Convergence fires on a relative cost
//! decrease below 1e-12 or a gradient infinity-norm below 1e-10. Hitting
//! the iteration cap is reported, not an error: the caller gets the best
//! point found with `converged = false`.
//!
//! Standard errors come from the usual linearized covariance
//! sigma^2 (J^T J)^{-1} with sigma^2 = SSR/(n-p). When J^T J is singular
//! at the solution (a degenerate direction, for example a vanishing
//! oscillation amplitude making its phase meaningless), the errors are
//! reported as NaN and flagged rather than failing the whole fit.

pub mod dimer;
pub mod flux;
pub mod gain;
pub mod noise;

use ndarray::{Array1, Array2};
use ndarray_linalg::cholesky::{InverseC, SolveC};
use serde::Serialize;
use thiserror::Error;

/// Result of a least-squares fit, with parameters addressable by name.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    /// One name per parameter, fixed by the fit family.
    pub parameter_names: Vec<String>,
    /// Best-fit values, same order as `parameter_names`.
    pub parameters: Vec<f64>,
    /// Linearized one-sigma errors; NaN where the covariance is degenerate.
    pub standard_errors: Vec<f64>,
    /// Root mean square of the residual vector at the solution.
    pub residual_rms: f64,
    /// Outer iterations performed.
    pub iterations: usize,
    /// Whether a convergence test fired before the iteration cap.
    pub converged: bool,
    /// Non-fatal diagnoses accumulated by the engine and the fit family.
    pub warnings: Vec<FitWarning>,
}

impl FitResult {
    /// Value of the named parameter.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.parameter_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.parameters[i])
    }

    /// Standard error of the named parameter.
    pub fn std_err(&self, name: &str) -> Option<f64> {
        self.parameter_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.standard_errors[i])
    }
}

/// Non-fatal fit diagnoses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FitWarning {
    /// Iteration cap reached before a convergence test fired.
    MaxIterations,
    /// Covariance matrix singular at the solution; standard errors NaN.
    DegenerateCovariance,
    /// Flux map spans less than half a modulation period; the lever arm
    /// is poorly constrained.
    WeakFluxModulation { cycles_spanned: f64 },
    /// Fitted oscillation amplitude indistinguishable from zero at two
    /// standard errors.
    AmplitudeUnresolved { component: usize },
}

impl std::fmt::Display for FitWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitWarning::MaxIterations => write!(f, "iteration cap reached"),
            FitWarning::DegenerateCovariance => {
                write!(f, "degenerate covariance, standard errors unavailable")
            }
            FitWarning::WeakFluxModulation { cycles_spanned } => write!(
                f,
                "flux map spans only {cycles_spanned:.3} modulation periods"
            ),
            FitWarning::AmplitudeUnresolved { component } => {
                write!(f, "amplitude of component {component} consistent with zero")
            }
        }
    }
}

/// Engine knobs. `Default` matches the documented behavior.
#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Outer iteration cap; 0 means the default of 500.
    pub max_iterations: usize,
    /// Inclusive box bounds per parameter; steps are clamped inside.
    pub bounds: Option<Vec<(f64, f64)>>,
    /// Characteristic magnitude per parameter for finite-difference steps.
    /// Defaults to max(|p0|, 1).
    pub scales: Option<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("{points} data points cannot constrain {parameters} parameters")]
    InsufficientData { points: usize, parameters: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("input arrays have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("model returned a non-finite residual at iteration {iteration}")]
    NonFiniteModel { iteration: usize },
    #[error("normal equations singular; model parameters are degenerate")]
    SingularJacobian,
    #[error("frequency grids of the two traces differ at index {index}")]
    GridMismatch { index: usize },
    #[error("no gain lobe above {threshold_db} dB found")]
    NoLobeFound { threshold_db: f64 },
    #[error("invalid parameter bound: {name}")]
    InvalidBound { name: &'static str },
}

const DEFAULT_MAX_ITERATIONS: usize = 500;
const REL_COST_TOL: f64 = 1e-12;
const GRAD_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1.49e-8; // sqrt of f64 machine epsilon

/// Minimizes the sum of squared residuals over the parameters.
///
/// `residual` maps a parameter vector to the residual vector; its length
/// must stay fixed and exceed the parameter count. `names` labels the
/// parameters in the returned [`FitResult`].
pub fn least_squares_fit<F>(
    residual: F,
    p0: &[f64],
    names: &[&str],
    options: &FitOptions,
) -> Result<FitResult, FitError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let k = p0.len();
    assert_eq!(names.len(), k, "one name per parameter");
    if k == 0 {
        return Err(FitError::EmptyInput);
    }
    if let Some(bounds) = &options.bounds {
        if bounds.len() != k || bounds.iter().any(|(lo, hi)| !(lo <= hi)) {
            return Err(FitError::InvalidBound { name: "bounds" });
        }
    }
    let max_iterations = if options.max_iterations == 0 {
        DEFAULT_MAX_ITERATIONS
    } else {
        options.max_iterations
    };

    let clamp = |p: &mut [f64]| {
        if let Some(bounds) = &options.bounds {
            for (v, (lo, hi)) in p.iter_mut().zip(bounds) {
                *v = v.clamp(*lo, *hi);
            }
        }
    };
    let scale = |j: usize| -> f64 {
        match &options.scales {
            Some(s) => s[j].abs().max(f64::MIN_POSITIVE),
            None => p0[j].abs().max(1.0),
        }
    };

    let mut p = p0.to_vec();
    clamp(&mut p);
    let mut r = residual(&p);
    let n = r.len();
    if n == 0 {
        return Err(FitError::EmptyInput);
    }
    if n < k {
        return Err(FitError::InsufficientData { points: n, parameters: k });
    }
    if !r.iter().all(|v| v.is_finite()) {
        return Err(FitError::NonFiniteModel { iteration: 0 });
    }
    let mut cost: f64 = r.iter().map(|v| v * v).sum();

    let jacobian = |p: &[f64], r: &[f64]| -> Result<Array2<f64>, FitError> {
        let mut jac = Array2::<f64>::zeros((n, k));
        let mut pp = p.to_vec();
        for j in 0..k {
            let mut h = FD_STEP * p[j].abs().max(scale(j));
            if let Some(bounds) = &options.bounds {
                // step backward if forward would leave the box
                if p[j] + h > bounds[j].1 {
                    h = -h;
                }
            }
            pp[j] = p[j] + h;
            let h_actual = pp[j] - p[j]; // exact step after rounding
            let rj = residual(&pp);
            pp[j] = p[j];
            if rj.len() != n {
                return Err(FitError::LengthMismatch { left: rj.len(), right: n });
            }
            for i in 0..n {
                jac[[i, j]] = (rj[i] - r[i]) / h_actual;
            }
        }
        if !jac.iter().all(|v| v.is_finite()) {
            return Err(FitError::NonFiniteModel { iteration: usize::MAX });
        }
        Ok(jac)
    };

    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut warnings = Vec::new();

    while iterations < max_iterations {
        iterations += 1;
        let jac = jacobian(&p, &r)?;
        let grad = jac.t().dot(&Array1::from_vec(r.clone()));
        if grad.iter().all(|g| g.abs() < GRAD_TOL) {
            converged = true;
            break;
        }
        let jtj = jac.t().dot(&jac);

        let mut accepted = false;
        for _ in 0..40 {
            // damped normal equations; the diagonal floor keeps exactly
            // degenerate directions solvable instead of aborting the fit
            let mut damped = jtj.clone();
            let diag_max = (0..k).map(|j| jtj[[j, j]]).fold(0.0f64, f64::max);
            if diag_max <= 0.0 {
                return Err(FitError::SingularJacobian);
            }
            for j in 0..k {
                let d = jtj[[j, j]].max(1e-14 * diag_max);
                damped[[j, j]] += lambda * d;
            }
            let delta = match damped.solvec(&grad.mapv(|g| -g)) {
                Ok(d) => d,
                Err(_) => {
                    lambda *= 10.0;
                    if lambda > 1e14 {
                        return Err(FitError::SingularJacobian);
                    }
                    continue;
                }
            };
            let mut p_new: Vec<f64> = p.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            clamp(&mut p_new);
            let r_new = residual(&p_new);
            let cost_new: f64 = r_new.iter().map(|v| v * v).sum();
            if cost_new.is_finite() && cost_new <= cost {
                let rel_drop = (cost - cost_new) / cost.max(f64::MIN_POSITIVE);
                p = p_new;
                r = r_new;
                cost = cost_new;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                if rel_drop < REL_COST_TOL {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                break;
            }
        }
        if !accepted {
            // no downhill step exists at any damping: stationary point
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    if !converged {
        warnings.push(FitWarning::MaxIterations);
    }

    // linearized covariance at the solution
    let jac = jacobian(&p, &r)?;
    let jtj = jac.t().dot(&jac);
    let dof = (n - k).max(1);
    let sigma2 = cost / dof as f64;
    let standard_errors = match jtj.invc() {
        Ok(cov) => (0..k).map(|j| (sigma2 * cov[[j, j]]).sqrt()).collect(),
        Err(_) => {
            warnings.push(FitWarning::DegenerateCovariance);
            vec![f64::NAN; k]
        }
    };

    Ok(FitResult {
        parameter_names: names.iter().map(|s| s.to_string()).collect(),
        parameters: p,
        standard_errors,
        residual_rms: (cost / n as f64).sqrt(),
        iterations,
        converged,
        warnings,
    })
}

/// One spectral component found by [`spectral_peaks`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct SpectralPeak {
    /// Cycles per unit of the abscissa.
    pub freq: f64,
    /// Peak amplitude in the units of the ordinate.
    pub amplitude: f64,
    /// Phase at the first abscissa point (rad).
    pub phase: f64,
}

/// Crude spectral seeding: resamples (x, y) onto a uniform grid, removes
/// the mean and returns the `count` strongest non-adjacent DFT bins.
/// Only used to seed fits, so bin-resolution accuracy is enough.
pub(crate) fn spectral_peaks(x: &[f64], y: &[f64], count: usize) -> Vec<SpectralPeak> {
    let n = x.len();
    if n < 4 || count == 0 {
        return Vec::new();
    }
    let span = x[n - 1] - x[0];
    if !(span > 0.0) {
        return Vec::new();
    }
    // linear resampling onto n uniform points
    let mut yu = vec![0.0f64; n];
    let mut j = 0usize;
    for (i, slot) in yu.iter_mut().enumerate() {
        let xi = x[0] + span * i as f64 / (n - 1) as f64;
        while j + 2 < n && x[j + 1] < xi {
            j += 1;
        }
        let (x0, x1, y0, y1) = (x[j], x[j + 1], y[j], y[j + 1]);
        let t = if x1 > x0 { (xi - x0) / (x1 - x0) } else { 0.0 };
        *slot = y0 + t.clamp(0.0, 1.0) * (y1 - y0);
    }
    let mean = yu.iter().sum::<f64>() / n as f64;
    for v in &mut yu {
        *v -= mean;
    }
    // plain DFT over positive bins; n stays small so O(n^2) is fine
    let mut bins = Vec::with_capacity(n / 2);
    for kbin in 1..=n / 2 {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        let w = 2.0 * std::f64::consts::PI * kbin as f64 / n as f64;
        for (i, &v) in yu.iter().enumerate() {
            let a = w * i as f64;
            re += v * a.cos();
            im -= v * a.sin();
        }
        bins.push((kbin, (re * re + im * im).sqrt(), im.atan2(re)));
    }
    let mut taken: Vec<usize> = Vec::new();
    let mut peaks = Vec::new();
    let dx = span / (n - 1) as f64;
    while peaks.len() < count {
        let best = bins
            .iter()
            .filter(|(kbin, ..)| taken.iter().all(|t| kbin.abs_diff(*t) > 1))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some(&(kbin, amp, phase)) = best else { break };
        taken.push(kbin);
        peaks.push(SpectralPeak {
            freq: kbin as f64 / (n as f64 * dx),
            amplitude: 2.0 * amp / n as f64,
            phase,
        });
    }
    peaks
}
