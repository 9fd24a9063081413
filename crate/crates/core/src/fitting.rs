//! Least-squares fitting used by the resonance and Rabi analyses.
//!
//! Two fitters live here: a damped (Levenberg-Marquardt) fit of an
//! amplitude Lorentzian for resonance curves, and a variable-projection
//! sinusoid fit for Rabi oscillation traces. Both are initialized by grid
//! search so callers never supply gradients or starting points.

use nalgebra::{Matrix3, Vector3};

use crate::{Error, Result};

/// Result of [`fit_lorentzian_samples`].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LorentzianFit {
    /// Center frequency (Hz).
    pub f0: f64,
    /// Quality factor f0 / FWHM.
    pub q: f64,
    /// Peak amplitude, same units as the response samples.
    pub amplitude: f64,
    /// Euclidean norm of the residual vector at the optimum.
    pub residual_norm: f64,
}

/// Amplitude (field-proportional) Lorentzian: A / sqrt(1 + 4 Q^2 (f/f0 - 1)^2).
pub fn amplitude_lorentzian(f: f64, f0: f64, q: f64, amplitude: f64) -> f64 {
    let u = f / f0 - 1.0;
    amplitude / (1.0 + 4.0 * q * q * u * u).sqrt()
}

/// Coarse initial guesses for the Q grid search.
const Q_INIT_GRID: [f64; 4] = [10.0, 30.0, 100.0, 300.0];

const LM_MAX_ITER: usize = 200;
const LM_TOL: f64 = 1e-12;

/// Fit an amplitude Lorentzian to (frequency, response) samples.
///
/// Initialization: f0 at the peak sample, amplitude at the peak response,
/// and Q from a small grid; the best grid start is polished by damped least
/// squares. Fails when the data carry no peak (constant response), when the
/// refinement does not converge, or when the fitted center leaves the
/// sampled frequency range.
pub fn fit_lorentzian_samples(freqs: &[f64], responses: &[f64]) -> Result<LorentzianFit> {
    if freqs.len() != responses.len() {
        return Err(Error::invalid("frequency/response length mismatch"));
    }
    if freqs.len() < 5 {
        return Err(Error::invalid(format!(
            "need at least 5 samples to fit, got {}",
            freqs.len()
        )));
    }
    if !freqs.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid("frequencies must be strictly ascending"));
    }
    if !responses.iter().all(|y| y.is_finite()) {
        return Err(Error::invalid("responses must be finite"));
    }

    let (peak_idx, peak) = responses
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let spread = responses.iter().fold(f64::INFINITY, |m, &y| m.min(y));
    if (peak - spread).abs() <= 1e-12 * peak.abs().max(1.0) {
        return Err(Error::FitFailure(
            "response is constant; no peak to fit".into(),
        ));
    }
    if *peak <= 0.0 {
        return Err(Error::FitFailure("peak response is not positive".into()));
    }

    let f0_init = freqs[peak_idx];
    let mut best: Option<(f64, Vector3<f64>)> = None;
    for q_init in Q_INIT_GRID {
        let start = Vector3::new(f0_init, q_init, *peak);
        if let Some((sse, p)) = levenberg_marquardt(freqs, responses, start) {
            if best.as_ref().map_or(true, |(b, _)| sse < *b) {
                best = Some((sse, p));
            }
        }
    }

    let (sse, p) = best.ok_or_else(|| {
        Error::FitFailure(format!(
            "no converged fit from any initialization (f0 init {f0_init:.6e} Hz, Q grid {Q_INIT_GRID:?})"
        ))
    })?;
    let (f0, q, amplitude) = (p[0], p[1].abs(), p[2]);
    let (fmin, fmax) = (freqs[0], freqs[freqs.len() - 1]);
    if !(fmin..=fmax).contains(&f0) {
        return Err(Error::FitFailure(format!(
            "fitted peak {f0:.6e} Hz lies outside the sampled range [{fmin:.6e}, {fmax:.6e}] Hz"
        )));
    }
    if !f0.is_finite() || !q.is_finite() || !amplitude.is_finite() {
        return Err(Error::FitFailure("fit diverged to non-finite parameters".into()));
    }
    Ok(LorentzianFit {
        f0,
        q,
        amplitude,
        residual_norm: sse.sqrt(),
    })
}

/// One LM run; returns (SSE, params) on convergence.
fn levenberg_marquardt(
    freqs: &[f64],
    responses: &[f64],
    mut p: Vector3<f64>,
) -> Option<(f64, Vector3<f64>)> {
    let n = freqs.len();
    let sse_of = |p: &Vector3<f64>| -> f64 {
        freqs
            .iter()
            .zip(responses)
            .map(|(&f, &y)| {
                let r = amplitude_lorentzian(f, p[0], p[1], p[2]) - y;
                r * r
            })
            .sum()
    };

    let mut sse = sse_of(&p);
    let mut lambda = 1e-3;
    for _ in 0..LM_MAX_ITER {
        // Normal equations J^T J and J^T r with the analytic Jacobian.
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        let (f0, q, a) = (p[0], p[1], p[2]);
        for i in 0..n {
            let f = freqs[i];
            let u = f / f0 - 1.0;
            let w = 1.0 + 4.0 * q * q * u * u;
            let w_sqrt = w.sqrt();
            let model = a / w_sqrt;
            let r = model - responses[i];
            let w_pow = w_sqrt * w; // w^(3/2)
            let d_f0 = 4.0 * a * q * q * u * f / (f0 * f0 * w_pow);
            let d_q = -4.0 * a * q * u * u / w_pow;
            let d_a = 1.0 / w_sqrt;
            let jrow = Vector3::new(d_f0, d_q, d_a);
            jtj += jrow * jrow.transpose();
            jtr += jrow * r;
        }

        let mut stepped = false;
        for _ in 0..20 {
            let mut damped = jtj;
            for k in 0..3 {
                damped[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let Some(inv) = damped.try_inverse() else {
                lambda *= 3.0;
                continue;
            };
            let delta = inv * jtr;
            let candidate = p - delta;
            if !(candidate[0].is_finite() && candidate[1].is_finite() && candidate[2].is_finite()) {
                lambda *= 3.0;
                continue;
            }
            let candidate_sse = sse_of(&candidate);
            if candidate_sse <= sse {
                let improvement = (sse - candidate_sse) / sse.max(1e-300);
                p = candidate;
                sse = candidate_sse;
                lambda = (lambda / 3.0).max(1e-12);
                stepped = true;
                if improvement < LM_TOL {
                    return Some((sse, p));
                }
                break;
            }
            lambda *= 3.0;
        }
        if !stepped {
            // Damping saturated: local minimum to working precision.
            return Some((sse, p));
        }
    }
    Some((sse, p))
}

/// Result of [`fit_rabi_frequency`].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SinusoidFit {
    /// Oscillation frequency (Hz).
    pub frequency: f64,
    /// Peak-to-mean oscillation amplitude.
    pub amplitude: f64,
    /// Constant offset.
    pub offset: f64,
    /// Phase of the cosine component (rad).
    pub phase: f64,
    /// Euclidean norm of the residual vector at the optimum.
    pub residual_norm: f64,
}

/// Fit `y = offset + amplitude * cos(2 pi f t + phase)` to a time trace.
///
/// The frequency is found by variable projection: for each trial f the
/// linear parameters are solved in closed form, then the best grid point is
/// refined by golden-section search. Suitable for Rabi traces spanning at
/// least one oscillation period.
pub fn fit_rabi_frequency(times: &[f64], values: &[f64]) -> Result<SinusoidFit> {
    if times.len() != values.len() {
        return Err(Error::invalid("time/value length mismatch"));
    }
    if times.len() < 8 {
        return Err(Error::invalid(format!(
            "need at least 8 samples to fit an oscillation, got {}",
            times.len()
        )));
    }
    if !times.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid("times must be strictly ascending"));
    }
    let span = times[times.len() - 1] - times[0];
    let min_dt = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    let f_low = 0.5 / span;
    let f_high = 0.5 / min_dt; // Nyquist for the densest sampling
    if f_high <= f_low {
        return Err(Error::invalid("time grid too short to resolve a frequency"));
    }

    // Rayleigh-resolution grid, then golden-section refinement around the
    // best cell.
    let step = 0.25 / span;
    let n_steps = ((f_high - f_low) / step).ceil() as usize;
    let mut best_f = f_low;
    let mut best_sse = f64::INFINITY;
    for k in 0..=n_steps {
        let f = (f_low + k as f64 * step).min(f_high);
        let (sse, _) = projected_sse(times, values, f);
        if sse < best_sse {
            best_sse = sse;
            best_f = f;
        }
    }

    let mut lo = (best_f - step).max(f_low);
    let mut hi = (best_f + step).min(f_high);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut f1 = hi - phi * (hi - lo);
    let mut f2 = lo + phi * (hi - lo);
    let mut s1 = projected_sse(times, values, f1).0;
    let mut s2 = projected_sse(times, values, f2).0;
    for _ in 0..80 {
        if s1 < s2 {
            hi = f2;
            f2 = f1;
            s2 = s1;
            f1 = hi - phi * (hi - lo);
            s1 = projected_sse(times, values, f1).0;
        } else {
            lo = f1;
            f1 = f2;
            s1 = s2;
            f2 = lo + phi * (hi - lo);
            s2 = projected_sse(times, values, f2).0;
        }
    }
    let frequency = 0.5 * (lo + hi);
    let (sse, coeffs) = projected_sse(times, values, frequency);
    let (offset, c_cos, c_sin) = (coeffs[0], coeffs[1], coeffs[2]);
    Ok(SinusoidFit {
        frequency,
        amplitude: c_cos.hypot(c_sin),
        offset,
        phase: (-c_sin).atan2(c_cos),
        residual_norm: sse.sqrt(),
    })
}

/// Linear least squares of y ~ c0 + c1 cos(2 pi f t) + c2 sin(2 pi f t).
fn projected_sse(times: &[f64], values: &[f64], f: f64) -> (f64, Vector3<f64>) {
    let omega = std::f64::consts::TAU * f;
    let mut ata = Matrix3::<f64>::zeros();
    let mut aty = Vector3::<f64>::zeros();
    for (&t, &y) in times.iter().zip(values) {
        let (s, c) = (omega * t).sin_cos();
        let row = Vector3::new(1.0, c, s);
        ata += row * row.transpose();
        aty += row * y;
    }
    // Tiny ridge keeps the solve well-posed when f is degenerate for the grid.
    for k in 0..3 {
        ata[(k, k)] += 1e-12;
    }
    let coeffs = ata.try_inverse().map(|inv| inv * aty).unwrap_or_default();
    let sse: f64 = times
        .iter()
        .zip(values)
        .map(|(&t, &y)| {
            let (s, c) = (omega * t).sin_cos();
            let r = coeffs[0] + coeffs[1] * c + coeffs[2] * s - y;
            r * r
        })
        .sum();
    (sse, coeffs)
}
