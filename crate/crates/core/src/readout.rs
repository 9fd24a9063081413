//! Quantum-jump trace synthesis and inference: a two-state Markov chain with
//! Poisson photon emissions, scaled forward-backward smoothing, Viterbi
//! decoding, Baum-Welch parameter estimation, two-Poissonian histogram
//! fitting, and dwell-time relaxation estimates.
//!
//! State 0 is the high-fluorescence level, state 1 the low one; every
//! argmax-style tie is resolved toward the high state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::{Error, Result};

/// Separability (lambda_high - lambda_low) / sqrt(lambda_high) above which
/// two Poisson levels count as resolvable.
pub const SEPARABILITY_THRESHOLD: f64 = 3.0;

const ROW_SUM_TOL: f64 = 1e-12;

/// Hidden level of the jump process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JumpState {
    High,
    Low,
}

impl JumpState {
    pub fn index(self) -> usize {
        match self {
            JumpState::High => 0,
            JumpState::Low => 1,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(JumpState::High),
            1 => Ok(JumpState::Low),
            other => Err(Error::invalid(format!("state index {other} out of range"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            JumpState::High => "high",
            JumpState::Low => "low",
        }
    }
}

impl std::fmt::Display for JumpState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two-state hidden Markov model with Poisson emissions per bin.
///
/// `transition[r][s]` is the per-bin probability of moving from state r to
/// state s; rows sum to 1. Equal emission means are allowed (the model
/// degenerates to an uninformative one) but the high mean never sits below
/// the low one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStatePoissonHmm {
    transition: [[f64; 2]; 2],
    lambda_high: f64,
    lambda_low: f64,
    initial: [f64; 2],
}

impl TwoStatePoissonHmm {
    pub fn new(
        transition: [[f64; 2]; 2],
        lambda_high: f64,
        lambda_low: f64,
        initial: [f64; 2],
    ) -> Result<Self> {
        for row in &transition {
            for p in row {
                if !(p.is_finite() && (0.0..=1.0).contains(p)) {
                    return Err(Error::invalid("transition entries must be in [0, 1]"));
                }
            }
            if ((row[0] + row[1]) - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::invalid("transition rows must sum to 1"));
            }
        }
        if !(lambda_low.is_finite() && lambda_low >= 0.0) {
            return Err(Error::invalid("lambda_low must be non-negative"));
        }
        if !(lambda_high.is_finite() && lambda_high >= lambda_low) {
            return Err(Error::invalid("lambda_high must be >= lambda_low"));
        }
        for p in &initial {
            if !(p.is_finite() && (0.0..=1.0).contains(p)) {
                return Err(Error::invalid("initial probabilities must be in [0, 1]"));
            }
        }
        if ((initial[0] + initial[1]) - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::invalid("initial distribution must sum to 1"));
        }
        Ok(TwoStatePoissonHmm {
            transition,
            lambda_high,
            lambda_low,
            initial,
        })
    }

    /// Model from per-state stay probabilities; the initial distribution is
    /// the stationary one (uniform when both states are absorbing).
    pub fn with_stay_probabilities(
        stay_high: f64,
        stay_low: f64,
        lambda_high: f64,
        lambda_low: f64,
    ) -> Result<Self> {
        for (name, p) in [("stay_high", stay_high), ("stay_low", stay_low)] {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::invalid(format!("{name} must be a probability")));
            }
        }
        let leave = (1.0 - stay_high) + (1.0 - stay_low);
        let initial = if leave > 0.0 {
            [(1.0 - stay_low) / leave, (1.0 - stay_high) / leave]
        } else {
            [0.5, 0.5]
        };
        TwoStatePoissonHmm::new(
            [
                [stay_high, 1.0 - stay_high],
                [1.0 - stay_low, stay_low],
            ],
            lambda_high,
            lambda_low,
            initial,
        )
    }

    /// Data-driven starting point for [`estimate_parameters`]: emission
    /// means from the 20th/80th count percentiles, stay probability 0.99.
    pub fn percentile_init(trace: &PhotonTrace) -> Result<Self> {
        let mut sorted = trace.counts.clone();
        sorted.sort_unstable();
        let pick = |q: f64| sorted[((sorted.len() - 1) as f64 * q).round() as usize] as f64;
        TwoStatePoissonHmm::with_stay_probabilities(0.99, 0.99, pick(0.8), pick(0.2))
    }

    pub fn transition(&self) -> [[f64; 2]; 2] {
        self.transition
    }

    pub fn lambda_high(&self) -> f64 {
        self.lambda_high
    }

    pub fn lambda_low(&self) -> f64 {
        self.lambda_low
    }

    pub fn initial(&self) -> [f64; 2] {
        self.initial
    }

    pub fn stay_probability(&self, state: JumpState) -> f64 {
        let i = state.index();
        self.transition[i][i]
    }

    fn lambda(&self, state: usize) -> f64 {
        if state == 0 {
            self.lambda_high
        } else {
            self.lambda_low
        }
    }
}

/// Binned photon counts, with the generating state sequence retained for
/// synthetic traces.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonTrace {
    pub counts: Vec<u64>,
    /// Bin duration (s).
    pub bin_duration: f64,
    /// Ground truth per bin; only synthetic traces carry it.
    pub truth: Option<Vec<JumpState>>,
}

impl PhotonTrace {
    pub fn new(counts: Vec<u64>, bin_duration: f64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("trace must have at least one bin"));
        }
        if !(bin_duration.is_finite() && bin_duration > 0.0) {
            return Err(Error::invalid("bin_duration must be positive"));
        }
        Ok(PhotonTrace {
            counts,
            bin_duration,
            truth: None,
        })
    }

    pub fn with_truth(mut self, truth: Vec<JumpState>) -> Result<Self> {
        if truth.len() != self.counts.len() {
            return Err(Error::invalid("truth length must match counts length"));
        }
        self.truth = Some(truth);
        Ok(self)
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }
}

fn sample_poisson(rng: &mut ChaCha8Rng, poisson: &Option<Poisson<f64>>) -> u64 {
    match poisson {
        Some(p) => p.sample(rng) as u64,
        None => 0,
    }
}

/// Sample a state path from the chain and Poisson counts per bin.
/// Deterministic per seed; a zero emission mean produces zero counts.
pub fn synthesize_trace(
    model: &TwoStatePoissonHmm,
    n_bins: usize,
    bin_duration: f64,
    seed: u64,
) -> Result<PhotonTrace> {
    if n_bins == 0 {
        return Err(Error::invalid("n_bins must be >= 1"));
    }
    if !(bin_duration.is_finite() && bin_duration > 0.0) {
        return Err(Error::invalid("bin_duration must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let emit = [model.lambda_high, model.lambda_low].map(|lam| {
        (lam > 0.0).then(|| Poisson::new(lam).expect("lambda is positive and finite"))
    });

    let mut counts = Vec::with_capacity(n_bins);
    let mut truth = Vec::with_capacity(n_bins);
    let mut state = usize::from(rng.random::<f64>() >= model.initial[0]);
    for _ in 0..n_bins {
        truth.push(JumpState::from_index(state)?);
        counts.push(sample_poisson(&mut rng, &emit[state]));
        state = usize::from(rng.random::<f64>() >= model.transition[state][0]);
    }
    PhotonTrace::new(counts, bin_duration)?.with_truth(truth)
}

/// ln(k!) for every k up to and including `max`.
fn ln_factorials(max: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity(max as usize + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for k in 1..=max {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Per-bin emission weights exp(ln p - shift), shifted so the larger state
/// weight is 1; keeps the scaled recursions in range for any counts.
struct Emissions {
    weights: Vec<[f64; 2]>,
    shifts: Vec<f64>,
}

impl Emissions {
    fn build(model: &TwoStatePoissonHmm, trace: &PhotonTrace) -> Result<Self> {
        let max = trace.counts.iter().copied().max().unwrap_or(0);
        let ln_fact = ln_factorials(max);
        let ln_pmf = |k: u64, lam: f64| -> f64 {
            if lam == 0.0 {
                if k == 0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            } else {
                k as f64 * lam.ln() - lam - ln_fact[k as usize]
            }
        };

        let mut weights = Vec::with_capacity(trace.counts.len());
        let mut shifts = Vec::with_capacity(trace.counts.len());
        for (bin, &k) in trace.counts.iter().enumerate() {
            let ln_h = ln_pmf(k, model.lambda(0));
            let ln_l = ln_pmf(k, model.lambda(1));
            let shift = ln_h.max(ln_l);
            if shift == f64::NEG_INFINITY {
                return Err(Error::ImpossibleTrace { bin });
            }
            weights.push([(ln_h - shift).exp(), (ln_l - shift).exp()]);
            shifts.push(shift);
        }
        Ok(Emissions { weights, shifts })
    }
}

/// Scaled forward pass: normalized alphas, per-bin scale factors, and the
/// total log-likelihood.
fn forward(
    model: &TwoStatePoissonHmm,
    emissions: &Emissions,
) -> Result<(Vec<[f64; 2]>, Vec<f64>, f64)> {
    let n = emissions.weights.len();
    let mut alphas = Vec::with_capacity(n);
    let mut scales = Vec::with_capacity(n);
    let mut log_likelihood = 0.0;

    let mut alpha = [0.0f64; 2];
    for t in 0..n {
        let w = emissions.weights[t];
        let mut next = [0.0f64; 2];
        for s in 0..2 {
            let mass = if t == 0 {
                model.initial[s]
            } else {
                alpha[0] * model.transition[0][s] + alpha[1] * model.transition[1][s]
            };
            next[s] = mass * w[s];
        }
        let scale = next[0] + next[1];
        if !(scale > 0.0) {
            return Err(Error::ImpossibleTrace { bin: t });
        }
        alpha = [next[0] / scale, next[1] / scale];
        alphas.push(alpha);
        scales.push(scale);
        log_likelihood += scale.ln() + emissions.shifts[t];
    }
    Ok((alphas, scales, log_likelihood))
}

/// Smoothed state posteriors per bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Posteriors {
    /// `per_bin[t] = [P(High | counts), P(Low | counts)]`.
    pub per_bin: Vec<[f64; 2]>,
    pub log_likelihood: f64,
}

/// Forward-backward smoothing with per-bin rescaling; stable for
/// million-bin traces.
pub fn forward_backward(model: &TwoStatePoissonHmm, trace: &PhotonTrace) -> Result<Posteriors> {
    let emissions = Emissions::build(model, trace)?;
    let (alphas, scales, log_likelihood) = forward(model, &emissions)?;
    let n = alphas.len();

    let mut per_bin = vec![[0.0f64; 2]; n];
    let mut beta = [1.0f64; 2];
    for t in (0..n).rev() {
        let gamma_raw = [alphas[t][0] * beta[0], alphas[t][1] * beta[1]];
        let norm = gamma_raw[0] + gamma_raw[1];
        per_bin[t] = [gamma_raw[0] / norm, gamma_raw[1] / norm];
        if t > 0 {
            let w = emissions.weights[t];
            let mut prev = [0.0f64; 2];
            for r in 0..2 {
                prev[r] = (model.transition[r][0] * w[0] * beta[0]
                    + model.transition[r][1] * w[1] * beta[1])
                    / scales[t];
            }
            beta = prev;
        }
    }
    Ok(Posteriors {
        per_bin,
        log_likelihood,
    })
}

/// Most likely state path (joint maximum); ties break toward High.
pub fn viterbi(model: &TwoStatePoissonHmm, trace: &PhotonTrace) -> Result<Vec<JumpState>> {
    let emissions = Emissions::build(model, trace)?;
    let n = emissions.weights.len();
    let ln = |p: f64| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY };

    let mut back = vec![[0usize; 2]; n];
    let mut score = [ln(model.initial[0]), ln(model.initial[1])];
    for s in 0..2 {
        score[s] += ln(emissions.weights[0][s]) + emissions.shifts[0];
    }
    let ln_t = [
        [ln(model.transition[0][0]), ln(model.transition[0][1])],
        [ln(model.transition[1][0]), ln(model.transition[1][1])],
    ];
    for t in 1..n {
        let mut next = [f64::NEG_INFINITY; 2];
        for s in 0..2 {
            let mut best_r = 0;
            let mut best = score[0] + ln_t[0][s];
            let candidate = score[1] + ln_t[1][s];
            if candidate > best {
                best = candidate;
                best_r = 1;
            }
            next[s] = best + ln(emissions.weights[t][s]) + emissions.shifts[t];
            back[t][s] = best_r;
        }
        score = next;
    }

    if score[0] == f64::NEG_INFINITY && score[1] == f64::NEG_INFINITY {
        return Err(Error::ImpossibleTrace { bin: n - 1 });
    }
    let mut state = usize::from(score[1] > score[0]);
    let mut path = vec![JumpState::High; n];
    path[n - 1] = JumpState::from_index(state)?;
    for t in (1..n).rev() {
        state = back[t][state];
        path[t - 1] = JumpState::from_index(state)?;
    }
    Ok(path)
}

/// Diagnostic flags raised during parameter estimation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct EmFlags {
    /// Initialization had equal means and was perturbed before running.
    pub degenerate_init_perturbed: bool,
    /// A fitted stay probability reached the 1 - 1/n_bins boundary.
    pub boundary_transition: bool,
}

/// Result of Baum-Welch estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct EmFit {
    pub model: TwoStatePoissonHmm,
    /// Log-likelihood of the returned model.
    pub log_likelihood: f64,
    /// Number of M-steps taken.
    pub iterations: usize,
    pub converged: bool,
    pub flags: EmFlags,
    /// Log-likelihood before each M-step plus the final value; non-decreasing.
    pub log_likelihood_trajectory: Vec<f64>,
}

const EM_MAX_ITERATIONS: usize = 500;
const EM_RELATIVE_TOL: f64 = 1e-9;

struct EStep {
    gamma_first: [f64; 2],
    gamma_sum: [f64; 2],
    gamma_count_sum: [f64; 2],
    xi_sum: [[f64; 2]; 2],
    log_likelihood: f64,
}

fn e_step(model: &TwoStatePoissonHmm, trace: &PhotonTrace) -> Result<EStep> {
    let emissions = Emissions::build(model, trace)?;
    let (alphas, scales, log_likelihood) = forward(model, &emissions)?;
    let n = alphas.len();

    let mut acc = EStep {
        gamma_first: [0.0; 2],
        gamma_sum: [0.0; 2],
        gamma_count_sum: [0.0; 2],
        xi_sum: [[0.0; 2]; 2],
        log_likelihood,
    };
    let mut beta = [1.0f64; 2];
    for t in (0..n).rev() {
        let gamma_raw = [alphas[t][0] * beta[0], alphas[t][1] * beta[1]];
        let norm = gamma_raw[0] + gamma_raw[1];
        let gamma = [gamma_raw[0] / norm, gamma_raw[1] / norm];
        let k = trace.counts[t] as f64;
        for s in 0..2 {
            acc.gamma_sum[s] += gamma[s];
            acc.gamma_count_sum[s] += gamma[s] * k;
        }
        if t == 0 {
            acc.gamma_first = gamma;
        }
        if t > 0 {
            let w = emissions.weights[t];
            let mut prev = [0.0f64; 2];
            for r in 0..2 {
                for s in 0..2 {
                    acc.xi_sum[r][s] +=
                        alphas[t - 1][r] * model.transition[r][s] * w[s] * beta[s] / scales[t];
                }
                prev[r] = (model.transition[r][0] * w[0] * beta[0]
                    + model.transition[r][1] * w[1] * beta[1])
                    / scales[t];
            }
            beta = prev;
        }
    }
    Ok(acc)
}

fn m_step(previous: &TwoStatePoissonHmm, stats: &EStep) -> TwoStatePoissonHmm {
    let mut transition = previous.transition;
    for r in 0..2 {
        let row_sum = stats.xi_sum[r][0] + stats.xi_sum[r][1];
        if row_sum > 0.0 {
            transition[r] = [stats.xi_sum[r][0] / row_sum, stats.xi_sum[r][1] / row_sum];
        }
    }
    let mut lambda = [previous.lambda_high, previous.lambda_low];
    for s in 0..2 {
        if stats.gamma_sum[s] > 0.0 {
            lambda[s] = stats.gamma_count_sum[s] / stats.gamma_sum[s];
        }
    }
    let norm = stats.gamma_first[0] + stats.gamma_first[1];
    let mut initial = [stats.gamma_first[0] / norm, stats.gamma_first[1] / norm];

    // Canonical order: state 0 keeps the larger mean.
    if lambda[0] < lambda[1] {
        lambda.swap(0, 1);
        initial.swap(0, 1);
        transition = [
            [transition[1][1], transition[1][0]],
            [transition[0][1], transition[0][0]],
        ];
    }
    TwoStatePoissonHmm {
        transition,
        lambda_high: lambda[0],
        lambda_low: lambda[1],
        initial,
    }
}

/// Baum-Welch estimation from an initial model.
///
/// Stops when the relative log-likelihood improvement drops below 1e-9 or
/// after 500 M-steps. The trajectory is monitored; a decrease beyond the
/// numerical noise floor indicates a broken E/M step and panics in debug
/// builds.
pub fn estimate_parameters(trace: &PhotonTrace, init: &TwoStatePoissonHmm) -> Result<EmFit> {
    if trace.n_bins() < 100 {
        return Err(Error::InsufficientStatistics(format!(
            "parameter estimation needs >= 100 bins, got {}",
            trace.n_bins()
        )));
    }
    let mut flags = EmFlags::default();
    let mut model = *init;
    if model.lambda_high - model.lambda_low <= 1e-12 * model.lambda_high.max(1.0) {
        flags.degenerate_init_perturbed = true;
        model.lambda_high = model.lambda_high * 1.1 + 1.0;
        model.lambda_low *= 0.9;
    }

    let mut trajectory: Vec<f64> = Vec::new();
    let mut converged = false;
    for iteration in 0..=EM_MAX_ITERATIONS {
        let stats = e_step(&model, trace)?;
        if let Some(&prev) = trajectory.last() {
            debug_assert!(
                stats.log_likelihood >= prev - 1e-8 * prev.abs().max(1.0),
                "EM log-likelihood decreased: {prev} -> {}",
                stats.log_likelihood
            );
        }
        trajectory.push(stats.log_likelihood);
        if let [.., prev, last] = trajectory[..] {
            if (last - prev).abs() <= EM_RELATIVE_TOL * prev.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if iteration == EM_MAX_ITERATIONS {
            break;
        }
        model = m_step(&model, &stats);
    }

    let boundary = 1.0 - 1.0 / trace.n_bins() as f64;
    flags.boundary_transition = model.transition[0][0] >= boundary
        || model.transition[1][1] >= boundary;

    Ok(EmFit {
        model,
        log_likelihood: *trajectory.last().expect("at least one E-step ran"),
        iterations: trajectory.len() - 1,
        converged,
        flags,
        log_likelihood_trajectory: trajectory,
    })
}

/// Two-component Poisson mixture fitted to the count histogram.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HistogramFit {
    pub weight_high: f64,
    pub weight_low: f64,
    pub lambda_high: f64,
    pub lambda_low: f64,
    /// (lambda_high - lambda_low) / sqrt(lambda_high).
    pub separability: f64,
    /// separability > [`SEPARABILITY_THRESHOLD`].
    pub separable: bool,
    /// Pearson statistic over pooled histogram cells (expected >= 5).
    pub chi_square_per_dof: f64,
}

/// Maximum-likelihood two-Poissonian fit of the count histogram, label order
/// canonicalized to lambda_high >= lambda_low.
pub fn fit_two_poissonians(trace: &PhotonTrace) -> Result<HistogramFit> {
    if trace.n_bins() < 100 {
        return Err(Error::InsufficientStatistics(format!(
            "histogram fitting needs >= 100 bins, got {}",
            trace.n_bins()
        )));
    }
    let max = *trace.counts.iter().max().expect("non-empty") as usize;
    let mut histogram = vec![0.0f64; max + 1];
    for &k in &trace.counts {
        histogram[k as usize] += 1.0;
    }
    let n = trace.n_bins() as f64;
    let ln_fact = ln_factorials(max as u64);
    let ln_pmf = |k: usize, lam: f64| -> f64 {
        if lam <= 0.0 {
            if k == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            k as f64 * lam.ln() - lam - ln_fact[k]
        }
    };

    let mut sorted = trace.counts.clone();
    sorted.sort_unstable();
    let pick = |q: f64| sorted[((sorted.len() - 1) as f64 * q).round() as usize] as f64;
    let mut lambda = [pick(0.8), pick(0.2)];
    if lambda[0] - lambda[1] <= 1e-12 * lambda[0].max(1.0) {
        lambda = [lambda[0] * 1.1 + 1.0, lambda[1] * 0.9];
    }
    let mut weight = [0.5f64, 0.5];

    let mut prev_ll = f64::NEG_INFINITY;
    for _ in 0..500 {
        let mut resp_sum = [0.0f64; 2];
        let mut resp_count = [0.0f64; 2];
        let mut ll = 0.0;
        for (k, &h) in histogram.iter().enumerate() {
            if h == 0.0 {
                continue;
            }
            let a = weight[0].ln() + ln_pmf(k, lambda[0]);
            let b = weight[1].ln() + ln_pmf(k, lambda[1]);
            let m = a.max(b);
            let (ea, eb) = ((a - m).exp(), (b - m).exp());
            let denom = ea + eb;
            ll += h * (m + denom.ln());
            let r_high = ea / denom;
            resp_sum[0] += h * r_high;
            resp_sum[1] += h * (1.0 - r_high);
            resp_count[0] += h * r_high * k as f64;
            resp_count[1] += h * (1.0 - r_high) * k as f64;
        }
        for c in 0..2 {
            weight[c] = resp_sum[c] / n;
            if resp_sum[c] > 0.0 {
                lambda[c] = resp_count[c] / resp_sum[c];
            }
        }
        if (ll - prev_ll).abs() <= 1e-10 * ll.abs().max(1.0) {
            break;
        }
        prev_ll = ll;
    }

    if lambda[0] < lambda[1] {
        lambda.swap(0, 1);
        weight.swap(0, 1);
    }
    let separability = if lambda[0] > 0.0 {
        (lambda[0] - lambda[1]) / lambda[0].sqrt()
    } else {
        0.0
    };

    // Pearson chi-square over cells pooled to expected >= 5; the open tail
    // beyond the largest observed count folds into the final cell.
    let mixture_pmf = |k: usize| -> f64 {
        let a = ln_pmf(k, lambda[0]);
        let b = ln_pmf(k, lambda[1]);
        weight[0] * a.exp() + weight[1] * b.exp()
    };
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut observed = 0.0;
    let mut expected = 0.0;
    for (k, &h) in histogram.iter().enumerate() {
        observed += h;
        expected += n * mixture_pmf(k);
        if expected >= 5.0 {
            cells.push((observed, expected));
            observed = 0.0;
            expected = 0.0;
        }
    }
    let tail = n - cells.iter().map(|c| c.1).sum::<f64>() - expected;
    expected += tail.max(0.0);
    match cells.last_mut() {
        Some(last) if expected < 5.0 => {
            last.0 += observed;
            last.1 += expected;
        }
        _ => cells.push((observed, expected)),
    }
    let chi_square: f64 = cells
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = cells.len().saturating_sub(4).max(1) as f64;

    Ok(HistogramFit {
        weight_high: weight[0],
        weight_low: weight[1],
        lambda_high: lambda[0],
        lambda_low: lambda[1],
        separability,
        separable: separability > SEPARABILITY_THRESHOLD,
        chi_square_per_dof: chi_square / dof,
    })
}

/// Collapse a state sequence into (state, run length) pairs.
pub fn run_length_encode(states: &[JumpState]) -> Vec<(JumpState, usize)> {
    let mut runs: Vec<(JumpState, usize)> = Vec::new();
    for &s in states {
        match runs.last_mut() {
            Some((state, len)) if *state == s => *len += 1,
            _ => runs.push((s, 1)),
        }
    }
    runs
}

/// Mean dwell time of one state with a 68% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DwellEstimate {
    /// Mean dwell duration (s).
    pub t1: f64,
    /// t1 * (1 -+ 1/sqrt(n_segments)).
    pub ci68: (f64, f64),
    pub n_segments: usize,
}

/// Dwell-time estimates for both states.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DwellTimes {
    pub high: DwellEstimate,
    pub low: DwellEstimate,
}

const MIN_DWELL_SEGMENTS: usize = 10;

/// Exponential-mean dwell times per state from a decoded state sequence.
///
/// The first and last runs are censored by the trace boundaries and are
/// dropped; each state needs at least 10 complete segments.
pub fn dwell_time_t1(states: &[JumpState], bin_duration: f64) -> Result<DwellTimes> {
    if !(bin_duration.is_finite() && bin_duration > 0.0) {
        return Err(Error::invalid("bin_duration must be positive"));
    }
    let runs = run_length_encode(states);
    if runs.len() < 3 {
        return Err(Error::InsufficientStatistics(
            "state sequence has no complete dwell segments".into(),
        ));
    }
    let interior = &runs[1..runs.len() - 1];

    let estimate = |state: JumpState| -> Result<DwellEstimate> {
        let lengths: Vec<f64> = interior
            .iter()
            .filter(|(s, _)| *s == state)
            .map(|&(_, len)| len as f64)
            .collect();
        if lengths.len() < MIN_DWELL_SEGMENTS {
            return Err(Error::InsufficientStatistics(format!(
                "{} complete {} segments, need {}",
                lengths.len(),
                state,
                MIN_DWELL_SEGMENTS
            )));
        }
        let n = lengths.len() as f64;
        let t1 = lengths.iter().sum::<f64>() / n * bin_duration;
        let half_width = t1 / n.sqrt();
        Ok(DwellEstimate {
            t1,
            ci68: (t1 - half_width, t1 + half_width),
            n_segments: lengths.len(),
        })
    };

    Ok(DwellTimes {
        high: estimate(JumpState::High)?,
        low: estimate(JumpState::Low)?,
    })
}
