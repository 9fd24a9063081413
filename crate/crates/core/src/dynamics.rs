//! Pulse-sequence observables in the rotating-wave approximation: two-level
//! Rabi flopping per addressed transition, pulsed ODMR spectra, selective
//! nuclear-spin readout (CNOT mapping plus repetitive fluorescence
//! collection), flip-rate field scaling, and NMR scans.
//!
//! The full 9x9 Hamiltonian only enters through its transition table; each
//! line is then driven as an independent two-level system. ODMR spectra
//! average over an unpolarized nucleus (1/3 population per hyperfine branch),
//! while NMR scans assume the nucleus was initialized by measurement and
//! render each line at full strength.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::spin_model::{
    build_hamiltonian, transitions, NvParameters, StaticField, TransitionKind,
};
use crate::{Error, Result};

/// A coherently driven two-level system in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenTwoLevel {
    /// Drive frequency minus transition frequency (Hz).
    pub detuning: f64,
    /// On-resonance Rabi frequency (Hz).
    pub rabi_frequency: f64,
    /// Drive duration (s).
    pub duration: f64,
}

impl DrivenTwoLevel {
    pub fn new(detuning: f64, rabi_frequency: f64, duration: f64) -> Result<Self> {
        let d = DrivenTwoLevel {
            detuning,
            rabi_frequency,
            duration,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.detuning.is_finite() {
            return Err(Error::invalid("detuning must be finite"));
        }
        if !(self.rabi_frequency.is_finite() && self.rabi_frequency >= 0.0) {
            return Err(Error::invalid("rabi_frequency must be non-negative"));
        }
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(Error::invalid("duration must be non-negative"));
        }
        Ok(())
    }
}

/// On-resonance Rabi frequency produced by a linearly polarized transverse
/// field of amplitude `b1`: Omega = gamma_e * b1 / sqrt(2). The sqrt(2) is
/// the spin-1 matrix element between m_S = 0 and m_S = -1.
pub fn rabi_from_b1(params: &NvParameters, b1: f64) -> Result<f64> {
    params.validate()?;
    if !(b1.is_finite() && b1 >= 0.0) {
        return Err(Error::invalid("b1 must be non-negative"));
    }
    Ok(params.gamma_e * b1 / std::f64::consts::SQRT_2)
}

/// Flip probability of a driven two-level system:
/// P = Omega^2/(Omega^2 + Delta^2) * sin^2(pi * sqrt(Omega^2 + Delta^2) * t).
///
/// The undriven, resonant corner (Omega = Delta = 0) returns 0.
pub fn rabi_population(d: &DrivenTwoLevel) -> f64 {
    population(d.detuning, d.rabi_frequency, d.duration)
}

fn population(detuning: f64, rabi: f64, t: f64) -> f64 {
    if rabi == 0.0 {
        return 0.0;
    }
    let generalized = rabi.hypot(detuning);
    let envelope = (rabi / generalized).powi(2);
    let phase = (std::f64::consts::PI * generalized * t).sin();
    envelope * phase * phase
}

/// Resonant flip probability over a time grid; the trace oscillates at the
/// Rabi frequency (sin^2(pi f t) has cosine frequency f).
pub fn rabi_trace(rabi_frequency: f64, detuning: f64, times: &[f64]) -> Result<Vec<f64>> {
    if !(rabi_frequency.is_finite() && rabi_frequency >= 0.0) {
        return Err(Error::invalid("rabi_frequency must be non-negative"));
    }
    if !detuning.is_finite() {
        return Err(Error::invalid("detuning must be finite"));
    }
    validate_grid(times, "time")?;
    if times[0] < 0.0 {
        return Err(Error::invalid("times must be non-negative"));
    }
    Ok(times
        .iter()
        .map(|&t| population(detuning, rabi_frequency, t))
        .collect())
}

/// One element of a measurement sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseElement {
    /// Green laser pulse: polarizes the electron spin and collects photons.
    Laser { duration: f64 },
    /// Microwave pulse on an electron transition.
    MwPulse { frequency: f64, b1: f64, duration: f64 },
    /// Radio-frequency pulse on a nuclear transition.
    RfPulse { frequency: f64, rabi: f64, duration: f64 },
    Wait { duration: f64 },
}

impl PulseElement {
    pub fn duration(&self) -> f64 {
        match *self {
            PulseElement::Laser { duration }
            | PulseElement::MwPulse { duration, .. }
            | PulseElement::RfPulse { duration, .. }
            | PulseElement::Wait { duration } => duration,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.duration();
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::invalid("pulse durations must be non-negative"));
        }
        match *self {
            PulseElement::MwPulse { frequency, b1, .. } => {
                if !(frequency.is_finite() && frequency > 0.0) {
                    return Err(Error::invalid("mw frequency must be positive"));
                }
                if !(b1.is_finite() && b1 >= 0.0) {
                    return Err(Error::invalid("mw b1 must be non-negative"));
                }
            }
            PulseElement::RfPulse { frequency, rabi, .. } => {
                if !(frequency.is_finite() && frequency > 0.0) {
                    return Err(Error::invalid("rf frequency must be positive"));
                }
                if !(rabi.is_finite() && rabi >= 0.0) {
                    return Err(Error::invalid("rf rabi must be non-negative"));
                }
            }
            PulseElement::Laser { .. } | PulseElement::Wait { .. } => {}
        }
        Ok(())
    }
}

/// Ordered, non-empty list of pulse elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    elements: Vec<PulseElement>,
}

impl PulseSequence {
    pub fn new(elements: Vec<PulseElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("pulse sequence must be non-empty"));
        }
        for e in &elements {
            e.validate()?;
        }
        Ok(PulseSequence { elements })
    }

    pub fn elements(&self) -> &[PulseElement] {
        &self.elements
    }

    pub fn total_duration(&self) -> f64 {
        self.elements.iter().map(PulseElement::duration).sum()
    }

    /// Repetitive single-shot readout block: `n_repeats` rounds of a
    /// state-selective microwave pi pulse followed by a laser readout window.
    pub fn selective_readout(
        n_repeats: u64,
        mw_frequency: f64,
        b1: f64,
        pi_duration: f64,
        readout_window: f64,
    ) -> Result<Self> {
        if n_repeats == 0 {
            return Err(Error::invalid("n_repeats must be >= 1"));
        }
        let mut elements = Vec::with_capacity(2 * n_repeats as usize);
        for _ in 0..n_repeats {
            elements.push(PulseElement::MwPulse {
                frequency: mw_frequency,
                b1,
                duration: pi_duration,
            });
            elements.push(PulseElement::Laser {
                duration: readout_window,
            });
        }
        PulseSequence::new(elements)
    }
}

/// Photon-count model for spin-state readout. Default rates are chosen so
/// that a 2000-repeat readout yields two cleanly separable Poisson levels
/// (means 120 and 39.6).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluorescenceModel {
    /// Photon rate with the electron in m_S = 0 (counts/s).
    pub rate_bright: f64,
    /// Photon rate with the electron in m_S = +-1 (counts/s).
    pub rate_dark: f64,
    /// Photon collection window per readout (s).
    pub readout_window: f64,
    /// Probability that the laser leaves the electron in m_S = 0.
    pub polarization_fidelity: f64,
}

impl Default for FluorescenceModel {
    fn default() -> Self {
        FluorescenceModel {
            rate_bright: 2.0e5,
            rate_dark: 6.6e4,
            readout_window: 3.0e-7,
            polarization_fidelity: 0.98,
        }
    }
}

impl FluorescenceModel {
    /// Equal bright and dark rates are allowed and give zero contrast.
    pub fn validate(&self) -> Result<()> {
        if !(self.rate_dark.is_finite() && self.rate_dark >= 0.0) {
            return Err(Error::invalid("rate_dark must be non-negative"));
        }
        if !(self.rate_bright.is_finite() && self.rate_bright >= self.rate_dark) {
            return Err(Error::invalid("rate_bright must be >= rate_dark"));
        }
        if !(self.readout_window.is_finite() && self.readout_window > 0.0) {
            return Err(Error::invalid("readout_window must be positive"));
        }
        if !(0.5..=1.0).contains(&self.polarization_fidelity) {
            return Err(Error::invalid("polarization_fidelity must be in [0.5, 1]"));
        }
        Ok(())
    }

    /// Relative fluorescence drop for a fully flipped spin.
    pub fn readout_contrast(&self) -> f64 {
        if self.rate_bright == 0.0 {
            return 0.0;
        }
        self.polarization_fidelity * (1.0 - self.rate_dark / self.rate_bright)
    }

    /// Expected summed counts over `n_repeats` readout windows.
    pub fn mean_counts(&self, bright: bool, n_repeats: u64) -> f64 {
        let rate = if bright { self.rate_bright } else { self.rate_dark };
        n_repeats as f64 * rate * self.readout_window
    }
}

fn validate_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(format!("{what} grid must be non-empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{what} grid must be finite")));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid(format!(
            "{what} grid must be strictly ascending"
        )));
    }
    Ok(())
}

/// Pulsed ODMR spectrum: normalized fluorescence over a microwave frequency
/// grid, baseline 1, with a dip at every electron transition.
///
/// Each line is driven with Rabi frequency gamma_e * b1 * sqrt(w) where w is
/// its dipole weight, and contributes its flip probability weighted by the
/// 1/3 population of its nuclear branch. Dip depth on resonance is therefore
/// readout_contrast/3 per resolved hyperfine line (times the pulse-length
/// dependent flip probability).
pub fn odmr_spectrum(
    params: &NvParameters,
    field: &StaticField,
    fl: &FluorescenceModel,
    mw_freq_grid: &[f64],
    b1: f64,
    pulse_len: f64,
) -> Result<Vec<f64>> {
    fl.validate()?;
    validate_grid(mw_freq_grid, "frequency")?;
    if !(b1.is_finite() && b1 >= 0.0) {
        return Err(Error::invalid("b1 must be non-negative"));
    }
    if !(pulse_len.is_finite() && pulse_len >= 0.0) {
        return Err(Error::invalid("pulse_len must be non-negative"));
    }

    let h = build_hamiltonian(params, field)?;
    let table = transitions(&h, TransitionKind::Electron)?;
    let contrast = fl.readout_contrast();

    let lines: Vec<(f64, f64)> = table
        .transitions
        .iter()
        .map(|t| (t.frequency, params.gamma_e * b1 * t.dipole_weight.sqrt()))
        .collect();

    Ok(mw_freq_grid
        .iter()
        .map(|&f| {
            let flipped: f64 = lines
                .iter()
                .map(|&(f_line, omega)| population(f - f_line, omega, pulse_len) / 3.0)
                .sum();
            1.0 - contrast * flipped.min(1.0)
        })
        .collect())
}

/// Nuclear spin projection used by the selective readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NuclearState {
    MinusOne,
    Zero,
    PlusOne,
}

impl NuclearState {
    pub fn m_i(self) -> i8 {
        match self {
            NuclearState::MinusOne => -1,
            NuclearState::Zero => 0,
            NuclearState::PlusOne => 1,
        }
    }

    pub fn from_m_i(m_i: i8) -> Result<Self> {
        match m_i {
            -1 => Ok(NuclearState::MinusOne),
            0 => Ok(NuclearState::Zero),
            1 => Ok(NuclearState::PlusOne),
            other => Err(Error::invalid(format!(
                "nuclear projection must be -1, 0 or 1, got {other}"
            ))),
        }
    }
}

/// Expected summed counts of a repetitive selective readout.
///
/// The CNOT mapping flips the electron exactly when the nuclear spin sits on
/// the addressed hyperfine line, so an addressed nucleus reads out dark and
/// any other state reads out bright.
pub fn nuclear_readout_mean(
    fl: &FluorescenceModel,
    n_repeats: u64,
    nuclear_state: NuclearState,
    addressed: NuclearState,
) -> Result<f64> {
    fl.validate()?;
    if n_repeats == 0 {
        return Err(Error::invalid("n_repeats must be >= 1"));
    }
    Ok(fl.mean_counts(nuclear_state != addressed, n_repeats))
}

/// One Poisson-distributed readout shot; see [`nuclear_readout_mean`] for
/// the mean. Identical seeds give identical counts.
pub fn nuclear_readout_shot(
    fl: &FluorescenceModel,
    n_repeats: u64,
    nuclear_state: NuclearState,
    addressed: NuclearState,
    seed: u64,
) -> Result<u64> {
    let mean = nuclear_readout_mean(fl, n_repeats, nuclear_state, addressed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_poisson(&mut rng, mean))
}

fn sample_poisson(rng: &mut ChaCha8Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let poisson = Poisson::new(lambda).expect("lambda is positive and finite");
    poisson.sample(rng) as u64
}

/// Relative electron-nuclear flip-flop probability per readout when moving
/// from `b_ref` to `b`: (b_ref/b)^2. The mixing amplitude scales as 1/B, the
/// probability quadratically.
pub fn nuclear_flip_probability_scaling(b_ref: f64, b: f64) -> Result<f64> {
    for (name, v) in [("b_ref", b_ref), ("b", b)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!("{name} must be positive")));
        }
    }
    Ok((b_ref / b).powi(2))
}

/// NMR scan: nuclear flip probability over an RF frequency grid, driving the
/// nuclear transitions of the m_S = 0 manifold.
///
/// `rf_rabi` is the on-resonance Rabi frequency of an ideal Delta m_I = +-1
/// line; each line is scaled by sqrt(2 w) so mixing corrections carry
/// through. The nucleus is assumed initialized by measurement, so lines are
/// rendered at full strength rather than population-averaged.
pub fn nmr_scan(
    params: &NvParameters,
    field: &StaticField,
    rf_grid: &[f64],
    rf_rabi: f64,
    pulse_len: f64,
) -> Result<Vec<f64>> {
    validate_grid(rf_grid, "frequency")?;
    if !(rf_rabi.is_finite() && rf_rabi >= 0.0) {
        return Err(Error::invalid("rf_rabi must be non-negative"));
    }
    if !(pulse_len.is_finite() && pulse_len >= 0.0) {
        return Err(Error::invalid("pulse_len must be non-negative"));
    }

    let h = build_hamiltonian(params, field)?;
    let table = transitions(&h, TransitionKind::Nuclear)?;
    let lines: Vec<(f64, f64)> = table
        .within_electron_manifold(0)
        .iter()
        .map(|t| (t.frequency, rf_rabi * (2.0 * t.dipole_weight).sqrt()))
        .collect();

    Ok(rf_grid
        .iter()
        .map(|&f| {
            let p: f64 = lines
                .iter()
                .map(|&(f_line, omega)| population(f - f_line, omega, pulse_len))
                .sum();
            p.min(1.0)
        })
        .collect())
}
