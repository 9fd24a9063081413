//! Python bindings: resonator design numbers, spin transition tables,
//! spectra, and the photon-trace pipeline.
//!
//! Scalar results come back as floats, structured results as plain dicts,
//! and the stateful pieces (spin parameters, fluorescence model, trace,
//! two-state model) as small classes mirroring the Rust types. All errors
//! surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use odmr::{dynamics, fitting, readout, resonator, spin_model};

fn err(e: odmr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Spin system couplings; construct with keyword overrides of the measured
/// defaults.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct NvParameters {
    inner: spin_model::NvParameters,
}

#[pymethods]
impl NvParameters {
    #[new]
    #[pyo3(signature = (d_zfs_hz=None, gamma_e_hz_per_tesla=None, gamma_n_hz_per_tesla=None, a_par_hz=None, a_perp_hz=None, q_quad_hz=None))]
    fn new(
        d_zfs_hz: Option<f64>,
        gamma_e_hz_per_tesla: Option<f64>,
        gamma_n_hz_per_tesla: Option<f64>,
        a_par_hz: Option<f64>,
        a_perp_hz: Option<f64>,
        q_quad_hz: Option<f64>,
    ) -> PyResult<Self> {
        let d = spin_model::NvParameters::default();
        let inner = spin_model::NvParameters {
            d_zfs: d_zfs_hz.unwrap_or(d.d_zfs),
            gamma_e: gamma_e_hz_per_tesla.unwrap_or(d.gamma_e),
            gamma_n: gamma_n_hz_per_tesla.unwrap_or(d.gamma_n),
            a_par: a_par_hz.unwrap_or(d.a_par),
            a_perp: a_perp_hz.unwrap_or(d.a_perp),
            q_quad: q_quad_hz.unwrap_or(d.q_quad),
        };
        inner.validate().map_err(err)?;
        Ok(NvParameters { inner })
    }

    /// Copy with every nuclear coupling zeroed.
    fn electron_only(&self) -> Self {
        NvParameters {
            inner: self.inner.electron_only(),
        }
    }

    #[getter]
    fn d_zfs_hz(&self) -> f64 {
        self.inner.d_zfs
    }
    #[getter]
    fn gamma_e_hz_per_tesla(&self) -> f64 {
        self.inner.gamma_e
    }
    #[getter]
    fn gamma_n_hz_per_tesla(&self) -> f64 {
        self.inner.gamma_n
    }
    #[getter]
    fn a_par_hz(&self) -> f64 {
        self.inner.a_par
    }
    #[getter]
    fn a_perp_hz(&self) -> f64 {
        self.inner.a_perp
    }
    #[getter]
    fn q_quad_hz(&self) -> f64 {
        self.inner.q_quad
    }

    fn __repr__(&self) -> String {
        format!(
            "NvParameters(d_zfs_hz={}, gamma_e_hz_per_tesla={})",
            self.inner.d_zfs, self.inner.gamma_e
        )
    }
}

/// Static magnetic field in spherical coordinates about the spin axis.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct StaticField {
    inner: spin_model::StaticField,
}

#[pymethods]
impl StaticField {
    #[new]
    #[pyo3(signature = (magnitude_tesla, polar_rad=0.0, azimuth_rad=0.0))]
    fn new(magnitude_tesla: f64, polar_rad: f64, azimuth_rad: f64) -> PyResult<Self> {
        let inner = spin_model::StaticField {
            magnitude: magnitude_tesla,
            polar_angle: polar_rad,
            azimuth: azimuth_rad,
        };
        inner.validate().map_err(err)?;
        Ok(StaticField { inner })
    }

    #[getter]
    fn magnitude_tesla(&self) -> f64 {
        self.inner.magnitude
    }
    #[getter]
    fn polar_rad(&self) -> f64 {
        self.inner.polar_angle
    }
    #[getter]
    fn azimuth_rad(&self) -> f64 {
        self.inner.azimuth
    }

    fn __repr__(&self) -> String {
        format!(
            "StaticField(magnitude_tesla={}, polar_rad={})",
            self.inner.magnitude, self.inner.polar_angle
        )
    }
}

/// Spin-dependent fluorescence response of the optical readout.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct FluorescenceModel {
    inner: dynamics::FluorescenceModel,
}

#[pymethods]
impl FluorescenceModel {
    #[new]
    #[pyo3(signature = (rate_bright_cps=None, rate_dark_cps=None, readout_window_seconds=None, polarization_fidelity=None))]
    fn new(
        rate_bright_cps: Option<f64>,
        rate_dark_cps: Option<f64>,
        readout_window_seconds: Option<f64>,
        polarization_fidelity: Option<f64>,
    ) -> PyResult<Self> {
        let d = dynamics::FluorescenceModel::default();
        let inner = dynamics::FluorescenceModel {
            rate_bright: rate_bright_cps.unwrap_or(d.rate_bright),
            rate_dark: rate_dark_cps.unwrap_or(d.rate_dark),
            readout_window: readout_window_seconds.unwrap_or(d.readout_window),
            polarization_fidelity: polarization_fidelity.unwrap_or(d.polarization_fidelity),
        };
        inner.validate().map_err(err)?;
        Ok(FluorescenceModel { inner })
    }

    /// Fractional fluorescence drop of a fully flipped spin.
    fn readout_contrast(&self) -> f64 {
        self.inner.readout_contrast()
    }

    /// Mean aggregated counts over `n_repeats` readouts.
    fn mean_counts(&self, bright: bool, n_repeats: u64) -> f64 {
        self.inner.mean_counts(bright, n_repeats)
    }

    #[getter]
    fn rate_bright_cps(&self) -> f64 {
        self.inner.rate_bright
    }
    #[getter]
    fn rate_dark_cps(&self) -> f64 {
        self.inner.rate_dark
    }
    #[getter]
    fn readout_window_seconds(&self) -> f64 {
        self.inner.readout_window
    }
    #[getter]
    fn polarization_fidelity(&self) -> f64 {
        self.inner.polarization_fidelity
    }
}

/// Binned photon counts with an optional ground-truth state sequence.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct PhotonTrace {
    inner: readout::PhotonTrace,
}

#[pymethods]
impl PhotonTrace {
    #[new]
    fn new(counts: Vec<u64>, bin_seconds: f64) -> PyResult<Self> {
        Ok(PhotonTrace {
            inner: readout::PhotonTrace::new(counts, bin_seconds).map_err(err)?,
        })
    }

    #[getter]
    fn counts(&self) -> Vec<u64> {
        self.inner.counts.clone()
    }
    #[getter]
    fn bin_seconds(&self) -> f64 {
        self.inner.bin_duration
    }
    /// Generating states as "high"/"low", for synthetic traces only.
    #[getter]
    fn truth(&self) -> Option<Vec<&'static str>> {
        self.inner
            .truth
            .as_ref()
            .map(|states| states.iter().map(|s| s.as_str()).collect())
    }

    fn n_bins(&self) -> usize {
        self.inner.n_bins()
    }

    fn __len__(&self) -> usize {
        self.inner.n_bins()
    }

    fn __repr__(&self) -> String {
        format!(
            "PhotonTrace(n_bins={}, bin_seconds={})",
            self.inner.n_bins(),
            self.inner.bin_duration
        )
    }
}

/// Two-state hidden Markov model with Poisson count emissions.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct TwoStatePoissonHmm {
    inner: readout::TwoStatePoissonHmm,
}

#[pymethods]
impl TwoStatePoissonHmm {
    /// Model from per-state stay probabilities, started at the stationary
    /// distribution.
    #[staticmethod]
    fn with_stay_probabilities(
        stay_high: f64,
        stay_low: f64,
        lambda_high: f64,
        lambda_low: f64,
    ) -> PyResult<Self> {
        Ok(TwoStatePoissonHmm {
            inner: readout::TwoStatePoissonHmm::with_stay_probabilities(
                stay_high,
                stay_low,
                lambda_high,
                lambda_low,
            )
            .map_err(err)?,
        })
    }

    /// Data-driven starting point for EM, from count percentiles.
    #[staticmethod]
    fn percentile_init(trace: &PhotonTrace) -> PyResult<Self> {
        Ok(TwoStatePoissonHmm {
            inner: readout::TwoStatePoissonHmm::percentile_init(&trace.inner).map_err(err)?,
        })
    }

    #[getter]
    fn lambda_high(&self) -> f64 {
        self.inner.lambda_high()
    }
    #[getter]
    fn lambda_low(&self) -> f64 {
        self.inner.lambda_low()
    }
    #[getter]
    fn stay_high(&self) -> f64 {
        self.inner.stay_probability(readout::JumpState::High)
    }
    #[getter]
    fn stay_low(&self) -> f64 {
        self.inner.stay_probability(readout::JumpState::Low)
    }
    /// Row-stochastic transition matrix, state order (high, low).
    #[getter]
    fn transition(&self) -> [[f64; 2]; 2] {
        self.inner.transition()
    }
    #[getter]
    fn initial(&self) -> [f64; 2] {
        self.inner.initial()
    }

    fn __repr__(&self) -> String {
        format!(
            "TwoStatePoissonHmm(lambda_high={}, lambda_low={}, stay_high={}, stay_low={})",
            self.lambda_high(),
            self.lambda_low(),
            self.stay_high(),
            self.stay_low()
        )
    }
}

fn parse_state(s: &str) -> PyResult<readout::JumpState> {
    match s {
        "high" => Ok(readout::JumpState::High),
        "low" => Ok(readout::JumpState::Low),
        other => Err(PyValueError::new_err(format!(
            "state must be 'high' or 'low', got {other:?}"
        ))),
    }
}

#[pyfunction]
#[pyo3(signature = (radius_m, length_m=1.0e-3, mode="TM110"))]
fn cavity_frequency(radius_m: f64, length_m: f64, mode: &str) -> PyResult<f64> {
    let cavity = resonator::CylindricalCavity {
        radius: radius_m,
        length: length_m,
        mode: resonator::CavityMode::parse(mode).map_err(err)?,
        ..Default::default()
    };
    resonator::cavity_frequency(&cavity).map_err(err)
}

#[pyfunction]
fn skin_depth(resistivity_ohm_m: f64, frequency_hz: f64) -> PyResult<f64> {
    resonator::skin_depth(resistivity_ohm_m, frequency_hz).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (q_conductive=None, q_dielectric=None, q_radiative=None))]
fn combine_quality_factors(
    q_conductive: Option<f64>,
    q_dielectric: Option<f64>,
    q_radiative: Option<f64>,
) -> PyResult<f64> {
    let budget = resonator::LossBudget::new(q_conductive, q_dielectric, q_radiative);
    resonator::combine_quality_factors(&budget).map_err(err)
}

/// Conductor-limited Q/V of aspect `2a/d = aspect_a` over aspect `aspect_b`
/// at fixed radius.
#[pyfunction]
fn cavity_q_over_v_ratio(aspect_a: f64, aspect_b: f64, radius_m: f64) -> PyResult<f64> {
    resonator::cavity_q_over_v_ratio(aspect_a, aspect_b, radius_m).map_err(err)
}

#[pyfunction]
fn efficiency_mag_to_rabi(c_mag_mt_per_sqrt_w: f64) -> PyResult<f64> {
    resonator::efficiency_mag_to_rabi(c_mag_mt_per_sqrt_w).map_err(err)
}

#[pyfunction]
fn efficiency_rabi_to_mag(c_rabi_mhz_per_sqrt_w: f64) -> PyResult<f64> {
    resonator::efficiency_rabi_to_mag(c_rabi_mhz_per_sqrt_w).map_err(err)
}

/// Measured conversion efficiency in Hz/sqrt(W) from an observed Rabi
/// frequency at a given drive power.
#[pyfunction]
fn efficiency_from_measurement(rabi_hz: f64, power_w: f64) -> PyResult<f64> {
    resonator::efficiency_from_measurement(rabi_hz, power_w).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (resonator_length_m=None, waist_width_m=None, dielectric_constant=None, dielectric_thickness_m=None, superstrate_constant=None))]
fn cpw_halfwave_frequency(
    resonator_length_m: Option<f64>,
    waist_width_m: Option<f64>,
    dielectric_constant: Option<f64>,
    dielectric_thickness_m: Option<f64>,
    superstrate_constant: Option<f64>,
) -> PyResult<f64> {
    let d = resonator::CpwResonator::default();
    let cpw = resonator::CpwResonator {
        resonator_length: resonator_length_m.unwrap_or(d.resonator_length),
        waist_width: waist_width_m.unwrap_or(d.waist_width),
        dielectric_constant: dielectric_constant.unwrap_or(d.dielectric_constant),
        dielectric_thickness: dielectric_thickness_m.unwrap_or(d.dielectric_thickness),
        superstrate_constant: superstrate_constant.unwrap_or(d.superstrate_constant),
    };
    resonator::cpw_halfwave_estimate(&cpw).map_err(err)
}

/// Allowed transitions of one kind ("electron" or "nuclear") as dicts with
/// endpoint labels, frequency, and dipole weight.
#[pyfunction]
#[pyo3(signature = (params, field, kind="electron"))]
fn transition_table<'py>(
    py: Python<'py>,
    params: &NvParameters,
    field: &StaticField,
    kind: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let kind = match kind {
        "electron" => spin_model::TransitionKind::Electron,
        "nuclear" => spin_model::TransitionKind::Nuclear,
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be 'electron' or 'nuclear', got {other:?}"
            )))
        }
    };
    let h = spin_model::build_hamiltonian(&params.inner, &field.inner).map_err(err)?;
    let table = spin_model::transitions(&h, kind).map_err(err)?;
    table
        .transitions
        .iter()
        .map(|t| {
            let d = PyDict::new(py);
            d.set_item("frequency_hz", t.frequency)?;
            d.set_item("dipole_weight", t.dipole_weight)?;
            d.set_item("lower_m_s", t.lower.m_s)?;
            d.set_item("lower_m_i", t.lower.m_i)?;
            d.set_item("upper_m_s", t.upper.m_s)?;
            d.set_item("upper_m_i", t.upper.m_i)?;
            Ok(d)
        })
        .collect()
}

/// Normalized fluorescence over a microwave frequency grid.
#[pyfunction]
fn odmr_spectrum(
    params: &NvParameters,
    field: &StaticField,
    fluorescence: &FluorescenceModel,
    frequencies_hz: Vec<f64>,
    b1_tesla: f64,
    pulse_seconds: f64,
) -> PyResult<Vec<f64>> {
    dynamics::odmr_spectrum(
        &params.inner,
        &field.inner,
        &fluorescence.inner,
        &frequencies_hz,
        b1_tesla,
        pulse_seconds,
    )
    .map_err(err)
}

/// Nuclear transition response of the m_S = 0 manifold over an RF grid.
#[pyfunction]
fn nmr_scan(
    params: &NvParameters,
    field: &StaticField,
    frequencies_hz: Vec<f64>,
    rf_rabi_hz: f64,
    pulse_seconds: f64,
) -> PyResult<Vec<f64>> {
    dynamics::nmr_scan(
        &params.inner,
        &field.inner,
        &frequencies_hz,
        rf_rabi_hz,
        pulse_seconds,
    )
    .map_err(err)
}

/// Excited-state population of a resonantly driven two-level system at the
/// given times.
#[pyfunction]
fn rabi_trace(rabi_hz: f64, detuning_hz: f64, times_s: Vec<f64>) -> PyResult<Vec<f64>> {
    dynamics::rabi_trace(rabi_hz, detuning_hz, &times_s).map_err(err)
}

/// On-resonance Rabi frequency of a circularly decomposed linear drive.
#[pyfunction]
fn rabi_from_b1(params: &NvParameters, b1_tesla: f64) -> PyResult<f64> {
    dynamics::rabi_from_b1(&params.inner, b1_tesla).map_err(err)
}

/// Quadratic suppression of drive-induced nuclear flips relative to a
/// reference field.
#[pyfunction]
fn nuclear_flip_probability_scaling(reference_tesla: f64, field_tesla: f64) -> PyResult<f64> {
    dynamics::nuclear_flip_probability_scaling(reference_tesla, field_tesla).map_err(err)
}

/// Mean aggregated counts of a state-selective readout; `state_m_i` is the
/// prepared nuclear projection, `addressed_m_i` the one the selective pulse
/// maps dark.
#[pyfunction]
fn nuclear_readout_mean(
    fluorescence: &FluorescenceModel,
    n_repeats: u64,
    state_m_i: i8,
    addressed_m_i: i8,
) -> PyResult<f64> {
    let state = dynamics::NuclearState::from_m_i(state_m_i).map_err(err)?;
    let addressed = dynamics::NuclearState::from_m_i(addressed_m_i).map_err(err)?;
    dynamics::nuclear_readout_mean(&fluorescence.inner, n_repeats, state, addressed).map_err(err)
}

/// One Poisson-sampled aggregated readout; deterministic per seed.
#[pyfunction]
fn nuclear_readout_shot(
    fluorescence: &FluorescenceModel,
    n_repeats: u64,
    state_m_i: i8,
    addressed_m_i: i8,
    seed: u64,
) -> PyResult<u64> {
    let state = dynamics::NuclearState::from_m_i(state_m_i).map_err(err)?;
    let addressed = dynamics::NuclearState::from_m_i(addressed_m_i).map_err(err)?;
    dynamics::nuclear_readout_shot(&fluorescence.inner, n_repeats, state, addressed, seed)
        .map_err(err)
}

/// Sample a state path and per-bin counts; deterministic per seed.
#[pyfunction]
fn synthesize_trace(
    model: &TwoStatePoissonHmm,
    n_bins: usize,
    bin_seconds: f64,
    seed: u64,
) -> PyResult<PhotonTrace> {
    Ok(PhotonTrace {
        inner: readout::synthesize_trace(&model.inner, n_bins, bin_seconds, seed).map_err(err)?,
    })
}

/// Smoothed posteriors: dict with `log_likelihood` and `posterior_high`
/// (P(high) per bin).
#[pyfunction]
fn forward_backward<'py>(
    py: Python<'py>,
    model: &TwoStatePoissonHmm,
    trace: &PhotonTrace,
) -> PyResult<Bound<'py, PyDict>> {
    let post = readout::forward_backward(&model.inner, &trace.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("log_likelihood", post.log_likelihood)?;
    d.set_item(
        "posterior_high",
        post.per_bin.iter().map(|p| p[0]).collect::<Vec<f64>>(),
    )?;
    Ok(d)
}

/// Most probable state path as "high"/"low" per bin.
#[pyfunction]
fn viterbi(model: &TwoStatePoissonHmm, trace: &PhotonTrace) -> PyResult<Vec<&'static str>> {
    Ok(readout::viterbi(&model.inner, &trace.inner)
        .map_err(err)?
        .iter()
        .map(|s| s.as_str())
        .collect())
}

/// Baum-Welch fit; dict with the fitted `model` plus likelihood, iteration
/// count, and diagnostic flags. Starts from `init` or a percentile guess.
#[pyfunction]
#[pyo3(signature = (trace, init=None))]
fn estimate_parameters<'py>(
    py: Python<'py>,
    trace: &PhotonTrace,
    init: Option<&TwoStatePoissonHmm>,
) -> PyResult<Bound<'py, PyDict>> {
    let start = match init {
        Some(model) => model.inner.clone(),
        None => readout::TwoStatePoissonHmm::percentile_init(&trace.inner).map_err(err)?,
    };
    let fit = readout::estimate_parameters(&trace.inner, &start).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("model", TwoStatePoissonHmm { inner: fit.model })?;
    d.set_item("log_likelihood", fit.log_likelihood)?;
    d.set_item("iterations", fit.iterations)?;
    d.set_item("converged", fit.converged)?;
    d.set_item(
        "degenerate_init_perturbed",
        fit.flags.degenerate_init_perturbed,
    )?;
    d.set_item("boundary_transition", fit.flags.boundary_transition)?;
    Ok(d)
}

/// Two-Poissonian mixture fit of the count histogram, with separability.
#[pyfunction]
fn fit_two_poissonians<'py>(
    py: Python<'py>,
    trace: &PhotonTrace,
) -> PyResult<Bound<'py, PyDict>> {
    let fit = readout::fit_two_poissonians(&trace.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("weight_high", fit.weight_high)?;
    d.set_item("weight_low", fit.weight_low)?;
    d.set_item("lambda_high", fit.lambda_high)?;
    d.set_item("lambda_low", fit.lambda_low)?;
    d.set_item("separability", fit.separability)?;
    d.set_item("separable", fit.separable)?;
    d.set_item("chi_square_per_dof", fit.chi_square_per_dof)?;
    Ok(d)
}

/// Collapse a "high"/"low" sequence into (state, run_length) pairs.
#[pyfunction]
fn run_length_encode(states: Vec<String>) -> PyResult<Vec<(&'static str, usize)>> {
    let parsed: Vec<readout::JumpState> = states
        .iter()
        .map(|s| parse_state(s))
        .collect::<PyResult<_>>()?;
    Ok(readout::run_length_encode(&parsed)
        .into_iter()
        .map(|(state, len)| (state.as_str(), len))
        .collect())
}

/// Mean dwell times per state with 68% confidence intervals, from a decoded
/// "high"/"low" sequence.
#[pyfunction]
fn dwell_time_t1<'py>(
    py: Python<'py>,
    states: Vec<String>,
    bin_seconds: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let parsed: Vec<readout::JumpState> = states
        .iter()
        .map(|s| parse_state(s))
        .collect::<PyResult<_>>()?;
    let dwell = readout::dwell_time_t1(&parsed, bin_seconds).map_err(err)?;
    let d = PyDict::new(py);
    for (name, est) in [("high", dwell.high), ("low", dwell.low)] {
        let entry = PyDict::new(py);
        entry.set_item("t1_seconds", est.t1)?;
        entry.set_item("ci68_low_seconds", est.ci68.0)?;
        entry.set_item("ci68_high_seconds", est.ci68.1)?;
        entry.set_item("n_segments", est.n_segments)?;
        d.set_item(name, entry)?;
    }
    Ok(d)
}

/// Amplitude-Lorentzian least squares fit of a resonance curve.
#[pyfunction]
fn fit_lorentzian<'py>(
    py: Python<'py>,
    frequencies_hz: Vec<f64>,
    responses: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let fit = fitting::fit_lorentzian_samples(&frequencies_hz, &responses).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("f0_hz", fit.f0)?;
    d.set_item("q", fit.q)?;
    d.set_item("amplitude", fit.amplitude)?;
    d.set_item("residual_norm", fit.residual_norm)?;
    Ok(d)
}

/// Sinusoid fit of an oscillation trace; `frequency_hz` is the oscillation
/// (Rabi) frequency.
#[pyfunction]
fn fit_rabi<'py>(
    py: Python<'py>,
    times_s: Vec<f64>,
    values: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let fit = fitting::fit_rabi_frequency(&times_s, &values).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("frequency_hz", fit.frequency)?;
    d.set_item("amplitude", fit.amplitude)?;
    d.set_item("offset", fit.offset)?;
    d.set_item("phase_rad", fit.phase)?;
    d.set_item("residual_norm", fit.residual_norm)?;
    Ok(d)
}

#[pymodule]
fn odmr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<NvParameters>()?;
    m.add_class::<StaticField>()?;
    m.add_class::<FluorescenceModel>()?;
    m.add_class::<PhotonTrace>()?;
    m.add_class::<TwoStatePoissonHmm>()?;

    m.add_function(wrap_pyfunction!(cavity_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(skin_depth, m)?)?;
    m.add_function(wrap_pyfunction!(combine_quality_factors, m)?)?;
    m.add_function(wrap_pyfunction!(cavity_q_over_v_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(efficiency_mag_to_rabi, m)?)?;
    m.add_function(wrap_pyfunction!(efficiency_rabi_to_mag, m)?)?;
    m.add_function(wrap_pyfunction!(efficiency_from_measurement, m)?)?;
    m.add_function(wrap_pyfunction!(cpw_halfwave_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(transition_table, m)?)?;
    m.add_function(wrap_pyfunction!(odmr_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(nmr_scan, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_trace, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_from_b1, m)?)?;
    m.add_function(wrap_pyfunction!(nuclear_flip_probability_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(nuclear_readout_mean, m)?)?;
    m.add_function(wrap_pyfunction!(nuclear_readout_shot, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_trace, m)?)?;
    m.add_function(wrap_pyfunction!(forward_backward, m)?)?;
    m.add_function(wrap_pyfunction!(viterbi, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(fit_two_poissonians, m)?)?;
    m.add_function(wrap_pyfunction!(run_length_encode, m)?)?;
    m.add_function(wrap_pyfunction!(dwell_time_t1, m)?)?;
    m.add_function(wrap_pyfunction!(fit_lorentzian, m)?)?;
    m.add_function(wrap_pyfunction!(fit_rabi, m)?)?;
    Ok(())
}
