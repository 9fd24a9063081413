//! `odmr`: design reports, resonance sweeps, and photon-trace analysis for
//! a single-spin magnetic resonance setup.
//!
//! Every command reads a flat key=value config (see `config.rs`), applies
//! `--set` overrides, and writes one output file atomically: either a JSON
//! report, a flattened key,value CSV, or a plot-ready two-column CSV sweep.
//! Given the same config and `--seed`, output files are byte-identical. The
//! process exits 0 only after the report is fully on disk.

mod config;
mod report;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use odmr::dynamics::{self, FluorescenceModel};
use odmr::io;
use odmr::readout::{self, JumpState, TwoStatePoissonHmm, SEPARABILITY_THRESHOLD};
use odmr::resonator::{self, CavityMode, CpwResonator, CylindricalCavity, LossBudget};
use odmr::spin_model::{NvParameters, StaticField};

use config::RunConfig;
use report::{
    AnalysisReport, CavityReport, CpwReport, DwellReport, FittedModel, LorentzianReport,
    SegmentReport,
};

/// Directory receiving reports when `--out` is not given.
const OUT_DIR_ENV: &str = "ODMR_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "odmr",
    version,
    about = "Single-spin magnetic resonance design and analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Key=value config file; `#` starts a comment.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one config key (repeatable), e.g. --set field_tesla=2.78.
    #[arg(long, global = true, value_name = "KEY=VALUE", action = ArgAction::Append)]
    set: Vec<String>,

    /// Seed for every stochastic step.
    #[arg(long, global = true, value_name = "INT", default_value_t = 0)]
    seed: u64,

    /// Output file; defaults to <command>.<format> in $ODMR_OUT_DIR or the
    /// working directory.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; defaults to json for reports and csv for sweeps and
    /// traces.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cylindrical cavity mode frequency, skin depth, and quality factors.
    Cavity,
    /// Coplanar waveguide half-wave resonance estimate.
    Cpw,
    /// Swept microwave frequency spectrum with hyperfine-split dips.
    Odmr,
    /// Driven two-level population versus pulse duration.
    Rabi,
    /// Nuclear transition scan within the m_S = 0 manifold.
    Nmr,
    /// Photon count trace synthesis and analysis.
    #[command(subcommand)]
    Trace(TraceCommand),
    /// Curve fitting on recorded data.
    #[command(subcommand)]
    Fit(FitCommand),
}

#[derive(Subcommand)]
enum TraceCommand {
    /// Sample a two-state blinking trace plus a ground-truth sidecar.
    Simulate,
    /// Fit a two-state model to a trace and report dwell statistics.
    Analyze {
        /// Photon trace CSV (`bin_index,counts`).
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum FitCommand {
    /// Least-squares amplitude-Lorentzian fit of a resonance curve.
    Lorentzian {
        /// Resonance curve CSV (`frequency_hz,response`).
        input: PathBuf,
    },
}

/// Output destination and format resolved from flags and environment.
struct Output {
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: u64,
}

impl Output {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn path(&self, stem: &str, format: Format) -> PathBuf {
        match &self.out {
            Some(p) => p.clone(),
            None => default_dir().join(format!("{stem}.{}", format.extension())),
        }
    }
}

fn default_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.set)?;
    let out = Output {
        out: cli.out,
        format: cli.format,
        seed: cli.seed,
    };
    match cli.command {
        Command::Cavity => cmd_cavity(&mut cfg, &out),
        Command::Cpw => cmd_cpw(&mut cfg, &out),
        Command::Odmr => cmd_odmr(&mut cfg, &out),
        Command::Rabi => cmd_rabi(&mut cfg, &out),
        Command::Nmr => cmd_nmr(&mut cfg, &out),
        Command::Trace(TraceCommand::Simulate) => cmd_trace_simulate(&mut cfg, &out),
        Command::Trace(TraceCommand::Analyze { input }) => {
            cmd_trace_analyze(&input, &mut cfg, &out)
        }
        Command::Fit(FitCommand::Lorentzian { input }) => {
            cmd_fit_lorentzian(&input, &mut cfg, &out)
        }
    }
}

fn write_report<T: serde::Serialize>(value: &T, path: &Path, format: Format) -> Result<()> {
    let value = report::rounded(serde_json::to_value(value).context("report serialization")?);
    let text = match format {
        Format::Json => report::render_json(&value),
        Format::Csv => report::render_kv_csv(&value),
    };
    io::write_atomic(path, &text)?;
    println!("{}", path.display());
    Ok(())
}

fn write_sweep(
    xs: &[f64],
    ys: &[f64],
    header: &str,
    path: &Path,
    format: Format,
) -> Result<()> {
    match format {
        Format::Csv => io::write_xy_csv(path, header, xs, ys)?,
        Format::Json => {
            let (x_name, y_name) = header.split_once(',').expect("two-column header");
            let mut map = serde_json::Map::new();
            map.insert(x_name.to_string(), serde_json::to_value(xs)?);
            map.insert(y_name.to_string(), serde_json::to_value(ys)?);
            let value = report::rounded(serde_json::Value::Object(map));
            io::write_atomic(path, &report::render_json(&value))?;
        }
    }
    println!("{}", path.display());
    Ok(())
}

fn spin_params(cfg: &mut RunConfig) -> Result<NvParameters> {
    let d = NvParameters::default();
    Ok(NvParameters {
        d_zfs: cfg.f64("d_zfs_hz", d.d_zfs)?,
        gamma_e: cfg.f64("gamma_e_hz_per_tesla", d.gamma_e)?,
        gamma_n: cfg.f64("gamma_n_hz_per_tesla", d.gamma_n)?,
        a_par: cfg.f64("a_par_hz", d.a_par)?,
        a_perp: cfg.f64("a_perp_hz", d.a_perp)?,
        q_quad: cfg.f64("q_quad_hz", d.q_quad)?,
    })
}

fn static_field(cfg: &mut RunConfig) -> Result<StaticField> {
    Ok(StaticField {
        magnitude: cfg.f64("field_tesla", 2.78)?,
        polar_angle: cfg.f64("field_polar_rad", 0.0)?,
        azimuth: cfg.f64("field_azimuth_rad", 0.0)?,
    })
}

fn fluorescence(cfg: &mut RunConfig) -> Result<FluorescenceModel> {
    let d = FluorescenceModel::default();
    Ok(FluorescenceModel {
        rate_bright: cfg.f64("rate_bright_cps", d.rate_bright)?,
        rate_dark: cfg.f64("rate_dark_cps", d.rate_dark)?,
        readout_window: cfg.f64("readout_window_seconds", d.readout_window)?,
        polarization_fidelity: cfg.f64("polarization_fidelity", d.polarization_fidelity)?,
    })
}

fn grid(cfg: &mut RunConfig, start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    let start = cfg.f64("start_hz", start)?;
    let stop = cfg.f64("stop_hz", stop)?;
    let points = cfg.usize("points", points)?;
    if points < 2 {
        bail!("points must be >= 2, got {points}");
    }
    if !(stop > start) {
        bail!("stop_hz must exceed start_hz");
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|i| start + step * i as f64).collect())
}

fn cmd_cavity(cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let mode = CavityMode::parse(&cfg.string("mode", "TM110"))?;
    let defaults = CylindricalCavity::default();
    let cavity = CylindricalCavity {
        radius: cfg.f64("radius_m", defaults.radius)?,
        length: cfg.f64("length_m", defaults.length)?,
        conductor_resistivity: cfg.f64("resistivity_ohm_m", defaults.conductor_resistivity)?,
        mode,
    };
    let reference_aspect = cfg.f64("reference_aspect", 1.0)?;
    let budget = LossBudget::new(
        cfg.optional_f64("q_conductive")?,
        cfg.optional_f64("q_dielectric")?,
        cfg.optional_f64("q_radiative")?,
    );
    cfg.reject_unknown()?;

    let frequency = resonator::cavity_frequency(&cavity)?;
    let has_budget = budget != LossBudget::default();
    let report = CavityReport {
        mode: cavity.mode.to_string(),
        radius_m: cavity.radius,
        length_m: cavity.length,
        resistivity_ohm_m: cavity.conductor_resistivity,
        aspect_ratio: cavity.aspect_ratio(),
        frequency_hz: frequency,
        skin_depth_m: resonator::skin_depth(cavity.conductor_resistivity, frequency)?,
        q_over_v_per_cubic_meter: resonator::conductor_q_over_volume(
            cavity.radius,
            cavity.length,
        ),
        reference_aspect,
        q_over_v_ratio_vs_reference: resonator::cavity_q_over_v_ratio(
            cavity.aspect_ratio(),
            reference_aspect,
            cavity.radius,
        )?,
        combined_q: if has_budget {
            Some(resonator::combine_quality_factors(&budget)?)
        } else {
            None
        },
        loss_budget: has_budget.then_some(budget),
    };
    let format = out.format_or(Format::Json);
    write_report(&report, &out.path("cavity", format), format)
}

fn cmd_cpw(cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let d = CpwResonator::default();
    let cpw = CpwResonator {
        resonator_length: cfg.f64("resonator_length_m", d.resonator_length)?,
        waist_width: cfg.f64("waist_width_m", d.waist_width)?,
        dielectric_constant: cfg.f64("dielectric_constant", d.dielectric_constant)?,
        dielectric_thickness: cfg.f64("dielectric_thickness_m", d.dielectric_thickness)?,
        superstrate_constant: cfg.f64("superstrate_constant", d.superstrate_constant)?,
    };
    cfg.reject_unknown()?;
    let report = CpwReport {
        resonator_length_m: cpw.resonator_length,
        waist_width_m: cpw.waist_width,
        dielectric_constant: cpw.dielectric_constant,
        dielectric_thickness_m: cpw.dielectric_thickness,
        superstrate_constant: cpw.superstrate_constant,
        effective_dielectric_constant: cpw.effective_dielectric_constant(),
        halfwave_frequency_hz: resonator::cpw_halfwave_estimate(&cpw)?,
    };
    let format = out.format_or(Format::Json);
    write_report(&report, &out.path("cpw", format), format)
}

fn cmd_odmr(cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let params = spin_params(cfg)?;
    let field = static_field(cfg)?;
    let fl = fluorescence(cfg)?;
    let b1 = cfg.f64("b1_tesla", 1.5e-5)?;
    let pulse = cfg.f64("pulse_seconds", 1.68e-6)?;
    // Default grid brackets the m_S = 0 -> -1 triplet at the 2.78 T preset.
    let freqs = grid(cfg, 75.040e9, 75.070e9, 601)?;
    cfg.reject_unknown()?;
    let response = dynamics::odmr_spectrum(&params, &field, &fl, &freqs, b1, pulse)?;
    let format = out.format_or(Format::Csv);
    write_sweep(
        &freqs,
        &response,
        io::CURVE_HEADER,
        &out.path("odmr", format),
        format,
    )
}

fn cmd_rabi(cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let rabi = cfg.f64("rabi_hz", 9.06e5)?;
    let detuning = cfg.f64("detuning_hz", 0.0)?;
    let duration = cfg.f64("duration_seconds", 5.0e-6)?;
    let points = cfg.usize("points", 501)?;
    cfg.reject_unknown()?;
    if points < 2 {
        bail!("points must be >= 2, got {points}");
    }
    if !(duration.is_finite() && duration > 0.0) {
        bail!("duration_seconds must be positive");
    }
    let times: Vec<f64> = (0..points)
        .map(|i| duration * i as f64 / (points - 1) as f64)
        .collect();
    let pops = dynamics::rabi_trace(rabi, detuning, &times)?;
    let format = out.format_or(Format::Csv);
    write_sweep(
        &times,
        &pops,
        "time_s,population",
        &out.path("rabi", format),
        format,
    )
}

fn cmd_nmr(cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let params = spin_params(cfg)?;
    let field = static_field(cfg)?;
    let rf_rabi = cfg.f64("rf_rabi_hz", 5.0e4)?;
    let pulse = cfg.f64("pulse_seconds", 1.0e-5)?;
    // Default grid spans both nuclear lines of the m_S = 0 manifold at 2.78 T.
    let freqs = grid(cfg, 2.0e5, 1.6e7, 791)?;
    cfg.reject_unknown()?;
    let response = dynamics::nmr_scan(&params, &field, &freqs, rf_rabi, pulse)?;
    let format = out.format_or(Format::Csv);
    write_sweep(
        &freqs,
        &response,
        io::CURVE_HEADER,
        &out.path("nmr", format),
        format,
    )
}

/// `trace.csv` gets its ground truth next to it as `trace.truth.csv`.
fn truth_sidecar(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("trace");
    path.with_file_name(format!("{stem}.truth.csv"))
}

fn cmd_trace_simulate(cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let lambda_high = cfg.f64("lambda_high_counts", 120.0)?;
    let lambda_low = cfg.f64("lambda_low_counts", 40.0)?;
    let stay_high = cfg.f64("stay_high", 0.995)?;
    let stay_low = cfg.f64("stay_low", 0.995)?;
    let n_bins = cfg.usize("n_bins", 100_000)?;
    let bin_seconds = cfg.f64("bin_seconds", 1.0e-3)?;
    cfg.reject_unknown()?;

    let model = TwoStatePoissonHmm::with_stay_probabilities(
        stay_high,
        stay_low,
        lambda_high,
        lambda_low,
    )?;
    let trace = readout::synthesize_trace(&model, n_bins, bin_seconds, out.seed)?;
    let truth = trace.truth.as_deref().expect("synthetic traces carry truth");

    let format = out.format_or(Format::Csv);
    let path = out.path("trace", format);
    match format {
        Format::Csv => {
            let truth_path = truth_sidecar(&path);
            io::write_photon_trace(&path, &trace)?;
            io::write_truth_states(&truth_path, truth)?;
            println!("{}", path.display());
            println!("{}", truth_path.display());
        }
        Format::Json => {
            let states: Vec<&str> = truth.iter().map(|s| s.as_str()).collect();
            let value = report::rounded(serde_json::json!({
                "bin_seconds": bin_seconds,
                "counts": trace.counts,
                "truth_states": states,
            }));
            io::write_atomic(&path, &report::render_json(&value))?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn cmd_trace_analyze(input: &Path, cfg: &mut RunConfig, out: &Output) -> Result<()> {
    let bin_seconds = cfg.f64("bin_seconds", 1.0e-3)?;
    cfg.reject_unknown()?;

    let trace = io::read_photon_trace(input, bin_seconds)?;
    let init = TwoStatePoissonHmm::percentile_init(&trace)?;
    let fit = readout::estimate_parameters(&trace, &init)?;
    let decoded = readout::viterbi(&fit.model, &trace)?;
    let histogram = readout::fit_two_poissonians(&trace)?;

    let lambda_high = fit.model.lambda_high();
    let lambda_low = fit.model.lambda_low();
    let separability = if lambda_high > 0.0 {
        (lambda_high - lambda_low) / lambda_high.sqrt()
    } else {
        0.0
    };

    let (dwell_high, dwell_low, dwell_error) =
        match readout::dwell_time_t1(&decoded, bin_seconds) {
            Ok(d) => (
                Some(dwell_report(d.high)),
                Some(dwell_report(d.low)),
                None,
            ),
            Err(e) => (None, None, Some(e.to_string())),
        };

    let report = AnalysisReport {
        n_bins: trace.n_bins(),
        bin_seconds,
        model: FittedModel {
            lambda_high_counts: lambda_high,
            lambda_low_counts: lambda_low,
            stay_high: fit.model.stay_probability(JumpState::High),
            stay_low: fit.model.stay_probability(JumpState::Low),
            separability,
            separable: separability > SEPARABILITY_THRESHOLD,
        },
        log_likelihood: fit.log_likelihood,
        em_iterations: fit.iterations,
        em_converged: fit.converged,
        degenerate_init_perturbed: fit.flags.degenerate_init_perturbed,
        boundary_transition: fit.flags.boundary_transition,
        histogram,
        dwell_high,
        dwell_low,
        dwell_error,
        viterbi_segments: readout::run_length_encode(&decoded)
            .into_iter()
            .map(|(state, bins)| SegmentReport {
                state: state.as_str().to_string(),
                bins,
                seconds: bins as f64 * bin_seconds,
            })
            .collect(),
    };
    let format = out.format_or(Format::Json);
    write_report(&report, &out.path("analysis", format), format)
}

fn dwell_report(e: readout::DwellEstimate) -> DwellReport {
    DwellReport {
        t1_seconds: e.t1,
        ci68_low_seconds: e.ci68.0,
        ci68_high_seconds: e.ci68.1,
        n_segments: e.n_segments,
    }
}

fn cmd_fit_lorentzian(input: &Path, cfg: &mut RunConfig, out: &Output) -> Result<()> {
    cfg.reject_unknown()?;
    let curve = io::read_resonance_curve(input)?;
    let fit = resonator::fit_lorentzian(&curve)?;
    let report = LorentzianReport {
        n_samples: curve.len(),
        f0_hz: fit.f0,
        q: fit.q,
        amplitude: fit.amplitude,
        residual_norm: fit.residual_norm,
    };
    let format = out.format_or(Format::Json);
    write_report(&report, &out.path("lorentzian", format), format)
}
