//! Report structs and rendering.
//!
//! Everything a command prints to a file passes through [`rounded`], so
//! repeated runs with identical inputs are byte-comparable: floats are
//! projected to 9 significant digits before serialization, in both the JSON
//! and the flattened key,value CSV renderings.

use odmr::io::{format_sig9, round_sig9};
use odmr::readout::HistogramFit;
use odmr::resonator::LossBudget;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct CavityReport {
    pub mode: String,
    pub radius_m: f64,
    pub length_m: f64,
    pub resistivity_ohm_m: f64,
    /// Diameter over length.
    pub aspect_ratio: f64,
    pub frequency_hz: f64,
    pub skin_depth_m: f64,
    /// Geometric conductor figure 1/(pi a^2 (d + a)); only ratios of this
    /// number are meaningful.
    pub q_over_v_per_cubic_meter: f64,
    pub reference_aspect: f64,
    /// Q/V of this geometry over Q/V of a same-radius cavity with
    /// `reference_aspect`.
    pub q_over_v_ratio_vs_reference: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_budget: Option<LossBudget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combined_q: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CpwReport {
    pub resonator_length_m: f64,
    pub waist_width_m: f64,
    pub dielectric_constant: f64,
    pub dielectric_thickness_m: f64,
    pub superstrate_constant: f64,
    pub effective_dielectric_constant: f64,
    pub halfwave_frequency_hz: f64,
}

#[derive(Debug, Serialize)]
pub struct LorentzianReport {
    pub n_samples: usize,
    pub f0_hz: f64,
    pub q: f64,
    pub amplitude: f64,
    pub residual_norm: f64,
}

/// Transition matrix and emission means of the fitted two-state model.
#[derive(Debug, Serialize)]
pub struct FittedModel {
    pub lambda_high_counts: f64,
    pub lambda_low_counts: f64,
    pub stay_high: f64,
    pub stay_low: f64,
    /// (lambda_high - lambda_low) / sqrt(lambda_high).
    pub separability: f64,
    pub separable: bool,
}

#[derive(Debug, Serialize)]
pub struct DwellReport {
    pub t1_seconds: f64,
    pub ci68_low_seconds: f64,
    pub ci68_high_seconds: f64,
    pub n_segments: usize,
}

/// One Viterbi run, in decode order.
#[derive(Debug, Serialize)]
pub struct SegmentReport {
    pub state: String,
    pub bins: usize,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub n_bins: usize,
    pub bin_seconds: f64,
    pub model: FittedModel,
    pub log_likelihood: f64,
    pub em_iterations: usize,
    pub em_converged: bool,
    pub degenerate_init_perturbed: bool,
    pub boundary_transition: bool,
    pub histogram: HistogramFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dwell_high: Option<DwellReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dwell_low: Option<DwellReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dwell_error: Option<String>,
    pub viterbi_segments: Vec<SegmentReport>,
}

/// Copy of `value` with every float rounded to 9 significant digits.
/// Integers pass through untouched.
pub fn rounded(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            Value::from(round_sig9(n.as_f64().expect("checked f64")))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(rounded).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, rounded(v))).collect())
        }
        other => other,
    }
}

pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

/// Flatten a report into `key,value` rows. Nested fields join with `.`,
/// array elements use their index; floats print with 9 significant digits.
pub fn render_kv_csv(value: &Value) -> String {
    let mut out = String::from("key,value\n");
    flatten("", value, &mut out);
    out
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        scalar => {
            out.push_str(prefix);
            out.push(',');
            out.push_str(&scalar_text(scalar));
            out.push('\n');
        }
    }
}

fn scalar_text(value: &Value) -> String {
    match value {
        Value::Number(n) if n.is_f64() => format_sig9(n.as_f64().expect("checked f64")),
        Value::Number(n) => n.to_string(),
        Value::String(s) => {
            if s.contains(',') || s.contains('"') || s.contains('\n') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        _ => unreachable!("containers handled by flatten"),
    }
}
