//! Closed-form microwave resonator design: cylindrical cavity modes and
//! quality factors, skin depth, loss-budget combination, power-to-field
//! efficiency conversions, half-wave CPW frequency estimates, and Lorentzian
//! resonance fitting.

use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMEABILITY};
use crate::fitting::{self, LorentzianFit};
use crate::{Error, Result};

/// Roots p_nm of the Bessel function J_n (rows n = 0..3, columns m = 1..3).
/// TM_nml cavity modes take their radial wavenumber from these.
const BESSEL_J_ZEROS: [[f64; 3]; 4] = [
    [2.404825557695773, 5.520078110286311, 8.653727912911013],
    [3.831705970207512, 7.015586669815619, 10.173468135062722],
    [5.135622301840683, 8.417244140399864, 11.619841172149059],
    [6.380161895923983, 9.761023129981667, 13.015200721698434],
];

/// Roots p'_nm of the derivative J_n' (same layout); TE modes.
const BESSEL_J_PRIME_ZEROS: [[f64; 3]; 4] = [
    [3.831705970207512, 7.015586669815619, 10.173468135062722],
    [1.841183781340659, 5.331442773525033, 8.536316366346286],
    [3.054236928227140, 6.706133194158459, 9.969467823526285],
    [4.201188941210528, 8.015236598375951, 11.345924310743006],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeFamily {
    Tm,
    Te,
}

/// Cylindrical-cavity mode indices (n azimuthal, m radial, l longitudinal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CavityMode {
    pub family: ModeFamily,
    pub n: u32,
    pub m: u32,
    pub l: u32,
}

impl CavityMode {
    pub const TM110: CavityMode = CavityMode {
        family: ModeFamily::Tm,
        n: 1,
        m: 1,
        l: 0,
    };
    pub const TM010: CavityMode = CavityMode {
        family: ModeFamily::Tm,
        n: 0,
        m: 1,
        l: 0,
    };
    pub const TE011: CavityMode = CavityMode {
        family: ModeFamily::Te,
        n: 0,
        m: 1,
        l: 1,
    };

    /// Parse e.g. "TM110" or "te011".
    pub fn parse(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let (family, digits) = if let Some(rest) = upper.strip_prefix("TM") {
            (ModeFamily::Tm, rest)
        } else if let Some(rest) = upper.strip_prefix("TE") {
            (ModeFamily::Te, rest)
        } else {
            return Err(Error::invalid(format!(
                "mode '{s}' must start with TM or TE"
            )));
        };
        let idx: Vec<u32> = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::invalid(format!("mode '{s}' has non-digit index")))
            })
            .collect::<Result<_>>()?;
        if idx.len() != 3 {
            return Err(Error::invalid(format!(
                "mode '{s}' needs exactly three indices"
            )));
        }
        Ok(CavityMode {
            family,
            n: idx[0],
            m: idx[1],
            l: idx[2],
        })
    }
}

impl std::fmt::Display for CavityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fam = match self.family {
            ModeFamily::Tm => "TM",
            ModeFamily::Te => "TE",
        };
        write!(f, "{fam}{}{}{}", self.n, self.m, self.l)
    }
}

/// Cylindrical cavity geometry. Defaults follow the measured device:
/// 4.8 mm diameter, 1.0 mm length, copper, TM110.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalCavity {
    /// Radius a (m).
    pub radius: f64,
    /// Length d (m).
    pub length: f64,
    /// Wall resistivity (ohm m).
    pub conductor_resistivity: f64,
    pub mode: CavityMode,
}

impl Default for CylindricalCavity {
    fn default() -> Self {
        CylindricalCavity {
            radius: 2.4e-3,
            length: 1.0e-3,
            conductor_resistivity: crate::constants::COPPER_RESISTIVITY,
            mode: CavityMode::TM110,
        }
    }
}

impl CylindricalCavity {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::invalid("cavity radius must be positive"));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::invalid("cavity length must be positive"));
        }
        if !(self.conductor_resistivity.is_finite() && self.conductor_resistivity > 0.0) {
            return Err(Error::invalid("conductor resistivity must be positive"));
        }
        Ok(())
    }

    /// Aspect ratio 2a/d.
    pub fn aspect_ratio(&self) -> f64 {
        2.0 * self.radius / self.length
    }
}

/// Resonance frequency of the cavity mode (Hz).
///
/// TM_nml: f = (c0 / 2 pi) sqrt((p_nm / a)^2 + (l pi / d)^2), so TM_nm0
/// depends on the radius only. TE modes use the J' roots and require l >= 1.
pub fn cavity_frequency(cavity: &CylindricalCavity) -> Result<f64> {
    cavity.validate()?;
    let mode = cavity.mode;
    let root = bessel_root(mode)?;
    if mode.family == ModeFamily::Te && mode.l == 0 {
        return Err(Error::UnsupportedMode {
            mode: mode.to_string(),
            reason: "TE modes need a longitudinal index l >= 1".into(),
        });
    }
    let radial = root / cavity.radius;
    let longitudinal = mode.l as f64 * std::f64::consts::PI / cavity.length;
    Ok(SPEED_OF_LIGHT / std::f64::consts::TAU * radial.hypot(longitudinal))
}

fn bessel_root(mode: CavityMode) -> Result<f64> {
    let table = match mode.family {
        ModeFamily::Tm => &BESSEL_J_ZEROS,
        ModeFamily::Te => &BESSEL_J_PRIME_ZEROS,
    };
    let n = mode.n as usize;
    let m = mode.m as usize;
    if m == 0 {
        return Err(Error::UnsupportedMode {
            mode: mode.to_string(),
            reason: "radial index m must be >= 1".into(),
        });
    }
    if n >= table.len() || m > table[0].len() {
        return Err(Error::UnsupportedMode {
            mode: mode.to_string(),
            reason: format!(
                "only n <= {}, m <= {} are tabulated",
                table.len() - 1,
                table[0].len()
            ),
        });
    }
    Ok(table[n][m - 1])
}

/// Conductor-loss quality factor over volume for a TM_nm0 mode, up to a
/// geometry-independent prefactor: Q_c ~ 1/(1 + a/d), V = pi a^2 d.
pub fn conductor_q_over_volume(radius: f64, length: f64) -> f64 {
    1.0 / (std::f64::consts::PI * radius * radius * (length + radius))
}

/// Ratio of Q_c/V between two aspect ratios 2a/d at fixed radius.
///
/// Shortening the cavity raises Q/V; the closed form reduces to
/// (d2 + a) / (d1 + a). For aspects 5 and 1 this is 15/7, the "approximately
/// doubled" factor.
pub fn cavity_q_over_v_ratio(aspect1: f64, aspect2: f64, fixed_radius: f64) -> Result<f64> {
    for (name, a) in [("aspect1", aspect1), ("aspect2", aspect2)] {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid(format!("{name} must be positive")));
        }
    }
    if !(fixed_radius.is_finite() && fixed_radius > 0.0) {
        return Err(Error::invalid("fixed_radius must be positive"));
    }
    let d1 = 2.0 * fixed_radius / aspect1;
    let d2 = 2.0 * fixed_radius / aspect2;
    Ok(conductor_q_over_volume(fixed_radius, d1) / conductor_q_over_volume(fixed_radius, d2))
}

/// Skin depth delta = sqrt(rho / (pi f mu0)) of a conductor (m).
pub fn skin_depth(resistivity: f64, frequency: f64) -> Result<f64> {
    if !(resistivity.is_finite() && resistivity > 0.0) {
        return Err(Error::invalid("resistivity must be positive"));
    }
    if !(frequency.is_finite() && frequency > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    Ok((resistivity / (std::f64::consts::PI * frequency * VACUUM_PERMEABILITY)).sqrt())
}

/// Gyromagnetic ratio in MHz/mT used by the efficiency conversions.
fn gamma_e_mhz_per_mt() -> f64 {
    crate::spin_model::NvParameters::default().gamma_e * 1e-9
}

/// Convert a power-to-field efficiency C_mag (mT/sqrt(W)) into the
/// power-to-Rabi efficiency C_Rabi (MHz/sqrt(W)): C_Rabi = ge C_mag / sqrt(2).
pub fn efficiency_mag_to_rabi(c_mag_mt_per_sqrt_w: f64) -> Result<f64> {
    if !(c_mag_mt_per_sqrt_w.is_finite() && c_mag_mt_per_sqrt_w >= 0.0) {
        return Err(Error::invalid("C_mag must be non-negative"));
    }
    Ok(gamma_e_mhz_per_mt() * c_mag_mt_per_sqrt_w / std::f64::consts::SQRT_2)
}

/// Inverse of [`efficiency_mag_to_rabi`]; the round trip is exact.
pub fn efficiency_rabi_to_mag(c_rabi_mhz_per_sqrt_w: f64) -> Result<f64> {
    if !(c_rabi_mhz_per_sqrt_w.is_finite() && c_rabi_mhz_per_sqrt_w >= 0.0) {
        return Err(Error::invalid("C_Rabi must be non-negative"));
    }
    Ok(c_rabi_mhz_per_sqrt_w * std::f64::consts::SQRT_2 / gamma_e_mhz_per_mt())
}

/// Measured efficiency C_Rabi = Omega / sqrt(P), in Hz/sqrt(W).
pub fn efficiency_from_measurement(rabi_hz: f64, power_w: f64) -> Result<f64> {
    if !(rabi_hz.is_finite() && rabi_hz >= 0.0) {
        return Err(Error::invalid("Rabi frequency must be non-negative"));
    }
    if !(power_w.is_finite() && power_w > 0.0) {
        return Err(Error::invalid("power must be positive"));
    }
    Ok(rabi_hz / power_w.sqrt())
}

/// Quality factors of the individual loss channels; absent channels are
/// simply not part of the budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct LossBudget {
    pub q_conductive: Option<f64>,
    pub q_dielectric: Option<f64>,
    pub q_radiative: Option<f64>,
}

impl LossBudget {
    pub fn new(
        q_conductive: Option<f64>,
        q_dielectric: Option<f64>,
        q_radiative: Option<f64>,
    ) -> Self {
        LossBudget {
            q_conductive,
            q_dielectric,
            q_radiative,
        }
    }

    fn channels(&self) -> impl Iterator<Item = f64> {
        [self.q_conductive, self.q_dielectric, self.q_radiative]
            .into_iter()
            .flatten()
    }
}

/// Combine loss channels: 1/Q_total = sum of 1/Q_i over present channels.
pub fn combine_quality_factors(budget: &LossBudget) -> Result<f64> {
    let mut inverse_sum = 0.0;
    let mut count = 0;
    for q in budget.channels() {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::invalid(format!(
                "loss-channel quality factor must be positive, got {q}"
            )));
        }
        inverse_sum += 1.0 / q;
        count += 1;
    }
    if count == 0 {
        return Err(Error::invalid("loss budget has no channels"));
    }
    Ok(1.0 / inverse_sum)
}

/// Tapered half-wave CPW resonator geometry. Defaults are the first
/// fabricated resonator: 1085 um length, 85 um waist, eps = 2.9 substrate,
/// 100 um thick, air above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpwResonator {
    /// Resonator length L_R (m).
    pub resonator_length: f64,
    /// Width of the tapered waist (m).
    pub waist_width: f64,
    /// Relative dielectric constant of the substrate.
    pub dielectric_constant: f64,
    /// Substrate thickness (m).
    pub dielectric_thickness: f64,
    /// Relative dielectric constant above the CPW (air or diamond).
    pub superstrate_constant: f64,
}

impl Default for CpwResonator {
    fn default() -> Self {
        CpwResonator {
            resonator_length: 1085e-6,
            waist_width: 85e-6,
            dielectric_constant: 2.9,
            dielectric_thickness: 100e-6,
            superstrate_constant: 1.0,
        }
    }
}

impl CpwResonator {
    /// Second fabricated resonator: 1014 um long with a 3 um waist.
    pub fn narrow_waist() -> Self {
        CpwResonator {
            resonator_length: 1014e-6,
            waist_width: 3e-6,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("resonator_length", self.resonator_length),
            ("waist_width", self.waist_width),
            ("dielectric_thickness", self.dielectric_thickness),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        for (name, v) in [
            ("dielectric_constant", self.dielectric_constant),
            ("superstrate_constant", self.superstrate_constant),
        ] {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::invalid(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }

    /// Effective dielectric constant: mean of substrate and superstrate.
    pub fn effective_dielectric_constant(&self) -> f64 {
        0.5 * (self.dielectric_constant + self.superstrate_constant)
    }
}

/// First-order half-wave estimate f = c0 / (2 L_R sqrt(eps_eff)).
///
/// This is an order-of-magnitude design aid: the CPW sits in a coupled
/// antenna assembly whose exact resonances require full-wave simulation.
/// Trust it to a factor of ~1.5 in absolute frequency; its scaling in L_R
/// and the superstrate monotonicity are exact.
pub fn cpw_halfwave_estimate(resonator: &CpwResonator) -> Result<f64> {
    resonator.validate()?;
    let eps_eff = resonator.effective_dielectric_constant();
    Ok(SPEED_OF_LIGHT / (2.0 * resonator.resonator_length * eps_eff.sqrt()))
}

/// Sampled resonance curve (frequency ascending, response is a Rabi
/// frequency or B1 proxy).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResonanceCurve {
    pub frequencies: Vec<f64>,
    pub responses: Vec<f64>,
}

impl ResonanceCurve {
    pub fn new(frequencies: Vec<f64>, responses: Vec<f64>) -> Result<Self> {
        if frequencies.len() != responses.len() {
            return Err(Error::invalid("frequency/response length mismatch"));
        }
        if !frequencies.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("frequencies must be strictly ascending"));
        }
        Ok(ResonanceCurve {
            frequencies,
            responses,
        })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// Fit an amplitude Lorentzian A / sqrt(1 + 4 Q^2 (f/f0 - 1)^2) to a
/// resonance curve; Q = f0 / FWHM.
///
/// The amplitude form (not the squared power Lorentzian) matches curves
/// whose response is proportional to B1, e.g. Rabi frequency vs drive
/// frequency; fitting the power form instead would skew Q by sqrt(2)-ish
/// width factors.
pub fn fit_lorentzian(curve: &ResonanceCurve) -> Result<LorentzianFit> {
    fitting::fit_lorentzian_samples(&curve.frequencies, &curve.responses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tm110_table_geometry() {
        let cavity = CylindricalCavity::default();
        let f = cavity_frequency(&cavity).unwrap();
        // c0 * p11 / (2 pi a) with p11 = 3.83171.
        let expected = SPEED_OF_LIGHT * 3.831705970207512 / (std::f64::consts::TAU * 2.4e-3);
        assert_relative_eq!(f, expected, max_relative = 1e-12);
        assert_relative_eq!(f, 76.2e9, max_relative = 5e-3);
    }

    #[test]
    fn tm_nm0_length_independent() {
        let cavity = CylindricalCavity::default();
        let mut half = cavity;
        half.length = cavity.length / 2.0;
        assert_eq!(
            cavity_frequency(&cavity).unwrap(),
            cavity_frequency(&half).unwrap()
        );
    }

    #[test]
    fn doubling_radius_halves_tm_nm0_frequency() {
        for mode in [CavityMode::TM110, CavityMode::TM010] {
            let a = CylindricalCavity {
                mode,
                ..Default::default()
            };
            let mut b = a;
            b.radius = 2.0 * a.radius;
            assert_relative_eq!(
                cavity_frequency(&b).unwrap(),
                cavity_frequency(&a).unwrap() / 2.0,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn te011_includes_length_term() {
        let cavity = CylindricalCavity {
            mode: CavityMode::TE011,
            radius: 2.4e-3,
            length: 4.8e-3,
            ..Default::default()
        };
        let f = cavity_frequency(&cavity).unwrap();
        let radial: f64 = 3.831705970207512 / 2.4e-3;
        let longitudinal = std::f64::consts::PI / 4.8e-3;
        let expected = SPEED_OF_LIGHT / std::f64::consts::TAU * radial.hypot(longitudinal);
        assert_relative_eq!(f, expected, max_relative = 1e-12);
        // TE with l = 0 does not exist.
        let bad = CylindricalCavity {
            mode: CavityMode {
                family: ModeFamily::Te,
                n: 0,
                m: 1,
                l: 0,
            },
            ..Default::default()
        };
        assert!(matches!(
            cavity_frequency(&bad),
            Err(Error::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn unsupported_indices_rejected() {
        for mode in ["TM510", "TM140", "TM100"] {
            let cavity = CylindricalCavity {
                mode: CavityMode::parse(mode).unwrap(),
                ..Default::default()
            };
            assert!(cavity_frequency(&cavity).is_err(), "{mode}");
        }
        assert!(CavityMode::parse("TX110").is_err());
        assert!(CavityMode::parse("TM11").is_err());
    }

    #[test]
    fn q_over_v_ratio_closed_form() {
        let r = cavity_q_over_v_ratio(5.0, 1.0, 2.4e-3).unwrap();
        assert_relative_eq!(r, 15.0 / 7.0, max_relative = 1e-12);
        assert_relative_eq!(
            cavity_q_over_v_ratio(3.3, 3.3, 1e-3).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        // Monotonically increasing in aspect1.
        let mut prev = 0.0;
        for k in 1..=40 {
            let aspect = 0.25 * k as f64;
            let r = cavity_q_over_v_ratio(aspect, 1.0, 2.4e-3).unwrap();
            assert!(r > prev);
            prev = r;
        }
        assert!(cavity_q_over_v_ratio(-1.0, 1.0, 1e-3).is_err());
    }

    #[test]
    fn skin_depth_values() {
        let copper = crate::constants::COPPER_RESISTIVITY;
        let d75 = skin_depth(copper, 75e9).unwrap();
        assert!((d75 - 240e-9).abs() / 240e-9 < 0.05, "{d75}");
        let d100m = skin_depth(copper, 100e6).unwrap();
        assert!((d100m - 6.5e-6).abs() / 6.5e-6 < 0.05, "{d100m}");
        // 1/sqrt(f) law, exact.
        let d = skin_depth(copper, 1e9).unwrap();
        assert_relative_eq!(skin_depth(copper, 4e9).unwrap(), d / 2.0, max_relative = 1e-12);
        assert!(skin_depth(0.0, 1e9).is_err());
        assert!(skin_depth(copper, 0.0).is_err());
    }

    #[test]
    fn efficiency_conversion_pairs() {
        let pairs = [(1.36, 27.0), (1.68, 33.3), (5.3, 105.0)];
        for (c_mag, c_rabi) in pairs {
            let got = efficiency_mag_to_rabi(c_mag).unwrap();
            assert!((got - c_rabi).abs() / c_rabi < 0.01, "{c_mag} -> {got}");
        }
        // The published simulation pair is ~2% off the sqrt(2) convention.
        let got = efficiency_mag_to_rabi(0.87).unwrap();
        assert!((got - 17.6).abs() / 17.6 < 0.03, "{got}");
        assert_eq!(efficiency_mag_to_rabi(0.0).unwrap(), 0.0);
        assert!(efficiency_mag_to_rabi(-1.0).is_err());
    }

    #[test]
    fn efficiency_round_trip() {
        for c in [0.1, 0.87, 1.36, 5.3, 12.0] {
            let back = efficiency_rabi_to_mag(efficiency_mag_to_rabi(c).unwrap()).unwrap();
            assert_relative_eq!(back, c, max_relative = 1e-12);
        }
    }

    #[test]
    fn efficiency_from_measurement_values() {
        let c = efficiency_from_measurement(300e3, 0.16).unwrap();
        assert_relative_eq!(c, 0.75e6, max_relative = 1e-12);
        assert_eq!(efficiency_from_measurement(0.0, 1.0).unwrap(), 0.0);
        // 1/sqrt(P): quadrupling the power halves the efficiency.
        let base = efficiency_from_measurement(1e6, 0.5).unwrap();
        assert_relative_eq!(
            efficiency_from_measurement(1e6, 2.0).unwrap(),
            base / 2.0,
            max_relative = 1e-12
        );
        assert!(efficiency_from_measurement(1e6, 0.0).is_err());
    }

    #[test]
    fn quality_factor_combination() {
        let q = combine_quality_factors(&LossBudget::new(
            Some(192.0),
            Some(891.0),
            Some(204.0),
        ))
        .unwrap();
        assert!((q - 89.0).abs() < 0.5, "{q}");

        let single = combine_quality_factors(&LossBudget::new(Some(123.0), None, None)).unwrap();
        assert_relative_eq!(single, 123.0, max_relative = 1e-12);

        let two = combine_quality_factors(&LossBudget::new(Some(80.0), Some(80.0), None)).unwrap();
        assert_relative_eq!(two, 40.0, max_relative = 1e-12);

        assert!(combine_quality_factors(&LossBudget::default()).is_err());
        assert!(combine_quality_factors(&LossBudget::new(Some(-5.0), None, None)).is_err());
    }

    #[test]
    fn combined_q_below_min_channel() {
        let budgets = [
            LossBudget::new(Some(192.0), Some(891.0), Some(204.0)),
            LossBudget::new(Some(50.0), Some(1e6), None),
            LossBudget::new(None, Some(77.0), None),
        ];
        for b in budgets {
            let q = combine_quality_factors(&b).unwrap();
            let min = b.channels().fold(f64::INFINITY, f64::min);
            let single = b.channels().count() == 1;
            if single {
                assert_relative_eq!(q, min, max_relative = 1e-12);
            } else {
                assert!(q < min);
            }
        }
    }

    #[test]
    fn cpw_estimate_first_resonator() {
        let f = cpw_halfwave_estimate(&CpwResonator::default()).unwrap();
        assert_relative_eq!(f, 99e9, max_relative = 0.01);
        // Within a factor 1.5 of the measured E-band resonance.
        assert!(f / 75e9 < 1.5 && 75e9 / f < 1.5);
    }

    #[test]
    fn cpw_superstrate_lowers_frequency() {
        let air = CpwResonator::default();
        let mut eps = 1.0;
        let mut prev = cpw_halfwave_estimate(&air).unwrap();
        while eps < 5.7 {
            eps += 0.5;
            let f = cpw_halfwave_estimate(&CpwResonator {
                superstrate_constant: eps,
                ..air
            })
            .unwrap();
            assert!(f < prev);
            prev = f;
        }
    }

    #[test]
    fn cpw_length_scaling() {
        let r = CpwResonator::default();
        let doubled = CpwResonator {
            resonator_length: 2.0 * r.resonator_length,
            ..r
        };
        assert_relative_eq!(
            cpw_halfwave_estimate(&doubled).unwrap(),
            cpw_halfwave_estimate(&r).unwrap() / 2.0,
            max_relative = 1e-12
        );
        assert!(cpw_halfwave_estimate(&CpwResonator {
            dielectric_constant: 0.5,
            ..r
        })
        .is_err());
    }

    #[test]
    fn resonance_curve_validation() {
        assert!(ResonanceCurve::new(vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(ResonanceCurve::new(vec![2.0, 1.0], vec![0.0, 0.0]).is_err());
        let curve = ResonanceCurve::new(vec![1.0, 2.0, 3.0], vec![0.1, 0.5, 0.1]).unwrap();
        assert_eq!(curve.len(), 3);
    }
}
