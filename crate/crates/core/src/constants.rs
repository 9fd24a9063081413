//! Physical constants used across the crate.

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permeability (H/m), CODATA 2022.
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_061_27e-6;

/// Room-temperature resistivity of copper (ohm m).
///
/// Chosen so that the skin depth in copper comes out near 240 nm at 75 GHz
/// and 6.5 um at 100 MHz.
pub const COPPER_RESISTIVITY: f64 = 1.68e-8;
