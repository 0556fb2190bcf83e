//! Physical constants and unit helpers.

use std::f64::consts::TAU;

/// Reduced Planck constant (J s), CODATA 2018 exact.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light (m/s), exact.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Linear frequency in Hz to angular frequency in rad/s.
#[inline]
pub fn hz_to_rad(f: f64) -> f64 {
    TAU * f
}

#[inline]
pub fn rad_to_hz(w: f64) -> f64 {
    w / TAU
}

/// Angular frequency of light with vacuum wavelength `lambda` (m).
pub fn wavelength_to_rad(lambda: f64) -> f64 {
    TAU * C_LIGHT / lambda
}
