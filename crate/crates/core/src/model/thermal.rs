use crate::units::{HBAR, K_B};

/// Bose–Einstein occupation `1 / (exp(hbar omega / k_B T) - 1)`; exactly 0 at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * temperature);
    if x > 700.0 {
        // exp overflows; the occupation is below 1e-304.
        return (-x).exp();
    }
    1.0 / x.exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::hz_to_rad;

    #[test]
    fn mechanical_mode_at_ten_millikelvin() {
        // hbar*omega/kT = 0.19194..., n = 1/(e^x - 1) = 4.7281...
        let n = thermal_occupation(hz_to_rad(40e6), 10e-3);
        let x = 1.054_571_817e-34 * hz_to_rad(40e6) / (1.380_649e-23 * 10e-3);
        assert!((n - 1.0 / (x.exp() - 1.0)).abs() < 1e-12);
        assert!((n - 4.72).abs() < 0.01, "{n}");
    }

    #[test]
    fn microwave_mode_is_nearly_empty() {
        let n = thermal_occupation(hz_to_rad(10e9), 10e-3);
        assert!(n > 1.0e-21 && n < 2.0e-21, "{n:e}");
    }

    #[test]
    fn zero_temperature() {
        assert_eq!(thermal_occupation(1.0, 0.0), 0.0);
        assert_eq!(thermal_occupation(1e15, 0.0), 0.0);
    }

    #[test]
    fn optical_mode_underflows_gracefully() {
        let n = thermal_occupation(crate::units::wavelength_to_rad(1550e-9), 10e-3);
        assert!((0.0..1e-300).contains(&n));
    }
}
