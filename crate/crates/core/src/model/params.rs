use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::units::{hz_to_rad, wavelength_to_rad};

/// Rates, detunings and couplings of one stage, all in rad/s.
///
/// In figure mode `g_mb` and `g_cb` are the effective (linearized) couplings.
/// The stage-2 `g_cb` is not read: it follows from the stage-1 value through
/// [`CascadeParams::g_ratio`] and `eta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsystemParams {
    pub kappa_a: f64,
    pub kappa_m: f64,
    pub kappa_c: f64,
    pub gamma_b: f64,
    pub omega_b: f64,
    pub delta_a: f64,
    pub delta_m_eff: f64,
    pub delta_c_eff: f64,
    pub g_am: f64,
    pub g_mb: f64,
    pub g_cb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeParams {
    /// Microwave transmission efficiency from stage 1 to stage 2.
    pub eta1: f64,
    /// Optical transmission efficiency from stage 1 to stage 2.
    pub eta2: f64,
    /// Single-photon optomechanical coupling ratio `g_c2b2 / g_c1b1`.
    pub g_ratio: f64,
}

impl Default for CascadeParams {
    fn default() -> Self {
        Self {
            eta1: 0.75,
            eta2: 0.75,
            g_ratio: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    /// Bath temperature in kelvin.
    pub temperature: f64,
    pub omega_a: f64,
    pub omega_m: f64,
    pub omega_c: f64,
}

/// Physical drives for deriving the effective couplings from mean fields.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveParams {
    /// Magnon Rabi frequency, applied to both stages.
    pub rabi: f64,
    /// Optical drive amplitude on the stage-1 cavity.
    pub e_laser: f64,
    /// Bare magnomechanical couplings per stage.
    pub g_mb_bare: [f64; 2],
    /// Bare stage-1 optomechanical coupling; stage 2 uses `g_ratio` times this.
    pub g_cb_bare: f64,
    /// Spin-physics quantities carried along unchanged (bias field, spin count, ...).
    pub passthrough: BTreeMap<String, f64>,
}

impl DriveParams {
    /// Drive amplitude of a laser of power `power` (W) and angular frequency
    /// `omega_l` on a cavity with decay rate `kappa_c`: `sqrt(2 kappa P / (hbar omega))`.
    pub fn laser_amplitude(kappa_c: f64, power: f64, omega_l: f64) -> f64 {
        (2.0 * kappa_c * power / (crate::units::HBAR * omega_l)).sqrt()
    }
}

/// Full parameter set of the two-stage system.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    pub system1: SubsystemParams,
    pub system2: SubsystemParams,
    pub cascade: CascadeParams,
    pub environment: EnvironmentParams,
    /// `Some` selects physical-drive mode.
    pub drive: Option<DriveParams>,
}

impl PhysicalParams {
    /// The common parameter set of the detuning studies: decay rates, bath,
    /// couplings and efficiencies shared by both stages, with the microwave
    /// and magnon modes on the Stokes sideband and the optical mode on the
    /// anti-Stokes sideband.
    pub fn baseline() -> Self {
        let omega_b = hz_to_rad(40e6);
        let stage = SubsystemParams {
            kappa_a: hz_to_rad(1.5e6),
            kappa_m: hz_to_rad(1.5e6),
            kappa_c: hz_to_rad(2e6),
            gamma_b: hz_to_rad(100.0),
            omega_b,
            delta_a: -omega_b,
            delta_m_eff: -omega_b,
            delta_c_eff: omega_b,
            g_am: hz_to_rad(4e6),
            g_mb: hz_to_rad(2e6),
            g_cb: hz_to_rad(8e6),
        };
        Self {
            system1: stage,
            system2: stage,
            cascade: CascadeParams::default(),
            environment: EnvironmentParams {
                temperature: 10e-3,
                omega_a: hz_to_rad(10e9),
                omega_m: hz_to_rad(10e9),
                omega_c: wavelength_to_rad(1550e-9),
            },
            drive: None,
        }
    }

    pub fn stage(&self, index: usize) -> &SubsystemParams {
        match index {
            0 => &self.system1,
            1 => &self.system2,
            _ => panic!("stage index {index} out of range"),
        }
    }

    pub fn stages(&self) -> [&SubsystemParams; 2] {
        [&self.system1, &self.system2]
    }

    pub fn is_physical_drive(&self) -> bool {
        self.drive.is_some()
    }

    /// Collects every range violation, not just the first.
    pub fn validate(&self) -> Result<()> {
        let problems = self.violations();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }

    /// Human-readable list of violated constraints, each naming its key.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |ok: bool, key: &str, msg: &str| {
            if !ok {
                out.push(format!("{key}: {msg}"));
            }
        };
        for (name, s) in [("system1", &self.system1), ("system2", &self.system2)] {
            for (field, value) in s.fields() {
                check(
                    value.is_finite(),
                    &format!("{name}.{field}"),
                    "must be finite",
                );
            }
            for (field, value) in [
                ("kappa_a", s.kappa_a),
                ("kappa_m", s.kappa_m),
                ("kappa_c", s.kappa_c),
                ("gamma_b", s.gamma_b),
            ] {
                check(
                    value >= 0.0,
                    &format!("{name}.{field}"),
                    "decay rate must be >= 0",
                );
            }
            check(s.omega_b > 0.0, &format!("{name}.omega_b"), "must be > 0");
        }
        let c = &self.cascade;
        check(
            (0.0..=1.0).contains(&c.eta1),
            "cascade.eta1",
            "must lie in [0, 1]",
        );
        check(
            (0.0..=1.0).contains(&c.eta2),
            "cascade.eta2",
            "must lie in [0, 1]",
        );
        check(
            c.g_ratio > 0.0 && c.g_ratio.is_finite(),
            "cascade.g_ratio",
            "must be > 0",
        );
        let e = &self.environment;
        check(
            e.temperature >= 0.0 && e.temperature.is_finite(),
            "environment.temperature",
            "must be >= 0",
        );
        check(e.omega_a > 0.0, "environment.omega_a", "must be > 0");
        check(e.omega_m > 0.0, "environment.omega_m", "must be > 0");
        check(e.omega_c > 0.0, "environment.omega_c", "must be > 0");
        if let Some(d) = &self.drive {
            check(d.rabi >= 0.0, "drive.rabi", "must be >= 0");
            check(d.e_laser >= 0.0, "drive.e_laser", "must be >= 0");
            check(d.g_mb_bare[0] >= 0.0, "drive.g_mb_bare1", "must be >= 0");
            check(d.g_mb_bare[1] >= 0.0, "drive.g_mb_bare2", "must be >= 0");
            check(d.g_cb_bare >= 0.0, "drive.g_cb_bare", "must be >= 0");
        }
        out
    }

    /// Every scalar as `(section, key, value)`, rates in rad/s under `_rad`
    /// keys so that the values are exact.
    pub fn entries(&self) -> Vec<(&'static str, String, f64)> {
        let mut out = Vec::new();
        for (section, s) in [("system1", &self.system1), ("system2", &self.system2)] {
            for (field, value) in s.fields() {
                out.push((section, format!("{field}_rad"), value));
            }
        }
        let c = &self.cascade;
        out.push(("cascade", "eta1".into(), c.eta1));
        out.push(("cascade", "eta2".into(), c.eta2));
        out.push(("cascade", "g_ratio".into(), c.g_ratio));
        let e = &self.environment;
        out.push(("environment", "temperature".into(), e.temperature));
        out.push(("environment", "omega_a_rad".into(), e.omega_a));
        out.push(("environment", "omega_m_rad".into(), e.omega_m));
        out.push(("environment", "omega_c_rad".into(), e.omega_c));
        if let Some(d) = &self.drive {
            out.push(("drive", "rabi_rad".into(), d.rabi));
            out.push(("drive", "e_laser_rad".into(), d.e_laser));
            out.push(("drive", "g_mb_bare1_rad".into(), d.g_mb_bare[0]));
            out.push(("drive", "g_mb_bare2_rad".into(), d.g_mb_bare[1]));
            out.push(("drive", "g_cb_bare_rad".into(), d.g_cb_bare));
            for (k, v) in &d.passthrough {
                out.push(("drive", k.clone(), *v));
            }
        }
        out
    }

    /// Lossless modes make the drift matrix marginal at best.
    pub fn has_lossless_mode(&self) -> bool {
        self.stages()
            .iter()
            .any(|s| s.kappa_a == 0.0 || s.kappa_m == 0.0 || s.kappa_c == 0.0 || s.gamma_b == 0.0)
    }
}

impl SubsystemParams {
    pub const FIELD_NAMES: [&'static str; 11] = [
        "kappa_a",
        "kappa_m",
        "kappa_c",
        "gamma_b",
        "omega_b",
        "delta_a",
        "delta_m_eff",
        "delta_c_eff",
        "g_am",
        "g_mb",
        "g_cb",
    ];

    pub fn fields(&self) -> [(&'static str, f64); 11] {
        let v = [
            self.kappa_a,
            self.kappa_m,
            self.kappa_c,
            self.gamma_b,
            self.omega_b,
            self.delta_a,
            self.delta_m_eff,
            self.delta_c_eff,
            self.g_am,
            self.g_mb,
            self.g_cb,
        ];
        std::array::from_fn(|i| (Self::FIELD_NAMES[i], v[i]))
    }

    pub fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "kappa_a" => &mut self.kappa_a,
            "kappa_m" => &mut self.kappa_m,
            "kappa_c" => &mut self.kappa_c,
            "gamma_b" => &mut self.gamma_b,
            "omega_b" => &mut self.omega_b,
            "delta_a" => &mut self.delta_a,
            "delta_m_eff" => &mut self.delta_m_eff,
            "delta_c_eff" => &mut self.delta_c_eff,
            "g_am" => &mut self.g_am,
            "g_mb" => &mut self.g_mb,
            "g_cb" => &mut self.g_cb,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_values() {
        let p = PhysicalParams::baseline();
        assert!(p.validate().is_ok());
        assert_eq!(p.system1.kappa_a, 2.0 * std::f64::consts::PI * 1.5e6);
        assert_eq!(p.system1.delta_a, -p.system1.omega_b);
        assert_eq!(p.system1, p.system2);
    }

    #[test]
    fn all_violations_reported() {
        let mut p = PhysicalParams::baseline();
        p.cascade.eta1 = 1.3;
        p.system2.kappa_c = -1.0;
        p.environment.temperature = -0.1;
        let v = p.violations();
        assert_eq!(v.len(), 3, "{v:?}");
        assert!(v.iter().any(|s| s.starts_with("cascade.eta1")));
        assert!(v.iter().any(|s| s.starts_with("system2.kappa_c")));
    }

    #[test]
    fn laser_amplitude_dimensions() {
        // 1 mW at 1550 nm into a 2pi x 2 MHz cavity.
        let w = wavelength_to_rad(1550e-9);
        let e = DriveParams::laser_amplitude(hz_to_rad(2e6), 1e-3, w);
        let photons_per_s = 1e-3 / (crate::units::HBAR * w);
        assert!((e * e - 2.0 * hz_to_rad(2e6) * photons_per_s).abs() < 1e-6 * e * e);
    }
}
