//! Sectioned `key = value` configuration files.
//!
//! Frequencies, rates, detunings and couplings are read in **Hz** and
//! multiplied by 2π; append `_rad` to a key to give the value in rad/s
//! instead (`kappa_a = 1.5e6` and `kappa_a_rad = 9424777.96` are the same).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use omm_core::model::{
    CascadeParams, DriveParams, EnvironmentParams, PhysicalParams, SubsystemParams,
};
use omm_core::sweep::format_value;
use omm_core::units::{hz_to_rad, wavelength_to_rad};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

const SECTIONS: [&str; 5] = ["system1", "system2", "cascade", "environment", "drive"];

/// Spin-physics quantities accepted in `[drive]` and carried along unchanged.
const PASSTHROUGH: [&str; 4] = [
    "gyromagnetic_ratio",
    "spin_count",
    "drive_field",
    "bias_field",
];

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Collects problems while reading one section.
struct Section<'a> {
    name: &'a str,
    table: BTreeMap<String, f64>,
    used: Vec<String>,
}

impl<'a> Section<'a> {
    fn new(name: &'a str, raw: Option<&toml::Value>, errors: &mut Vec<String>) -> Self {
        let mut table = BTreeMap::new();
        match raw {
            None => {}
            Some(toml::Value::Table(t)) => {
                for (k, v) in t {
                    let x = match v {
                        toml::Value::Float(x) => Some(*x),
                        toml::Value::Integer(i) => Some(*i as f64),
                        _ => None,
                    };
                    match x {
                        Some(x) => {
                            table.insert(k.clone(), x);
                        }
                        None => errors.push(format!("{name}.{k}: expected a number")),
                    }
                }
            }
            Some(_) => errors.push(format!("{name}: expected a section")),
        }
        Self {
            name,
            table,
            used: Vec::new(),
        }
    }

    fn plain(&mut self, key: &str) -> Option<f64> {
        let v = self.table.get(key).copied();
        if v.is_some() {
            self.used.push(key.to_string());
        }
        v
    }

    /// Rate given in Hz under `key` or in rad/s under `key_rad`.
    fn rate(&mut self, key: &str, errors: &mut Vec<String>) -> Option<f64> {
        let rad_key = format!("{key}_rad");
        match (self.plain(key), self.plain(&rad_key)) {
            (Some(_), Some(_)) => {
                errors.push(format!(
                    "{}.{key}: given both in Hz and as `{rad_key}`",
                    self.name
                ));
                None
            }
            (Some(hz), None) => Some(hz_to_rad(hz)),
            (None, rad) => rad,
        }
    }

    fn require(&self, key: &str, value: Option<f64>, errors: &mut Vec<String>) -> f64 {
        value.unwrap_or_else(|| {
            errors.push(format!("{}.{key}: missing", self.name));
            f64::NAN
        })
    }

    fn finish(&self, errors: &mut Vec<String>) {
        for key in self.table.keys() {
            if !self.used.contains(key) {
                errors.push(format!("{}.{key}: unknown key", self.name));
            }
        }
    }
}

fn read_stage(
    sec: &mut Section,
    fallback: Option<&SubsystemParams>,
    errors: &mut Vec<String>,
) -> SubsystemParams {
    let mut s = fallback.copied().unwrap_or(SubsystemParams {
        kappa_a: f64::NAN,
        kappa_m: f64::NAN,
        kappa_c: f64::NAN,
        gamma_b: f64::NAN,
        omega_b: f64::NAN,
        delta_a: f64::NAN,
        delta_m_eff: f64::NAN,
        delta_c_eff: f64::NAN,
        g_am: f64::NAN,
        g_mb: f64::NAN,
        g_cb: f64::NAN,
    });
    for field in SubsystemParams::FIELD_NAMES {
        if fallback.is_some() && field == "g_cb" {
            continue;
        }
        let value = sec.rate(field, errors);
        let slot = s.field_mut(field).expect("known field");
        match (value, fallback) {
            (Some(v), _) => *slot = v,
            (None, Some(_)) => {}
            (None, None) => *slot = sec.require(field, None, errors),
        }
    }
    s
}

/// Parses and validates a configuration. Every problem found is reported,
/// each naming its `section.key`.
pub fn parse_config(text: &str) -> Result<PhysicalParams, ConfigError> {
    let doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax {
            line: e.span().map_or(1, |s| line_of(text, s.start)),
            message: e.message().trim().to_string(),
        })?;
    let mut errors = Vec::new();
    for key in doc.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            errors.push(format!("{key}: unknown section"));
        }
    }

    let mut s1 = Section::new("system1", doc.get("system1"), &mut errors);
    let system1 = read_stage(&mut s1, None, &mut errors);
    s1.finish(&mut errors);

    // Stage 2 defaults key by key to stage 1. Its optomechanical coupling is
    // never read: it follows from stage 1 through the cascade.
    let mut s2 = Section::new("system2", doc.get("system2"), &mut errors);
    if s2.plain("g_cb").is_some() || s2.plain("g_cb_rad").is_some() {
        errors.push(
            "system2.g_cb: not configurable, the stage-2 coupling follows from system1.g_cb and cascade.g_ratio"
                .into(),
        );
    }
    let system2 = read_stage(&mut s2, Some(&system1), &mut errors);
    s2.finish(&mut errors);

    let mut c = Section::new("cascade", doc.get("cascade"), &mut errors);
    let eta1 = c.plain("eta1");
    let eta2 = c.plain("eta2");
    let cascade = CascadeParams {
        eta1: c.require("eta1", eta1, &mut errors),
        eta2: c.require("eta2", eta2, &mut errors),
        g_ratio: c
            .plain("g_ratio")
            .unwrap_or(CascadeParams::default().g_ratio),
    };
    c.finish(&mut errors);

    let mut e = Section::new("environment", doc.get("environment"), &mut errors);
    let temperature = e.plain("temperature");
    let omega_a = e.rate("omega_a", &mut errors);
    let omega_m = e.rate("omega_m", &mut errors);
    let omega_c = match (e.rate("omega_c", &mut errors), e.plain("lambda_c")) {
        (Some(_), Some(_)) => {
            errors.push("environment.lambda_c: conflicts with environment.omega_c".into());
            None
        }
        (Some(w), None) => Some(w),
        (None, Some(lambda)) => Some(wavelength_to_rad(lambda)),
        (None, None) => {
            errors.push("environment.omega_c: missing (or give lambda_c in metres)".into());
            Some(f64::NAN)
        }
    };
    let environment = EnvironmentParams {
        temperature: e.require("temperature", temperature, &mut errors),
        omega_a: e.require("omega_a", omega_a, &mut errors),
        omega_m: e.require("omega_m", omega_m, &mut errors),
        omega_c: omega_c.unwrap_or(f64::NAN),
    };
    e.finish(&mut errors);

    let drive = if doc.contains_key("drive") {
        let mut d = Section::new("drive", doc.get("drive"), &mut errors);
        let drive = read_drive(&mut d, &system1, &environment, &mut errors);
        d.finish(&mut errors);
        Some(drive)
    } else {
        None
    };

    let params = PhysicalParams {
        system1,
        system2,
        cascade,
        environment,
        drive,
    };
    if errors.is_empty() {
        errors.extend(params.violations());
    }
    if errors.is_empty() {
        Ok(params)
    } else {
        Err(ConfigError::Invalid(errors))
    }
}

fn read_drive(
    d: &mut Section,
    system1: &SubsystemParams,
    env: &EnvironmentParams,
    errors: &mut Vec<String>,
) -> DriveParams {
    let rabi = d.rate("rabi", errors);
    let e_laser = match (d.rate("e_laser", errors), d.plain("laser_power")) {
        (Some(_), Some(_)) => {
            errors.push("drive.laser_power: conflicts with drive.e_laser".into());
            None
        }
        // The laser sits one mechanical frequency below the cavity; the
        // photon energy is taken at the cavity frequency.
        (None, Some(power)) => Some(DriveParams::laser_amplitude(
            system1.kappa_c,
            power,
            env.omega_c,
        )),
        (e, None) => e,
    };
    let both = d.rate("g_mb_bare", errors);
    let g1 = d.rate("g_mb_bare1", errors).or(both);
    let g2 = d.rate("g_mb_bare2", errors).or(both).or(g1);
    let g_cb = d.rate("g_cb_bare", errors);
    let mut passthrough = BTreeMap::new();
    for key in PASSTHROUGH {
        if let Some(v) = d.plain(key) {
            passthrough.insert(key.to_string(), v);
        }
    }
    DriveParams {
        rabi: d.require("rabi", rabi, errors),
        e_laser: d.require("e_laser", e_laser, errors),
        g_mb_bare: [
            d.require("g_mb_bare1", g1, errors),
            d.require("g_mb_bare2", g2, errors),
        ],
        g_cb_bare: d.require("g_cb_bare", g_cb, errors),
        passthrough,
    }
}

/// Config text that parses back to `params` exactly. Rates are written in
/// rad/s; the stage-2 optomechanical coupling is not written.
pub fn serialize_config(params: &PhysicalParams) -> String {
    let mut out = String::new();
    let mut current = "";
    for (section, key, value) in params.entries() {
        if section == "system2" && key == "g_cb_rad" {
            continue;
        }
        if section != current {
            if !current.is_empty() {
                out.push('\n');
            }
            writeln!(out, "[{section}]").unwrap();
            current = section;
        }
        writeln!(out, "{key} = {}", toml_float(value)).unwrap();
    }
    out
}

fn toml_float(x: f64) -> String {
    let s = format_value(x);
    if s.contains(['.', 'e', 'E']) || s.contains("inf") {
        s
    } else {
        format!("{s}.0")
    }
}
