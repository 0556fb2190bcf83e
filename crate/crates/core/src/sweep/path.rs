use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{PhysicalParams, SubsystemParams};
use crate::units::hz_to_rad;

/// Unit in which a value addressed by a [`ParamPath`] is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    /// Linear frequency, converted with a factor 2π.
    Hz,
    /// Angular frequency, used as is.
    Rad,
    /// Multiples of the stage-1 mechanical frequency.
    OmegaB,
    /// Dimensionless or SI quantity used as is (efficiencies, kelvin, ...).
    Plain,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Rad => "_rad",
            Unit::OmegaB => "_wb",
            Unit::Hz | Unit::Plain => "",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// Subsystem field on the listed stages.
    Stage {
        stages: [bool; 2],
        field: &'static str,
    },
    Eta1,
    Eta2,
    GRatio,
    Temperature,
    Environment(&'static str),
    Drive(&'static str),
}

/// Address of a scalar in [`PhysicalParams`], e.g. `system1.kappa_a`,
/// `delta_m_eff_wb` (both stages, in units of the mechanical frequency) or
/// `cascade.eta2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPath {
    text: String,
    target: Target,
    unit: Unit,
}

const ENVIRONMENT_RATES: [&str; 3] = ["omega_a", "omega_m", "omega_c"];
const DRIVE_RATES: [&str; 5] = ["rabi", "e_laser", "g_mb_bare1", "g_mb_bare2", "g_cb_bare"];

fn split_unit(name: &str) -> (&str, Unit) {
    if let Some(base) = name.strip_suffix("_rad") {
        (base, Unit::Rad)
    } else if let Some(base) = name.strip_suffix("_wb") {
        (base, Unit::OmegaB)
    } else {
        (name, Unit::Hz)
    }
}

fn stage_field(name: &str) -> Option<&'static str> {
    SubsystemParams::FIELD_NAMES
        .iter()
        .copied()
        .find(|f| *f == name)
}

fn find(list: &[&'static str], name: &str) -> Option<&'static str> {
    list.iter().copied().find(|f| *f == name)
}

impl ParamPath {
    pub fn parse(text: &str) -> Result<Self> {
        let unknown = || Error::UnknownParameter(text.to_string());
        let (section, name) = match text.split_once('.') {
            Some((s, n)) => (Some(s), n),
            None => (None, text),
        };
        let (base, unit) = split_unit(name);
        let (target, unit) = match section {
            None | Some("system1") | Some("system2") => {
                let field = stage_field(base).ok_or_else(unknown)?;
                let stages = match section {
                    None => [true, true],
                    Some("system1") => [true, false],
                    _ => [false, true],
                };
                (Target::Stage { stages, field }, unit)
            }
            Some("cascade") => match name {
                "eta1" => (Target::Eta1, Unit::Plain),
                "eta2" => (Target::Eta2, Unit::Plain),
                "g_ratio" => (Target::GRatio, Unit::Plain),
                _ => return Err(unknown()),
            },
            Some("environment") => {
                if name == "temperature" {
                    (Target::Temperature, Unit::Plain)
                } else {
                    (
                        Target::Environment(find(&ENVIRONMENT_RATES, base).ok_or_else(unknown)?),
                        unit,
                    )
                }
            }
            Some("drive") => (
                Target::Drive(find(&DRIVE_RATES, base).ok_or_else(unknown)?),
                unit,
            ),
            Some(_) => return Err(unknown()),
        };
        Ok(Self {
            text: text.to_string(),
            target,
            unit,
        })
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Converts `value` from this path's unit to the internal one.
    pub fn to_internal(&self, value: f64, omega_b: f64) -> f64 {
        match self.unit {
            Unit::Hz => hz_to_rad(value),
            Unit::OmegaB => value * omega_b,
            Unit::Rad | Unit::Plain => value,
        }
    }

    /// Sets the addressed value(s). `omega_b` scaling uses the stage-1
    /// mechanical frequency of `params` before the update.
    pub fn apply(&self, params: &mut PhysicalParams, value: f64) -> Result<()> {
        let v = self.to_internal(value, params.system1.omega_b);
        match self.target {
            Target::Stage { stages, field } => {
                for (i, on) in stages.into_iter().enumerate() {
                    if on {
                        let s = if i == 0 {
                            &mut params.system1
                        } else {
                            &mut params.system2
                        };
                        *s.field_mut(field).expect("validated field name") = v;
                    }
                }
            }
            Target::Eta1 => params.cascade.eta1 = v,
            Target::Eta2 => params.cascade.eta2 = v,
            Target::GRatio => params.cascade.g_ratio = v,
            Target::Temperature => params.environment.temperature = v,
            Target::Environment(f) => match f {
                "omega_a" => params.environment.omega_a = v,
                "omega_m" => params.environment.omega_m = v,
                _ => params.environment.omega_c = v,
            },
            Target::Drive(f) => {
                let d = params.drive.as_mut().ok_or_else(|| {
                    Error::InvalidInput(format!("`{}` needs a [drive] section", self.text))
                })?;
                match f {
                    "rabi" => d.rabi = v,
                    "e_laser" => d.e_laser = v,
                    "g_mb_bare1" => d.g_mb_bare[0] = v,
                    "g_mb_bare2" => d.g_mb_bare[1] = v,
                    _ => d.g_cb_bare = v,
                }
            }
        }
        Ok(())
    }

    /// Reads the addressed value in this path's unit (the first stage if
    /// both are addressed).
    pub fn get(&self, params: &PhysicalParams) -> Result<f64> {
        let internal = match self.target {
            Target::Stage { stages, field } => {
                let s = if stages[0] {
                    params.system1
                } else {
                    params.system2
                };
                s.fields()
                    .iter()
                    .find(|(n, _)| *n == field)
                    .map(|(_, v)| *v)
                    .unwrap_or(f64::NAN)
            }
            Target::Eta1 => params.cascade.eta1,
            Target::Eta2 => params.cascade.eta2,
            Target::GRatio => params.cascade.g_ratio,
            Target::Temperature => params.environment.temperature,
            Target::Environment(f) => match f {
                "omega_a" => params.environment.omega_a,
                "omega_m" => params.environment.omega_m,
                _ => params.environment.omega_c,
            },
            Target::Drive(f) => {
                let d = params.drive.as_ref().ok_or_else(|| {
                    Error::InvalidInput(format!("`{}` needs a [drive] section", self.text))
                })?;
                match f {
                    "rabi" => d.rabi,
                    "e_laser" => d.e_laser,
                    "g_mb_bare1" => d.g_mb_bare[0],
                    "g_mb_bare2" => d.g_mb_bare[1],
                    _ => d.g_cb_bare,
                }
            }
        };
        Ok(match self.unit {
            Unit::Hz => crate::units::rad_to_hz(internal),
            Unit::OmegaB => internal / params.system1.omega_b,
            Unit::Rad | Unit::Plain => internal,
        })
    }

    /// Name of the same quantity with no unit suffix.
    pub fn base_name(&self) -> &str {
        let s = &self.text;
        s.strip_suffix(self.unit.suffix()).unwrap_or(s)
    }
}

impl FromStr for ParamPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ParamPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
