//! Parameter model and assembly of the linearized drift and diffusion matrices.

mod assemble;
mod couplings;
mod langevin;
mod params;
mod thermal;

use std::fmt;
use std::str::FromStr;

pub use assemble::{assemble_diffusion, assemble_drift, cascade_feeds, drift_with_couplings};
pub use couplings::{
    couplings_from_mean_fields, effective_couplings, figure_mode_couplings, mean_fields,
    resolved_sideband_mean_fields, EffectiveCouplings, MeanFields,
};
pub use langevin::{
    finite_difference_jacobian, nonlinear_drift_rhs, refine_fixed_point, state_from_mean_fields,
    BareSystem, LangevinState,
};
pub use params::{CascadeParams, DriveParams, EnvironmentParams, PhysicalParams, SubsystemParams};
pub use thermal::thermal_occupation;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Bosonic modes in canonical order. Each contributes two quadrature rows:
/// `X, Y` for the cavity-like modes and `q, p` for the mechanics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    A1,
    M1,
    B1,
    C1,
    A2,
    M2,
    B2,
    C2,
}

impl Mode {
    pub const ALL: [Mode; 8] = [
        Mode::A1,
        Mode::M1,
        Mode::B1,
        Mode::C1,
        Mode::A2,
        Mode::M2,
        Mode::B2,
        Mode::C2,
    ];

    pub const COUNT: usize = 8;

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Row of the first quadrature of this mode.
    #[inline]
    pub fn offset(self) -> usize {
        2 * self.index()
    }

    pub fn stage(self) -> usize {
        self.index() / 4
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::A1 => "a1",
            Mode::M1 => "m1",
            Mode::B1 => "b1",
            Mode::C1 => "c1",
            Mode::A2 => "a2",
            Mode::M2 => "m2",
            Mode::B2 => "b2",
            Mode::C2 => "c2",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown mode `{s}`")))
    }
}

/// Assembled linear model: `du/dt = A u + noise`, noise correlations `D`.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub drift: Matrix,
    pub diffusion: Matrix,
    /// Characteristic rate (stage-1 mechanical frequency) used to
    /// nondimensionalize before solving.
    pub time_scale: f64,
}

impl LinearModel {
    pub const DIM: usize = 16;

    pub fn assemble(params: &PhysicalParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            drift: assemble_drift(params)?,
            diffusion: assemble_diffusion(params),
            time_scale: params.system1.omega_b,
        })
    }

    pub fn mode_order(&self) -> &'static [Mode; 8] {
        &Mode::ALL
    }
}
