//! Steady-state Gaussian covariance and continuous-variable entanglement for a
//! cascaded pair of optomagnomechanical systems.
//!
//! Each stage holds a microwave cavity mode `a`, a magnon mode `m`, a
//! mechanical mode `b` and an optical cavity mode `c`. The microwave and
//! optical outputs of stage 1 drive stage 2 with transmission efficiencies
//! `eta1` and `eta2`. The linearized quadrature dynamics give a 16x16 drift
//! matrix and diffusion matrix whose Lyapunov solution is the steady-state
//! covariance, from which logarithmic negativities are computed.
//!
//! All frequencies and rates are angular (rad/s) internally.

pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod model;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use gaussian::{
    check_stability, log_negativity, pairwise_report, quadripartite_witness,
    steady_state_covariance, CovarianceMatrix, EntanglementReport, QuadWitness, Stability,
};
pub use linalg::{ComplexSpectrum, Matrix};
pub use model::{
    CascadeParams, DriveParams, EnvironmentParams, LinearModel, Mode, PhysicalParams,
    SubsystemParams,
};
pub use sweep::{figure_preset, run_sweep, Axis, SweepSpec, SweepTable};
