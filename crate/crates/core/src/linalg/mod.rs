//! Dense kernels at small fixed dimension.

mod eigen;
mod lu;
mod lyapunov;
mod matrix;
mod ode;

pub use eigen::{eigenvalues, ComplexSpectrum, MAX_EIGEN_DIM};
pub use lu::{determinant, solve_linear, Lu};
pub use lyapunov::{lyapunov_residual, solve_lyapunov};
pub use matrix::Matrix;
pub use ode::integrate_covariance_ode;
