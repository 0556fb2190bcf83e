use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, lyapunov_residual, solve_lyapunov, Matrix};
use crate::model::{LinearModel, Mode};

use super::stability::{check_stability, Stability};

/// Largest accepted relative Lyapunov residual.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Slack below 1/2 tolerated on symplectic eigenvalues.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Symmetrized quadrature covariance of an `n`-mode Gaussian state, ordered
/// `(X1, Y1, X2, Y2, ...)`. Vacuum is `I / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: Matrix,
}

impl CovarianceMatrix {
    /// Accepts a square, even-dimensional, finite matrix that is symmetric to
    /// `1e-12` relative; the stored matrix is exactly symmetric.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let dim = matrix.ensure_square()?;
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "covariance dimension must be even and positive, got {dim}"
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        if matrix.asymmetry() > 1e-12 * matrix.frobenius_norm() {
            return Err(Error::InvalidInput(
                "covariance matrix is not symmetric".into(),
            ));
        }
        Ok(Self {
            matrix: matrix.symmetrized(),
        })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            matrix: Matrix::identity(2 * modes).scaled(0.5),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn modes(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.matrix)
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self.symplectic_eigenvalues()?[0])
    }

    /// Uncertainty relation `nu_k >= 1/2 - PHYSICALITY_TOL` for every mode.
    pub fn is_physical(&self) -> bool {
        matches!(self.min_symplectic_eigenvalue(), Ok(nu) if nu >= 0.5 - PHYSICALITY_TOL)
    }

    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        reduced_covariance(self, modes)
    }

    /// Reduction of a full two-stage covariance to named modes.
    pub fn reduced_modes(&self, modes: &[Mode]) -> Result<Self> {
        if self.modes() != Mode::COUNT {
            return Err(Error::DimensionMismatch(format!(
                "named modes need an {}-mode covariance, got {} modes",
                Mode::COUNT,
                self.modes()
            )));
        }
        let idx: Vec<usize> = modes.iter().map(|m| m.index()).collect();
        reduced_covariance(self, &idx)
    }
}

/// Covariance together with the diagnostics of its solve.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub covariance: CovarianceMatrix,
    pub stability: Stability,
    /// Relative Lyapunov residual of the nondimensionalized equation.
    pub residual: f64,
    pub min_symplectic: f64,
}

/// Solves `A V + V A^T = -D` for a stable model, after rescaling time by the
/// model's characteristic rate. The solution is checked against the residual
/// tolerance and the uncertainty relation.
pub fn steady_state(model: &LinearModel) -> Result<SteadyState> {
    let stability = check_stability(&model.drift)?;
    if !stability.stable {
        return Err(Error::Unstable {
            margin: stability.margin,
        });
    }
    let scale = 1.0 / model.time_scale;
    let a = model.drift.scaled(scale);
    let d = model.diffusion.scaled(scale);
    let v = solve_lyapunov(&a, &d)?;
    let residual = lyapunov_residual(&a, &v, &d);
    if residual.is_nan() || residual > RESIDUAL_TOL {
        return Err(Error::InaccurateSolve { residual });
    }
    let covariance = CovarianceMatrix::new(v)?;
    let nu = covariance.min_symplectic_eigenvalue()?;
    if nu < 0.5 - PHYSICALITY_TOL {
        return Err(Error::Unphysical { min_symplectic: nu });
    }
    Ok(SteadyState {
        covariance,
        stability,
        residual,
        min_symplectic: nu,
    })
}

pub fn steady_state_covariance(model: &LinearModel) -> Result<CovarianceMatrix> {
    steady_state(model).map(|s| s.covariance)
}

fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect()
}

fn check_subset(modes: &[usize], n: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::InvalidInput("mode subset is empty".into()));
    }
    for (i, &k) in modes.iter().enumerate() {
        if k >= n {
            return Err(Error::InvalidInput(format!(
                "mode index {k} out of range for {n} modes"
            )));
        }
        if modes[..i].contains(&k) {
            return Err(Error::InvalidInput(format!("mode index {k} listed twice")));
        }
    }
    Ok(())
}

/// Covariance of the listed modes, in the listed order.
pub fn reduced_covariance(v: &CovarianceMatrix, modes: &[usize]) -> Result<CovarianceMatrix> {
    check_subset(modes, v.modes())?;
    Ok(CovarianceMatrix {
        matrix: v.matrix.select(&quadrature_indices(modes)),
    })
}

/// Flips the sign of the momentum quadrature of every mode in `party`.
pub fn partial_transpose(v: &CovarianceMatrix, party: &[usize]) -> Result<Matrix> {
    let n = v.modes();
    check_subset(party, n)?;
    if party.len() == n {
        return Err(Error::InvalidInput(
            "partial transpose over every mode".into(),
        ));
    }
    let mut sign = vec![1.0; 2 * n];
    for &k in party {
        sign[2 * k + 1] = -1.0;
    }
    let mut out = v.matrix.clone();
    for i in 0..2 * n {
        for j in 0..2 * n {
            out[(i, j)] *= sign[i] * sign[j];
        }
    }
    Ok(out)
}

fn is_positive_definite(v: &Matrix) -> bool {
    let n = v.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = v[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = v[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    true
}

/// Symplectic spectrum of a symmetric positive-definite matrix, ascending.
///
/// The eigenvalues of `Omega V` come in pairs `±i nu`; each modulus must occur
/// twice within `1e-8` of the largest one.
pub fn symplectic_eigenvalues(v: &Matrix) -> Result<Vec<f64>> {
    let dim = v.ensure_square()?;
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not a positive even number"
        )));
    }
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    if v.asymmetry() > 1e-12 * v.frobenius_norm() {
        return Err(Error::InvalidInput("matrix is not symmetric".into()));
    }
    if !is_positive_definite(v) {
        return Err(Error::InvalidInput(
            "matrix is not positive definite".into(),
        ));
    }
    // Omega = diag([[0, 1], [-1, 0]], ...)
    let mut w = Matrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        for j in 0..dim {
            w[(2 * k, j)] = v[(2 * k + 1, j)];
            w[(2 * k + 1, j)] = -v[(2 * k, j)];
        }
    }
    let mut moduli: Vec<f64> = eigenvalues(&w)?.values().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let scale = moduli[dim - 1];
    let mut out = Vec::with_capacity(dim / 2);
    for pair in moduli.chunks(2) {
        if (pair[1] - pair[0]).abs() > 1e-8 * scale {
            return Err(Error::Degenerate(format!(
                "eigenvalues of Omega V are not paired: {} vs {}",
                pair[0], pair[1]
            )));
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}
