use crate::error::Result;
use crate::linalg::{eigenvalues, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub stable: bool,
    /// `-max Re(lambda)`; negative when some mode grows.
    pub margin: f64,
}

/// Eigenvalue test on the drift matrix. Eigenvalues within `1e-12 |A|_F` of
/// the imaginary axis count as unstable, so marginal systems are rejected.
pub fn check_stability(a: &Matrix) -> Result<Stability> {
    let max_re = eigenvalues(a)?.max_real();
    let tol = 1e-12 * a.frobenius_norm();
    Ok(Stability {
        stable: max_re < -tol,
        margin: -max_re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{assemble_drift, PhysicalParams};

    #[test]
    fn negative_identity() {
        let s = check_stability(&Matrix::identity(4).scaled(-1.0)).unwrap();
        assert!(s.stable);
        assert!((s.margin - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_is_marginal() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let s = check_stability(&a).unwrap();
        assert!(!s.stable);
        assert!(s.margin.abs() < 1e-14);
    }

    #[test]
    fn growing_mode() {
        let a = Matrix::from_diagonal(&[-1.0, 0.5]);
        let s = check_stability(&a).unwrap();
        assert!(!s.stable);
        assert_eq!(s.margin, -0.5);
    }

    #[test]
    fn baseline_is_stable() {
        let p = PhysicalParams::baseline();
        let s = check_stability(&assemble_drift(&p).unwrap()).unwrap();
        assert!(s.stable);
        // Margin is set by the slowest (mechanical-like) mode.
        assert!(s.margin > 0.0 && s.margin < p.system1.omega_b);
    }
}
