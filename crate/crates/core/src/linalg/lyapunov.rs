use crate::error::{Error, Result};

use super::eigen::eigenvalues;
use super::lu::{refine, Lu};
use super::Matrix;

/// Solves `A V + V Aᵀ = -Q` for symmetric `V`.
///
/// The equation is vectorized into `(I ⊗ A + A ⊗ I) vec(V) = -vec(Q)` and
/// solved densely, followed by one refinement step and symmetrization.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let n = a.ensure_square()?;
    if q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "Q is {}x{}, A is {n}x{n}",
            q.rows(),
            q.cols()
        )));
    }
    if q.asymmetry() > 1e-12 * q.frobenius_norm().max(1e-14) {
        return Err(Error::InvalidInput("Q must be symmetric".into()));
    }
    let max_re = eigenvalues(a)?.max_real();
    if max_re >= 0.0 {
        return Err(Error::Unstable { margin: -max_re });
    }

    let nn = n * n;
    let mut k = Matrix::zeros(nn, nn);
    // vec is column-major: V[i][j] lives at i + n*j.
    for j in 0..n {
        for i in 0..n {
            let row = i + n * j;
            for l in 0..n {
                k[(row, l + n * j)] += a[(i, l)];
                k[(row, i + n * l)] += a[(j, l)];
            }
        }
    }
    let mut rhs = vec![0.0; nn];
    for j in 0..n {
        for i in 0..n {
            rhs[i + n * j] = -q[(i, j)];
        }
    }

    let lu = Lu::factor(&k)?;
    let mut x = lu.solve(&rhs);
    refine(&k, &lu, &rhs, &mut x);

    let mut v = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            v[(i, j)] = x[i + n * j];
        }
    }
    Ok(v.symmetrized())
}

/// `‖A V + V Aᵀ + Q‖_F / ‖Q‖_F`, with an absolute floor on the denominator.
pub fn lyapunov_residual(a: &Matrix, v: &Matrix, q: &Matrix) -> f64 {
    let av = a * v;
    let r = &(&av + &av.transpose()) + q;
    r.frobenius_norm() / q.frobenius_norm().max(1e-14)
}
