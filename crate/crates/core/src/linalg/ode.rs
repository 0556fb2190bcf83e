//! Time-domain oracle for the steady-state covariance.
//!
//! Integrates `dV/dt = A V + V Aᵀ + D`, `V(0) = 0`, together with the
//! propagator `dΦ/dt = A Φ`, `Φ(0) = I`, over a short base interval using an
//! adaptive Dormand–Prince 5(4) scheme. The horizon is then reached by exact
//! semigroup doubling, `V(2t) = V(t) + Φ(t) V(t) Φ(t)ᵀ` and `Φ(2t) = Φ(t)²`.

use crate::error::{Error, Result};

use super::Matrix;

const PROPAGATOR_LIMIT: f64 = 1e10;

// Dormand–Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Returns `V(t_end)` for the covariance ODE started from `V(0) = 0`.
///
/// `tol` bounds the local error of the base-interval integration (relative,
/// with an absolute floor scaled to each block).
pub fn integrate_covariance_ode(a: &Matrix, d: &Matrix, t_end: f64, tol: f64) -> Result<Matrix> {
    let n = a.ensure_square()?;
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch("D must match A".into()));
    }
    if t_end.is_nan() || t_end < 0.0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("t_end must be >= 0 and tol > 0".into()));
    }
    if t_end == 0.0 {
        return Ok(Matrix::zeros(n, n));
    }

    let rate = a.frobenius_norm().max(1e-300);
    let mut doublings = 0u32;
    while t_end / 2f64.powi(doublings as i32) > 0.5 / rate && doublings < 1000 {
        doublings += 1;
    }
    let tau = t_end / 2f64.powi(doublings as i32);

    let (mut phi, mut v) = dopri_base(a, d, tau, tol)?;
    let mut t = tau;
    for _ in 0..doublings {
        let pv = &phi * &v;
        v = &v + &(&pv * &phi.transpose());
        phi = &phi * &phi;
        t *= 2.0;
        if !phi.is_finite() || !v.is_finite() || phi.frobenius_norm() > PROPAGATOR_LIMIT {
            return Err(Error::Diverged { time: t });
        }
    }
    Ok(v.symmetrized())
}

fn dopri_base(a: &Matrix, d: &Matrix, tau: f64, tol: f64) -> Result<(Matrix, Matrix)> {
    let n = a.rows();
    let rhs = |phi: &Matrix, v: &Matrix| -> (Matrix, Matrix) {
        let av = a * v;
        let dv = &(&av + &av.transpose()) + d;
        (a * phi, dv)
    };
    let v_scale = (d.max_abs() * tau).max(f64::MIN_POSITIVE);

    let mut phi = Matrix::identity(n);
    let mut v = Matrix::zeros(n, n);
    let mut t = 0.0;
    let mut h = tau;
    let mut k1 = rhs(&phi, &v);

    while t < tau {
        if h < 1e-12 * tau {
            return Err(Error::StepUnderflow { time: t });
        }
        let h_step = h.min(tau - t);
        let mut ks: Vec<(Matrix, Matrix)> = Vec::with_capacity(7);
        ks.push(k1.clone());
        for s in 1..7 {
            let mut phi_s = phi.clone();
            let mut v_s = v.clone();
            for (j, kj) in ks.iter().enumerate().take(s) {
                let c = A[s][j];
                if c != 0.0 {
                    phi_s = phi_s.add_scaled(&kj.0, h_step * c);
                    v_s = v_s.add_scaled(&kj.1, h_step * c);
                }
            }
            debug_assert!(C[s] > 0.0);
            ks.push(rhs(&phi_s, &v_s));
        }
        let mut phi_new = phi.clone();
        let mut v_new = v.clone();
        let mut phi_err = Matrix::zeros(n, n);
        let mut v_err = Matrix::zeros(n, n);
        for (j, kj) in ks.iter().enumerate() {
            if B[j] != 0.0 {
                phi_new = phi_new.add_scaled(&kj.0, h_step * B[j]);
                v_new = v_new.add_scaled(&kj.1, h_step * B[j]);
            }
            if E[j] != 0.0 {
                phi_err = phi_err.add_scaled(&kj.0, h_step * E[j]);
                v_err = v_err.add_scaled(&kj.1, h_step * E[j]);
            }
        }
        let err = scaled_error(&phi_err, &phi, &phi_new, 1.0, tol)
            .max(scaled_error(&v_err, &v, &v_new, v_scale, tol));
        if !err.is_finite() {
            return Err(Error::Diverged { time: t });
        }
        if err <= 1.0 {
            t += h_step;
            phi = phi_new;
            v = v_new;
            // First-same-as-last: the 7th stage is f at the new point.
            k1 = ks.pop().expect("seven stages");
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = h_step * factor;
    }
    Ok((phi, v))
}

fn scaled_error(err: &Matrix, old: &Matrix, new: &Matrix, floor: f64, tol: f64) -> f64 {
    err.as_slice()
        .iter()
        .zip(old.as_slice().iter().zip(new.as_slice()))
        .map(|(e, (o, n))| e.abs() / (tol * (floor + o.abs().max(n.abs()))))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, solve_lyapunov};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_decay_steady_state() {
        let a = Matrix::identity(2).scaled(-1.0);
        let d = Matrix::identity(2).scaled(2.0);
        let v = integrate_covariance_ode(&a, &d, 60.0, 1e-12).unwrap();
        assert!((&v - &Matrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn finite_time_matches_closed_form() {
        // A = -k: V(t) = d (1 - e^{-2kt}) / 2k.
        let k = 0.7;
        let a = Matrix::from_diagonal(&[-k]);
        let d = Matrix::from_diagonal(&[3.0]);
        let t = 1.3;
        let v = integrate_covariance_ode(&a, &d, t, 1e-12).unwrap();
        let exact = 3.0 * (1.0 - (-2.0 * k * t).exp()) / (2.0 * k);
        assert!((v[(0, 0)] - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn zero_forcing_stays_zero() {
        let a = Matrix::from_rows(&[[-0.2, 1.0], [-1.0, -0.3]]).unwrap();
        let d = Matrix::zeros(2, 2);
        for t in [0.0, 0.5, 10.0, 500.0] {
            let v = integrate_covariance_ode(&a, &d, t, 1e-10).unwrap();
            assert_eq!(v.max_abs(), 0.0);
        }
    }

    #[test]
    fn unstable_diverges() {
        let a = Matrix::from_diagonal(&[0.5, -1.0]);
        let d = Matrix::identity(2);
        assert!(matches!(
            integrate_covariance_ode(&a, &d, 1e3, 1e-10),
            Err(Error::Diverged { .. })
        ));
    }

    #[test]
    fn agrees_with_lyapunov_on_random_stable_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..100 {
            let n = 16;
            let data = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut a = Matrix::from_row_major(n, n, data).unwrap();
            let shift = eigenvalues(&a).unwrap().max_real() + rng.gen_range(0.1..1.0);
            for i in 0..n {
                a[(i, i)] -= shift;
            }
            let g_data = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = Matrix::from_row_major(n, n, g_data).unwrap();
            let d = (&g * &g.transpose()).symmetrized();

            let margin = -eigenvalues(&a).unwrap().max_real();
            let v_ode = integrate_covariance_ode(&a, &d, 30.0 / margin, 1e-12).unwrap();
            let v_lyap = solve_lyapunov(&a, &d).unwrap();
            let diff = (&v_ode - &v_lyap).max_abs();
            assert!(
                diff <= 1e-6 * v_lyap.frobenius_norm(),
                "diff {diff:e} vs scale {:e}",
                v_lyap.frobenius_norm()
            );
        }
    }
}
