use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};

use super::assemble::{cascade_feeds, drift_with_couplings};
use super::couplings::{mean_fields, EffectiveCouplings, MeanFields};
use super::params::{DriveParams, PhysicalParams};
use super::Mode;

/// Quadratures of all eight modes in canonical order.
pub type LangevinState = [f64; 16];

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// The nonlinear (noise-free) quantum Langevin system with bare detunings.
///
/// Built from physical-drive parameters: the supplied effective detunings are
/// shifted back by the static mechanical displacement of the exact steady state.
#[derive(Debug, Clone)]
pub struct BareSystem {
    pub params: PhysicalParams,
    pub drive: DriveParams,
    pub delta_m: [f64; 2],
    pub delta_c: [f64; 2],
    pub g_mb: [f64; 2],
    pub g_cb: [f64; 2],
    pub feed_a: f64,
    pub feed_c: f64,
    /// Steady state the bare detunings were derived from.
    pub reference: MeanFields,
}

impl BareSystem {
    pub fn new(params: &PhysicalParams) -> Result<Self> {
        let drive = params.drive.clone().ok_or_else(|| {
            Error::InvalidInput("nonlinear system needs physical-drive parameters".into())
        })?;
        let reference = mean_fields(params, &drive)?;
        let g_mb = drive.g_mb_bare;
        let g_cb = [drive.g_cb_bare, params.cascade.g_ratio * drive.g_cb_bare];
        let mut delta_m = [0.0; 2];
        let mut delta_c = [0.0; 2];
        for (i, s) in params.stages().into_iter().enumerate() {
            let q = reference.displacement(i, g_mb[i], g_cb[i], s.omega_b);
            delta_m[i] = s.delta_m_eff - g_mb[i] * q;
            delta_c[i] = s.delta_c_eff + g_cb[i] * q;
        }
        let (feed_a, feed_c) = cascade_feeds(params);
        Ok(Self {
            params: params.clone(),
            drive,
            delta_m,
            delta_c,
            g_mb,
            g_cb,
            feed_a,
            feed_c,
            reference,
        })
    }

    /// Drift matrix of the fluctuations around `state`.
    pub fn linearized_drift(&self, state: &LangevinState) -> Matrix {
        let mut p = self.params.clone();
        let mut couplings = EffectiveCouplings::real([0.0; 2], [0.0; 2]);
        for i in 0..2 {
            let q = state[quad(i, Mode::B1)];
            let m = amplitude(state, i, Mode::M1);
            let c = amplitude(state, i, Mode::C1);
            let s = if i == 0 {
                &mut p.system1
            } else {
                &mut p.system2
            };
            s.delta_m_eff = self.delta_m[i] + self.g_mb[i] * q;
            s.delta_c_eff = self.delta_c[i] - self.g_cb[i] * q;
            couplings.g_mb[i] = -Complex64::i() * SQRT_2 * self.g_mb[i] * m;
            couplings.g_cb[i] = Complex64::i() * SQRT_2 * self.g_cb[i] * c;
        }
        drift_with_couplings(&p, &couplings)
    }
}

/// Row of the first quadrature of the stage-`stage` counterpart of `mode`
/// (given by its stage-1 variant).
fn quad(stage: usize, mode: Mode) -> usize {
    mode.offset() + 8 * stage
}

fn amplitude(x: &LangevinState, stage: usize, mode: Mode) -> Complex64 {
    let r = quad(stage, mode);
    Complex64::new(x[r], x[r + 1]) / SQRT_2
}

fn store(x: &mut LangevinState, stage: usize, mode: Mode, z: Complex64) {
    let r = quad(stage, mode);
    x[r] = SQRT_2 * z.re;
    x[r + 1] = SQRT_2 * z.im;
}

/// Quadrature state of a set of mean fields, with the mechanics at its
/// static displacement and zero momentum.
pub fn state_from_mean_fields(sys: &BareSystem, mf: &MeanFields) -> LangevinState {
    let mut x = [0.0; 16];
    for i in 0..2 {
        store(&mut x, i, Mode::A1, mf.a[i]);
        store(&mut x, i, Mode::M1, mf.m[i]);
        store(&mut x, i, Mode::C1, mf.c[i]);
        x[quad(i, Mode::B1)] =
            mf.displacement(i, sys.g_mb[i], sys.g_cb[i], sys.params.stage(i).omega_b);
    }
    x
}

/// Right-hand side of the noise-free Langevin equations in quadratures.
pub fn nonlinear_drift_rhs(sys: &BareSystem, x: &LangevinState) -> LangevinState {
    let i_ = Complex64::i();
    let mut out = [0.0; 16];
    let mut feed_a = Complex64::new(0.0, 0.0);
    let mut feed_c = Complex64::new(sys.drive.e_laser, 0.0);
    for st in 0..2 {
        let s = sys.params.stage(st);
        let a = amplitude(x, st, Mode::A1);
        let m = amplitude(x, st, Mode::M1);
        let c = amplitude(x, st, Mode::C1);
        let q = x[quad(st, Mode::B1)];
        let p = x[quad(st, Mode::B1) + 1];

        let da = -Complex64::new(s.kappa_a, s.delta_a) * a - i_ * s.g_am * m + feed_a;
        let dm = -Complex64::new(s.kappa_m, sys.delta_m[st]) * m
            - i_ * s.g_am * a
            - i_ * sys.g_mb[st] * m * q
            + sys.drive.rabi;
        let dc =
            -Complex64::new(s.kappa_c, sys.delta_c[st]) * c + i_ * sys.g_cb[st] * c * q + feed_c;
        store(&mut out, st, Mode::A1, da);
        store(&mut out, st, Mode::M1, dm);
        store(&mut out, st, Mode::C1, dc);
        out[quad(st, Mode::B1)] = s.omega_b * p;
        out[quad(st, Mode::B1) + 1] = -s.omega_b * q - s.gamma_b * p - sys.g_mb[st] * m.norm_sqr()
            + sys.g_cb[st] * c.norm_sqr();

        feed_a = -sys.feed_a * a;
        feed_c = -sys.feed_c * c;
    }
    out
}

/// Central-difference Jacobian with step `1e-6 * max(|x|_inf, 1)`.
pub fn finite_difference_jacobian<F>(f: F, x: &LangevinState) -> Matrix
where
    F: Fn(&LangevinState) -> LangevinState,
{
    let h = 1e-6 * x.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let mut jac = Matrix::zeros(16, 16);
    for j in 0..16 {
        let mut xp = *x;
        let mut xm = *x;
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..16 {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Newton iteration on the nonlinear steady state, starting from `start`.
/// Converged when the residual falls below `tol` relative to the scale of the
/// individual terms of the right-hand side.
pub fn refine_fixed_point(
    sys: &BareSystem,
    start: &LangevinState,
    tol: f64,
    max_iter: usize,
) -> Result<LangevinState> {
    let mut x = *start;
    let rate = sys
        .params
        .stages()
        .iter()
        .flat_map(|s| [s.kappa_a, s.kappa_m, s.kappa_c, s.omega_b, s.g_am])
        .fold(0.0f64, f64::max);
    for _ in 0..max_iter {
        let r = nonlinear_drift_rhs(sys, &x);
        let scale = rate * x.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        if r.iter().all(|v| v.abs() <= tol * scale) {
            return Ok(x);
        }
        let jac = finite_difference_jacobian(|y| nonlinear_drift_rhs(sys, y), &x);
        let step = Lu::factor(&jac)?.solve(&r);
        for (xi, si) in x.iter_mut().zip(step) {
            *xi -= si;
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Err(Error::NoConvergence { budget: max_iter })
}
