use crate::error::Result;
use crate::linalg::Matrix;

use super::couplings::{effective_couplings, EffectiveCouplings};
use super::params::{PhysicalParams, SubsystemParams};
use super::thermal::thermal_occupation;
use super::Mode;

/// Drift coefficients feeding stage-1 amplitudes into stage 2:
/// `2 sqrt(eta1 kappa_a1 kappa_a2)` (microwave) and `2 sqrt(eta2 kappa_c1 kappa_c2)` (optical).
///
/// The factor 2 is the product of the stage-1 output coupling `sqrt(2 kappa_1)`
/// and the stage-2 input coupling `sqrt(2 kappa_2)`.
pub fn cascade_feeds(params: &PhysicalParams) -> (f64, f64) {
    let (s1, s2, c) = (&params.system1, &params.system2, &params.cascade);
    (
        2.0 * (c.eta1 * s1.kappa_a * s2.kappa_a).sqrt(),
        2.0 * (c.eta2 * s1.kappa_c * s2.kappa_c).sqrt(),
    )
}

pub fn assemble_drift(params: &PhysicalParams) -> Result<Matrix> {
    let couplings = effective_couplings(params)?;
    Ok(drift_with_couplings(params, &couplings))
}

fn set2(m: &mut Matrix, row: Mode, col: Mode, block: [[f64; 2]; 2]) {
    let (r, c) = (row.offset(), col.offset());
    for i in 0..2 {
        for j in 0..2 {
            m[(r + i, c + j)] = block[i][j];
        }
    }
}

fn damped_block(kappa: f64, delta: f64) -> [[f64; 2]; 2] {
    [[-kappa, delta], [-delta, -kappa]]
}

/// Drift matrix for given effective couplings; the detunings and rates come
/// from `params`. Real couplings reproduce the textbook block layout; complex
/// couplings give the exact linearization in the laboratory phase frame.
pub fn drift_with_couplings(params: &PhysicalParams, couplings: &EffectiveCouplings) -> Matrix {
    let mut a = Matrix::zeros(16, 16);
    let stage_modes = [
        [Mode::A1, Mode::M1, Mode::B1, Mode::C1],
        [Mode::A2, Mode::M2, Mode::B2, Mode::C2],
    ];
    for (i, s) in params.stages().into_iter().enumerate() {
        let [ma, mm, mb, mc] = stage_modes[i];
        stage_blocks(&mut a, s, [ma, mm, mb, mc]);

        let g = couplings.g_mb[i];
        set2(&mut a, mm, mb, [[g.re, 0.0], [g.im, 0.0]]);
        set2(&mut a, mb, mm, [[0.0, 0.0], [g.im, -g.re]]);
        let g = couplings.g_cb[i];
        set2(&mut a, mc, mb, [[g.re, 0.0], [g.im, 0.0]]);
        set2(&mut a, mb, mc, [[0.0, 0.0], [g.im, -g.re]]);
    }
    let (feed_a, feed_c) = cascade_feeds(params);
    set2(&mut a, Mode::A2, Mode::A1, [[-feed_a, 0.0], [0.0, -feed_a]]);
    set2(&mut a, Mode::C2, Mode::C1, [[-feed_c, 0.0], [0.0, -feed_c]]);
    a
}

fn stage_blocks(a: &mut Matrix, s: &SubsystemParams, [ma, mm, mb, mc]: [Mode; 4]) {
    set2(a, ma, ma, damped_block(s.kappa_a, s.delta_a));
    set2(a, mm, mm, damped_block(s.kappa_m, s.delta_m_eff));
    set2(a, mb, mb, [[0.0, s.omega_b], [-s.omega_b, -s.gamma_b]]);
    set2(a, mc, mc, damped_block(s.kappa_c, s.delta_c_eff));
    let g = s.g_am;
    set2(a, ma, mm, [[0.0, g], [-g, 0.0]]);
    set2(a, mm, ma, [[0.0, g], [-g, 0.0]]);
}

/// Symmetrized noise correlation matrix. Stage-2 cavity inputs mix the
/// transmitted stage-1 noise with fresh vacuum/thermal input, which produces
/// the stage-1/stage-2 cross blocks.
pub fn assemble_diffusion(params: &PhysicalParams) -> Matrix {
    let env = &params.environment;
    let t = env.temperature;
    let na = 2.0 * thermal_occupation(env.omega_a, t) + 1.0;
    let nm = 2.0 * thermal_occupation(env.omega_m, t) + 1.0;
    let nc = 2.0 * thermal_occupation(env.omega_c, t) + 1.0;
    let (s1, s2, c) = (&params.system1, &params.system2, &params.cascade);

    let mut d = Matrix::zeros(16, 16);
    let diag =
        |d: &mut Matrix, mode: Mode, x: f64, y: f64| set2(d, mode, mode, [[x, 0.0], [0.0, y]]);

    diag(&mut d, Mode::A1, s1.kappa_a * na, s1.kappa_a * na);
    // Both stages share the microwave bath temperature, so the transmitted and
    // fresh noise carry the same occupation.
    let a2 = s2.kappa_a * (c.eta1 * na + (1.0 - c.eta1) * na);
    diag(&mut d, Mode::A2, a2, a2);
    let c2 = s2.kappa_c * (c.eta2 * nc + (1.0 - c.eta2) * nc);
    diag(&mut d, Mode::C1, s1.kappa_c * nc, s1.kappa_c * nc);
    diag(&mut d, Mode::C2, c2, c2);
    for (s, mm, mb) in [(s1, Mode::M1, Mode::B1), (s2, Mode::M2, Mode::B2)] {
        diag(&mut d, mm, s.kappa_m * nm, s.kappa_m * nm);
        let nb = 2.0 * thermal_occupation(s.omega_b, t) + 1.0;
        diag(&mut d, mb, 0.0, s.gamma_b * nb);
    }

    let x_a = (c.eta1 * s1.kappa_a * s2.kappa_a).sqrt() * na;
    let x_c = (c.eta2 * s1.kappa_c * s2.kappa_c).sqrt() * nc;
    for (p, q, x) in [(Mode::A1, Mode::A2, x_a), (Mode::C1, Mode::C2, x_c)] {
        set2(&mut d, p, q, [[x, 0.0], [0.0, x]]);
        set2(&mut d, q, p, [[x, 0.0], [0.0, x]]);
    }
    d
}
