use num_complex::Complex64;

use crate::error::{Error, Result};

use super::assemble::cascade_feeds;
use super::params::{DriveParams, PhysicalParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Steady-state complex amplitudes of the driven modes, indexed by stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFields {
    pub a: [Complex64; 2],
    pub m: [Complex64; 2],
    pub c: [Complex64; 2],
}

impl MeanFields {
    pub const ZERO: MeanFields = MeanFields {
        a: [Complex64::new(0.0, 0.0); 2],
        m: [Complex64::new(0.0, 0.0); 2],
        c: [Complex64::new(0.0, 0.0); 2],
    };

    /// Static mechanical displacement `<q>` balancing radiation pressure and
    /// magnetostriction.
    pub fn displacement(&self, stage: usize, g_mb: f64, g_cb: f64, omega_b: f64) -> f64 {
        (g_cb * self.c[stage].norm_sqr() - g_mb * self.m[stage].norm_sqr()) / omega_b
    }
}

/// Linearized magnomechanical and optomechanical couplings per stage.
///
/// Complex in general; figure mode and gauge-fixed values are real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    pub g_mb: [Complex64; 2],
    pub g_cb: [Complex64; 2],
}

impl EffectiveCouplings {
    pub fn real(g_mb: [f64; 2], g_cb: [f64; 2]) -> Self {
        Self {
            g_mb: g_mb.map(Complex64::from),
            g_cb: g_cb.map(Complex64::from),
        }
    }

    /// Moduli of the couplings, i.e. the couplings after absorbing their
    /// phases into the mode operators.
    pub fn gauge_fixed(&self) -> Self {
        Self::real(self.g_mb.map(|g| g.norm()), self.g_cb.map(|g| g.norm()))
    }
}

/// Stage-2 optomechanical coupling implied by the cascade in figure mode:
/// `sqrt(eta2) * (g_ratio / 10) * G_c1b1`, which is `sqrt(eta2) * G_c1b1` at
/// the reference ratio of 10.
pub fn stage2_optomechanical(g_cb1: f64, eta2: f64, g_ratio: f64) -> f64 {
    eta2.sqrt() * (g_ratio / 10.0) * g_cb1
}

pub fn figure_mode_couplings(params: &PhysicalParams) -> EffectiveCouplings {
    let g_cb1 = params.system1.g_cb;
    EffectiveCouplings::real(
        [params.system1.g_mb, params.system2.g_mb],
        [
            g_cb1,
            stage2_optomechanical(g_cb1, params.cascade.eta2, params.cascade.g_ratio),
        ],
    )
}

/// `G_mb = -i sqrt(2) g_mb <m>`, `G_cb = i sqrt(2) g_cb <c>`, with the stage-2
/// bare optomechanical coupling equal to `g_ratio` times the stage-1 value.
pub fn couplings_from_mean_fields(
    mf: &MeanFields,
    drive: &DriveParams,
    g_ratio: f64,
) -> EffectiveCouplings {
    let s2 = std::f64::consts::SQRT_2;
    let g_cb = [drive.g_cb_bare, g_ratio * drive.g_cb_bare];
    EffectiveCouplings {
        g_mb: [0, 1].map(|i| -I * s2 * drive.g_mb_bare[i] * mf.m[i]),
        g_cb: [0, 1].map(|i| I * s2 * g_cb[i] * mf.c[i]),
    }
}

/// Effective couplings in whichever mode `params` selects. In physical-drive
/// mode the complex values of the exact linearization are returned.
pub fn effective_couplings(params: &PhysicalParams) -> Result<EffectiveCouplings> {
    match &params.drive {
        None => Ok(figure_mode_couplings(params)),
        Some(drive) => {
            let mf = mean_fields(params, drive)?;
            Ok(couplings_from_mean_fields(
                &mf,
                drive,
                params.cascade.g_ratio,
            ))
        }
    }
}

fn degenerate_if_small(value: Complex64, scale: f64, what: &str) -> Result<Complex64> {
    if value.norm() <= 1e-12 * scale || !value.is_finite() {
        Err(Error::Degenerate(format!(
            "{what} vanishes (resonance singularity)"
        )))
    } else {
        Ok(value)
    }
}

/// Exact steady state of the driven amplitudes at the supplied effective
/// detunings, including the cascade feed into stage 2.
pub fn mean_fields(params: &PhysicalParams, drive: &DriveParams) -> Result<MeanFields> {
    let (feed_a, feed_c) = cascade_feeds(params);
    let mut out = MeanFields::ZERO;
    let mut microwave_feed = Complex64::new(0.0, 0.0);
    for (i, s) in params.stages().into_iter().enumerate() {
        let alpha = Complex64::new(s.kappa_a, s.delta_a);
        let mu = Complex64::new(s.kappa_m, s.delta_m_eff);
        let g2 = s.g_am * s.g_am;
        let den = degenerate_if_small(
            alpha * mu + g2,
            alpha.norm() * mu.norm() + g2,
            &format!("stage {} microwave-magnon determinant", i + 1),
        )?;
        // 0 = -alpha a - i g m + F,  0 = -mu m - i g a + Omega
        let m = (alpha * drive.rabi - I * s.g_am * microwave_feed) / den;
        let alpha = degenerate_if_small(
            alpha,
            s.delta_a.abs() + s.kappa_a + 1.0,
            "microwave response",
        )?;
        let a = (microwave_feed - I * s.g_am * m) / alpha;
        out.a[i] = a;
        out.m[i] = m;
        microwave_feed = -feed_a * a;
    }
    let s1 = &params.system1;
    let s2 = &params.system2;
    let gamma1 = degenerate_if_small(
        Complex64::new(s1.kappa_c, s1.delta_c_eff),
        s1.kappa_c + s1.delta_c_eff.abs() + 1.0,
        "stage 1 optical response",
    )?;
    let gamma2 = degenerate_if_small(
        Complex64::new(s2.kappa_c, s2.delta_c_eff),
        s2.kappa_c + s2.delta_c_eff.abs() + 1.0,
        "stage 2 optical response",
    )?;
    out.c[0] = drive.e_laser / gamma1;
    out.c[1] = -feed_c * out.c[0] / gamma2;
    Ok(out)
}

/// Resolved-sideband (`omega_b >> kappa`) approximations of the mean fields:
/// `<a> = -i g Omega / (g^2 - D_m D_a)`, `<m> = i Omega D_a / (g^2 - D_m D_a)`,
/// `<c1> = -i E / D_c1` and `<c2> = i F_c <c1> / D_c2` with `F_c` the optical
/// cascade feed coefficient.
pub fn resolved_sideband_mean_fields(
    params: &PhysicalParams,
    drive: &DriveParams,
) -> Result<MeanFields> {
    let (_, feed_c) = cascade_feeds(params);
    let mut out = MeanFields::ZERO;
    for (i, s) in params.stages().into_iter().enumerate() {
        let g2 = s.g_am * s.g_am;
        let den = g2 - s.delta_m_eff * s.delta_a;
        if den.abs() <= 1e-12 * (g2 + (s.delta_m_eff * s.delta_a).abs()) {
            return Err(Error::Degenerate(format!(
                "stage {}: g_am^2 - delta_m_eff * delta_a vanishes",
                i + 1
            )));
        }
        out.a[i] = -I * s.g_am * drive.rabi / den;
        out.m[i] = I * drive.rabi * s.delta_a / den;
    }
    let (d1, d2) = (params.system1.delta_c_eff, params.system2.delta_c_eff);
    if d1 == 0.0 || d2 == 0.0 {
        return Err(Error::Degenerate(
            "effective optical detuning is zero".into(),
        ));
    }
    out.c[0] = -I * drive.e_laser / d1;
    out.c[1] = I * feed_c * out.c[0] / d2;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::hz_to_rad;
    use std::collections::BTreeMap;

    fn drive() -> DriveParams {
        DriveParams {
            rabi: 1e13,
            e_laser: 4e11,
            g_mb_bare: [0.5, 0.5],
            g_cb_bare: 2e3,
            passthrough: BTreeMap::new(),
        }
    }

    #[test]
    fn undriven_fields_vanish() {
        let p = PhysicalParams::baseline();
        let d = DriveParams {
            rabi: 0.0,
            e_laser: 0.0,
            ..drive()
        };
        assert_eq!(mean_fields(&p, &d).unwrap(), MeanFields::ZERO);
        let approx = resolved_sideband_mean_fields(&p, &d).unwrap();
        assert!(approx
            .a
            .iter()
            .chain(&approx.m)
            .chain(&approx.c)
            .all(|z| z.norm() == 0.0));
    }

    #[test]
    fn stage1_optical_field() {
        let p = PhysicalParams::baseline();
        let d = drive();
        let mf = resolved_sideband_mean_fields(&p, &d).unwrap();
        let want = -I * d.e_laser / p.system1.omega_b;
        assert!((mf.c[0] - want).norm() <= 1e-15 * want.norm());
    }

    #[test]
    fn cascaded_optical_field_is_tenth_at_reference_parameters() {
        // 2 sqrt(kappa1 kappa2) / omega_b = 2 * 2 MHz / 40 MHz = 1/10.
        let p = PhysicalParams::baseline();
        let mf = resolved_sideband_mean_fields(&p, &drive()).unwrap();
        let ratio = mf.c[1].norm() / mf.c[0].norm();
        assert!((ratio - 0.75f64.sqrt() / 10.0).abs() < 1e-14, "{ratio}");
    }

    #[test]
    fn exact_fields_approach_resolved_sideband_limit() {
        let p = PhysicalParams::baseline();
        let d = drive();
        let exact = mean_fields(&p, &d).unwrap();
        let approx = resolved_sideband_mean_fields(&p, &d).unwrap();
        // Relative corrections are O(kappa / omega_b) ~ 5%.
        for (e, a) in exact
            .m
            .iter()
            .zip(&approx.m)
            .take(1)
            .chain(exact.c.iter().zip(&approx.c))
        {
            assert!((e - a).norm() < 0.15 * a.norm(), "{e} vs {a}");
        }
        let mut narrow = p.clone();
        for s in [&mut narrow.system1, &mut narrow.system2] {
            s.kappa_a *= 1e-4;
            s.kappa_m *= 1e-4;
            s.kappa_c *= 1e-4;
        }
        let exact = mean_fields(&narrow, &d).unwrap();
        let approx = resolved_sideband_mean_fields(&narrow, &d).unwrap();
        assert!((exact.m[0] - approx.m[0]).norm() < 1e-3 * approx.m[0].norm());
        assert!((exact.c[0] - approx.c[0]).norm() < 1e-3 * approx.c[0].norm());
    }

    #[test]
    fn resonance_singularity_reported() {
        let mut p = PhysicalParams::baseline();
        // g^2 = delta_m * delta_a
        p.system1.delta_a = -p.system1.g_am;
        p.system1.delta_m_eff = -p.system1.g_am;
        assert!(matches!(
            resolved_sideband_mean_fields(&p, &drive()),
            Err(Error::Degenerate(_))
        ));
        p.system1.kappa_a = 0.0;
        p.system1.kappa_m = 0.0;
        assert!(matches!(
            mean_fields(&p, &drive()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn stage2_coupling_from_cascade() {
        let g = stage2_optomechanical(hz_to_rad(8e6), 0.75, 10.0);
        assert!((g / hz_to_rad(1e6) - 6.928_203_230_275_509).abs() < 1e-12);
        assert_eq!(stage2_optomechanical(hz_to_rad(8e6), 0.0, 10.0), 0.0);
        let p = PhysicalParams::baseline();
        let c = figure_mode_couplings(&p);
        assert_eq!(c.g_mb, [Complex64::from(hz_to_rad(2e6)); 2]);
    }

    #[test]
    fn gauge_fixed_couplings_are_moduli() {
        let p = PhysicalParams::baseline();
        let d = drive();
        let mf = mean_fields(&p, &d).unwrap();
        let c = couplings_from_mean_fields(&mf, &d, 10.0);
        let g = c.gauge_fixed();
        for i in 0..2 {
            assert_eq!(g.g_mb[i].im, 0.0);
            assert!((g.g_mb[i].re - c.g_mb[i].norm()).abs() == 0.0);
            assert!(
                (g.g_cb[i].re
                    - std::f64::consts::SQRT_2 * [1.0, 10.0][i] * d.g_cb_bare * mf.c[i].norm())
                .abs()
                    < 1e-9 * g.g_cb[i].re
            );
        }
    }
}
