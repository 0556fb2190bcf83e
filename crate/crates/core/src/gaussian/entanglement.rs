use crate::error::{Error, Result};
use crate::model::{LinearModel, Mode, PhysicalParams};

use super::covariance::{
    partial_transpose, steady_state, symplectic_eigenvalues, CovarianceMatrix, SteadyState,
};
use super::stability::{check_stability, Stability};

pub const OPTOMICROWAVE: [Mode; 4] = [Mode::A1, Mode::C1, Mode::A2, Mode::C2];
pub const OPTOMAGNONIC: [Mode; 4] = [Mode::M1, Mode::C1, Mode::M2, Mode::C2];

/// Logarithmic negativity `max(0, -ln(2 nu))` across the split `party_a | party_b`,
/// with `nu` the smallest symplectic eigenvalue after transposing `party_a`.
///
/// States with no correlations across the split give exactly 0.
pub fn log_negativity(v: &CovarianceMatrix, party_a: &[usize], party_b: &[usize]) -> Result<f64> {
    let n = v.modes();
    let mut seen = vec![false; n];
    for &k in party_a.iter().chain(party_b) {
        if k >= n {
            return Err(Error::InvalidInput(format!(
                "mode index {k} out of range for {n} modes"
            )));
        }
        if seen[k] {
            return Err(Error::InvalidInput(format!(
                "mode {k} appears on both sides or twice"
            )));
        }
        seen[k] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidInput(
            "bipartition does not cover every mode".into(),
        ));
    }
    let m = v.matrix();
    let uncorrelated = party_a.iter().all(|&i| {
        party_b
            .iter()
            .all(|&j| (0..2).all(|p| (0..2).all(|q| m[(2 * i + p, 2 * j + q)] == 0.0)))
    });
    if uncorrelated {
        return Ok(0.0);
    }
    let pt = partial_transpose(v, party_a)?;
    let nu = symplectic_eigenvalues(&pt)?[0];
    Ok((-(2.0 * nu).ln()).max(0.0))
}

/// One split of a four-mode set with its logarithmic negativity.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitionValue {
    pub side_a: Vec<Mode>,
    pub side_b: Vec<Mode>,
    pub log_negativity: f64,
}

impl BipartitionValue {
    /// e.g. `a1|c1a2c2`.
    pub fn label(&self) -> String {
        let join = |s: &[Mode]| s.iter().map(|m| m.label()).collect::<String>();
        format!("{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

/// Logarithmic negativities of all seven splits of four modes and their
/// minimum, which is nonzero only if no split is separable in the PPT sense.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadWitness {
    pub modes: [Mode; 4],
    pub bipartitions: Vec<BipartitionValue>,
    pub minimum: f64,
}

pub fn quadripartite_witness(v: &CovarianceMatrix, modes: [Mode; 4]) -> Result<QuadWitness> {
    let four = v.reduced_modes(&modes)?;
    // Splits as index sets on the reduced state: four singletons, then the
    // pairs containing the first mode.
    let sides: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    let mut bipartitions = Vec::with_capacity(7);
    let mut minimum = f64::INFINITY;
    for side in sides {
        let rest: Vec<usize> = (0..4).filter(|k| !side.contains(k)).collect();
        let e = log_negativity(&four, side, &rest)?;
        minimum = minimum.min(e);
        bipartitions.push(BipartitionValue {
            side_a: side.iter().map(|&k| modes[k]).collect(),
            side_b: rest.iter().map(|&k| modes[k]).collect(),
            log_negativity: e,
        });
    }
    Ok(QuadWitness {
        modes,
        bipartitions,
        minimum,
    })
}

/// Entanglement figures of one steady state. Unstable points carry NaN
/// entanglement values and no witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub e_a1c1: f64,
    pub e_m1c1: f64,
    pub e_a2c2: f64,
    pub e_m2c2: f64,
    pub quad_ac: Option<QuadWitness>,
    pub quad_mc: Option<QuadWitness>,
    pub stable: bool,
    /// `-max Re(lambda)` of the drift matrix in rad/s.
    pub stability_margin: f64,
}

impl EntanglementReport {
    pub fn unstable(stability: Stability) -> Self {
        Self {
            e_a1c1: f64::NAN,
            e_m1c1: f64::NAN,
            e_a2c2: f64::NAN,
            e_m2c2: f64::NAN,
            quad_ac: None,
            quad_mc: None,
            stable: false,
            stability_margin: stability.margin,
        }
    }

    pub fn quad_witness_ac(&self) -> f64 {
        self.quad_ac.as_ref().map_or(f64::NAN, |q| q.minimum)
    }

    pub fn quad_witness_mc(&self) -> f64 {
        self.quad_mc.as_ref().map_or(f64::NAN, |q| q.minimum)
    }

    /// The values written per sweep row, in column order after the axes.
    pub fn row_values(&self) -> [f64; 8] {
        [
            self.e_a1c1,
            self.e_m1c1,
            self.e_a2c2,
            self.e_m2c2,
            self.quad_witness_ac(),
            self.quad_witness_mc(),
            if self.stable { 1.0 } else { 0.0 },
            self.stability_margin,
        ]
    }

    pub const COLUMNS: [&'static str; 8] = [
        "E_a1c1",
        "E_m1c1",
        "E_a2c2",
        "E_m2c2",
        "quad_witness_ac",
        "quad_witness_mc",
        "stable",
        "stability_margin",
    ];

    /// Flat key/value record, per-split witness values included as
    /// `quad_ac.<split>`. NaN values are rendered empty.
    pub fn records(&self) -> Vec<(String, String)> {
        let fmt = |x: f64| {
            if x.is_nan() {
                String::new()
            } else {
                format!("{x}")
            }
        };
        let mut out: Vec<(String, String)> = Self::COLUMNS
            .iter()
            .zip(self.row_values())
            .map(|(k, v)| {
                let v = if *k == "stable" {
                    format!("{}", v as u8)
                } else {
                    fmt(v)
                };
                (k.to_string(), v)
            })
            .collect();
        for (prefix, quad) in [("quad_ac", &self.quad_ac), ("quad_mc", &self.quad_mc)] {
            if let Some(q) = quad {
                for b in &q.bipartitions {
                    out.push((format!("{prefix}.{}", b.label()), fmt(b.log_negativity)));
                }
            }
        }
        out
    }
}

/// The four two-mode negativities and both four-mode witnesses of a full
/// two-stage covariance.
pub fn pairwise_report(v: &CovarianceMatrix, stability: Stability) -> Result<EntanglementReport> {
    let pair = |x: Mode, y: Mode| -> Result<f64> {
        log_negativity(&v.reduced_modes(&[x, y])?, &[0], &[1])
    };
    Ok(EntanglementReport {
        e_a1c1: pair(Mode::A1, Mode::C1)?,
        e_m1c1: pair(Mode::M1, Mode::C1)?,
        e_a2c2: pair(Mode::A2, Mode::C2)?,
        e_m2c2: pair(Mode::M2, Mode::C2)?,
        quad_ac: Some(quadripartite_witness(v, OPTOMICROWAVE)?),
        quad_mc: Some(quadripartite_witness(v, OPTOMAGNONIC)?),
        stable: stability.stable,
        stability_margin: stability.margin,
    })
}

/// Full pipeline for one parameter set: assemble, stability test, Lyapunov
/// solve, entanglement. Unstable systems yield an unstable report, not an error.
pub fn entanglement_report(params: &PhysicalParams) -> Result<EntanglementReport> {
    analyze(params).map(|(report, _)| report)
}

/// As [`entanglement_report`], also returning the solved steady state of
/// stable systems.
pub fn analyze(params: &PhysicalParams) -> Result<(EntanglementReport, Option<SteadyState>)> {
    let model = LinearModel::assemble(params)?;
    let stability = check_stability(&model.drift)?;
    if !stability.stable {
        return Ok((EntanglementReport::unstable(stability), None));
    }
    let steady = steady_state(&model)?;
    let report = pairwise_report(&steady.covariance, stability)?;
    Ok((report, Some(steady)))
}
