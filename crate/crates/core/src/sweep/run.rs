use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{analyze, EntanglementReport};
use crate::model::PhysicalParams;

use super::path::ParamPath;
use super::table::SweepTable;

/// One swept parameter on a uniform linear grid, in the unit of its path.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub path: ParamPath,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(path: &str, start: f64, stop: f64, points: usize) -> Result<Self> {
        let axis = Self {
            path: ParamPath::parse(path)?,
            start,
            stop,
            points,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// Parses `path=start:stop:points`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| {
            Error::InvalidInput(format!(
                "axis `{spec}`: {why}, expected path=start:stop:points"
            ))
        };
        let (path, range) = spec.split_once('=').ok_or_else(|| bad("missing `=`"))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range needs three fields"));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(&format!("`{s}` is not a number")))
        };
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| bad(&format!("`{}` is not a point count", parts[2])))?;
        Self::new(path.trim(), num(parts[0])?, num(parts[1])?, points)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidInput(format!(
                "axis `{}` needs at least 2 points",
                self.path
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start == self.stop {
            return Err(Error::InvalidInput(format!(
                "axis `{}` needs finite, distinct endpoints",
                self.path
            )));
        }
        Ok(())
    }

    /// Grid value `i`; the endpoints are hit exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

/// A one- or two-dimensional grid over a base parameter set.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub name: String,
    pub base: PhysicalParams,
    pub axes: Vec<Axis>,
    /// Worker threads; `None` uses all available cores.
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(name: &str, base: PhysicalParams, axes: Vec<Axis>) -> Self {
        Self {
            name: name.to_string(),
            base,
            axes,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "a sweep takes 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            axis.validate()?;
            let mut probe = self.base.clone();
            axis.path.apply(&mut probe, axis.start)?;
        }
        self.base.validate()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis indices of row `row`; the last axis varies fastest.
    pub fn indices(&self, row: usize) -> Vec<usize> {
        let mut rest = row;
        let mut idx = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            idx[k] = rest % axis.points;
            rest /= axis.points;
        }
        idx
    }

    pub fn coordinates(&self, row: usize) -> Vec<f64> {
        self.indices(row)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.value(i))
            .collect()
    }

    /// Base parameters with the grid values of row `row` substituted.
    pub fn params_at(&self, row: usize) -> Result<PhysicalParams> {
        let mut p = self.base.clone();
        for (axis, x) in self.axes.iter().zip(self.coordinates(row)) {
            axis.path.apply(&mut p, x)?;
        }
        Ok(p)
    }
}

/// Solver diagnostics of a stable grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointDiagnostics {
    pub residual: f64,
    pub min_symplectic: f64,
}

/// Outcome of one grid point. Points whose parameters are invalid or whose
/// solve fails are recorded like unstable points with the reason attached.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub report: EntanglementReport,
    pub diagnostics: Option<PointDiagnostics>,
    pub failure: Option<String>,
}

pub fn evaluate_point(params: &PhysicalParams) -> PointResult {
    match analyze(params) {
        Ok((report, steady)) => PointResult {
            report,
            diagnostics: steady.map(|s| PointDiagnostics {
                residual: s.residual,
                min_symplectic: s.min_symplectic,
            }),
            failure: None,
        },
        Err(e) => {
            let margin = match e {
                Error::Unstable { margin } => margin,
                _ => f64::NAN,
            };
            PointResult {
                report: EntanglementReport::unstable(crate::gaussian::Stability {
                    stable: false,
                    margin,
                }),
                diagnostics: None,
                failure: Some(e.to_string()),
            }
        }
    }
}

/// Evaluates every grid point, in parallel on a bounded pool. Row order and
/// values do not depend on the worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let eval = |row: usize| -> Result<(Vec<f64>, PointResult)> {
        let p = spec.params_at(row)?;
        Ok((spec.coordinates(row), evaluate_point(&p)))
    };
    let rows: Vec<usize> = (0..spec.len()).collect();
    let results: Result<Vec<_>> = match spec.workers {
        Some(1) => rows.iter().map(|&r| eval(r)).collect(),
        workers => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = workers {
                builder = builder.num_threads(n);
            }
            let pool = builder
                .build()
                .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
            pool.install(|| rows.par_iter().map(|&r| eval(r)).collect())
        }
    };
    Ok(SweepTable::from_results(spec.axes.len(), results?))
}
