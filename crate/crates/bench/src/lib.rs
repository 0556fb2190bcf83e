//! Inputs shared by the benchmarks.

use omm_core::sweep::{Axis, SweepSpec};
use omm_core::{LinearModel, PhysicalParams};

pub fn baseline_model() -> LinearModel {
    LinearModel::assemble(&PhysicalParams::baseline()).expect("baseline assembles")
}

/// Magnon-detuning sweep over `points` values on `workers` threads.
pub fn detuning_sweep(points: usize, workers: Option<usize>) -> SweepSpec {
    let axis = Axis::new("delta_m_eff_wb", -2.0, 0.0, points).expect("valid axis");
    let mut spec = SweepSpec::new("bench", PhysicalParams::baseline(), vec![axis]);
    spec.workers = workers;
    spec
}
