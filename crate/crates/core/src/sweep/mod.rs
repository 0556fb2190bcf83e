//! Parameter grids, figure presets and CSV output.

mod path;
mod presets;
mod run;
mod table;

pub use path::{ParamPath, Unit};
pub use presets::{
    figure_panels, figure_preset, manifest_entries, preset_names, reproduce_figure, DEFAULT_POINTS,
    DEFAULT_POINTS_2D, FIGURES,
};
pub use run::{evaluate_point, run_sweep, Axis, PointDiagnostics, PointResult, SweepSpec};
pub use table::{format_value, parse_csv, read_table, write_csv, write_table, SweepTable};
