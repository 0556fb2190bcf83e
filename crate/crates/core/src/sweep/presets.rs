use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::PhysicalParams;
use crate::units::hz_to_rad;

use super::run::{run_sweep, Axis, SweepSpec};
use super::table::{format_value, write_table};

/// Panels of every reproducible figure.
pub const FIGURES: [(&str, &[&str]); 6] = [
    (
        "fig2",
        &["fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f"],
    ),
    (
        "fig3",
        &["fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f"],
    ),
    (
        "fig4",
        &["fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f"],
    ),
    ("fig5", &["fig5a", "fig5b"]),
    ("fig6", &["fig6a", "fig6b"]),
    ("fig7", &["fig7a", "fig7b"]),
];

pub const DEFAULT_POINTS: usize = 201;
pub const DEFAULT_POINTS_2D: usize = 41;

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    FIGURES
        .iter()
        .flat_map(|(_, panels)| panels.iter().copied())
}

/// Panels of `name`, which is a figure (`fig2`) or a single panel (`fig2a`).
pub fn figure_panels(name: &str) -> Result<Vec<&'static str>> {
    if let Some((_, panels)) = FIGURES.iter().find(|(f, _)| *f == name) {
        return Ok(panels.to_vec());
    }
    preset_names()
        .find(|p| *p == name)
        .map(|p| vec![p])
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Sweep definition of one figure panel.
///
/// All panels start from the common baseline. Panels showing the optomagnonic
/// pair (the second half of each figure) use the stronger microwave-magnon
/// coupling of 2π × 6 MHz, the others 2π × 4 MHz; both panels of the
/// quadripartite study use 2π × 6 MHz.
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let mut base = PhysicalParams::baseline();
    let (figure, panel) = name.split_at(name.len().saturating_sub(1));
    let (column, magnonic) = match panel {
        "a" => (0, false),
        "b" => (1, false),
        "c" => (2, false),
        "d" => (0, true),
        "e" => (1, true),
        "f" => (2, true),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let set_g_am = |p: &mut PhysicalParams, mhz: f64| {
        p.system1.g_am = hz_to_rad(mhz * 1e6);
        p.system2.g_am = p.system1.g_am;
    };
    let n = DEFAULT_POINTS;
    let axes = match (figure, column) {
        ("fig2", 0) => vec![Axis::new("delta_m_eff_wb", -2.0, 0.0, n)?],
        ("fig2", 1) => vec![Axis::new("delta_a_wb", -2.0, 0.0, n)?],
        ("fig2", 2) => vec![Axis::new("delta_c_eff_wb", 0.0, 2.0, n)?],
        ("fig3", 0) => vec![Axis::new("kappa_a", 0.1e6, 10e6, n)?],
        ("fig3", 1) => vec![Axis::new("kappa_m", 0.1e6, 10e6, n)?],
        ("fig3", 2) => vec![Axis::new("kappa_c", 0.1e6, 10e6, n)?],
        ("fig4", 0) => vec![Axis::new("g_am", 0.0, 10e6, n)?],
        ("fig4", 1) => vec![Axis::new("g_mb", 0.0, 5e6, n)?],
        ("fig4", 2) => vec![Axis::new("system1.g_cb", 0.0, 16e6, n)?],
        ("fig5", 0 | 1) if !magnonic => vec![Axis::new("cascade.g_ratio", 0.5, 50.5, n)?],
        ("fig6", 0 | 1) if !magnonic => {
            let m = DEFAULT_POINTS_2D;
            vec![
                Axis::new("cascade.eta1", 0.0, 1.0, m)?,
                Axis::new("cascade.eta2", 0.0, 1.0, m)?,
            ]
        }
        ("fig7", 0 | 1) if !magnonic => vec![Axis::new("delta_m_eff_wb", -2.0, 0.0, n)?],
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let optomagnonic = magnonic || (matches!(figure, "fig5" | "fig6") && column == 1);
    set_g_am(&mut base, if optomagnonic { 6.0 } else { 4.0 });
    if figure == "fig7" {
        set_g_am(&mut base, 6.0);
        for s in [&mut base.system1, &mut base.system2] {
            if column == 0 {
                s.kappa_m = hz_to_rad(1e6);
                s.kappa_c = hz_to_rad(3e6);
                s.delta_a = -0.9 * s.omega_b;
            } else {
                s.kappa_a = hz_to_rad(1e6);
                s.kappa_m = hz_to_rad(1e6);
                s.kappa_c = hz_to_rad(1e6);
            }
        }
        if column == 0 {
            base.system1.g_cb = hz_to_rad(7e6);
        }
    }
    Ok(SweepSpec::new(name, base, axes))
}

/// `key=value` lines describing a sweep: axes, then every base parameter.
pub fn manifest_entries(spec: &SweepSpec) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, axis) in spec.axes.iter().enumerate() {
        let key = format!("axis{}", k + 1);
        out.push((key.clone(), axis.path.to_string()));
        out.push((format!("{key}.start"), format_value(axis.start)));
        out.push((format!("{key}.stop"), format_value(axis.stop)));
        out.push((format!("{key}.points"), axis.points.to_string()));
    }
    for (section, key, value) in spec.base.entries() {
        out.push((format!("{section}.{key}"), format_value(value)));
    }
    out
}

/// Runs every panel of `name` (figure or single panel), writing
/// `<panel>.csv` files and `manifest.txt` into `dir`. Returns the paths written.
pub fn reproduce_figure(name: &str, dir: &Path, workers: Option<usize>) -> Result<Vec<PathBuf>> {
    let panels = figure_panels(name)?;
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let mut manifest = String::new();
    writeln!(manifest, "figure={name}").unwrap();
    for panel in panels {
        let mut spec = figure_preset(panel)?;
        spec.workers = workers;
        let table = run_sweep(&spec)?;
        let file = format!("{panel}.csv");
        let path = dir.join(&file);
        write_table(&table, &path)?;
        written.push(path);
        writeln!(manifest, "{panel}.file={file}").unwrap();
        writeln!(manifest, "{panel}.rows={}", table.rows.len()).unwrap();
        let stable = table.stable_rows().count();
        writeln!(
            manifest,
            "{panel}.unstable_points={}",
            table.rows.len() - stable
        )
        .unwrap();
        writeln!(manifest, "{panel}.failed_points={}", table.failures.len()).unwrap();
        for (key, value) in manifest_entries(&spec) {
            writeln!(manifest, "{panel}.{key}={value}").unwrap();
        }
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves() {
        let names: Vec<_> = preset_names().collect();
        assert_eq!(names.len(), 24);
        for name in names {
            let spec = figure_preset(name).unwrap();
            spec.validate().unwrap();
            assert_eq!(spec.name, name);
        }
        for bad in ["fig2g", "fig5c", "fig9a", "fig1a", "x", ""] {
            assert!(
                matches!(figure_preset(bad), Err(Error::UnknownPreset(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn detuning_panels() {
        let a = figure_preset("fig2a").unwrap();
        assert_eq!(a.axes[0].path.to_string(), "delta_m_eff_wb");
        assert_eq!(a.base.system1.g_am, hz_to_rad(4e6));
        assert_eq!(a.axes[0].points, 201);
        let d = figure_preset("fig2d").unwrap();
        assert_eq!(d.axes[0].path.to_string(), "delta_m_eff_wb");
        assert_eq!(d.base.system2.g_am, hz_to_rad(6e6));
        let c = figure_preset("fig2c").unwrap();
        assert_eq!((c.axes[0].start, c.axes[0].stop), (0.0, 2.0));
    }

    #[test]
    fn efficiency_grid() {
        let s = figure_preset("fig6a").unwrap();
        assert_eq!(s.axes.len(), 2);
        assert_eq!(s.len(), 41 * 41);
        assert_eq!((s.axes[0].start, s.axes[1].stop), (0.0, 1.0));
    }

    #[test]
    fn quadripartite_overrides() {
        let a = figure_preset("fig7a").unwrap().base;
        assert_eq!(a.system1.kappa_m, hz_to_rad(1e6));
        assert_eq!(a.system2.kappa_c, hz_to_rad(3e6));
        assert_eq!(a.system1.g_cb, hz_to_rad(7e6));
        assert_eq!(a.system1.delta_a, -0.9 * a.system1.omega_b);
        let b = figure_preset("fig7b").unwrap().base;
        assert_eq!(b.system2.kappa_a, hz_to_rad(1e6));
        assert_eq!(b.system1.g_cb, hz_to_rad(8e6));
    }

    #[test]
    fn figure_panel_lists() {
        assert_eq!(figure_panels("fig2").unwrap().len(), 6);
        assert_eq!(figure_panels("fig7").unwrap(), vec!["fig7a", "fig7b"]);
        assert_eq!(figure_panels("fig3e").unwrap(), vec!["fig3e"]);
        assert!(figure_panels("fig9").is_err());
    }

    #[test]
    fn reproduce_single_panel_writes_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let files = reproduce_figure("fig5a", dir.path(), Some(2)).unwrap();
        assert_eq!(files.len(), 2);
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("fig5a.axis1=cascade.g_ratio\n"));
        assert!(manifest.contains("fig5a.rows=201\n"));
        assert!(manifest.contains("fig5a.cascade.eta1=0.75\n"));
    }
}
