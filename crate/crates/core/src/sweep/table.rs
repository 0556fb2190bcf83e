use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gaussian::EntanglementReport;

use super::run::{PointDiagnostics, PointResult};

/// Rectangular sweep output: axis coordinates followed by the report columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Per-row solver diagnostics (`None` for unstable or failed points, and
    /// for tables read back from disk).
    pub diagnostics: Vec<Option<PointDiagnostics>>,
    /// Row index and message of points whose evaluation failed.
    pub failures: Vec<(usize, String)>,
    /// Set when no grid point is stable.
    pub all_unstable: bool,
}

fn header(axes: usize) -> Vec<String> {
    (1..=axes)
        .map(|k| format!("axis{k}"))
        .chain(EntanglementReport::COLUMNS.iter().map(|c| c.to_string()))
        .collect()
}

impl SweepTable {
    pub(crate) fn from_results(axes: usize, results: Vec<(Vec<f64>, PointResult)>) -> Self {
        let mut rows = Vec::with_capacity(results.len());
        let mut diagnostics = Vec::with_capacity(results.len());
        let mut failures = Vec::new();
        for (i, (coords, point)) in results.into_iter().enumerate() {
            let mut row = coords;
            row.extend(point.report.row_values());
            rows.push(row);
            diagnostics.push(point.diagnostics);
            if let Some(msg) = point.failure {
                if !msg.starts_with("drift matrix is not stable") {
                    failures.push((i, msg));
                }
            }
        }
        let mut table = Self {
            columns: header(axes),
            rows,
            diagnostics,
            failures,
            all_unstable: false,
        };
        let none_stable = table.stable_rows().next().is_none();
        table.all_unstable = none_stable;
        table
    }

    pub fn axes(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| c.starts_with("axis"))
            .count()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Indices of rows with `stable = 1`.
    pub fn stable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        let k = self.column_index("stable");
        self.rows
            .iter()
            .enumerate()
            .filter(move |(_, r)| k.is_some_and(|k| r[k] == 1.0))
            .map(|(i, _)| i)
    }
}

/// Shortest text that parses back to the same `f64`; NaN is empty.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x != 0.0 && x.is_finite() && (x.abs() < 1e-4 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Writes the CSV form with LF line endings and returns the byte count.
pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> io::Result<u64> {
    let mut text = table.columns.join(",");
    text.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(text.len() as u64)
}

pub fn write_table(table: &SweepTable, path: &Path) -> Result<u64> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = io::BufWriter::new(file);
    let n = write_csv(table, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)?;
    Ok(n)
}

pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or(Error::TableParse {
        line: 1,
        message: "empty input".into(),
    })?;
    let columns: Vec<String> = head.split(',').map(str::to_string).collect();
    let axes = columns.iter().filter(|c| c.starts_with("axis")).count();
    if !(1..=2).contains(&axes) || columns != header(axes) {
        return Err(Error::TableParse {
            line: 1,
            message: format!("unexpected header `{head}`"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::TableParse {
                line: i + 1,
                message: format!("expected {} fields, found {}", columns.len(), fields.len()),
            });
        }
        let row = fields
            .iter()
            .map(|f| {
                if f.is_empty() {
                    Ok(f64::NAN)
                } else {
                    f.parse::<f64>().map_err(|_| Error::TableParse {
                        line: i + 1,
                        message: format!("`{f}` is not a number"),
                    })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    let mut table = SweepTable {
        columns,
        rows,
        diagnostics: vec![None; n],
        failures: Vec::new(),
        all_unstable: false,
    };
    let none_stable = table.stable_rows().next().is_none();
    table.all_unstable = none_stable;
    Ok(table)
}

pub fn read_table(path: &Path) -> Result<SweepTable> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: Vec<Vec<f64>>) -> SweepTable {
        let n = rows.len();
        let mut t = SweepTable {
            columns: header(1),
            rows,
            diagnostics: vec![None; n],
            failures: vec![],
            all_unstable: false,
        };
        let none_stable = t.stable_rows().next().is_none();
        t.all_unstable = none_stable;
        t
    }

    #[test]
    fn minimal_table() {
        let nan = f64::NAN;
        let t = table(vec![
            vec![-2.0, 0.1, 0.0, 0.3, 0.0, 0.05, 0.0, 1.0, 4.2e6],
            vec![0.0, nan, nan, nan, nan, nan, nan, 0.0, -1.5],
        ]);
        let mut buf = Vec::new();
        let n = write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(n as usize, text.len());
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[0],
            "axis1,E_a1c1,E_m1c1,E_a2c2,E_m2c2,quad_witness_ac,quad_witness_mc,stable,stability_margin"
        );
        assert_eq!(lines[1], "-2,0.1,0,0.3,0,0.05,0,1,4200000");
        assert_eq!(lines[2], "0,,,,,,,0,-1.5");
        assert_eq!(lines[3], "");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let t = table(vec![vec![
            1.0 / 3.0,
            1e-300,
            2.5e-7,
            0.0,
            1.0,
            f64::NAN,
            0.1,
            1.0,
            123456789.123,
        ]]);
        write_table(&t, &path).unwrap();
        let back = read_table(&path).unwrap();
        assert_eq!(back.columns, t.columns);
        for (a, b) in back.rows[0].iter().zip(&t.rows[0]) {
            assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
        }
    }

    #[test]
    fn io_error_names_path() {
        let err = write_table(&table(vec![]), Path::new("/nonexistent/dir/t.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/t.csv"));
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(
            parse_csv("x,y\n"),
            Err(Error::TableParse { line: 1, .. })
        ));
        let good = header(1).join(",");
        let bad = format!("{good}\n1,2,3\n");
        assert!(matches!(
            parse_csv(&bad),
            Err(Error::TableParse { line: 2, .. })
        ));
    }

    #[test]
    fn all_unstable_flag() {
        let nan = f64::NAN;
        let t = table(vec![vec![0.0, nan, nan, nan, nan, nan, nan, 0.0, -1.0]]);
        assert!(t.all_unstable);
    }

    proptest! {
        #[test]
        fn finite_values_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            let s = format_value(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
            prop_assert!(!s.contains(','));
        }
    }
}
