//! Scaling reports and CSV serialization.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::error::{LabError, Result};
use crate::stats::{loglog_fit, LinearFit};

/// One measurement of a scaling experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub parameter: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Rows of a scaling experiment with the fitted log-log exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
    /// Half-width of the 95% interval for `slope`.
    pub slope_ci: f64,
    pub residual: f64,
    pub seed: u64,
}

impl ScalingReport {
    /// Fit the slope of `ln value` against `ln parameter`; `slope_ci` is supplied by the caller.
    pub fn fit(rows: Vec<ScalingRow>, slope_ci: f64, seed: u64) -> Result<Self> {
        if rows.is_empty() {
            return Err(LabError::Domain("scaling report needs at least one row".into()));
        }
        let (slope, residual) = if rows.len() == 1 {
            (0.0, 0.0)
        } else {
            let xs: Vec<f64> = rows.iter().map(|r| r.parameter).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.value).collect();
            let LinearFit { slope, residual, .. } = loglog_fit(&xs, &ys)?;
            (slope, residual)
        };
        Ok(Self { rows, slope, slope_ci, residual, seed })
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.parameter).collect()
    }

    /// CSV block `experiment,N,value,stderr` without header.
    pub fn csv_rows(&self, experiment: &str) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{experiment},{},{},{}",
                fmt_param(r.parameter),
                fmt_float(r.value),
                fmt_float(r.stderr)
            );
        }
        out
    }
}

/// Seventeen significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Integers print without a fractional part.
pub fn fmt_param(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        fmt_float(x)
    }
}

/// Write a CSV file with a header row.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> io::Result<()> {
    let mut body = String::with_capacity(64 * (rows.len() + 1));
    body.push_str(header);
    body.push('\n');
    for r in rows {
        body.push_str(r);
        if !r.ends_with('\n') {
            body.push('\n');
        }
    }
    std::fs::write(path, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_param(16.0), "16");
    }

    #[test]
    fn fit_reports_power() {
        let rows = [1.0, 2.0, 4.0]
            .iter()
            .map(|&n: &f64| ScalingRow { parameter: n, value: n.powf(0.5), stderr: 0.0 })
            .collect();
        let r = ScalingReport::fit(rows, 0.0, 0).unwrap();
        assert!((r.slope - 0.5).abs() < 1e-14);
        assert!(ScalingReport::fit(vec![], 0.0, 0).is_err());
    }
}
