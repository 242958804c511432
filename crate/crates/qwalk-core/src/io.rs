//! CSV serialization of distributions, moment series, and fit results,
//! plus parsing of tabulated coin angles. Floats are written with 17
//! significant digits so files round-trip the underlying doubles.

use std::io::{self, Write};

use crate::analysis::FitResult;
use crate::error::{Error, Result};
use crate::evolve::MomentSeries;
use crate::state::Distribution;

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `k,p` rows in ascending site order over the distribution window.
pub fn write_distribution_csv<W: Write>(w: &mut W, d: &Distribution) -> io::Result<()> {
    writeln!(w, "k,p")?;
    for (k, p) in d.iter() {
        writeln!(w, "{k},{}", fmt_f64(p))?;
    }
    Ok(())
}

/// `n,m1,m2,sigma` rows, one per record.
pub fn write_series_csv<W: Write>(w: &mut W, s: &MomentSeries) -> io::Result<()> {
    writeln!(w, "n,m1,m2,sigma")?;
    for r in &s.records {
        writeln!(
            w,
            "{},{},{},{}",
            r.n,
            fmt_f64(r.m1),
            fmt_f64(r.m2),
            fmt_f64(r.sigma)
        )?;
    }
    Ok(())
}

/// `alpha,exponent,prefactor,r_squared,n_lo,n_hi` rows.
pub fn write_fit_results_csv<W: Write>(w: &mut W, rows: &[(f64, FitResult)]) -> io::Result<()> {
    writeln!(w, "alpha,exponent,prefactor,r_squared,n_lo,n_hi")?;
    for (alpha, fit) in rows {
        writeln!(
            w,
            "{alpha},{},{},{},{},{}",
            fmt_f64(fit.exponent),
            fmt_f64(fit.prefactor),
            fmt_f64(fit.r_squared),
            fit.n_lo,
            fit.n_hi
        )?;
    }
    Ok(())
}

/// Parse a one-column table of angles in radians, one per line. Blank
/// lines and `#` comment lines are skipped; an optional `theta` header is
/// tolerated.
pub fn parse_angle_table(text: &str) -> Result<Vec<f64>> {
    let mut angles = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if idx == 0 && line.eq_ignore_ascii_case("theta") {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            Error::InvalidParameter(format!(
                "angle table line {}: cannot parse {line:?} as a number",
                idx + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "angle table line {}: non-finite angle {value}",
                idx + 1
            )));
        }
        angles.push(value);
    }
    if angles.is_empty() {
        return Err(Error::InvalidParameter(
            "angle table contains no angles".into(),
        ));
    }
    Ok(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::MomentRecord;

    #[test]
    fn distribution_csv_layout() {
        let d = Distribution::new(-1, vec![0.25, 0.5, 0.25]);
        let mut buf = Vec::new();
        write_distribution_csv(&mut buf, &d).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,p");
        assert_eq!(lines[1], "-1,2.5000000000000000e-1");
        assert_eq!(lines[2], "0,5.0000000000000000e-1");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn series_csv_layout() {
        let s = MomentSeries {
            records: vec![MomentRecord {
                n: 10,
                m1: 0.0,
                m2: 4.0,
                sigma: 2.0,
            }],
            schedule_descriptor: "test".into(),
        };
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,m1,m2,sigma\n"));
        assert!(text.contains("10,0.0000000000000000e0,4.0000000000000000e0,2.0000000000000000e0"));
    }

    #[test]
    fn angle_table_roundtrip() {
        let angles = parse_angle_table("theta\n0.5\n\n# comment\n0.25\n1e-3\n").unwrap();
        assert_eq!(angles, vec![0.5, 0.25, 1e-3]);
    }

    #[test]
    fn angle_table_bad_line_reports_position() {
        let err = parse_angle_table("0.5\npotato\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "got: {msg}");
    }

    #[test]
    fn angle_table_empty_rejected() {
        assert!(parse_angle_table("# nothing\n").is_err());
    }
}
