use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::AggregateRow;

pub const CSV_HEADER: &str = "sweep_name,sweep_value,method,mean_nmse,se_nmse,mean_rate,se_rate,trials";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Formats `x` with 9 significant digits, `%g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros dropped.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..9).contains(&exp) {
        trim(&format!("{:.*}", (8 - exp) as usize, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn to_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.sweep_name,
            format_sig(r.sweep_value),
            r.method,
            opt(r.mean_nmse),
            opt(r.se_nmse),
            opt(r.mean_rate),
            opt(r.se_rate),
            r.trials
        ));
    }
    out
}

/// Writes aggregate rows to `path`. CSV has one line per (sweep value,
/// method); JSON is an array of objects with the same field names, `null`
/// where the CSV leaves a field empty.
pub fn emit(rows: &[AggregateRow], format: Format, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let body = match format {
        Format::Csv => to_csv(rows),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|source| Error::Json {
                path: path.to_path_buf(),
                source,
            })?;
            s.push('\n');
            s
        }
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(body.as_bytes()).map_err(io_err)
}

pub fn read_json(path: &Path) -> Result<Vec<AggregateRow>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(4.0), "4");
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(-0.0125), "-0.0125");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333");
        assert_eq!(format_sig(123456789.4), "123456789");
        assert_eq!(format_sig(1.5e-7), "1.5e-7");
        assert_eq!(format_sig(9.9999999999), "10");
        assert_eq!(format_sig(2.0e12), "2e12");
    }
}
