//! CSV and JSON artifacts.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::opmatrix::SingularSpectrum;
use crate::series::PowerSeries;

/// Shortest round-trip decimal, switching to exponent form outside `[1e-5, 1e16)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn spectrum_csv(spec: &SingularSpectrum) -> String {
    let mut out = String::from("n,a_n,error_radius,certified\n");
    for (i, v) in spec.values.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            fmt_f64(*v),
            fmt_f64(spec.error_radii[i]),
            spec.certified[i]
        );
    }
    out
}

/// Inverse of [`spectrum_csv`]; the floor is recovered as twice the first radius.
pub fn parse_spectrum_csv(text: &str) -> Result<SingularSpectrum> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Invalid("empty CSV".into()))?;
    if header.trim() != "n,a_n,error_radius,certified" {
        return Err(Error::Invalid(format!("unexpected CSV header `{header}`")));
    }
    let (mut values, mut radii, mut certified) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let bad = || Error::Invalid(format!("CSV line {}: `{line}`", i + 2));
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 4 || f[0].parse::<usize>().map_err(|_| bad())? != i + 1 {
            return Err(bad());
        }
        values.push(f[1].parse::<f64>().map_err(|_| bad())?);
        radii.push(f[2].parse::<f64>().map_err(|_| bad())?);
        certified.push(f[3].parse::<bool>().map_err(|_| bad())?);
    }
    if values.is_empty() {
        return Err(Error::Invalid("CSV has no rows".into()));
    }
    let floor = crate::opmatrix::FLOOR_MIN.max(2.0 * radii[0]);
    Ok(SingularSpectrum {
        values,
        error_radii: radii,
        certification_floor: floor,
        certified,
    })
}

pub fn series_csv(ps: &PowerSeries) -> String {
    let mut out = String::from("index,re,im\n");
    for (j, c) in ps.coeffs.iter().enumerate() {
        let _ = writeln!(out, "{j},{},{}", fmt_f64(c.re), fmt_f64(c.im));
    }
    out
}

pub fn series_json(ps: &PowerSeries) -> Value {
    json!({
        "coefficients": ps.coeffs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        "sampling_radius": ps.sampling_radius,
        "error_bound": ps.error_bound,
        "aliasing": ps.aliasing,
    })
}

/// JSON report carrying the library version and the config hash.
pub fn envelope<T: Serialize>(
    command: &str,
    config_hash: &str,
    pass: Option<bool>,
    body: &T,
) -> Value {
    let mut v = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config_hash": config_hash,
    });
    if let Some(p) = pass {
        v["pass"] = json!(p);
    }
    v["result"] = serde_json::to_value(body).unwrap_or(Value::Null);
    v
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [
            0.0,
            1.0,
            0.1,
            1e-5,
            3.2e-7,
            1e-300,
            1.5e20,
            0.125,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.125), "0.125");
        assert_eq!(fmt_f64(1e-7), "1e-7");
    }

    #[test]
    fn spectrum_csv_round_trip() {
        let s = SingularSpectrum::new(vec![0.5, 0.25, 1e-20], 1e-15);
        let back = parse_spectrum_csv(&spectrum_csv(&s)).unwrap();
        assert_eq!(back, s);
        assert!(parse_spectrum_csv("n,a\n1,2\n").is_err());
    }
}
