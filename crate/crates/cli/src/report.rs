//! Report assembly and JSON/CSV emission.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sg_nft::{NftError, Result, SpectralPoint};

use crate::config::Format;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Timestamps {
    pub started_unix: f64,
    pub finished_unix: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Meta {
    pub version: String,
    pub command: String,
    pub config_echo: Value,
    pub timestamps: Timestamps,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Sample {
    pub k_re: f64,
    pub k_im: f64,
    pub region: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    pub values: BTreeMap<String, f64>,
}

impl Sample {
    pub fn new(k: SpectralPoint, route: Option<&str>) -> Self {
        Self {
            k_re: k.k.re,
            k_im: k.k.im,
            region: k.region.name().to_string(),
            route: route.map(str::to_string),
            values: BTreeMap::new(),
        }
    }

    pub fn set_complex(&mut self, name: &str, v: Complex64) {
        self.values.insert(format!("{name}_re"), v.re);
        self.values.insert(format!("{name}_im"), v.im);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Slope {
    /// `None` when every remainder sat below the noise floor.
    pub slope: Option<f64>,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub samples: Vec<Sample>,
    pub residuals: BTreeMap<String, f64>,
    pub slopes: BTreeMap<String, Slope>,
    /// Non-sample results: pass flags, charges, coefficients.
    pub summary: BTreeMap<String, Value>,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl Report {
    pub fn new(command: &str, config_echo: Value) -> Self {
        let now = unix_now();
        Self {
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
                config_echo,
                timestamps: Timestamps {
                    started_unix: now,
                    finished_unix: now,
                },
            },
            samples: Vec::new(),
            residuals: BTreeMap::new(),
            slopes: BTreeMap::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn set_complex_summary(&mut self, name: &str, v: Complex64) {
        self.summary.insert(format!("{name}_re"), v.re.into());
        self.summary.insert(format!("{name}_im"), v.im.into());
    }

    pub fn finish(&mut self) {
        self.meta.timestamps.finished_unix = unix_now();
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| NftError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// One row per sample: `k_re, k_im, region, route` and the union of the
    /// value names, blank where a sample lacks a value.
    pub fn to_csv(&self) -> Result<String> {
        let names: BTreeSet<&String> = self.samples.iter().flat_map(|s| s.values.keys()).collect();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        let mut header = vec!["k_re", "k_im", "region", "route"];
        header.extend(names.iter().map(|n| n.as_str()));
        w.write_record(&header).map_err(csv_err)?;
        for s in &self.samples {
            let mut row = vec![fmt_f64(s.k_re), fmt_f64(s.k_im), s.region.clone(), s.route.clone().unwrap_or_default()];
            row.extend(names.iter().map(|n| s.values.get(*n).map(|v| fmt_f64(*v)).unwrap_or_default()));
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| NftError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| NftError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn csv_err(e: csv::Error) -> NftError {
    NftError::Io(e.to_string())
}

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| NftError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new("verify", Value::Null);
        let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["samples"], Value::Array(vec![]));
        assert_eq!(r.to_csv().unwrap(), "k_re,k_im,region,route\n");
    }

    #[test]
    fn floats_round_trip_in_both_formats() {
        let mut r = Report::new("spectral", Value::Null);
        let vals = [0.1 + 0.2, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI];
        for (i, v) in vals.iter().enumerate() {
            let mut s = Sample::new(SpectralPoint::real(i as f64 + 1.0).unwrap(), Some("direct"));
            s.set_complex("a", Complex64::new(*v, -v));
            r.samples.push(s);
        }
        let back: Report = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let csv = r.to_csv().unwrap();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["k_re", "k_im", "region", "route", "a_im", "a_re"]);
        for (row, v) in rd.records().zip(vals) {
            let row = row.unwrap();
            assert_eq!(row[5].parse::<f64>().unwrap().to_bits(), v.to_bits());
            assert_eq!(row[4].parse::<f64>().unwrap().to_bits(), (-v).to_bits());
        }
    }
}
