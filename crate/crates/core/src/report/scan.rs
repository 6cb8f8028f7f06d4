//! Scaling scans over the construction and over a fixed arc.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{build_gamma, ConstructionParams, CurveError, MarkedCurve};
use crate::distortion::{delta3, DistortionError, Extended};

/// Largest `n` evaluated exhaustively without an explicit override.
pub const EXHAUSTIVE_LIMIT: usize = 1500;

/// Opening angle of the fixed baseline arc.
pub const BASELINE_OPENING: f64 = std::f64::consts::PI / 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error(
        "n={n} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}; pass the override flag to run it anyway"
    )]
    TooLarge { n: usize },
    #[error("exponent fit needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("exponent fit needs positive finite values, got ({0}, {1})")]
    NonPositive(f64, f64),
    #[error("exponent fit needs at least two distinct sizes")]
    DegenerateSizes,
    #[error("baseline needs n >= 3, got {0}")]
    BaselineTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Euclidean norm of the residuals of the log-log fit.
    pub residual_norm: f64,
}

/// Least-squares slope of `ln value` against `ln n`.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit, ScanError> {
    if pairs.len() < 2 {
        return Err(ScanError::TooFewPoints(pairs.len()));
    }
    if let Some(&(n, v)) =
        pairs.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0 && n.is_finite() && v.is_finite()))
    {
        return Err(ScanError::NonPositive(n, v));
    }
    let pts: Vec<(f64, f64)> = pairs.iter().map(|(n, v)| (n.ln(), v.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ScanError::DegenerateSizes);
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_norm = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>().sqrt();
    Ok(ExponentFit { slope, intercept, residual_norm })
}

/// One row of a construction scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord {
    pub m: usize,
    pub d: usize,
    pub n: usize,
    pub delta3: Extended,
    /// `delta3 / m`.
    pub ratio: f64,
    pub runtime_ms: u64,
}

pub const SCAN_CSV_HEADER: &str = "m,d,n,delta3,ratio,runtime_ms";

impl ScanRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.m,
            self.d,
            self.n,
            self.delta3,
            fmt_ext(self.ratio),
            self.runtime_ms
        )
    }
}

fn fmt_ext(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub records: Vec<ScanRecord>,
    /// Slope of `ln delta3` against `ln n`; absent when fewer than two
    /// finite records exist.
    pub fit: Option<ExponentFit>,
}

impl ScanResult {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{SCAN_CSV_HEADER}\n");
        for r in &self.records {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }
}

fn fit_finite(pairs: impl Iterator<Item = (usize, Extended)>) -> Option<ExponentFit> {
    let pts: Vec<(f64, f64)> = pairs.filter_map(|(n, v)| v.finite().map(|v| (n as f64, v))).collect();
    fit_exponent(&pts).ok()
}

/// Builds the construction for each `m` in dimension `d` and measures its
/// exact 3-distortion.
pub fn scan(d: usize, ms: &[usize], allow_large: bool) -> Result<ScanResult, ScanError> {
    let params: Vec<ConstructionParams> =
        ms.iter().map(|&m| ConstructionParams::new(m, d)).collect::<Result<_, _>>()?;
    if !allow_large {
        if let Some(p) = params.iter().find(|p| p.n() > EXHAUSTIVE_LIMIT) {
            return Err(ScanError::TooLarge { n: p.n() });
        }
    }
    let mut records = Vec::with_capacity(params.len());
    for p in &params {
        let start = Instant::now();
        let seq = build_gamma(p)?;
        let value = delta3(&seq)?.delta3;
        records.push(ScanRecord {
            m: p.m,
            d,
            n: p.n(),
            delta3: value,
            ratio: value.to_f64() / p.m as f64,
            runtime_ms: start.elapsed().as_millis() as u64,
        });
    }
    let fit = fit_finite(records.iter().map(|r| (r.n, r.delta3)));
    Ok(ScanResult { records, fit })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineRecord {
    pub n: usize,
    pub opening: f64,
    pub delta3: Extended,
    /// Closed-form distortion of three consecutive points of the arc.
    pub consecutive: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineResult {
    pub records: Vec<BaselineRecord>,
    pub fit: Option<ExponentFit>,
}

impl BaselineResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,opening,delta3,consecutive\n");
        for r in &self.records {
            s.push_str(&format!("{},{},{},{}\n", r.n, r.opening, r.delta3, fmt_ext(r.consecutive)));
        }
        s
    }
}

/// Distortion of three consecutive unit-arclength points on a circle of
/// radius `n / opening`: with angular step `t = opening / n` and chord
/// `c = 2 R sin(t / 2)` the triangle has area `c^2 sin(t) / 2`.
pub fn consecutive_arc_distortion(n: usize, opening: f64) -> f64 {
    let radius = n as f64 / opening;
    let t = 1.0 / radius;
    let chord = 2.0 * radius * (t / 2.0).sin();
    1.0 / (chord * chord * t.sin())
}

/// Unit-spaced points on a fixed-shape arc of length `n`, for each `n`.
pub fn baseline(ns: &[usize], opening: f64, allow_large: bool) -> Result<BaselineResult, ScanError> {
    let mut records = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 3 {
            return Err(ScanError::BaselineTooSmall(n));
        }
        if n > EXHAUSTIVE_LIMIT && !allow_large {
            return Err(ScanError::TooLarge { n });
        }
        let seq = MarkedCurve::circular_arc(opening, n as f64).to_tame_sequence()?;
        records.push(BaselineRecord {
            n,
            opening,
            delta3: delta3(&seq)?.delta3,
            consecutive: consecutive_arc_distortion(n, opening),
        });
    }
    let fit = fit_finite(records.iter().map(|r| (r.n, r.delta3)));
    Ok(BaselineResult { records, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::triple_distortion;

    #[test]
    fn exact_power_laws() {
        let f = fit_exponent(&[(10., 10.), (100., 100.)]).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        let f = fit_exponent(&[(16., 4.), (256., 16.)]).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        let f = fit_exponent(&[(8., 2.), (64., 4.), (512., 8.)]).unwrap();
        assert!((f.slope - 1.0 / 3.0).abs() < 1e-12);
        assert!(f.residual_norm < 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert_eq!(fit_exponent(&[(1., 1.)]), Err(ScanError::TooFewPoints(1)));
        assert!(matches!(fit_exponent(&[(1., 1.), (2., 0.)]), Err(ScanError::NonPositive(..))));
        assert_eq!(fit_exponent(&[(2., 1.), (2., 3.)]), Err(ScanError::DegenerateSizes));
    }

    #[test]
    fn scan_csv_layout() {
        let r = scan(2, &[4, 5], false).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(SCAN_CSV_HEADER));
        assert_eq!(lines.count(), 2);
        assert_eq!(r.records[0].n, 4);
        assert!(matches!(scan(3, &[40], false), Err(ScanError::TooLarge { n: 1600 })));
    }

    #[test]
    fn baseline_small_and_closed_form() {
        let b = baseline(&[3, 20], BASELINE_OPENING, false).unwrap();
        let v = b.records[0].delta3.finite().unwrap();
        assert!(v > 1.0);
        let seq = MarkedCurve::circular_arc(BASELINE_OPENING, 20.0).to_tame_sequence().unwrap();
        let t = triple_distortion(&seq, 7, 8, 9).unwrap().value.to_f64();
        let closed = consecutive_arc_distortion(20, BASELINE_OPENING);
        assert!((t - closed).abs() < 1e-9 * closed);
        assert!(matches!(baseline(&[2], BASELINE_OPENING, false), Err(ScanError::BaselineTooSmall(2))));
    }
}
