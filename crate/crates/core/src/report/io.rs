//! Point files.
//!
//! CSV: a `dim=<d>` header line, then one point per line as `d`
//! comma-separated decimals. JSON: `{"dim": d, "points": [[...], ...]}`.
//! Row order is the path order. Coordinates are written in the shortest
//! decimal form that parses back to the same `f64`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Error)]
pub enum PointFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    Json,
}

impl PointFormat {
    /// JSON for a `.json` extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => PointFormat::Json,
            _ => PointFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonPoints {
    dim: usize,
    points: Vec<Vec<f64>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> PointFileError {
    PointFileError::Parse { line, message: message.into() }
}

fn parse_csv(text: &str) -> Result<Vec<Point>, PointFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing dim=<d> header"))?;
    let dim: usize = header
        .strip_prefix("dim=")
        .ok_or_else(|| parse_err(hline, "expected dim=<d> header"))?
        .trim()
        .parse()
        .map_err(|_| parse_err(hline, "dimension is not an integer"))?;
    if dim == 0 {
        return Err(parse_err(hline, "dimension must be positive"));
    }
    lines
        .map(|(line, l)| {
            let coords = l
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|_| parse_err(line, format!("bad number {f:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != dim {
                return Err(parse_err(line, format!("expected {dim} coordinates, found {}", coords.len())));
            }
            Point::new(coords).map_err(|e| parse_err(line, e.to_string()))
        })
        .collect()
}

fn parse_json(text: &str) -> Result<Vec<Point>, PointFileError> {
    let doc: JsonPoints = serde_json::from_str(text)?;
    doc.points
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            if c.len() != doc.dim {
                return Err(parse_err(i + 1, format!("expected {} coordinates, found {}", doc.dim, c.len())));
            }
            Point::new(c).map_err(|e| parse_err(i + 1, e.to_string()))
        })
        .collect()
}

/// Parses either format; JSON is recognized by a leading `{`.
pub fn parse_points(text: &str) -> Result<Vec<Point>, PointFileError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

pub fn read_points(path: &Path) -> Result<Vec<Point>, PointFileError> {
    let text = fs::read_to_string(path)
        .map_err(|source| PointFileError::Io { path: path.display().to_string(), source })?;
    parse_points(&text)
}

/// Serializes points; all points must share the first point's dimension.
pub fn format_points(points: &[Point], format: PointFormat) -> String {
    let dim = points.first().map_or(0, Point::dim);
    match format {
        PointFormat::Csv => {
            let mut s = format!("dim={dim}\n");
            for p in points {
                let row: Vec<String> = p.coords().iter().map(|c| format!("{c:?}")).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        PointFormat::Json => {
            let doc = JsonPoints { dim, points: points.iter().map(|p| p.coords().to_vec()).collect() };
            let mut s = serde_json::to_string(&doc).expect("finite coordinates serialize");
            s.push('\n');
            s
        }
    }
}

pub fn write_points(path: &Path, points: &[Point]) -> Result<(), PointFileError> {
    fs::write(path, format_points(points, PointFormat::from_path(path)))
        .map_err(|source| PointFileError::Io { path: path.display().to_string(), source })
}
