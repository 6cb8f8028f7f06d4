//! Static SVG figures of curves and marked points.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvgError {
    #[error("unknown plane {0:?}; expected xy, xz or yz")]
    UnknownPlane(String),
    #[error("plane {plane:?} needs dimension at least {needed}, found {found}")]
    PlaneOutOfRange { plane: Plane, needed: usize, found: usize },
    #[error("nothing to draw")]
    Empty,
}

/// Coordinate plane for orthographic projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Plane {
    #[default]
    Xy,
    Xz,
    Yz,
}

impl Plane {
    pub fn axes(self) -> (usize, usize) {
        match self {
            Plane::Xy => (0, 1),
            Plane::Xz => (0, 2),
            Plane::Yz => (1, 2),
        }
    }
}

impl FromStr for Plane {
    type Err = SvgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(Plane::Xy),
            "xz" => Ok(Plane::Xz),
            "yz" => Ok(Plane::Yz),
            _ => Err(SvgError::UnknownPlane(s.to_string())),
        }
    }
}

fn project(p: &Point, plane: Plane) -> Result<(f64, f64), SvgError> {
    let (a, b) = plane.axes();
    if b >= p.dim() {
        return Err(SvgError::PlaneOutOfRange { plane, needed: b + 1, found: p.dim() });
    }
    // y grows upwards in the figure
    Ok((p.coords()[a], -p.coords()[b]))
}

/// Draws each curve as one `<path>` and each mark as one `<circle>`.
///
/// The view box fits all projected points with a 5% margin.
pub fn render_svg(curves: &[Vec<Point>], marks: &[Point], plane: Plane) -> Result<String, SvgError> {
    let curves: Vec<Vec<(f64, f64)>> =
        curves.iter().map(|c| c.iter().map(|p| project(p, plane)).collect()).collect::<Result<_, _>>()?;
    let marks: Vec<(f64, f64)> = marks.iter().map(|p| project(p, plane)).collect::<Result<_, _>>()?;
    let all: Vec<(f64, f64)> = curves.iter().flatten().chain(&marks).copied().collect();
    if all.is_empty() {
        return Err(SvgError::Empty);
    }
    let (mut x0, mut y0, mut x1, mut y1) =
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = 0.05 * span;
    let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = span / 400.0;
    let radius = span / 150.0;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        x0 - margin,
        y0 - margin,
        w,
        h,
        (800.0 * h / w).round().max(1.0)
    )
    .unwrap();
    for c in &curves {
        let mut d = String::new();
        for (i, (x, y)) in c.iter().enumerate() {
            write!(d, "{}{x} {y}", if i == 0 { "M" } else { " L" }).unwrap();
        }
        writeln!(s, r##"  <path d="{d}" fill="none" stroke="#1f4e79" stroke-width="{stroke}"/>"##).unwrap();
    }
    for (x, y) in &marks {
        writeln!(s, r##"  <circle cx="{x}" cy="{y}" r="{radius}" fill="#c0392b"/>"##).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_elements_and_flips_y() {
        let curve = vec![Point::xy(0., 0.), Point::xy(1., 1.), Point::xy(2., 0.)];
        let svg = render_svg(std::slice::from_ref(&curve), &curve, Plane::Xy).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains(r#"cx="1" cy="-1""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn plane_checks() {
        let p = vec![Point::xy(0., 0.)];
        assert!(matches!(render_svg(&[], &p, Plane::Xz), Err(SvgError::PlaneOutOfRange { .. })));
        assert_eq!("YZ".parse::<Plane>().unwrap(), Plane::Yz);
        assert!("xw".parse::<Plane>().is_err());
        assert_eq!(render_svg(&[], &[], Plane::Xy), Err(SvgError::Empty));
    }
}
