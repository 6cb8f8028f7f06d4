//! Euclidean primitives shared by every other module.
//!
//! Areas are computed with the Gram identity so they work in any dimension
//! `d >= 2`. Degeneracy is decided relative to the size of the triangle:
//! a triangle is flat when its area is below [`EPS_AREA`] times the square of
//! its longest side.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative threshold for flat triangles and vanishing cross products.
pub const EPS_AREA: f64 = 1e-12;

/// Relative threshold under which two points are considered to coincide.
pub const EPS_COINCIDENT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point has no coordinates")]
    EmptyPoint,
    #[error("non-finite coordinate {value} at position {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation requires dimension at least {min}, found {found}")]
    DimensionTooSmall { min: usize, found: usize },
    #[error("operation requires planar points, found dimension {0}")]
    NotPlanar(usize),
    #[error("angle vertex coincides with an endpoint")]
    DegenerateAngle,
    #[error("line through two coincident points is undefined")]
    UndefinedLine,
    #[error("need at least {min} points, found {found}")]
    TooFewPoints { min: usize, found: usize },
}

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(GeometryError::NonFinite { index, value });
        }
        Ok(Point(coords))
    }

    /// Planar convenience constructor. Panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(vec![x, y]).expect("finite planar coordinates")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        dist2(&self.0, &other.0).sqrt()
    }

    /// Returns a copy with `value` appended as a new last coordinate.
    pub fn extended(&self, value: f64) -> Point {
        let mut c = self.0.clone();
        c.push(value);
        Point(c)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = GeometryError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An undirected vertex angle in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle(f64);

impl Angle {
    /// Clamps into `[0, pi]`.
    pub fn from_radians(radians: f64) -> Self {
        Angle(radians.clamp(0.0, PI))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Area of the triangle `abc`, without dimension checks.
///
/// Evaluates `1/2 * sqrt(|u|^2 |v|^2 - (u.v)^2)` with `u = b - a`,
/// `v = c - a` through the Lagrange identity, as the root of the sum of
/// squared 2x2 minors `u_p v_q - u_q v_p`. Expanding the Gram determinant
/// directly cancels catastrophically on thin triangles.
#[inline]
pub fn gram_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let d = a.len();
    let mut u = [0.0; 8];
    let mut v = [0.0; 8];
    if d > u.len() {
        return gram_area_wide(a, b, c);
    }
    for t in 0..d {
        u[t] = b[t] - a[t];
        v[t] = c[t] - a[t];
    }
    let mut sum = 0.0;
    for p in 0..d {
        for q in p + 1..d {
            let minor = u[p] * v[q] - u[q] * v[p];
            sum += minor * minor;
        }
    }
    0.5 * sum.sqrt()
}

fn gram_area_wide(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    let mut sum = 0.0;
    for p in 0..u.len() {
        for q in p + 1..u.len() {
            let minor = u[p] * v[q] - u[q] * v[p];
            sum += minor * minor;
        }
    }
    0.5 * sum.sqrt()
}

/// Square of the longest side of the triangle `abc`.
#[inline]
pub fn longest_side2(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    dist2(a, b).max(dist2(b, c)).max(dist2(a, c))
}

/// True when `area` is flat relative to the triangle's longest side.
#[inline]
pub fn is_flat(area: f64, longest2: f64) -> bool {
    area < EPS_AREA * longest2 || longest2 == 0.0
}

fn check_same_dim(points: &[&Point]) -> Result<usize, GeometryError> {
    let d = points[0].dim();
    for p in &points[1..] {
        if p.dim() != d {
            return Err(GeometryError::DimensionMismatch { expected: d, found: p.dim() });
        }
    }
    Ok(d)
}

/// Area of the triangle `abc` in any dimension `d >= 2`.
pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> Result<f64, GeometryError> {
    let d = check_same_dim(&[a, b, c])?;
    if d < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: d });
    }
    Ok(gram_area(&a.0, &b.0, &c.0))
}

/// Whether `a, b, c` form a flat triangle under the relative tolerance.
pub fn is_degenerate_triangle(a: &Point, b: &Point, c: &Point) -> Result<bool, GeometryError> {
    let area = triangle_area(a, b, c)?;
    Ok(is_flat(area, longest_side2(&a.0, &b.0, &c.0)))
}

/// Undirected angle at vertex `b` between the rays towards `a` and `c`.
pub fn angle_at_vertex(a: &Point, b: &Point, c: &Point) -> Result<Angle, GeometryError> {
    check_same_dim(&[a, b, c])?;
    let ab2 = dist2(&a.0, &b.0);
    let cb2 = dist2(&c.0, &b.0);
    let scale2 = longest_side2(&a.0, &b.0, &c.0);
    let tol2 = EPS_COINCIDENT * EPS_COINCIDENT * scale2;
    if ab2 <= tol2 || cb2 <= tol2 {
        return Err(GeometryError::DegenerateAngle);
    }
    let ba: Vec<f64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
    let bc: Vec<f64> = c.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
    let cos = (dot(&ba, &bc) / (ab2.sqrt() * cb2.sqrt())).clamp(-1.0, 1.0);
    Ok(Angle::from_radians(cos.acos()))
}

/// Distance from `p` to the infinite line through `a` and `b`.
pub fn point_line_distance(p: &Point, a: &Point, b: &Point) -> Result<f64, GeometryError> {
    let d = check_same_dim(&[p, a, b])?;
    let base = dist2(&a.0, &b.0).sqrt();
    let scale = dist2(&p.0, &a.0).sqrt().max(dist2(&p.0, &b.0).sqrt()).max(base);
    if base == 0.0 || base <= EPS_COINCIDENT * scale {
        return Err(GeometryError::UndefinedLine);
    }
    if d == 1 {
        return Ok(0.0);
    }
    Ok(2.0 * gram_area(&a.0, &b.0, &p.0) / base)
}

/// Signed cross product `(a - o) x (b - o)` of planar coordinates.
#[inline]
pub fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Sign of the turn `o -> a -> b`: `1` left, `-1` right, `0` when flat.
pub fn turn_sign(o: &[f64], a: &[f64], b: &[f64]) -> i8 {
    let cross = cross2(o, a, b);
    if cross.abs() <= EPS_AREA * longest_side2(o, a, b) || cross == 0.0 {
        0
    } else if cross > 0.0 {
        1
    } else {
        -1
    }
}

/// Whether the boundary of the convex hull of `points` is exactly the
/// polygon through them in the given cyclic order.
///
/// Every consecutive turn (wrapping around) must be strict and of one sign,
/// and the polygon must wind exactly once. A collinear vertex is not a hull
/// vertex, so it makes the sequence non-convex.
pub fn is_convex_sequence(points: &[Point]) -> Result<bool, GeometryError> {
    let m = points.len();
    if m < 3 {
        return Err(GeometryError::TooFewPoints { min: 3, found: m });
    }
    for p in points {
        if p.dim() != 2 {
            return Err(GeometryError::NotPlanar(p.dim()));
        }
    }
    let mut orientation = 0i8;
    let mut turning = 0.0;
    for i in 0..m {
        let o = points[i].coords();
        let a = points[(i + 1) % m].coords();
        let b = points[(i + 2) % m].coords();
        let s = turn_sign(o, a, b);
        if s == 0 || (orientation != 0 && s != orientation) {
            return Ok(false);
        }
        orientation = s;
        let e1 = [a[0] - o[0], a[1] - o[1]];
        let e2 = [b[0] - a[0], b[1] - a[1]];
        let cross = e1[0] * e2[1] - e1[1] * e2[0];
        turning += cross.atan2(e1[0] * e2[0] + e1[1] * e2[1]);
    }
    Ok((turning.abs() - 2.0 * PI).abs() < 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(triangle_area(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[0., 1.])).unwrap(), 0.5);
        assert_eq!(triangle_area(&p(&[0., 0., 0.]), &p(&[1., 0., 0.]), &p(&[2., 0., 0.])).unwrap(), 0.0);
        let h = 3f64.sqrt() / 2.0;
        let (a, b, c) = (p(&[0., 0.]), p(&[1., 0.]), p(&[1.5, h]));
        let gram = triangle_area(&a, &b, &c).unwrap();
        let cross = 0.5 * cross2(a.coords(), b.coords(), c.coords()).abs();
        assert!((gram - cross).abs() <= 1e-12 * cross);
        assert!((gram - 3f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn area_errors() {
        assert!(matches!(
            triangle_area(&p(&[0., 0.]), &p(&[1., 0., 0.]), &p(&[0., 1.])),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            triangle_area(&p(&[0.]), &p(&[1.]), &p(&[2.])),
            Err(GeometryError::DimensionTooSmall { .. })
        ));
        assert!(Point::new(vec![f64::NAN, 0.0]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn angle_examples() {
        let a = angle_at_vertex(&p(&[1., 0.]), &p(&[0., 0.]), &p(&[0., 1.])).unwrap();
        assert!((a.radians() - PI / 2.0).abs() < 1e-15);
        let a = angle_at_vertex(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[2., 0.])).unwrap();
        assert_eq!(a.radians(), PI);
        let h = 3f64.sqrt() / 2.0;
        let a = angle_at_vertex(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[1.5, h])).unwrap();
        assert!((a.radians() - 2.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(
            angle_at_vertex(&p(&[1., 1.]), &p(&[1., 1.]), &p(&[0., 1.])),
            Err(GeometryError::DegenerateAngle)
        );
    }

    #[test]
    fn line_distance_examples() {
        let d = point_line_distance(&p(&[0., 1.]), &p(&[0., 0.]), &p(&[1., 0.])).unwrap();
        assert_eq!(d, 1.0);
        let d = point_line_distance(&p(&[5., 0.]), &p(&[0., 0.]), &p(&[1., 0.])).unwrap();
        assert_eq!(d, 0.0);
        let d = point_line_distance(&p(&[1., 1., 1.]), &p(&[0., 0., 0.]), &p(&[1., 0., 0.])).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            point_line_distance(&p(&[0., 1.]), &p(&[2., 2.]), &p(&[2., 2.])),
            Err(GeometryError::UndefinedLine)
        );
    }

    #[test]
    fn convex_examples() {
        let sq = [p(&[0., 0.]), p(&[1., 0.]), p(&[1., 1.]), p(&[0., 1.])];
        assert!(is_convex_sequence(&sq).unwrap());
        let crossed = [p(&[0., 0.]), p(&[1., 1.]), p(&[1., 0.]), p(&[0., 1.])];
        assert!(!is_convex_sequence(&crossed).unwrap());
        let flat = [p(&[0., 0.]), p(&[1., 0.]), p(&[2., 0.]), p(&[1., 1.])];
        assert!(!is_convex_sequence(&flat).unwrap());
        // same sign everywhere but winding twice
        let star: Vec<Point> = (0..5)
            .map(|i| {
                let t = 4.0 * PI * i as f64 / 5.0;
                p(&[t.cos(), t.sin()])
            })
            .collect();
        assert!(!is_convex_sequence(&star).unwrap());
        assert!(matches!(is_convex_sequence(&sq[..2]), Err(GeometryError::TooFewPoints { .. })));
        let spatial = [p(&[0., 0., 0.]), p(&[1., 0., 0.]), p(&[1., 1., 0.])];
        assert_eq!(is_convex_sequence(&spatial), Err(GeometryError::NotPlanar(3)));
    }

    #[test]
    fn clockwise_order_is_convex_too() {
        let sq = [p(&[0., 0.]), p(&[0., 1.]), p(&[1., 1.]), p(&[1., 0.])];
        assert!(is_convex_sequence(&sq).unwrap());
    }
}
