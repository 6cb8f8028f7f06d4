//! Recursive arc curves with arclength-indexed marked points.
//!
//! The planar curve starts from a sixth of a circle of radius `r` carrying
//! `m + 1` points at angular spacing `pi / (3m)`. Each arc between consecutive
//! points is replaced by a flatter arc of radius `2r` through the same two
//! points, and the figure is rescaled so every replacement arc has length 1.
//!
//! A curve in `R^d` is obtained from one in `R^(d-1)` by drawing, over each
//! unit piece of the base, a copy of the planar curve in the cylinder
//! `base x [0, inf)`. In the chart `(s, h)` (arclength along the base, height)
//! the copy runs from `(i, 0)` to `(i + 1, 0)`. Since the base is parametrized
//! by arclength the chart is an isometric unrolling, so the copy keeps its
//! planar arclength and a single global rescale puts every mark on an integer.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::distortion::{check_tame, DistortionError, TameSequence};
use crate::geometry::{self, Point};

/// Largest number of marked segments a construction may produce.
pub const MAX_MARKS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("m must be at least 2, got {0}")]
    MTooSmall(usize),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("base radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("construction would mark more than {MAX_MARKS} segments (m={m}, d={d})")]
    TooLarge { m: usize, d: usize },
    #[error("base mark {index} sits at arclength {position}, expected an integer")]
    NonIntegerMarks { index: usize, position: f64 },
    #[error("chart height {0} is negative")]
    NegativeHeight(f64),
    #[error("sampling density must be at least {min}, got {found}")]
    BadDensity { min: usize, found: usize },
    #[error(transparent)]
    Distortion(#[from] DistortionError),
}

/// Parameters of the recursive construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionParams {
    pub m: usize,
    pub d: usize,
    pub r: f64,
}

impl ConstructionParams {
    pub fn new(m: usize, d: usize) -> Result<Self, CurveError> {
        Self::with_radius(m, d, 1.0)
    }

    /// The radius does not change the result after rescaling.
    pub fn with_radius(m: usize, d: usize, r: f64) -> Result<Self, CurveError> {
        if m < 2 {
            return Err(CurveError::MTooSmall(m));
        }
        if d < 2 {
            return Err(CurveError::DimensionTooSmall(d));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(CurveError::BadRadius(r));
        }
        if segment_count(m, d).is_none_or(|n| n > MAX_MARKS) {
            return Err(CurveError::TooLarge { m, d });
        }
        Ok(ConstructionParams { m, d, r })
    }

    /// `n = m^(d-1)`, the index of the last marked point.
    pub fn n(&self) -> usize {
        segment_count(self.m, self.d).expect("checked at construction")
    }
}

fn segment_count(m: usize, d: usize) -> Option<usize> {
    let exp = u32::try_from(d.checked_sub(1)?).ok()?;
    m.checked_pow(exp)
}

/// Nominal triangle-distortion constant `(2/sqrt 3)^(2-d) * 6/pi` attached to
/// the dimension-`d` construction. Informational only: the sign of the
/// exponent makes it shrink with `d`, which no measurement supports.
pub fn nominal_distortion_constant(d: usize) -> f64 {
    (2.0 / 3f64.sqrt()).powi(2 - d as i32) * 6.0 / PI
}

/// Closed-form quantities of one replacement arc of the planar curve, in
/// units of the base radius `r` (before rescaling).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGeometry {
    /// Half the angular spacing of the original points, `pi / (6m)`.
    pub beta: f64,
    /// Half-angle of the radius-`2r` replacement arc: `sin alpha = sin(beta) / 2`.
    pub alpha: f64,
    pub sixth_radius: f64,
    pub arc_radius: f64,
    pub half_chord: f64,
    /// Sagitta of the original arc of the sixth circle.
    pub outer_sagitta: f64,
    /// Sagitta of the replacement arc.
    pub inner_sagitta: f64,
    /// Length of one replacement arc, `4 r alpha`.
    pub arc_length: f64,
}

impl ArcGeometry {
    pub fn new(m: usize, r: f64) -> Self {
        let beta = PI / (6.0 * m as f64);
        let alpha = (beta.sin() / 2.0).asin();
        let arc_radius = 2.0 * r;
        ArcGeometry {
            beta,
            alpha,
            sixth_radius: r,
            arc_radius,
            half_chord: r * beta.sin(),
            outer_sagitta: r * (1.0 - beta.cos()),
            inner_sagitta: arc_radius * (1.0 - alpha.cos()),
            arc_length: 2.0 * arc_radius * alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ArcSeg {
    start_s: f64,
    length: f64,
    center: [f64; 2],
    radius: f64,
    start_angle: f64,
    /// Signed angle swept over the segment.
    sweep: f64,
}

impl ArcSeg {
    fn at(&self, t: f64) -> [f64; 2] {
        let a = self.start_angle + self.sweep * t;
        [self.center[0] + self.radius * a.cos(), self.center[1] + self.radius * a.sin()]
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Straight { dim: usize },
    Arcs(Vec<ArcSeg>),
    Lifted { base: Arc<MarkedCurve>, profile: Arc<MarkedCurve>, m: usize, chord: f64 },
}

/// A continuous arclength-parametrized curve with marked arclength positions.
#[derive(Debug, Clone)]
pub struct MarkedCurve {
    dim: usize,
    total_length: f64,
    marks: Vec<f64>,
    shape: Shape,
}

impl MarkedCurve {
    /// A straight segment along the first axis, marked at integer arclengths.
    pub fn straight(dim: usize, length: f64) -> MarkedCurve {
        assert!(dim >= 1 && length > 0.0);
        let marks = (0..=length.floor() as usize).map(|i| i as f64).collect();
        MarkedCurve { dim, total_length: length, marks, shape: Shape::Straight { dim } }
    }

    /// A planar circular arc of the given opening angle and length, marked at
    /// integer arclengths. Its shape is fixed; only the scale follows `length`.
    pub fn circular_arc(opening: f64, length: f64) -> MarkedCurve {
        assert!(opening > 0.0 && opening < 2.0 * PI && length > 0.0);
        let radius = length / opening;
        let seg = ArcSeg {
            start_s: 0.0,
            length,
            center: [0.0, 0.0],
            radius,
            start_angle: -opening / 2.0,
            sweep: opening,
        };
        let marks = (0..=length.floor() as usize).map(|i| i as f64).collect();
        MarkedCurve { dim: 2, total_length: length, marks, shape: Shape::Arcs(vec![seg]) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn marks(&self) -> &[f64] {
        &self.marks
    }

    fn sample_coords(&self, s: f64, out: &mut Vec<f64>) {
        let s = s.clamp(0.0, self.total_length);
        match &self.shape {
            Shape::Straight { dim } => {
                out.push(s);
                out.extend(std::iter::repeat_n(0.0, dim - 1));
            }
            Shape::Arcs(segs) => {
                let idx = segs.partition_point(|a| a.start_s <= s).saturating_sub(1);
                let a = &segs[idx];
                let p = a.at((s - a.start_s) / a.length);
                out.extend_from_slice(&p);
            }
            Shape::Lifted { base, profile, m, chord } => {
                let pieces = base.total_length as usize;
                let piece = ((s / *m as f64).floor() as usize).min(pieces - 1);
                let local = s - (piece * m) as f64;
                let mut uv = Vec::with_capacity(2);
                profile.sample_coords(local, &mut uv);
                // Copy endpoints sit on the base exactly.
                if local <= 0.0 {
                    uv = vec![0.0, 0.0];
                } else if local >= *m as f64 {
                    uv = vec![*chord, 0.0];
                }
                let start = out.len();
                base.sample_coords(piece as f64 + uv[0] / chord, out);
                for c in &mut out[start..] {
                    *c *= chord;
                }
                out.push(uv[1]);
            }
        }
    }

    /// The point at arclength `s`, clamped to `[0, total_length]`.
    pub fn sample(&self, s: f64) -> Point {
        let mut c = Vec::with_capacity(self.dim);
        self.sample_coords(s, &mut c);
        Point::new(c).expect("finite curve coordinates")
    }

    pub fn marked_points(&self) -> Vec<Point> {
        self.marks.iter().map(|&s| self.sample(s)).collect()
    }

    pub fn to_tame_sequence(&self) -> Result<TameSequence, CurveError> {
        Ok(check_tame(self.marked_points())?)
    }
}

/// The planar curve for `params.m`, marked at `0, 1, ..., m`.
///
/// It is laid out in its chord frame: the first mark at the origin, the last
/// on the positive first axis, and the curve in the upper half plane.
pub fn build_gamma2(params: &ConstructionParams) -> Result<MarkedCurve, CurveError> {
    let m = params.m;
    if m < 2 {
        return Err(CurveError::MTooSmall(m));
    }
    let g = ArcGeometry::new(m, params.r);
    let scale = 1.0 / g.arc_length;
    let r = g.sixth_radius;
    // Circle center such that the 60 degree arc from angle 2pi/3 down to pi/3
    // starts at the origin.
    let center = [r / 2.0, -r * (PI / 6.0).cos()];
    let step = 2.0 * g.beta;
    let segs = (0..m)
        .map(|i| {
            let mid_dir = 2.0 * PI / 3.0 - step * i as f64 - g.beta;
            // Center of the flatter arc: on the ray from the circle center
            // through the chord midpoint, at signed distance r cos(beta) - 2r cos(alpha).
            let offset = r * g.beta.cos() - g.arc_radius * g.alpha.cos();
            let c = [center[0] + offset * mid_dir.cos(), center[1] + offset * mid_dir.sin()];
            ArcSeg {
                start_s: i as f64,
                length: 1.0,
                center: [c[0] * scale, c[1] * scale],
                radius: g.arc_radius * scale,
                start_angle: mid_dir + g.alpha,
                sweep: -2.0 * g.alpha,
            }
        })
        .collect();
    Ok(MarkedCurve {
        dim: 2,
        total_length: m as f64,
        marks: (0..=m).map(|i| i as f64).collect(),
        shape: Shape::Arcs(segs),
    })
}

/// Raises `base` by one dimension, inserting a copy of the planar curve over
/// every unit piece of it.
///
/// Neighbouring copies meet the base in a V, so the lifted curve is not convex
/// in the chart: a line through two marks on one flank of a valley can pass
/// close to a mark on the other flank. Only the slight bend of the base keeps
/// such triples from being flat, and they dominate the 3-distortion of the
/// lifted curves, which grows faster than `m`.
pub fn lift_curve(base: &MarkedCurve, m: usize) -> Result<MarkedCurve, CurveError> {
    let params = ConstructionParams::new(m, 2)?;
    for (index, &position) in base.marks.iter().enumerate() {
        if position != index as f64 {
            return Err(CurveError::NonIntegerMarks { index, position });
        }
    }
    if base.total_length != (base.marks.len() - 1) as f64 || base.marks.len() < 2 {
        return Err(CurveError::NonIntegerMarks { index: base.marks.len() - 1, position: base.total_length });
    }
    let profile = build_gamma2(&params)?;
    let end = profile.sample(m as f64);
    let chord = end.coords()[0];
    let lowest = sample_polyline(&profile, 8)?.iter().map(|p| p.coords()[1]).fold(f64::INFINITY, f64::min);
    if lowest < -1e-9 {
        return Err(CurveError::NegativeHeight(lowest));
    }
    let pieces = base.marks.len() - 1;
    let total = pieces * m;
    if total > MAX_MARKS {
        return Err(CurveError::TooLarge { m, d: base.dim + 1 });
    }
    Ok(MarkedCurve {
        dim: base.dim + 1,
        total_length: total as f64,
        marks: (0..=total).map(|i| i as f64).collect(),
        shape: Shape::Lifted { base: Arc::new(base.clone()), profile: Arc::new(profile), m, chord },
    })
}

/// The curve in `R^d` for `params`.
pub fn build_curve(params: &ConstructionParams) -> Result<MarkedCurve, CurveError> {
    let mut curve = build_gamma2(params)?;
    for _ in 2..params.d {
        curve = lift_curve(&curve, params.m)?;
    }
    Ok(curve)
}

/// The `m^(d-1) + 1` marked points of the construction as a tame sequence.
pub fn build_gamma(params: &ConstructionParams) -> Result<TameSequence, CurveError> {
    build_curve(params)?.to_tame_sequence()
}

fn sample_positions(curve: &MarkedCurve, per_unit: usize) -> Vec<f64> {
    let steps = (curve.total_length * per_unit as f64 - 1e-9).ceil().max(1.0) as usize;
    (0..=steps).map(|k| if k == steps { curve.total_length } else { k as f64 / per_unit as f64 }).collect()
}

/// Points at arclength steps `1 / per_unit`, both endpoints included.
pub fn sample_polyline(curve: &MarkedCurve, per_unit: usize) -> Result<Vec<Point>, CurveError> {
    if per_unit < 1 {
        return Err(CurveError::BadDensity { min: 1, found: per_unit });
    }
    Ok(sample_positions(curve, per_unit).into_iter().map(|s| curve.sample(s)).collect())
}

/// Smallest ratio of Euclidean to arclength distance over all pairs of
/// sample points at density `per_unit`.
pub fn metric_contraction_ratio(curve: &MarkedCurve, per_unit: usize) -> Result<f64, CurveError> {
    if per_unit < 2 {
        return Err(CurveError::BadDensity { min: 2, found: per_unit });
    }
    let s = sample_positions(curve, per_unit);
    let pts: Vec<Point> = s.iter().map(|&x| curve.sample(x)).collect();
    let ratio = (0..pts.len())
        .into_par_iter()
        .map(|a| {
            (a + 1..pts.len()).map(|b| pts[a].distance(&pts[b]) / (s[b] - s[a])).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(ratio)
}

/// Largest vertex angle `ABC` over sample triples `A < B < C` (in arclength
/// order) that do not all lie within one unit piece between consecutive marks.
pub fn max_spanning_angle(curve: &MarkedCurve, per_unit: usize) -> Result<f64, CurveError> {
    if per_unit < 1 {
        return Err(CurveError::BadDensity { min: 1, found: per_unit });
    }
    let s = sample_positions(curve, per_unit);
    let pts: Vec<Point> = s.iter().map(|&x| curve.sample(x)).collect();
    let same_piece = |a: f64, c: f64| {
        let piece = a.floor();
        c <= piece + 1.0 + 1e-12
    };
    let best = (0..pts.len())
        .into_par_iter()
        .map(|a| {
            let mut best: f64 = 0.0;
            for b in a + 1..pts.len() {
                for c in b + 1..pts.len() {
                    if same_piece(s[a], s[c]) {
                        continue;
                    }
                    if let Ok(angle) = geometry::angle_at_vertex(&pts[a], &pts[b], &pts[c]) {
                        best = best.max(angle.radians());
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}
