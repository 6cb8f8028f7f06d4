//! Tame sequences and their 3-distortion.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{self, GeometryError, Point};

/// Slack allowed on consecutive distances to absorb rescaling roundoff.
pub const EPS_TAME: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistortionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("not tame: distance {gap} between points {index} and {} exceeds 1", index + 1)]
    NotTame { index: usize, gap: f64 },
    #[error("need at least {min} points, found {found}")]
    TooFewPoints { min: usize, found: usize },
    #[error("indices must satisfy i < j < k, got ({i}, {j}, {k})")]
    IndexOrder { i: usize, j: usize, k: usize },
}

/// A non-negative real or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Extended {
    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// The value as an `f64`, with `+inf` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(v) => v,
            Extended::Infinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Infinity, Extended::Infinity) => Some(Ordering::Equal),
            (Extended::Infinity, _) => Some(Ordering::Greater),
            (_, Extended::Infinity) => Some(Ordering::Less),
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Points `M_0, ..., M_n` of one dimension `d >= 2` with consecutive
/// distances at most `1 + EPS_TAME`.
#[derive(Debug, Clone, PartialEq)]
pub struct TameSequence {
    dim: usize,
    points: Vec<Point>,
    max_gap: f64,
}

/// Validates `points` as a tame sequence.
pub fn check_tame(points: Vec<Point>) -> Result<TameSequence, DistortionError> {
    if points.len() < 2 {
        return Err(DistortionError::TooFewPoints { min: 2, found: points.len() });
    }
    let dim = points[0].dim();
    if dim < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: dim }.into());
    }
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch { expected: dim, found: p.dim() }.into());
    }
    let mut max_gap: f64 = 0.0;
    for (index, w) in points.windows(2).enumerate() {
        let gap = w[0].distance(&w[1]);
        if gap > 1.0 + EPS_TAME {
            return Err(DistortionError::NotTame { index, gap });
        }
        max_gap = max_gap.max(gap);
    }
    Ok(TameSequence { dim, points, max_gap })
}

impl TameSequence {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The index of the last point; the sequence has `n + 1` points.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Largest consecutive distance.
    pub fn max_gap(&self) -> f64 {
        self.max_gap
    }

    /// The contiguous run `M_a, ..., M_b`, re-indexed from zero.
    pub fn window(&self, range: RangeInclusive<usize>) -> Result<TameSequence, DistortionError> {
        let pts = self.points.get(range).map(<[Point]>::to_vec).unwrap_or_default();
        check_tame(pts)
    }
}

/// Ideal triangle area `(j - i)(k - j) / 2` of the path for `i < j < k`.
pub fn rho3(i: usize, j: usize, k: usize) -> Result<f64, DistortionError> {
    if !(i < j && j < k) {
        return Err(DistortionError::IndexOrder { i, j, k });
    }
    Ok(((j - i) * (k - j)) as f64 / 2.0)
}

/// One term of the supremum defining the 3-distortion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleDistortion {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub rho3: f64,
    pub area: f64,
    pub value: Extended,
}

impl TripleDistortion {
    pub fn indices(&self) -> (usize, usize, usize) {
        (self.i, self.j, self.k)
    }

    /// Larger value first; among equal values the lexicographically smaller triple.
    fn beats(&self, other: &TripleDistortion) -> bool {
        match self.value.partial_cmp(&other.value) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => self.indices() < other.indices(),
            _ => false,
        }
    }
}

#[inline]
fn evaluate(i: usize, j: usize, k: usize, a: &[f64], b: &[f64], c: &[f64]) -> TripleDistortion {
    let rho3 = ((j - i) * (k - j)) as f64 / 2.0;
    let area = geometry::gram_area(a, b, c);
    let value = if geometry::is_flat(area, geometry::longest_side2(a, b, c)) {
        Extended::Infinity
    } else {
        Extended::Finite(rho3 / area)
    };
    TripleDistortion { i, j, k, rho3, area, value }
}

/// Distortion of the single triple `i < j < k`.
pub fn triple_distortion(
    seq: &TameSequence,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TripleDistortion, DistortionError> {
    rho3(i, j, k)?;
    if k > seq.n() {
        return Err(DistortionError::TooFewPoints { min: k + 1, found: seq.len() });
    }
    let p = |x: usize| seq.points[x].coords();
    Ok(evaluate(i, j, k, p(i), p(j), p(k)))
}

/// The 3-distortion of a tame sequence and the triple attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionReport {
    pub delta3: Extended,
    pub worst: TripleDistortion,
    pub triples_evaluated: u64,
}

fn worst_with_first(flat: &[f64], dim: usize, n: usize, i: usize) -> Option<TripleDistortion> {
    let p = |x: usize| &flat[x * dim..(x + 1) * dim];
    let mut best: Option<TripleDistortion> = None;
    for j in i + 1..n {
        for k in j + 1..=n {
            let t = evaluate(i, j, k, p(i), p(j), p(k));
            if best.as_ref().is_none_or(|b| t.beats(b)) {
                best = Some(t);
            }
        }
    }
    best
}

/// Exhaustive maximum over all `C(n + 1, 3)` triples.
///
/// The triples are split by their first index across the rayon pool. The
/// reduction keeps the larger value and breaks ties by the lexicographically
/// smallest triple, so the report does not depend on the thread count.
pub fn delta3(seq: &TameSequence) -> Result<DistortionReport, DistortionError> {
    let len = seq.len();
    if len < 3 {
        return Err(DistortionError::TooFewPoints { min: 3, found: len });
    }
    let n = seq.n();
    let dim = seq.dim;
    let flat: Vec<f64> = seq.points.iter().flat_map(|p| p.coords().iter().copied()).collect();
    let worst = (0..n - 1)
        .into_par_iter()
        .with_max_len(1)
        .filter_map(|i| worst_with_first(&flat, dim, n, i))
        .reduce_with(|a, b| if b.beats(&a) { b } else { a })
        .expect("at least one triple");
    let l = len as u64;
    Ok(DistortionReport { delta3: worst.value, worst, triples_evaluated: l * (l - 1) * (l - 2) / 6 })
}
