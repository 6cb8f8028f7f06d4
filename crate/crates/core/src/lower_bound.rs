//! Lower-bound certificates for planar tame sequences.
//!
//! If `delta >= Delta_3` is an integer, the subsequence `M_0, M_delta,
//! M_2delta, ...` of a planar tame sequence is convex, and a convex polygon
//! with `m` vertices has a vertex angle of at least `(m - 2) pi / m`. The flat
//! triangle at that vertex forces `Delta_3 >= m / (2 pi)`, which together with
//! `m ~ n / delta` gives `Delta_3 = Omega(sqrt n)`. Everything here re-checks
//! those steps numerically on concrete sequences.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::distortion::{self, delta3, DistortionError, Extended, TameSequence};
use crate::geometry::{self, Angle, GeometryError, Point};

/// Absolute slack on the angle and distance checks.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LowerBoundError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error("certificates need planar points, found dimension {0}")]
    NotPlanar(usize),
    #[error("subsampling step must be at least 1")]
    BadDelta,
    #[error("point sequence is not convex")]
    NotConvex,
    #[error("3-distortion is infinite; no finite step exists")]
    InfiniteDistortion,
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
}

/// Indices `0, delta, 2 delta, ..., floor(n / delta) delta`.
pub fn subsample(seq: &TameSequence, delta: usize) -> Result<Vec<usize>, LowerBoundError> {
    if delta < 1 {
        return Err(LowerBoundError::BadDelta);
    }
    Ok((0..=seq.n() / delta).map(|q| q * delta).collect())
}

/// The step `ceil(Delta_3 + 1e-9)`, always at least `Delta_3`.
pub fn step_for(delta3: f64) -> usize {
    (delta3 + 1e-9).ceil().max(1.0) as usize
}

/// Largest cyclic vertex angle of a convex polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleWitness {
    /// Vertex triple `(i, i + 1, i + 2)` taken modulo `m`; the angle sits at the middle one.
    pub positions: [usize; 3],
    pub angle: Angle,
    /// `(m - 2) pi / m`.
    pub angle_floor: f64,
    /// `m / (2 pi)`.
    pub bound: f64,
}

/// Cyclic vertex angles `P_i P_(i+1) P_(i+2)`, indexed by `i`.
pub fn cyclic_angles(points: &[Point]) -> Result<Vec<Angle>, GeometryError> {
    let m = points.len();
    (0..m)
        .map(|i| geometry::angle_at_vertex(&points[i], &points[(i + 1) % m], &points[(i + 2) % m]))
        .collect()
}

/// Finds the vertex with the largest angle in a convex polygon.
pub fn angle_witness(points: &[Point]) -> Result<AngleWitness, LowerBoundError> {
    let m = points.len();
    if !geometry::is_convex_sequence(points)? {
        return Err(LowerBoundError::NotConvex);
    }
    let angles = cyclic_angles(points)?;
    let (i, angle) =
        angles
            .iter()
            .copied()
            .enumerate()
            .fold((0, angles[0]), |best, (i, a)| if a > best.1 { (i, a) } else { best });
    let angle_floor = (m as f64 - 2.0) * PI / m as f64;
    if angle.radians() < angle_floor - CHECK_TOL {
        return Err(LowerBoundError::LemmaViolation(format!(
            "largest angle {} of a convex {m}-gon is below {angle_floor}",
            angle.radians()
        )));
    }
    Ok(AngleWitness {
        positions: [i, (i + 1) % m, (i + 2) % m],
        angle,
        angle_floor,
        bound: m as f64 / (2.0 * PI),
    })
}

/// Angle witness mapped back to the original sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceWitness {
    #[serde(flatten)]
    pub angle: AngleWitness,
    /// Original indices of the witness vertices, in polygon order.
    pub indices: [usize; 3],
    /// Whether the witness wraps past the end of the subsample.
    pub wraps: bool,
    /// Actual 3-distortion of the witness triangle (indices sorted).
    pub triple_distortion: Extended,
    /// What the vertex angle alone guarantees for that triangle: `1 / sin`
    /// for consecutive vertices, scaled by `(m - 2) / (m - 1)` when wrapping.
    pub angle_guarantee: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub delta: usize,
    pub subsample_indices: Vec<usize>,
    pub convex: bool,
    pub witness: Option<SequenceWitness>,
    /// `m / (2 pi)` for a convex subsample of `m >= 3` points, else 0.
    pub implied_lower_bound: f64,
    pub delta3: Extended,
    /// Whether `delta >= Delta_3`, the hypothesis under which convexity is guaranteed.
    pub hypothesis_met: bool,
}

fn require_planar(seq: &TameSequence) -> Result<(), LowerBoundError> {
    if seq.dim() != 2 {
        return Err(LowerBoundError::NotPlanar(seq.dim()));
    }
    Ok(())
}

fn certificate_with(seq: &TameSequence, delta: usize, d3: Extended) -> Result<Certificate, LowerBoundError> {
    require_planar(seq)?;
    let subsample_indices = subsample(seq, delta)?;
    let pts: Vec<Point> = subsample_indices.iter().map(|&i| seq.point(i).clone()).collect();
    let m = pts.len();
    // One or two distinct points bound their own hull.
    let convex = match m {
        1 => true,
        2 => pts[0].distance(&pts[1]) > 0.0,
        _ => geometry::is_convex_sequence(&pts)?,
    };
    let mut witness = None;
    let mut implied_lower_bound = 0.0;
    if convex && m >= 3 {
        let w = angle_witness(&pts)?;
        let indices = w.positions.map(|p| subsample_indices[p]);
        let wraps = w.positions[0] + 2 != w.positions[2];
        let mut sorted = indices;
        sorted.sort_unstable();
        let t = distortion::triple_distortion(seq, sorted[0], sorted[1], sorted[2])?;
        let sin = w.angle.radians().sin();
        let factor = if wraps { (m as f64 - 2.0) / (m as f64 - 1.0) } else { 1.0 };
        witness = Some(SequenceWitness {
            angle: w,
            indices,
            wraps,
            triple_distortion: t.value,
            angle_guarantee: factor / sin,
        });
        implied_lower_bound = w.bound;
    }
    Ok(Certificate {
        delta,
        subsample_indices,
        convex,
        witness,
        implied_lower_bound,
        delta3: d3,
        hypothesis_met: d3.finite().is_some_and(|v| delta as f64 >= v),
    })
}

/// Subsamples with step `delta` and certifies convexity.
///
/// Non-convex subsamples are reported, not rejected; they show up when
/// `delta` is below the 3-distortion.
pub fn convexity_certificate(seq: &TameSequence, delta: usize) -> Result<Certificate, LowerBoundError> {
    require_planar(seq)?;
    if delta < 1 {
        return Err(LowerBoundError::BadDelta);
    }
    let d3 = delta3(seq)?.delta3;
    certificate_with(seq, delta, d3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `floor(n / delta) < 2`, so `delta >= n / 2` directly.
    ShortSubsample,
    /// The subsample is convex and its angle witness bounds `delta`.
    ConvexSubsample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop1Report {
    pub n: usize,
    pub delta3: f64,
    pub delta: usize,
    pub branch: Branch,
    pub certificate: Option<Certificate>,
    /// The lower bound on `delta` the argument produced.
    pub implied_bound: f64,
    /// `sqrt(n / (2 pi))`, the order of the resulting bound.
    pub sqrt_reference: f64,
}

fn violation(msg: String) -> LowerBoundError {
    LowerBoundError::LemmaViolation(msg)
}

/// Runs the full `Omega(sqrt n)` argument on one planar sequence and checks
/// every inequality it relies on.
pub fn prop1_verify(seq: &TameSequence) -> Result<Prop1Report, LowerBoundError> {
    require_planar(seq)?;
    let report = delta3(seq)?;
    let d3 = report.delta3.finite().ok_or(LowerBoundError::InfiniteDistortion)?;
    let n = seq.n();
    let delta = step_for(d3);
    let quotient = n / delta;
    let sqrt_reference = (n as f64 / (2.0 * PI)).sqrt();
    if quotient < 2 {
        let half = n as f64 / 2.0;
        if (delta as f64) < half {
            return Err(violation(format!("floor(n/delta) < 2 but delta={delta} < n/2={half}")));
        }
        return Ok(Prop1Report {
            n,
            delta3: d3,
            delta,
            branch: Branch::ShortSubsample,
            certificate: None,
            implied_bound: half,
            sqrt_reference,
        });
    }
    let cert = certificate_with(seq, delta, report.delta3)?;
    if !cert.convex {
        return Err(violation(format!("subsample with step {delta} >= Delta_3={d3} is not convex")));
    }
    let bound = quotient as f64 / (2.0 * PI);
    if bound > delta as f64 {
        return Err(violation(format!("floor(n/delta)/(2 pi) = {bound} exceeds delta={delta}")));
    }
    if let Some(w) = &cert.witness {
        let actual = w.triple_distortion.to_f64();
        if actual < w.angle_guarantee * (1.0 - CHECK_TOL) {
            return Err(violation(format!(
                "witness triangle distortion {actual} below its angle guarantee {}",
                w.angle_guarantee
            )));
        }
        if actual > d3 * (1.0 + CHECK_TOL) {
            return Err(violation(format!("witness triangle distortion {actual} above Delta_3={d3}")));
        }
    }
    Ok(Prop1Report {
        n,
        delta3: d3,
        delta,
        branch: Branch::ConvexSubsample,
        certificate: Some(cert),
        implied_bound: bound,
        sqrt_reference,
    })
}

/// Checks `dist(M_k, line(M_i M_j)) >= (k - j) / delta` for all `i < j < k`.
pub fn line_distance_bound_check(seq: &TameSequence, delta: usize) -> bool {
    if delta < 1 {
        return false;
    }
    let n = seq.n();
    let pts = seq.points();
    (0..n.saturating_sub(1)).into_par_iter().all(|i| {
        (i + 1..n).all(|j| {
            (j + 1..=n).all(|k| match geometry::point_line_distance(&pts[k], &pts[i], &pts[j]) {
                Ok(dist) => dist >= (k - j) as f64 / delta as f64 - CHECK_TOL,
                Err(_) => false,
            })
        })
    })
}

/// Checks that for `k >= j + delta` the points `M_k` and `M_(k+1)` lie
/// strictly on one side of the line `M_i M_j`, for all `i < j`.
pub fn same_side_check(seq: &TameSequence, delta: usize) -> Result<bool, LowerBoundError> {
    require_planar(seq)?;
    if delta < 1 {
        return Err(LowerBoundError::BadDelta);
    }
    let n = seq.n();
    let c = |x: usize| seq.point(x).coords();
    Ok((0..n).into_par_iter().all(|i| {
        (i + 1..n).all(|j| {
            (j + delta..n).all(|k| {
                let a = geometry::turn_sign(c(i), c(j), c(k));
                a != 0 && a == geometry::turn_sign(c(i), c(j), c(k + 1))
            })
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::check_tame;

    fn seq(pts: &[[f64; 2]]) -> TameSequence {
        check_tame(pts.iter().map(|p| Point::xy(p[0], p[1])).collect()).unwrap()
    }

    fn line(n: usize) -> TameSequence {
        seq(&(0..=n).map(|i| [i as f64, 0.0]).collect::<Vec<_>>())
    }

    fn u_shape() -> TameSequence {
        let h = 3f64.sqrt() / 2.0;
        seq(&[[0., 0.], [1., 0.], [1.5, h], [1., 2.0 * h]])
    }

    fn regular(m: usize) -> Vec<Point> {
        let r = 0.5 / (PI / m as f64).sin();
        (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                Point::xy(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    #[test]
    fn subsample_examples() {
        let s = line(10);
        assert_eq!(subsample(&s, 3).unwrap(), vec![0, 3, 6, 9]);
        assert_eq!(subsample(&s, 1).unwrap(), (0..=10).collect::<Vec<_>>());
        assert_eq!(subsample(&line(5), 7).unwrap(), vec![0]);
        assert_eq!(subsample(&s, 0), Err(LowerBoundError::BadDelta));
    }

    #[test]
    fn witness_on_regular_polygons() {
        let w = angle_witness(&regular(6)).unwrap();
        assert!((w.angle.radians() - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((w.bound - 6.0 / (2.0 * PI)).abs() < 1e-15);
        let tri = 1.0 / w.angle.radians().sin();
        assert!((tri - 2.0 / 3f64.sqrt()).abs() < 1e-12 && tri >= w.bound);

        let w = angle_witness(&regular(3)).unwrap();
        assert!((w.angle.radians() - PI / 3.0).abs() < 1e-12);
        assert!((w.bound - 3.0 / (2.0 * PI)).abs() < 1e-15);

        let w = angle_witness(&regular(4)).unwrap();
        assert!((w.angle.radians() - PI / 2.0).abs() < 1e-12);
        assert!((w.bound - 4.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn witness_rejects_non_convex() {
        let crossed = [Point::xy(0., 0.), Point::xy(1., 1.), Point::xy(1., 0.), Point::xy(0., 1.)];
        assert_eq!(angle_witness(&crossed), Err(LowerBoundError::NotConvex));
        assert!(angle_witness(&regular(3)[..2]).is_err());
    }

    #[test]
    fn collinear_subsample_is_not_convex() {
        let s = line(10);
        for delta in 1..=3 {
            let c = convexity_certificate(&s, delta).unwrap();
            assert!(!c.convex);
            assert!(c.witness.is_none());
            assert_eq!(c.delta3, Extended::Infinity);
            assert!(!c.hypothesis_met);
        }
    }

    #[test]
    fn circle_subsample_is_convex() {
        // circumference n, unit arc spacing; M_n coincides with M_0
        let n = 60;
        let r = n as f64 / (2.0 * PI);
        let pts: Vec<[f64; 2]> = (0..=n)
            .map(|i| {
                let t = i as f64 / r;
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let s = seq(&pts);
        let c = convexity_certificate(&s, 7).unwrap();
        assert!(c.convex);
        let w = c.witness.unwrap();
        assert!(w.angle.angle.radians() >= w.angle.angle_floor - 1e-9);
        assert_eq!(c.implied_lower_bound, c.subsample_indices.len() as f64 / (2.0 * PI));
    }

    #[test]
    fn certificate_requires_plane() {
        let s = check_tame(vec![
            Point::new(vec![0., 0., 0.]).unwrap(),
            Point::new(vec![1., 0., 0.]).unwrap(),
            Point::new(vec![1., 1., 0.]).unwrap(),
        ])
        .unwrap();
        assert_eq!(convexity_certificate(&s, 1), Err(LowerBoundError::NotPlanar(3)));
        assert_eq!(prop1_verify(&s).unwrap_err(), LowerBoundError::NotPlanar(3));
    }

    #[test]
    fn prop1_on_u_shape() {
        let r = prop1_verify(&u_shape()).unwrap();
        assert_eq!(r.delta, 2);
        assert_eq!(r.branch, Branch::ShortSubsample);
        assert!(r.delta as f64 >= 1.5);
        assert_eq!(r.implied_bound, 1.5);
    }

    #[test]
    fn prop1_refuses_infinite() {
        assert_eq!(prop1_verify(&line(4)).unwrap_err(), LowerBoundError::InfiniteDistortion);
    }

    #[test]
    fn line_distance_examples() {
        let right = seq(&[[0., 0.], [1., 0.], [1., 1.]]);
        assert!(line_distance_bound_check(&right, 1));
        assert!(line_distance_bound_check(&u_shape(), 2));
        assert!(!line_distance_bound_check(&line(3), 5));
    }

    #[test]
    fn step_is_never_below_distortion() {
        assert_eq!(step_for(2.0 / 3f64.sqrt()), 2);
        assert_eq!(step_for(1.0), 2);
        assert_eq!(step_for(3.5), 4);
    }
}
