//! 3-distortion of paths embedded in Euclidean space.
//!
//! A tame sequence `M_0, ..., M_n` (consecutive points at distance at most 1)
//! is a non-expanding image of the path `{0, ..., n}`. Its 3-distortion is the
//! worst ratio, over index triples `i < j < k`, between the ideal area
//! `(j - i)(k - j) / 2` and the area of the image triangle.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: dimension-generic areas, angles, point-line distances and
//!   the planar convex-sequence test.
//! - [`distortion`]: tameness validation and the exhaustive worst-triple search.
//! - [`curve`]: the recursive arc construction meant to reach 3-distortion
//!   `O(n^{1/(d-1)})` in dimension `d`. In the plane it grows linearly as
//!   intended; the lifted curves in higher dimensions grow faster (see the
//!   README for measurements).
//! - [`lower_bound`]: subsampling, convexity and angle certificates for
//!   planar sequences.
//! - [`optimizer`]: derivative-free search for small-`n` optimal embeddings.
//! - [`report`]: point files, SVG output, scaling scans and exponent fits.
//! - [`cli`]: the command-line front end behind the `distort3` binary.

pub mod cli;
pub mod curve;
pub mod distortion;
pub mod geometry;
pub mod lower_bound;
pub mod optimizer;
pub mod report;

pub use curve::{build_gamma, build_gamma2, lift_curve, ConstructionParams, MarkedCurve};
pub use distortion::{check_tame, delta3, rho3, DistortionReport, Extended, TameSequence, TripleDistortion};
pub use geometry::{angle_at_vertex, is_convex_sequence, point_line_distance, triangle_area, Angle, Point};
pub use lower_bound::{convexity_certificate, prop1_verify, Certificate};
