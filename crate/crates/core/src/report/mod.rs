//! File formats, figures and scaling experiments.

pub mod io;
pub mod scan;
pub mod svg;

pub use io::{parse_points, read_points, write_points, PointFormat};
pub use scan::{baseline, fit_exponent, scan, BaselineRecord, ExponentFit, ScanRecord};
pub use svg::{render_svg, Plane};
