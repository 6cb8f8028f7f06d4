//! Command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 tameness
//! violation, 3 fewer than three points, 4 a certificate inequality failed
//! (a bug), 64 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::curve::{build_curve, sample_polyline, ConstructionParams};
use crate::distortion::{check_tame, delta3, DistortionError, TameSequence};
use crate::geometry::Point;
use crate::lower_bound::{prop1_verify, LowerBoundError};
use crate::optimizer::{brute_force_oracle, local_search, SearchConfig};
use crate::report::io::{format_points, read_points, PointFileError, PointFormat};
use crate::report::scan::{self, ScanError, BASELINE_OPENING, EXHAUSTIVE_LIMIT};
use crate::report::svg::{render_svg, Plane};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_TAME: i32 = 2;
pub const EXIT_TOO_FEW: i32 = 3;
pub const EXIT_LEMMA: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "DISTORT3_THREADS";

#[derive(Debug, Parser)]
#[command(name = "distort3", version, about = "3-distortion of paths in Euclidean space")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact 3-distortion of a point file.
    Delta3 {
        input: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON instead of the one-line summary.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        max_n_override: bool,
    },
    /// Build the recursive construction for `m` and `d`.
    Construct {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        /// Point file for the marked points; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value = "xy")]
        plane: Plane,
        /// Curve samples per unit of arclength in the figure.
        #[arg(long, default_value_t = 16)]
        per_unit: usize,
    },
    /// Exact 3-distortion of the construction over several `m`.
    Scan {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        /// CSV output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_n_override: bool,
    },
    /// Unit-spaced points on a fixed arc rescaled to length `n`.
    Baseline {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Opening angle of the arc in radians.
        #[arg(long, default_value_t = BASELINE_OPENING)]
        opening: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_n_override: bool,
    },
    /// Lower-bound certificate for a planar point file.
    Witness {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a small-distortion embedding of the path with `n` edges.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw a point file as SVG.
    Render {
        input: PathBuf,
        /// SVG output; stdout when absent.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value = "xy")]
        plane: Plane,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Failure::new(EXIT_USAGE, message)
    }
}

impl From<PointFileError> for Failure {
    fn from(e: PointFileError) -> Self {
        Failure::new(EXIT_PARSE, e)
    }
}

impl From<DistortionError> for Failure {
    fn from(e: DistortionError) -> Self {
        let code = match e {
            DistortionError::NotTame { .. } => EXIT_TAME,
            DistortionError::TooFewPoints { .. } => EXIT_TOO_FEW,
            _ => EXIT_PARSE,
        };
        Failure::new(code, e)
    }
}

impl From<LowerBoundError> for Failure {
    fn from(e: LowerBoundError) -> Self {
        match e {
            LowerBoundError::Distortion(d) => d.into(),
            LowerBoundError::LemmaViolation(_) => Failure::new(EXIT_LEMMA, e),
            _ => Failure::usage(e),
        }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        Failure::usage(e)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_sequence(input: &Path, allow_large: bool) -> Result<TameSequence, Failure> {
    let points = read_points(input)?;
    if points.len() < 3 {
        return Err(Failure::new(EXIT_TOO_FEW, format!("need at least 3 points, found {}", points.len())));
    }
    let seq = check_tame(points)?;
    if seq.n() > EXHAUSTIVE_LIMIT && !allow_large {
        return Err(Failure::usage(format!(
            "n={} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}; pass --max-n-override",
            seq.n()
        )));
    }
    Ok(seq)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(Failure::usage)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Delta3 { input, out: json_out, json: as_json, max_n_override } => {
            let seq = load_sequence(&input, max_n_override)?;
            let report = delta3(&seq)?;
            let w = report.worst;
            if as_json {
                emit(out, &format!("{}\n", json(&report)))?;
            } else {
                emit(
                    out,
                    &format!(
                        "delta3={} worst=({},{},{}) triples={}\n",
                        report.delta3, w.i, w.j, w.k, report.triples_evaluated
                    ),
                )?;
            }
            if let Some(path) = json_out {
                write_file(&path, &json(&report))?;
            }
        }
        Command::Construct { m, d, out: points_out, svg, plane, per_unit } => {
            let params = ConstructionParams::new(m, d).map_err(Failure::usage)?;
            let curve = build_curve(&params).map_err(Failure::usage)?;
            let seq = curve.to_tame_sequence().map_err(Failure::usage)?;
            match points_out {
                Some(path) => {
                    write_file(&path, &format_points(seq.points(), PointFormat::from_path(&path)))?;
                    emit(out, &format!("wrote {} points in R^{d} to {}\n", seq.len(), path.display()))?;
                }
                None => emit(out, &format_points(seq.points(), PointFormat::Csv))?,
            }
            if let Some(path) = svg {
                let line = sample_polyline(&curve, per_unit.max(1)).map_err(Failure::usage)?;
                let figure = render_svg(&[line], seq.points(), plane).map_err(Failure::usage)?;
                write_file(&path, &figure)?;
            }
        }
        Command::Scan { d, m, out: csv_out, max_n_override } => {
            let result = scan::scan(d, &m, max_n_override)?;
            let csv = result.to_csv();
            match csv_out {
                Some(path) => write_file(&path, &csv)?,
                None => emit(out, &csv)?,
            }
            if let Some(fit) = result.fit {
                emit(out, &format!("slope={} residual={}\n", fit.slope, fit.residual_norm))?;
            }
        }
        Command::Baseline { n, opening, out: csv_out, max_n_override } => {
            if !(opening > 0.0 && opening < std::f64::consts::TAU) {
                return Err(Failure::usage("opening must be in (0, 2 pi)"));
            }
            let result = scan::baseline(&n, opening, max_n_override)?;
            let csv = result.to_csv();
            match csv_out {
                Some(path) => write_file(&path, &csv)?,
                None => emit(out, &csv)?,
            }
            if let Some(fit) = result.fit {
                emit(out, &format!("slope={} residual={}\n", fit.slope, fit.residual_norm))?;
            }
        }
        Command::Witness { input, out: json_out } => {
            let seq = load_sequence(&input, false)?;
            let report = prop1_verify(&seq)?;
            let text = json(&report);
            emit(out, &format!("{text}\n"))?;
            if let Some(path) = json_out {
                write_file(&path, &text)?;
            }
        }
        Command::Optimize { n, d, seed, restarts, out: points_out, svg } => {
            let mut config = SearchConfig::for_n(n);
            config.seed = seed;
            if let Some(r) = restarts {
                config.restarts = r;
            }
            let result = local_search(n, d, &config).map_err(Failure::usage)?;
            emit(
                out,
                &format!(
                    "n={n} d={d} value={} converged={} restarts={}\n",
                    result.value, result.converged, result.restarts
                ),
            )?;
            if d == 2 && n <= 3 {
                let oracle = brute_force_oracle(n, 0.01).map_err(Failure::usage)?;
                emit(out, &format!("oracle={} configurations={}\n", oracle.value, oracle.configurations))?;
            }
            if let Some(path) = points_out {
                write_file(&path, &format_points(result.best.points(), PointFormat::from_path(&path)))?;
            }
            if let Some(path) = svg {
                let pts = result.best.points().to_vec();
                write_file(
                    &path,
                    &render_svg(std::slice::from_ref(&pts), &pts, Plane::Xy).map_err(Failure::usage)?,
                )?;
            }
        }
        Command::Render { input, svg, plane } => {
            let pts: Vec<Point> = read_points(&input)?;
            let figure = render_svg(std::slice::from_ref(&pts), &pts, plane).map_err(Failure::usage)?;
            match svg {
                Some(path) => write_file(&path, &figure)?,
                None => emit(out, &figure)?,
            }
        }
    }
    Ok(())
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = match thread_cap() {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(cli, &mut buffer)),
            Err(e) => Err(Failure::usage(e)),
        },
        None => execute(cli, &mut buffer),
    };
    let _ = out.write_all(&buffer);
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
