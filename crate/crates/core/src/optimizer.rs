//! Numerical search for tame sequences of small 3-distortion.
//!
//! Sequences are charted modulo rigid motions: `M_0` sits at the origin, the
//! first edge points along the first axis, and every later edge is described
//! by its length in `(0, 1]` and its direction relative to the previous edge.
//! The search is multi-start Nelder-Mead over that chart, first on a
//! log-sum-exp smoothing of the worst-triple maximum and finally on the exact
//! 3-distortion.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::distortion::{check_tame, delta3, DistortionError, TameSequence};
use crate::geometry::{self, Point};

/// Shortest edge the search chart produces.
pub const MIN_EDGE: f64 = 1e-3;

/// Largest `n` the grid oracle accepts.
pub const ORACLE_MAX_N: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("n must be at least 2, got {0}")]
    NTooSmall(usize),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("edge length {value} at position {index} is outside (0, 1]")]
    EdgeLength { index: usize, value: f64 },
    #[error("expected {expected} direction parameters, found {found}")]
    TurnCount { expected: usize, found: usize },
    #[error("non-finite direction parameter at position {0}")]
    NonFiniteTurn(usize),
    #[error("grid oracle only handles n <= {ORACLE_MAX_N} in the plane, got n={0}")]
    OracleTooLarge(usize),
    #[error("grid step must be in (0, pi), got {0}")]
    BadGridStep(f64),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
}

/// A point of the chart: `n` edge lengths and, for each of the `n - 1` inner
/// vertices, `d - 1` direction angles.
///
/// In the plane the single angle is the signed turn from one edge to the
/// next. In higher dimensions the first angle is the deviation from the
/// previous direction and the remaining `d - 2` place the deviation on the
/// sphere orthogonal to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingParams {
    pub dim: usize,
    pub edge_lengths: Vec<f64>,
    pub turns: Vec<f64>,
}

impl EmbeddingParams {
    pub fn planar(edge_lengths: Vec<f64>, turns: Vec<f64>) -> Self {
        EmbeddingParams { dim: 2, edge_lengths, turns }
    }

    pub fn n(&self) -> usize {
        self.edge_lengths.len()
    }

    fn validate(&self) -> Result<(), OptimizerError> {
        if self.dim < 2 {
            return Err(OptimizerError::DimensionTooSmall(self.dim));
        }
        let n = self.n();
        if n < 2 {
            return Err(OptimizerError::NTooSmall(n));
        }
        for (index, &value) in self.edge_lengths.iter().enumerate() {
            if !(value > 0.0 && value <= 1.0) {
                return Err(OptimizerError::EdgeLength { index, value });
            }
        }
        let expected = (n - 1) * (self.dim - 1);
        if self.turns.len() != expected {
            return Err(OptimizerError::TurnCount { expected, found: self.turns.len() });
        }
        if let Some(i) = self.turns.iter().position(|t| !t.is_finite()) {
            return Err(OptimizerError::NonFiniteTurn(i));
        }
        Ok(())
    }
}

/// Unit vector with spherical angles `phis` in `R^k`, `k = phis.len() + 1`.
fn sphere_point(phis: &[f64], out: &mut [f64]) {
    let mut sin_prod = 1.0;
    for (i, &phi) in phis.iter().enumerate() {
        out[i] = sin_prod * phi.cos();
        sin_prod *= phi.sin();
    }
    out[phis.len()] = sin_prod;
}

/// Rotates `dir` by the direction update `angles`.
fn step_direction(dir: &mut [f64], angles: &[f64]) {
    let d = dir.len();
    if d == 2 {
        let (s, c) = angles[0].sin_cos();
        let (x, y) = (dir[0], dir[1]);
        dir[0] = c * x - s * y;
        dir[1] = s * x + c * y;
        return;
    }
    // Local frame (e_1 -> dir) via the Householder reflection swapping e_1 and dir.
    let (s, c) = angles[0].sin_cos();
    let mut local = vec![0.0; d];
    local[0] = c;
    let mut w = vec![0.0; d - 1];
    sphere_point(&angles[1..], &mut w);
    for i in 1..d {
        local[i] = s * w[i - 1];
    }
    let mut v: Vec<f64> = dir.to_vec();
    v[0] -= 1.0;
    let vv = geometry::dot(&v, &v);
    let out: Vec<f64> = if vv < 1e-24 {
        local
    } else {
        let k = 2.0 * geometry::dot(&v, &local) / vv;
        local.iter().zip(&v).map(|(l, vi)| l - k * vi).collect()
    };
    let norm = geometry::dot(&out, &out).sqrt();
    for (d, o) in dir.iter_mut().zip(out) {
        *d = o / norm;
    }
}

/// Decodes chart parameters, starting with the first edge at planar heading
/// `heading` (measured in the first two coordinates).
pub fn decode_with_heading(params: &EmbeddingParams, heading: f64) -> Result<TameSequence, OptimizerError> {
    params.validate()?;
    let d = params.dim;
    let mut dir = vec![0.0; d];
    dir[0] = heading.cos();
    dir[1] = heading.sin();
    let mut pos = vec![0.0; d];
    let mut points = Vec::with_capacity(params.n() + 1);
    points.push(Point::new(pos.clone()).expect("origin"));
    for (e, &len) in params.edge_lengths.iter().enumerate() {
        if e > 0 {
            step_direction(&mut dir, &params.turns[(e - 1) * (d - 1)..e * (d - 1)]);
        }
        for (p, u) in pos.iter_mut().zip(&dir) {
            *p += len * u;
        }
        points.push(Point::new(pos.clone()).map_err(DistortionError::from)?);
    }
    Ok(check_tame(points)?)
}

/// Decodes chart parameters with `M_0` at the origin and the first edge along
/// the first axis.
pub fn decode(params: &EmbeddingParams) -> Result<TameSequence, OptimizerError> {
    decode_with_heading(params, 0.0)
}

/// Log-sum-exp of the triple ratios at temperature `tau`. Flat triples
/// contribute `rho_3 / area` with the area floored, so the value stays finite
/// and grows as triangles flatten.
pub fn smoothed_distortion(seq: &TameSequence, tau: f64) -> f64 {
    let n = seq.n();
    let mut values = Vec::with_capacity((n + 1) * n * (n - 1) / 6);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..=n {
                let area =
                    geometry::gram_area(seq.point(i).coords(), seq.point(j).coords(), seq.point(k).coords());
                let rho = ((j - i) * (k - j)) as f64 / 2.0;
                values.push(rho / area.max(1e-300));
            }
        }
    }
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return top;
    }
    top + tau * values.iter().map(|v| ((v - top) / tau).exp()).sum::<f64>().ln()
}

/// The exact 3-distortion of the decoded sequence (`tau = None`), or its
/// log-sum-exp smoothing at temperature `tau`.
pub fn objective(params: &EmbeddingParams, tau: Option<f64>) -> Result<f64, OptimizerError> {
    let seq = decode(params)?;
    Ok(match tau {
        Some(t) if t > 0.0 => smoothed_distortion(&seq, t),
        _ => delta3(&seq)?.delta3.to_f64(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Temperatures of the successive stages; `0` means the exact objective.
    pub schedule: Vec<f64>,
    /// Nelder-Mead iterations per stage and restart.
    pub max_iters: usize,
}

impl SearchConfig {
    pub fn for_n(n: usize) -> Self {
        SearchConfig {
            restarts: if n <= 6 { 100 } else { 20 },
            seed: 42,
            schedule: vec![0.1, 0.01, 0.0],
            max_iters: 400 * (n + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best: TameSequence,
    pub params: EmbeddingParams,
    pub value: f64,
    pub restarts: usize,
    pub converged: bool,
    /// `(cumulative iteration, best value so far)` of the winning restart.
    pub history: Vec<(usize, f64)>,
}

struct Chart {
    n: usize,
    dim: usize,
}

impl Chart {
    fn size(&self) -> usize {
        self.n + (self.n - 1) * (self.dim - 1)
    }

    fn params(&self, x: &[f64]) -> EmbeddingParams {
        EmbeddingParams {
            dim: self.dim,
            edge_lengths: x[..self.n].iter().map(|l| l.clamp(MIN_EDGE, 1.0)).collect(),
            turns: x[self.n..].to_vec(),
        }
    }

    fn eval(&self, x: &[f64], tau: f64) -> f64 {
        let t = if tau > 0.0 { Some(tau) } else { None };
        objective(&self.params(x), t).unwrap_or(f64::INFINITY)
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.n).map(|_| rng.gen_range(0.5..1.0)).collect();
        x.extend((0..(self.n - 1) * (self.dim - 1)).map(|_| rng.gen_range(-PI..PI)));
        x
    }
}

struct NmOutcome {
    x: Vec<f64>,
    value: f64,
    iters: usize,
    converged: bool,
}

/// Nelder-Mead with standard coefficients; stops when the simplex values
/// agree to `ftol` and its extent falls under `xtol`.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], step: f64, max_iters: usize) -> NmOutcome {
    let (ftol, xtol) = (1e-12, 1e-10);
    let k = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..k {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let by_value = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| a.1.total_cmp(&b.1);
    let mut iters = 0;
    let mut converged = false;
    while iters < max_iters {
        simplex.sort_by(by_value);
        let (lo, hi) = (simplex[0].1, simplex[k].1);
        let extent = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (hi - lo).abs() <= ftol * lo.abs().max(1.0) && extent <= xtol {
            converged = true;
            break;
        }
        iters += 1;
        let mut centroid = vec![0.0; k];
        for (x, _) in &simplex[..k] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / k as f64;
            }
        }
        let toward = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[k].0).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = toward(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = toward(-2.0);
            let fe = f(&xe);
            simplex[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[k - 1].1 {
            simplex[k] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[k].1 {
                let xc = toward(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = toward(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < fr.min(simplex[k].1) {
                simplex[k] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, b) in x.iter_mut().zip(&best) {
                        *xi = b + 0.5 * (*xi - b);
                    }
                    *v = f(x);
                }
            }
        }
    }
    simplex.sort_by(by_value);
    let (x, value) = simplex.swap_remove(0);
    NmOutcome { x, value, iters, converged }
}

struct RestartOutcome {
    x: Vec<f64>,
    value: f64,
    converged: bool,
    history: Vec<(usize, f64)>,
}

fn run_restart(chart: &Chart, config: &SearchConfig, seed: u64) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = chart.random_start(&mut rng);
    let mut best = (x.clone(), chart.eval(&x, 0.0));
    let mut history = Vec::new();
    let mut total = 0;
    let mut converged = false;
    for &tau in &config.schedule {
        let mut step = 0.2;
        // Re-seeding the simplex around the incumbent helps on the kinks of
        // the exact maximum.
        for _ in 0..4 {
            let out = nelder_mead(|y| chart.eval(y, tau), &x, step, config.max_iters);
            total += out.iters;
            x = out.x;
            converged = out.converged;
            // Smoothed stages may trade a little exact value for a better basin.
            let exact = chart.eval(&x, 0.0);
            if exact < best.1 {
                best = (x.clone(), exact);
            }
            history.push((total, best.1));
            if !out.value.is_finite() {
                break;
            }
            step *= 0.25;
        }
    }
    let (x, value) = best;
    RestartOutcome { x, value, converged: converged && value.is_finite(), history }
}

/// Cap on rounds of fresh restarts when every start stays degenerate.
const MAX_ROUNDS: u64 = 3;

/// Multi-start derivative-free search for a small-`Delta_3` tame sequence
/// with `n + 1` points in `R^d`. Deterministic for a given seed regardless of
/// the number of threads.
pub fn local_search(n: usize, d: usize, config: &SearchConfig) -> Result<OptimizationResult, OptimizerError> {
    if n < 2 {
        return Err(OptimizerError::NTooSmall(n));
    }
    if d < 2 {
        return Err(OptimizerError::DimensionTooSmall(d));
    }
    let chart = Chart { n, dim: d };
    let restarts = config.restarts.max(1);
    let mut round = 0;
    let (_, outcome) = loop {
        let base = config.seed.wrapping_add(round * restarts as u64);
        let best = (0..restarts)
            .into_par_iter()
            .map(|r| (r, run_restart(&chart, config, base.wrapping_add(r as u64))))
            .reduce_with(|a, b| match a.1.value.total_cmp(&b.1.value) {
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal if b.0 < a.0 => b,
                _ => a,
            })
            .expect("at least one restart");
        round += 1;
        if best.1.value.is_finite() || round >= MAX_ROUNDS {
            break best;
        }
    };
    debug_assert!(chart.size() == outcome.x.len());
    let params = chart.params(&outcome.x);
    let best = decode(&params)?;
    let value = delta3(&best)?.delta3.to_f64();
    Ok(OptimizationResult {
        best,
        params,
        value,
        restarts: restarts * round as usize,
        converged: outcome.converged,
        history: outcome.history,
    })
}

/// 3-distortion of the planar path with the given edge lengths and signed
/// turns, computed directly from 2D cross products.
pub fn planar_path_distortion(lengths: &[f64], turns: &[f64]) -> f64 {
    let mut pts = Vec::with_capacity(lengths.len() + 1);
    let (mut x, mut y, mut heading) = (0.0, 0.0, 0.0f64);
    pts.push([x, y]);
    for (e, len) in lengths.iter().enumerate() {
        if e > 0 {
            heading += turns[e - 1];
        }
        x += len * heading.cos();
        y += len * heading.sin();
        pts.push([x, y]);
    }
    let n = lengths.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..=n {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                let area = 0.5 * geometry::cross2(&a, &b, &c).abs();
                let side2 = geometry::longest_side2(&a, &b, &c);
                if geometry::is_flat(area, side2) {
                    return f64::INFINITY;
                }
                worst = worst.max(((j - i) * (k - j)) as f64 / 2.0 / area);
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub lengths: Vec<f64>,
    pub turns: Vec<f64>,
    pub configurations: u64,
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    // Open interval (lo, hi).
    let count = ((hi - lo) / step).ceil() as usize;
    (1..count).map(|i| lo + i as f64 * step).filter(|&t| t < hi).collect()
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn grid_min(length_axes: &[Vec<f64>], turn_axes: &[Vec<f64>]) -> OracleResult {
    let lengths = cartesian(length_axes);
    let turns = cartesian(turn_axes);
    let configurations = (lengths.len() * turns.len()) as u64;
    let (value, li, ti) = turns
        .par_iter()
        .enumerate()
        .map(|(ti, t)| {
            lengths
                .iter()
                .enumerate()
                .map(|(li, l)| (planar_path_distortion(l, t), li, ti))
                .fold((f64::INFINITY, usize::MAX, usize::MAX), |a, b| if b.0 < a.0 { b } else { a })
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && (b.2, b.1) < (a.2, a.1)) { b } else { a },
        );
    if li == usize::MAX {
        return OracleResult { value, lengths: Vec::new(), turns: Vec::new(), configurations };
    }
    OracleResult { value, lengths: lengths[li].clone(), turns: turns[ti].clone(), configurations }
}

/// Exhaustive grid search over planar paths with `n <= 3` edges.
///
/// The first turn ranges over `(0, pi)` (reflections cover the negative
/// side), later turns over `(-pi, pi)`, and edge lengths over
/// `{0.25, 0.5, 0.75, 1}`. A second pass at a tenth of the step refines
/// around the best cell, with edge lengths refined on a 0.025 grid.
pub fn brute_force_oracle(n: usize, grid_step: f64) -> Result<OracleResult, OptimizerError> {
    if n > ORACLE_MAX_N {
        return Err(OptimizerError::OracleTooLarge(n));
    }
    if n < 2 {
        return Err(OptimizerError::NTooSmall(n));
    }
    if !(grid_step > 0.0 && grid_step < PI) {
        return Err(OptimizerError::BadGridStep(grid_step));
    }
    let length_axis = vec![0.25, 0.5, 0.75, 1.0];
    let mut turn_axes = vec![grid(0.0, PI, grid_step)];
    turn_axes.extend((1..n - 1).map(|_| grid(-PI, PI, grid_step)));
    let coarse = grid_min(&vec![length_axis; n], &turn_axes);
    if coarse.lengths.is_empty() {
        return Ok(coarse);
    }
    let fine = grid_step / 10.0;
    let refine_turns: Vec<Vec<f64>> =
        coarse.turns.iter().map(|&t| (-10..=10).map(|i| t + i as f64 * fine).collect()).collect();
    let refine_lengths: Vec<Vec<f64>> = coarse
        .lengths
        .iter()
        .map(|&l| {
            (-10..=10)
                .map(|i| l + i as f64 * 0.025)
                .filter(|&v| v > 0.0 && v <= 1.0 + 1e-12)
                .map(|v| v.min(1.0))
                .collect()
        })
        .collect();
    let refined = grid_min(&refine_lengths, &refine_turns);
    let configurations = coarse.configurations + refined.configurations;
    let best = if refined.value < coarse.value { refined } else { coarse };
    Ok(OracleResult { configurations, ..best })
}
