//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use distort3::{check_tame, Point, TameSequence};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pts2(coords: &[[f64; 2]]) -> Vec<Point> {
    coords.iter().map(|c| Point::xy(c[0], c[1])).collect()
}

pub fn tame(coords: &[[f64; 2]]) -> TameSequence {
    check_tame(pts2(coords)).unwrap()
}

/// Random walk in `R^dim` with steps in `[0.2, 1]` and Gaussian-ish directions.
pub fn random_walk(rng: &mut TestRng, n: usize, dim: usize) -> TameSequence {
    let mut cur = vec![0.0; dim];
    let mut points = vec![Point::new(cur.clone()).unwrap()];
    for _ in 0..n {
        let dir: Vec<f64> = loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.1 && norm <= 1.0 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        };
        let len = rng.gen_range(0.2..1.0);
        for (c, d) in cur.iter_mut().zip(&dir) {
            *c += len * d;
        }
        points.push(Point::new(cur.clone()).unwrap());
    }
    check_tame(points).unwrap()
}

/// Unit steps turning left by random amounts summing to `total_turn`.
pub fn random_arc(rng: &mut TestRng, n: usize, total_turn: f64) -> TameSequence {
    let weights: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(0.85..1.15)).collect();
    let sum: f64 = weights.iter().sum();
    let mut heading = 0.0;
    let (mut x, mut y) = (0.0, 0.0);
    let mut points = vec![Point::xy(0.0, 0.0)];
    for step in 0..n {
        if step > 0 {
            heading += total_turn * weights[step - 1] / sum;
        }
        x += heading.cos();
        y += heading.sin();
        points.push(Point::xy(x, y));
    }
    check_tame(points).unwrap()
}

/// Straightforward triple loop with its own area arithmetic.
///
/// Returns the maximal value (`None` for a flat triple) and the
/// lexicographically first triple attaining it.
pub fn naive_delta3(points: &[Point]) -> (Option<f64>, (usize, usize, usize)) {
    let n = points.len() - 1;
    let mut best: Option<(Option<f64>, (usize, usize, usize))> = None;
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let (a, b, c) = (points[i].coords(), points[j].coords(), points[k].coords());
                let u: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                let v: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
                let mut sum = 0.0;
                for p in 0..u.len() {
                    for q in p + 1..u.len() {
                        let minor = u[p] * v[q] - u[q] * v[p];
                        sum += minor * minor;
                    }
                }
                let area = 0.5 * sum.sqrt();
                let d2 =
                    |p: &[f64], q: &[f64]| -> f64 { p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum() };
                let longest = d2(a, b).max(d2(b, c)).max(d2(a, c));
                let value = if area < 1e-12 * longest || longest == 0.0 {
                    None
                } else {
                    Some(((j - i) * (k - j)) as f64 / 2.0 / area)
                };
                let better = match &best {
                    None => true,
                    Some((cur, _)) => match (value, cur) {
                        (None, None) => false,
                        (None, Some(_)) => true,
                        (Some(_), None) => false,
                        (Some(v), Some(c)) => v > *c,
                    },
                };
                if better {
                    best = Some((value, (i, j, k)));
                }
            }
        }
    }
    best.unwrap()
}

/// Andrew's monotone chain; returns hull vertex indices counter-clockwise,
/// dropping collinear points.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap());
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &p in order {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Convex position in the given cyclic order, decided by the hull.
pub fn hull_says_convex(points: &[[f64; 2]]) -> bool {
    let m = points.len();
    let hull = convex_hull(points);
    if hull.len() != m {
        return false;
    }
    let start = hull.iter().position(|&h| h == 0).unwrap();
    let forward = (0..m).all(|t| hull[(start + t) % m] == t);
    let backward = (0..m).all(|t| hull[(start + m - t) % m] == t);
    forward || backward
}

/// Random polygon: sorted angles on an ellipse, then optional disruptions.
pub fn random_polygon(rng: &mut TestRng) -> Vec<[f64; 2]> {
    let m = rng.gen_range(3..12);
    let (a, b) = (rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
    let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut pts: Vec<[f64; 2]> = angles.iter().map(|t| [a * t.cos(), b * t.sin()]).collect();
    match rng.gen_range(0..4) {
        0 => {}
        1 => pts.reverse(),
        2 => {
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            pts.swap(i, j);
        }
        _ => {
            let i = rng.gen_range(0..m);
            let s = rng.gen_range(0.0..1.2);
            pts[i] = [pts[i][0] * s, pts[i][1] * s];
        }
    }
    pts
}

/// Sum of interior angles of a convex polygon.
pub fn interior_angle_sum(points: &[Point]) -> f64 {
    let m = points.len();
    (0..m)
        .map(|i| {
            distort3::angle_at_vertex(&points[(i + m - 1) % m], &points[i], &points[(i + 1) % m])
                .unwrap()
                .radians()
        })
        .sum()
}
