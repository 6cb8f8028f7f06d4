use std::f64::consts::PI;

use distort3::curve::{
    build_curve, max_spanning_angle, metric_contraction_ratio, sample_polyline, ArcGeometry,
};
use distort3::{build_gamma, build_gamma2, delta3, lift_curve, ConstructionParams, MarkedCurve};

fn gamma2(m: usize) -> MarkedCurve {
    build_gamma2(&ConstructionParams::new(m, 2).unwrap()).unwrap()
}

#[test]
fn point_counts() {
    assert_eq!(gamma2(2).marked_points().len(), 3);
    assert_eq!(gamma2(2).total_length(), 2.0);
    let seq = build_gamma(&ConstructionParams::new(3, 3).unwrap()).unwrap();
    assert_eq!((seq.len(), seq.dim()), (10, 3));
    let seq = build_gamma(&ConstructionParams::new(2, 4).unwrap()).unwrap();
    assert_eq!((seq.len(), seq.dim()), (9, 4));
    let lifted = lift_curve(&gamma2(3), 3).unwrap();
    assert_eq!(lifted.marks().len(), 10);
    assert!(lifted.marks().iter().enumerate().all(|(i, &s)| s == i as f64));
}

#[test]
fn replacement_arcs_lie_between_chord_and_circle() {
    for m in 2..60 {
        for r in [0.5, 1.0, 7.0] {
            let g = ArcGeometry::new(m, r);
            assert!(0.0 < g.inner_sagitta && g.inner_sagitta < g.outer_sagitta, "m={m} r={r}");
            assert!(((2.0 * r) * g.alpha.sin() - g.half_chord).abs() < 1e-14 * r);
        }
    }
}

#[test]
fn consecutive_marks_of_the_planar_curve() {
    let pts = gamma2(6).marked_points();
    for w in pts.windows(2) {
        let d = w[0].distance(&w[1]);
        assert!((3.0 / PI - 0.01..=1.0 + 1e-12).contains(&d), "{d}");
    }
}

#[test]
fn planar_distortion_is_linear_in_m() {
    for m in [4, 8, 16, 32, 64] {
        let seq = build_gamma(&ConstructionParams::new(m, 2).unwrap()).unwrap();
        let v = delta3(&seq).unwrap().delta3.finite().expect("finite");
        assert!(v / m as f64 <= 2.5, "m={m}: {v}");
    }
    let seq = build_gamma(&ConstructionParams::new(5, 2).unwrap()).unwrap();
    assert!(delta3(&seq).unwrap().delta3.is_finite());
}

#[test]
fn planar_curve_contracts_by_at_most_three_over_pi() {
    for m in [4, 8, 16] {
        let ratio = metric_contraction_ratio(&gamma2(m), 4).unwrap();
        assert!((3.0 / PI - 0.02..=1.0 + 1e-12).contains(&ratio), "m={m}: {ratio}");
    }
}

#[test]
fn lifting_contracts_by_at_most_root_three_over_two() {
    for m in [3, 4] {
        let base = gamma2(m);
        let lifted = lift_curve(&base, m).unwrap();
        let rb = metric_contraction_ratio(&base, 4).unwrap();
        let rl = metric_contraction_ratio(&lifted, 2).unwrap();
        assert!(rl >= 3f64.sqrt() / 2.0 * rb - 0.01, "m={m}: {rl} vs {rb}");
        assert!(rl >= 3f64.sqrt() / 2.0 * (3.0 / PI) - 0.02);
    }
}

#[test]
fn samplers_do_not_expand() {
    for curve in [gamma2(5), build_curve(&ConstructionParams::new(3, 3).unwrap()).unwrap()] {
        let per_unit = 8;
        let pts = sample_polyline(&curve, per_unit).unwrap();
        assert_eq!(pts.len() as f64, curve.total_length() * per_unit as f64 + 1.0);
        for w in pts.windows(2) {
            assert!(w[0].distance(&w[1]) <= 1.0 / per_unit as f64 + 1e-9);
        }
    }
}

#[test]
fn lifted_copies_start_and_end_on_the_base() {
    let m = 4;
    let curve = build_curve(&ConstructionParams::new(m, 3).unwrap()).unwrap();
    for (i, p) in curve.marked_points().iter().enumerate() {
        let h = p.coords()[2];
        if i % m == 0 {
            assert_eq!(h, 0.0);
        } else {
            assert!(h > 0.0);
        }
    }
}

#[test]
fn radius_does_not_change_the_output() {
    for (m, d) in [(5, 2), (3, 3), (2, 4)] {
        let reference = build_gamma(&ConstructionParams::new(m, d).unwrap()).unwrap();
        for r in [0.5, 7.0] {
            let other = build_gamma(&ConstructionParams::with_radius(m, d, r).unwrap()).unwrap();
            for (a, b) in reference.points().iter().zip(other.points()) {
                assert!(a.distance(b) <= 1e-9, "m={m} d={d} r={r}");
            }
        }
    }
}

#[test]
fn marked_triples_across_a_mark_stay_below_the_angle_bound() {
    for m in [2, 4, 8, 16] {
        let bound = PI * (1.0 - 1.0 / (6.0 * m as f64));
        let angle = max_spanning_angle(&gamma2(m), 1).unwrap();
        assert!(angle <= bound + 1e-6, "m={m}: {angle} > {bound}");
    }
}

// Between marks the bound is not uniform: a chord that crosses a corner only
// picks up part of the corner's turn, so finely sampled triples get flatter.
#[test]
fn finely_sampled_triples_can_exceed_the_marked_bound() {
    for m in [2, 4, 8] {
        let bound = PI * (1.0 - 1.0 / (6.0 * m as f64));
        let coarse = max_spanning_angle(&gamma2(m), 2).unwrap();
        let fine = max_spanning_angle(&gamma2(m), 8).unwrap();
        assert!(coarse <= bound);
        assert!(fine > bound && fine < PI);
    }
}
