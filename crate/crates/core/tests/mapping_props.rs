mod common;

use cat0_core::geometry::DiskPoint;
use cat0_core::mappings::{check_firmly_nonexpansive, check_p2};
use cat0_core::{ConvexSet, Mapping, Point, Space};
use common::*;
use proptest::prelude::*;

const T_GRID: [f64; 6] = [0.0, 0.1, 0.25, 0.5, 0.75, 1.0];

fn every_set() -> Vec<ConvexSet> {
    all_spaces().iter().flat_map(sets_in).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projections_are_idempotent_and_nonexpansive(seed in any::<u64>()) {
        let mut r = rng(seed);
        for c in every_set() {
            let s = c.space().clone();
            for _ in 0..10 {
                let (x, y) = (sample(&s, &mut r), sample(&s, &mut r));
                let (px, py) = (c.project(&x).unwrap(), c.project(&y).unwrap());
                prop_assert!(c.contains(&px, 1e-9).unwrap(), "{} projection left the set", c.name());
                let again = c.project(&px).unwrap();
                prop_assert!(s.distance(&px, &again).unwrap() <= 1e-9, "{} not idempotent", c.name());
                prop_assert!(s.distance(&px, &py).unwrap() <= s.distance(&x, &y).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn projections_are_nearest_points(seed in any::<u64>()) {
        let mut r = rng(seed);
        for c in every_set() {
            let s = c.space().clone();
            let x = sample(&s, &mut r);
            let d = s.distance(&x, &c.project(&x).unwrap()).unwrap();
            for _ in 0..20 {
                let w = c.project(&sample(&s, &mut r)).unwrap();
                prop_assert!(d <= s.distance(&x, &w).unwrap() + 1e-9, "{}", c.name());
            }
        }
    }

    #[test]
    fn projections_satisfy_p2_and_firm_nonexpansivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        for c in every_set() {
            let s = c.space().clone();
            let t = Mapping::projection(c.clone());
            for _ in 0..10 {
                let (x, y) = (sample(&s, &mut r), sample(&s, &mut r));
                let p2 = check_p2(&t, &x, &y).unwrap();
                prop_assert!(p2 <= 1e-9, "{} in {}: P2 residual {}", c.name(), s.tag(), p2);
                let fn_gap = check_firmly_nonexpansive(&t, &x, &y, &T_GRID).unwrap();
                prop_assert!(fn_gap <= 1e-9, "{} in {}: FN gap {}", c.name(), s.tag(), fn_gap);
            }
        }
    }

    #[test]
    fn sets_are_geodesically_convex(seed in any::<u64>()) {
        let mut r = rng(seed);
        for c in every_set() {
            let s = c.space().clone();
            let (y, z) = (c.project(&sample(&s, &mut r)).unwrap(), c.project(&sample(&s, &mut r)).unwrap());
            for t in T_GRID {
                prop_assert!(c.contains(&s.interpolate(&y, &z, t).unwrap(), 1e-9).unwrap(), "{}", c.name());
            }
        }
    }
}

fn golden_section(s: &Space, p: &Point, q: &Point, x: &Point) -> Point {
    let f = |t: f64| s.distance(x, &s.interpolate(p, q, t).unwrap()).unwrap();
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    while b - a > 1e-12 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    let mut best = (f(t), t);
    for end in [0.0, 1.0] {
        if f(end) < best.0 {
            best = (f(end), end);
        }
    }
    s.interpolate(p, q, best.1).unwrap()
}

#[test]
fn disk_segment_projection_matches_golden_section() {
    let s = Space::poincare_disk();
    let mut r = rng(99);
    for k in 0..200 {
        let p = sample(&s, &mut r);
        let q = sample(&s, &mut r);
        let (Point::Disk(pd), Point::Disk(qd)) = (&p, &q) else { unreachable!() };
        let seg = ConvexSet::disk_segment(&s, *pd, *qd).unwrap();
        let x = sample(&s, &mut r);
        let fast = seg.project(&x).unwrap();
        let slow = golden_section(&s, &p, &q, &x);
        assert!(s.distance(&fast, &slow).unwrap() <= 1e-6, "case {k}");
    }
}

#[test]
fn tripod_averaged_projections_fix_the_center() {
    let t = tripod_tree();
    let s = Space::metric_tree(t.clone());
    let seg = |e: usize| {
        ConvexSet::tree_segment(&s, &Point::Tree(t.point(e, 0.5).unwrap()), &Point::Tree(t.point(e, 1.0).unwrap())).unwrap()
    };
    let m = Mapping::averaged_projections(seg(0), seg(1), 0.5).unwrap();
    let o = Point::Tree(t.vertex_point(0));
    assert_eq!(m.evaluate(&o).unwrap(), o);
}

#[test]
fn subtree_projection_matches_fine_discretization() {
    let t = tripod_tree();
    let s = Space::metric_tree(t.clone());
    let leg = ConvexSet::subtree(&s, &[0, 1]).unwrap();
    let mut r = rng(3);
    for _ in 0..100 {
        let x = sample(&s, &mut r);
        let p = leg.project(&x).unwrap();
        let best = (0..=2000)
            .map(|i| s.distance(&x, &Point::Tree(t.point(0, i as f64 * 1e-3).unwrap())).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((s.distance(&x, &p).unwrap() - best).abs() <= 1e-3);
    }
}

#[test]
fn disk_ball_rejects_bad_radius() {
    let s = Space::poincare_disk();
    assert!(ConvexSet::disk_ball(&s, DiskPoint::ORIGIN, -1.0).is_err());
    assert!(ConvexSet::disk_ball(&s, DiskPoint::ORIGIN, f64::NAN).is_err());
}
