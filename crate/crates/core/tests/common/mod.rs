#![allow(dead_code)]

use cat0_core::geometry::DiskPoint;
use cat0_core::sampling::{sample_point, SampleScale};
use cat0_core::{ConvexSet, MetricTree, Point, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn e(v: &[f64]) -> Point {
    Point::Euclidean(v.to_vec())
}

pub fn tripod_tree() -> MetricTree {
    MetricTree::new(["O", "A", "B", "C"], [("O", "A", 2.0), ("O", "B", 2.0), ("O", "C", 2.0)]).unwrap()
}

pub fn base_spaces() -> Vec<Space> {
    vec![
        Space::euclidean(2).unwrap(),
        Space::euclidean(5).unwrap(),
        Space::metric_tree(tripod_tree()),
        Space::poincare_disk(),
    ]
}

pub fn all_spaces() -> Vec<Space> {
    let mut out = base_spaces();
    for b in base_spaces() {
        for l in [0.25, 0.5, 0.9] {
            out.push(Space::product(b.clone(), l).unwrap());
        }
    }
    out
}

pub fn is_disk(space: &Space) -> bool {
    match space.as_product() {
        Some(cs) => is_disk(cs.base()),
        None => matches!(space.kind(), cat0_core::SpaceKind::PoincareDisk),
    }
}

/// Tolerance for exact-arithmetic spaces and the disk.
pub fn tol(space: &Space, exact: f64, disk: f64) -> f64 {
    if is_disk(space) {
        disk
    } else {
        exact
    }
}

pub fn sample(space: &Space, r: &mut ChaCha8Rng) -> Point {
    sample_point(space, r, &SampleScale::default())
}

fn tp(t: &MetricTree, edge: usize, off: f64) -> Point {
    Point::Tree(t.point(edge, off).unwrap())
}

fn dp(x: f64, y: f64) -> DiskPoint {
    DiskPoint::new(x, y).unwrap()
}

/// One or more convex sets of every implemented kind in `space`.
pub fn sets_in(space: &Space) -> Vec<ConvexSet> {
    match space.kind() {
        cat0_core::SpaceKind::Euclidean { dim } => {
            let d = *dim;
            let mut normal = vec![0.0; d];
            normal[0] = -1.0;
            normal[d - 1] += 0.5;
            let mut e1 = vec![0.0; d];
            e1[0] = 1.0;
            let mut e2 = vec![0.0; d];
            e2[d - 1] = 1.0;
            e2[0] = 0.3;
            let mut anchor = vec![0.1; d];
            anchor[0] = -0.2;
            let mut basis = vec![e1];
            if d > 2 {
                basis.push(e2);
            }
            vec![
                ConvexSet::halfspace(space, normal, -0.3).unwrap(),
                ConvexSet::ball(space, vec![0.2; d], 0.7).unwrap(),
                ConvexSet::affine_subspace(space, anchor.clone(), basis).unwrap(),
                ConvexSet::affine_subspace(space, anchor, vec![]).unwrap(),
            ]
        }
        cat0_core::SpaceKind::MetricTree(t) => vec![
            ConvexSet::tree_segment(space, &tp(t, 0, 0.5), &tp(t, 1, 1.0)).unwrap(),
            ConvexSet::tree_segment(space, &tp(t, 2, 0.25), &tp(t, 2, 1.5)).unwrap(),
            ConvexSet::subtree(space, &[0, 1]).unwrap(),
            ConvexSet::subtree(space, &[0, 1, 2]).unwrap(),
            ConvexSet::subtree(space, &[3]).unwrap(),
        ],
        cat0_core::SpaceKind::PoincareDisk => vec![
            ConvexSet::disk_segment(space, dp(-0.4, 0.1), dp(0.5, 0.3)).unwrap(),
            ConvexSet::disk_segment(space, dp(0.0, -0.6), dp(0.2, 0.7)).unwrap(),
            ConvexSet::disk_ball(space, dp(0.5, 0.0), 0.2).unwrap(),
            ConvexSet::disk_ball(space, dp(-0.3, 0.4), 1.1).unwrap(),
        ],
        cat0_core::SpaceKind::Product(cs) => {
            let base = sets_in(cs.base());
            vec![
                ConvexSet::product_rectangle(space, base[0].clone(), base[1].clone()).unwrap(),
                ConvexSet::diagonal(space).unwrap(),
            ]
        }
    }
}
