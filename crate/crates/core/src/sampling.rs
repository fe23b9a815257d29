//! Random points of the implemented spaces, for property checks.

use alloc::vec::Vec;

use rand::Rng;

use crate::geometry::{DiskPoint, Point, Space, SpaceKind};
use crate::math::tanh;

/// Sampling ranges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleScale {
    /// Euclidean coordinates are drawn from `[-r, r]`.
    pub euclid_radius: f64,
    /// Disk points are drawn up to this hyperbolic distance from the origin.
    pub disk_radius: f64,
    /// Probability that a tree sample sits exactly on a vertex.
    pub tree_vertex_prob: f64,
}

impl Default for SampleScale {
    fn default() -> Self {
        SampleScale {
            euclid_radius: 1.0,
            disk_radius: 3.0,
            tree_vertex_prob: 0.1,
        }
    }
}

/// A random point of `space`.
///
/// Tree points are spread by edge length, disk points have a uniform
/// hyperbolic distance from the origin and uniform direction, and product
/// points pair two independent base samples.
pub fn sample_point<R: Rng + ?Sized>(space: &Space, rng: &mut R, scale: &SampleScale) -> Point {
    match space.kind() {
        SpaceKind::Euclidean { dim } => {
            let r = scale.euclid_radius;
            Point::Euclidean((0..*dim).map(|_| rng.random_range(-r..=r)).collect())
        }
        SpaceKind::MetricTree(t) => {
            if rng.random_bool(scale.tree_vertex_prob.clamp(0.0, 1.0)) {
                return Point::Tree(t.vertex_point(rng.random_range(0..t.vertex_count())));
            }
            let total: f64 = (0..t.edge_count()).map(|e| t.edge_length(e)).sum();
            let mut s = rng.random_range(0.0..total);
            for e in 0..t.edge_count() {
                let len = t.edge_length(e);
                if s < len || e + 1 == t.edge_count() {
                    let off = s.min(len);
                    return Point::Tree(t.point(e, off).expect("offset within edge"));
                }
                s -= len;
            }
            unreachable!("a tree has at least one edge")
        }
        SpaceKind::PoincareDisk => {
            let rho = rng.random_range(0.0..=scale.disk_radius);
            let angle = rng.random_range(0.0..core::f64::consts::TAU);
            let n = tanh(0.5 * rho).min(crate::geometry::DISK_MAX_NORM);
            let p = DiskPoint::new(n * libm::cos(angle), n * libm::sin(angle))
                .or_else(|_| DiskPoint::new(0.0, 0.0))
                .expect("origin is a disk point");
            Point::Disk(p)
        }
        SpaceKind::Product(cs) => {
            let a = sample_point(cs.base(), rng, scale);
            let b = sample_point(cs.base(), rng, scale);
            Point::pair(a, b)
        }
    }
}

/// `n` independent samples.
pub fn sample_points<R: Rng + ?Sized>(space: &Space, rng: &mut R, scale: &SampleScale, n: usize) -> Vec<Point> {
    (0..n).map(|_| sample_point(space, rng, scale)).collect()
}

/// A random value of `[0, 1]`, hitting the endpoints occasionally.
pub fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.random_range(0..10u8) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random_range(0.0..=1.0),
    }
}
