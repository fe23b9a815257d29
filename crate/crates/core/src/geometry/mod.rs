//! Geodesic spaces, points, and the CAT(0) comparison inequalities.

mod disk;
pub(crate) mod euclid;
mod tree;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use disk::{DiskPoint, MAX_NORM as DISK_MAX_NORM};
pub use tree::{MetricTree, TreePoint};

pub(crate) use disk::{project_segment as disk_project_segment, translate as disk_translate};

use crate::error::{Error, Result};
use crate::math::sq;
use crate::productspace::{ConvexCombinationSpace, Lambda};

/// Comparison tolerance for spaces with exact arithmetic.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Comparison tolerance for the Poincaré disk.
pub const DISK_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    Euclidean { dim: usize },
    MetricTree(Arc<MetricTree>),
    PoincareDisk,
    Product(Arc<ConvexCombinationSpace>),
}

/// A uniquely geodesic (CAT(0)) metric space.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    kind: SpaceKind,
    tolerance: f64,
}

/// A point of one of the implemented spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Euclidean(Vec<f64>),
    Tree(TreePoint),
    Disk(DiskPoint),
    Pair(Box<Point>, Box<Point>),
}

/// Outcome of an inequality check: the signed residual `lhs - rhs` and
/// whether it stayed within tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    fn new(residual: f64, tol: f64) -> Self {
        Check {
            pass: residual <= tol,
            residual,
        }
    }
}

pub(crate) fn check_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(alloc::format!("parameter {t} outside [0, 1]")));
    }
    Ok(())
}

impl Space {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("euclidean dimension must be at least 1"));
        }
        Ok(Space {
            kind: SpaceKind::Euclidean { dim },
            tolerance: EXACT_TOLERANCE,
        })
    }

    pub fn metric_tree(tree: MetricTree) -> Self {
        Space {
            kind: SpaceKind::MetricTree(Arc::new(tree)),
            tolerance: EXACT_TOLERANCE,
        }
    }

    pub fn poincare_disk() -> Self {
        Space {
            kind: SpaceKind::PoincareDisk,
            tolerance: DISK_TOLERANCE,
        }
    }

    /// The weighted square `(X², d_λ)` of `base`.
    pub fn product(base: Space, lambda: f64) -> Result<Self> {
        let tolerance = base.tolerance;
        let cs = ConvexCombinationSpace::new(base, lambda)?;
        Ok(Space {
            kind: SpaceKind::Product(Arc::new(cs)),
            tolerance,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0) {
            return Err(Error::domain("tolerance must be nonnegative"));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            SpaceKind::Euclidean { .. } => "euclidean",
            SpaceKind::MetricTree(_) => "metric-tree",
            SpaceKind::PoincareDisk => "poincare-disk",
            SpaceKind::Product(_) => "product",
        }
    }

    pub fn tree(&self) -> Option<&MetricTree> {
        match &self.kind {
            SpaceKind::MetricTree(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_product(&self) -> Option<&ConvexCombinationSpace> {
        match &self.kind {
            SpaceKind::Product(cs) => Some(cs),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<Lambda> {
        self.as_product().map(ConvexCombinationSpace::lambda)
    }

    /// A distinguished base point: the zero vector, the disk center, the
    /// first tree vertex, or the diagonal pair of the base origin.
    pub fn origin(&self) -> Point {
        match &self.kind {
            SpaceKind::Euclidean { dim } => Point::Euclidean(vec![0.0; *dim]),
            SpaceKind::MetricTree(t) => Point::Tree(t.vertex_point(0)),
            SpaceKind::PoincareDisk => Point::Disk(DiskPoint::ORIGIN),
            SpaceKind::Product(cs) => {
                let o = cs.base().origin();
                Point::pair(o.clone(), o)
            }
        }
    }

    /// Checks that `p` is a well-formed point of this space.
    pub fn validate(&self, p: &Point) -> Result<()> {
        match (&self.kind, p) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(v)) => {
                if v.len() != *dim {
                    return Err(Error::mismatch(alloc::format!(
                        "point of dimension {} in euclidean({dim})",
                        v.len()
                    )));
                }
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(Error::domain("non-finite coordinate"));
                }
                Ok(())
            }
            (SpaceKind::MetricTree(t), Point::Tree(tp)) => t.validate(tp),
            (SpaceKind::PoincareDisk, Point::Disk(d)) => DiskPoint::new(d.x(), d.y()).map(|_| ()),
            (SpaceKind::Product(cs), Point::Pair(a, b)) => {
                cs.base().validate(a)?;
                cs.base().validate(b)
            }
            _ => Err(Error::mismatch(alloc::format!(
                "{} point used in {} space",
                p.tag(),
                self.tag()
            ))),
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        match (&self.kind, x, y) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(a), Point::Euclidean(b))
                if a.len() == *dim && b.len() == *dim =>
            {
                Ok(euclid::distance(a, b))
            }
            (SpaceKind::MetricTree(t), Point::Tree(a), Point::Tree(b)) => {
                check_edge(t, a)?;
                check_edge(t, b)?;
                Ok(t.distance(a, b))
            }
            (SpaceKind::PoincareDisk, Point::Disk(a), Point::Disk(b)) => Ok(disk::distance(a, b)),
            (SpaceKind::Product(cs), Point::Pair(..), Point::Pair(..)) => cs.d_lambda(x, y),
            _ => Err(self.mismatch2(x, y)),
        }
    }

    /// `d²(x, y)`.
    pub fn distance_sq(&self, x: &Point, y: &Point) -> Result<f64> {
        match (&self.kind, x, y) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(a), Point::Euclidean(b))
                if a.len() == *dim && b.len() == *dim =>
            {
                Ok(euclid::distance_sq(a, b))
            }
            (SpaceKind::Product(cs), Point::Pair(..), Point::Pair(..)) => cs.d_lambda_sq(x, y),
            _ => self.distance(x, y).map(sq),
        }
    }

    /// The point `(1-t)x + ty` on the geodesic from `x` to `y`.
    pub fn interpolate(&self, x: &Point, y: &Point, t: f64) -> Result<Point> {
        check_unit_interval(t)?;
        if x.bit_eq(y) {
            self.validate(x)?;
            return Ok(x.clone());
        }
        match (&self.kind, x, y) {
            (SpaceKind::Euclidean { dim }, Point::Euclidean(a), Point::Euclidean(b))
                if a.len() == *dim && b.len() == *dim =>
            {
                Ok(Point::Euclidean(euclid::lerp(a, b, t)))
            }
            (SpaceKind::MetricTree(tr), Point::Tree(a), Point::Tree(b)) => {
                check_edge(tr, a)?;
                check_edge(tr, b)?;
                Ok(Point::Tree(tr.interpolate(a, b, t)))
            }
            (SpaceKind::PoincareDisk, Point::Disk(a), Point::Disk(b)) => {
                Ok(Point::Disk(disk::interpolate(a, b, t)?))
            }
            (SpaceKind::Product(cs), Point::Pair(..), Point::Pair(..)) => cs.interpolate_product(x, y, t),
            _ => Err(self.mismatch2(x, y)),
        }
    }

    /// Evaluates `d²(z,γ(t)) - [(1-t)d²(z,x) + t d²(z,y) - t(1-t)d²(x,y)]`
    /// with `γ(t) = (1-t)x + ty`.
    pub fn check_cn_inequality(&self, z: &Point, x: &Point, y: &Point, t: f64, tol: f64) -> Result<Check> {
        let g = self.interpolate(x, y, t)?;
        let lhs = self.distance_sq(z, &g)?;
        let rhs = (1.0 - t) * self.distance_sq(z, x)? + t * self.distance_sq(z, y)?
            - t * (1.0 - t) * self.distance_sq(x, y)?;
        Ok(Check::new(lhs - rhs, tol))
    }

    /// Evaluates `d²(x,z) + d²(y,w) - [d²(x,y) + d²(y,z) + d²(z,w) + d²(w,x)]`.
    pub fn check_four_point(&self, x: &Point, y: &Point, z: &Point, w: &Point, tol: f64) -> Result<Check> {
        let d = |a: &Point, b: &Point| self.distance_sq(a, b);
        let lhs = d(x, z)? + d(y, w)?;
        let rhs = d(x, y)? + d(y, z)? + d(z, w)? + d(w, x)?;
        Ok(Check::new(lhs - rhs, tol))
    }

    fn mismatch2(&self, x: &Point, y: &Point) -> Error {
        Error::mismatch(alloc::format!(
            "{} and {} points used in {} space",
            x.tag(),
            y.tag(),
            self.tag()
        ))
    }
}

fn check_edge(t: &MetricTree, p: &TreePoint) -> Result<()> {
    if p.edge() >= t.edge_count() {
        return Err(Error::mismatch("tree point references an edge of another tree"));
    }
    Ok(())
}

impl Point {
    pub fn pair(first: Point, second: Point) -> Self {
        Point::Pair(Box::new(first), Box::new(second))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Point::Euclidean(_) => "euclidean",
            Point::Tree(_) => "metric-tree",
            Point::Disk(_) => "poincare-disk",
            Point::Pair(..) => "product",
        }
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Euclidean(v) => Some(v),
            _ => None,
        }
    }

    pub fn components(&self) -> Option<(&Point, &Point)> {
        match self {
            Point::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Euclidean(v) => v.iter().all(|c| c.is_finite()),
            Point::Tree(t) => t.offset().is_finite(),
            Point::Disk(d) => d.x().is_finite() && d.y().is_finite(),
            Point::Pair(a, b) => a.is_finite() && b.is_finite(),
        }
    }

    /// Bitwise equality of the payload. Stricter than `==` (which equates
    /// `0.0` and `-0.0`); a deterministic map sends bit-equal inputs to
    /// bit-equal outputs.
    pub fn bit_eq(&self, other: &Point) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }

    /// A total order on points, used for deterministic tie-breaking.
    pub fn total_cmp(&self, other: &Point) -> Ordering {
        fn rank(p: &Point) -> u8 {
            match p {
                Point::Euclidean(_) => 0,
                Point::Tree(_) => 1,
                Point::Disk(_) => 2,
                Point::Pair(..) => 3,
            }
        }
        match (self, other) {
            (Point::Euclidean(a), Point::Euclidean(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or_else(|| a.len().cmp(&b.len())),
            (Point::Tree(a), Point::Tree(b)) => a
                .edge()
                .cmp(&b.edge())
                .then(a.offset().total_cmp(&b.offset())),
            (Point::Disk(a), Point::Disk(b)) => a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())),
            (Point::Pair(a1, a2), Point::Pair(b1, b2)) => a1.total_cmp(b1).then_with(|| a2.total_cmp(b2)),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl From<TreePoint> for Point {
    fn from(p: TreePoint) -> Self {
        Point::Tree(p)
    }
}

impl From<DiskPoint> for Point {
    fn from(p: DiskPoint) -> Self {
        Point::Disk(p)
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::Euclidean(v)
    }
}
