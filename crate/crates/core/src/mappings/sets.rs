use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::euclid::{self, dot, norm};
use crate::geometry::{disk_project_segment, DiskPoint, Point, Space, SpaceKind, TreePoint};

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSetKind {
    /// `{x : ⟨normal, x⟩ ≤ offset}`.
    Halfspace { normal: Vec<f64>, offset: f64 },
    /// `anchor + span(basis)`; `orthonormal` spans the same directions.
    AffineSubspace {
        anchor: Vec<f64>,
        basis: Vec<Vec<f64>>,
        orthonormal: Vec<Vec<f64>>,
    },
    Ball { center: Vec<f64>, radius: f64 },
    TreeSegment { start: TreePoint, end: TreePoint },
    /// The subtree spanned by a connected set of vertices (sorted indices).
    Subtree { vertices: Vec<usize> },
    DiskSegment { start: DiskPoint, end: DiskPoint },
    /// Hyperbolic ball; `radius` is a hyperbolic length.
    DiskBall { center: DiskPoint, radius: f64 },
    ProductRectangle { first: Box<ConvexSet>, second: Box<ConvexSet> },
    Diagonal,
}

/// A nonempty closed geodesically convex subset of a [`Space`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexSet {
    space: Space,
    kind: ConvexSetKind,
}

fn euclid_dim(space: &Space) -> Result<usize> {
    match space.kind() {
        SpaceKind::Euclidean { dim } => Ok(*dim),
        _ => Err(Error::mismatch(alloc::format!("euclidean set in {} space", space.tag()))),
    }
}

fn check_vec(v: &[f64], dim: usize, what: &str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::mismatch(alloc::format!("{what} has dimension {}, expected {dim}", v.len())));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain(alloc::format!("{what} has non-finite entries")));
    }
    Ok(())
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(alloc::format!("radius {radius} must be positive and finite")));
    }
    Ok(())
}

impl ConvexSet {
    pub fn halfspace(space: &Space, normal: Vec<f64>, offset: f64) -> Result<Self> {
        let dim = euclid_dim(space)?;
        check_vec(&normal, dim, "halfspace normal")?;
        if norm(&normal) == 0.0 {
            return Err(Error::domain("halfspace normal must be nonzero"));
        }
        if !offset.is_finite() {
            return Err(Error::domain("halfspace offset must be finite"));
        }
        Ok(Self::raw(space, ConvexSetKind::Halfspace { normal, offset }))
    }

    pub fn affine_subspace(space: &Space, anchor: Vec<f64>, basis: Vec<Vec<f64>>) -> Result<Self> {
        let dim = euclid_dim(space)?;
        check_vec(&anchor, dim, "affine anchor")?;
        for b in &basis {
            check_vec(b, dim, "affine basis vector")?;
        }
        let orthonormal = euclid::orthonormalize(&basis)
            .ok_or_else(|| Error::domain("affine basis vectors are linearly dependent"))?;
        Ok(Self::raw(
            space,
            ConvexSetKind::AffineSubspace {
                anchor,
                basis,
                orthonormal,
            },
        ))
    }

    pub fn ball(space: &Space, center: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = euclid_dim(space)?;
        check_vec(&center, dim, "ball center")?;
        check_radius(radius)?;
        Ok(Self::raw(space, ConvexSetKind::Ball { center, radius }))
    }

    /// The geodesic segment `[start, end]` of a metric tree.
    pub fn tree_segment(space: &Space, start: &Point, end: &Point) -> Result<Self> {
        space.tree().ok_or_else(|| Error::mismatch("tree segment outside a metric tree"))?;
        space.validate(start)?;
        space.validate(end)?;
        let (Point::Tree(s), Point::Tree(e)) = (start, end) else {
            unreachable!("validated tree points")
        };
        Ok(Self::raw(space, ConvexSetKind::TreeSegment { start: *s, end: *e }))
    }

    /// The subtree spanned by `vertices`, which must induce a connected
    /// subgraph.
    pub fn subtree(space: &Space, vertices: &[usize]) -> Result<Self> {
        let tree = space.tree().ok_or_else(|| Error::mismatch("subtree outside a metric tree"))?;
        let mut vs: Vec<usize> = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if vs.is_empty() {
            return Err(Error::domain("subtree vertex set is empty"));
        }
        if let Some(&v) = vs.iter().find(|&&v| v >= tree.vertex_count()) {
            return Err(Error::domain(alloc::format!("vertex index {v} out of range")));
        }
        let mut member = vec![false; tree.vertex_count()];
        vs.iter().for_each(|&v| member[v] = true);
        let inner = (0..tree.edge_count())
            .filter(|&e| {
                let (u, v, _) = tree.edge(e);
                member[u] && member[v]
            })
            .count();
        // an induced subgraph of a tree is a forest; it is connected iff |E| = |V| - 1
        if inner + 1 != vs.len() {
            return Err(Error::domain("subtree vertex set does not induce a connected subgraph"));
        }
        Ok(Self::raw(space, ConvexSetKind::Subtree { vertices: vs }))
    }

    pub fn disk_segment(space: &Space, start: DiskPoint, end: DiskPoint) -> Result<Self> {
        if !matches!(space.kind(), SpaceKind::PoincareDisk) {
            return Err(Error::mismatch("disk segment outside the Poincaré disk"));
        }
        Ok(Self::raw(space, ConvexSetKind::DiskSegment { start, end }))
    }

    pub fn disk_ball(space: &Space, center: DiskPoint, radius: f64) -> Result<Self> {
        if !matches!(space.kind(), SpaceKind::PoincareDisk) {
            return Err(Error::mismatch("disk ball outside the Poincaré disk"));
        }
        check_radius(radius)?;
        // keep the whole ball inside the admissible region of the disk
        let reach = crate::math::atanh(crate::geometry::DISK_MAX_NORM) * 2.0;
        let from_origin = space.distance(&Point::Disk(DiskPoint::ORIGIN), &Point::Disk(center))?;
        if from_origin + radius >= reach {
            return Err(Error::domain("disk ball reaches the boundary of the admissible disk"));
        }
        Ok(Self::raw(space, ConvexSetKind::DiskBall { center, radius }))
    }

    /// `A × B` in a product space.
    pub fn product_rectangle(space: &Space, first: ConvexSet, second: ConvexSet) -> Result<Self> {
        let cs = space
            .as_product()
            .ok_or_else(|| Error::mismatch("product rectangle outside a product space"))?;
        if first.space() != cs.base() || second.space() != cs.base() {
            return Err(Error::mismatch("rectangle factors must live in the base space"));
        }
        Ok(Self::raw(
            space,
            ConvexSetKind::ProductRectangle {
                first: Box::new(first),
                second: Box::new(second),
            },
        ))
    }

    pub fn diagonal(space: &Space) -> Result<Self> {
        space
            .as_product()
            .ok_or_else(|| Error::mismatch("diagonal outside a product space"))?;
        Ok(Self::raw(space, ConvexSetKind::Diagonal))
    }

    fn raw(space: &Space, kind: ConvexSetKind) -> Self {
        ConvexSet {
            space: space.clone(),
            kind,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn kind(&self) -> &ConvexSetKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ConvexSetKind::Halfspace { .. } => "halfspace",
            ConvexSetKind::AffineSubspace { .. } => "affine-subspace",
            ConvexSetKind::Ball { .. } => "ball",
            ConvexSetKind::TreeSegment { .. } => "tree-segment",
            ConvexSetKind::Subtree { .. } => "subtree",
            ConvexSetKind::DiskSegment { .. } => "disk-geodesic-segment",
            ConvexSetKind::DiskBall { .. } => "disk-ball",
            ConvexSetKind::ProductRectangle { .. } => "product-rectangle",
            ConvexSetKind::Diagonal => "diagonal",
        }
    }

    /// Metric projection: the unique nearest point of the set.
    pub fn project(&self, x: &Point) -> Result<Point> {
        self.space.validate(x)?;
        self.project_unchecked(x)
    }

    pub(crate) fn project_unchecked(&self, x: &Point) -> Result<Point> {
        let space = &self.space;
        match (&self.kind, x) {
            (ConvexSetKind::Halfspace { normal, offset }, Point::Euclidean(v)) => {
                let excess = dot(normal, v) - offset;
                if excess <= 0.0 {
                    return Ok(x.clone());
                }
                let s = excess / dot(normal, normal);
                Ok(Point::Euclidean(v.iter().zip(normal).map(|(a, n)| a - s * n).collect()))
            }
            (ConvexSetKind::AffineSubspace { anchor, orthonormal, .. }, Point::Euclidean(v)) => {
                let rel = euclid::sub(v, anchor);
                let mut out = anchor.clone();
                for e in orthonormal {
                    let c = dot(&rel, e);
                    out.iter_mut().zip(e).for_each(|(o, ei)| *o += c * ei);
                }
                Ok(Point::Euclidean(out))
            }
            (ConvexSetKind::Ball { center, radius }, Point::Euclidean(v)) => {
                let d = euclid::distance(v, center);
                if d <= *radius {
                    return Ok(x.clone());
                }
                let s = radius / d;
                Ok(Point::Euclidean(center.iter().zip(v).map(|(c, a)| c + s * (a - c)).collect()))
            }
            (ConvexSetKind::TreeSegment { start, end }, Point::Tree(_)) => {
                let (p, q) = (Point::Tree(*start), Point::Tree(*end));
                let len = space.distance(&p, &q)?;
                if len == 0.0 {
                    return Ok(p);
                }
                // in a tree the gate of x on [p, q] sits at the Gromov product (x|q)_p
                let s = 0.5 * (space.distance(&p, x)? + len - space.distance(&q, x)?);
                space.interpolate(&p, &q, (s / len).clamp(0.0, 1.0))
            }
            (ConvexSetKind::Subtree { vertices }, Point::Tree(tp)) => {
                let tree = space.tree().expect("subtree lives in a tree");
                let (u, v, _) = tree.edge(tp.edge());
                let inside = match tree.vertex_at(tp) {
                    Some(w) => vertices.binary_search(&w).is_ok(),
                    None => vertices.binary_search(&u).is_ok() && vertices.binary_search(&v).is_ok(),
                };
                if inside {
                    return Ok(x.clone());
                }
                // outside the subtree the nearest point is the gate vertex
                let mut best = (f64::INFINITY, vertices[0]);
                for &w in vertices {
                    let d = tree.distance(tp, &tree.vertex_point(w));
                    if d < best.0 {
                        best = (d, w);
                    }
                }
                Ok(Point::Tree(tree.vertex_point(best.1)))
            }
            (ConvexSetKind::DiskSegment { start, end }, Point::Disk(d)) => {
                Ok(Point::Disk(disk_project_segment(start, end, d)?))
            }
            (ConvexSetKind::DiskBall { center, radius }, Point::Disk(_)) => {
                let c = Point::Disk(*center);
                let d = space.distance(&c, x)?;
                if d <= *radius {
                    return Ok(x.clone());
                }
                space.interpolate(&c, x, radius / d)
            }
            (ConvexSetKind::ProductRectangle { first, second }, Point::Pair(a, b)) => Ok(Point::pair(
                first.project_unchecked(a)?,
                second.project_unchecked(b)?,
            )),
            (ConvexSetKind::Diagonal, Point::Pair(..)) => {
                space.as_product().expect("diagonal lives in a product").project_q(x)
            }
            _ => Err(Error::mismatch(alloc::format!(
                "{} point projected onto a {} set",
                x.tag(),
                self.name()
            ))),
        }
    }

    /// Membership up to `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        self.space.validate(x)?;
        match (&self.kind, x) {
            (ConvexSetKind::Halfspace { normal, offset }, Point::Euclidean(v)) => {
                Ok(dot(normal, v) - offset <= tol * norm(normal))
            }
            (ConvexSetKind::Ball { center, radius }, Point::Euclidean(v)) => {
                Ok(euclid::distance(v, center) <= radius + tol)
            }
            (ConvexSetKind::DiskBall { center, radius }, Point::Disk(_)) => {
                Ok(self.space.distance(&Point::Disk(*center), x)? <= radius + tol)
            }
            (ConvexSetKind::TreeSegment { .. }, Point::Tree(_)) | (ConvexSetKind::DiskSegment { .. }, Point::Disk(_)) => {
                let (p, q) = start_end(&self.kind).expect("segment kinds");
                let excess =
                    self.space.distance(&p, x)? + self.space.distance(x, &q)? - self.space.distance(&p, &q)?;
                Ok(excess <= tol)
            }
            (ConvexSetKind::ProductRectangle { first, second }, Point::Pair(a, b)) => {
                Ok(first.contains(a, tol)? && second.contains(b, tol)?)
            }
            _ => Ok(self.space.distance(x, &self.project_unchecked(x)?)? <= tol),
        }
    }
}

fn start_end(kind: &ConvexSetKind) -> Option<(Point, Point)> {
    match kind {
        ConvexSetKind::TreeSegment { start, end } => Some((Point::Tree(*start), Point::Tree(*end))),
        ConvexSetKind::DiskSegment { start, end } => Some((Point::Disk(*start), Point::Disk(*end))),
        _ => None,
    }
}
