use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use core::f64::consts::TAU;

use crate::geometry::{disk_translate, DiskPoint, Point, Space};
use crate::mappings::{ConvexSet, ConvexSetKind};
use crate::math::{sqrt, tanh};

use super::{BestPairResult, PairMethod};

/// Sampling resolution and bounds for [`best_pair_bruteforce`].
///
/// Each set is sampled through a chart: coordinates for halfspaces, balls
/// and disk balls, coefficients along an orthonormal basis (relative to the
/// anchor) for affine subspaces, and arc length for segments. Halfspaces and
/// affine subspaces of positive dimension are unbounded and need a box in
/// chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    /// Target grid step `h`.
    pub step: f64,
    /// Points per chart axis on the coarsest level.
    pub points_per_axis: usize,
    pub first_box: Option<Vec<(f64, f64)>>,
    pub second_box: Option<Vec<(f64, f64)>>,
    /// Among pairs at (numerically) equal distance, prefer the one whose
    /// first point is nearest `anchor`.
    pub anchor: Option<Point>,
}

impl GridSpec {
    pub fn new(step: f64) -> Self {
        GridSpec {
            step,
            points_per_axis: 33,
            first_box: None,
            second_box: None,
            anchor: None,
        }
    }

    pub fn with_boxes(mut self, first: Option<Vec<(f64, f64)>>, second: Option<Vec<(f64, f64)>>) -> Self {
        self.first_box = first;
        self.second_box = second;
        self
    }

    pub fn with_anchor(mut self, anchor: Point) -> Self {
        self.anchor = Some(anchor);
        self
    }
}

enum Chart<'a> {
    /// A box of chart parameters.
    Cube {
        set: &'a ConvexSet,
        lo: Vec<f64>,
        hi: Vec<f64>,
        /// Per axis, a bound on the metric stretch of one unit of parameter.
        stretch: Vec<f64>,
        /// Angle axes, whose windows may wrap around.
        periodic: Vec<bool>,
    },
    /// Whole edges of a subtree, sampled by offset.
    Edges { set: &'a ConvexSet, edges: Vec<usize> },
    Single(Point),
}

struct Sample {
    params: Vec<f64>,
    point: Point,
}

fn to_box(b: &Option<Vec<(f64, f64)>>, dim: usize, what: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let b = b
        .as_ref()
        .ok_or_else(|| Error::domain(alloc::format!("{what} is unbounded; a grid box is required")))?;
    if b.len() != dim {
        return Err(Error::domain(alloc::format!("grid box has {} axes, expected {dim}", b.len())));
    }
    if b.iter().any(|&(l, h)| !(l.is_finite() && h.is_finite() && l <= h)) {
        return Err(Error::domain("grid box bounds must be finite with lo ≤ hi"));
    }
    Ok(b.iter().copied().unzip())
}

impl<'a> Chart<'a> {
    fn new(set: &'a ConvexSet, bx: &Option<Vec<(f64, f64)>>) -> Result<Self> {
        let flat = |lo: Vec<f64>, hi: Vec<f64>| {
            let k = lo.len();
            Ok(Chart::Cube {
                set,
                lo,
                hi,
                stretch: vec![1.0; k],
                periodic: vec![false; k],
            })
        };
        // radius and angle; the boundary circle is a grid line
        let polar = |radius: f64, angular: f64| {
            Ok(Chart::Cube {
                set,
                lo: vec![0.0, 0.0],
                hi: vec![radius, TAU],
                stretch: vec![1.0, angular],
                periodic: vec![false, true],
            })
        };
        match set.kind() {
            ConvexSetKind::Halfspace { normal, .. } => {
                let (lo, hi) = to_box(bx, normal.len(), "halfspace")?;
                flat(lo, hi)
            }
            ConvexSetKind::Ball { center, radius } => match bx {
                Some(_) => {
                    let (lo, hi) = to_box(bx, center.len(), "ball")?;
                    flat(lo, hi)
                }
                None if center.len() == 2 => polar(*radius, *radius),
                None => flat(
                    center.iter().map(|c| c - radius).collect(),
                    center.iter().map(|c| c + radius).collect(),
                ),
            },
            ConvexSetKind::AffineSubspace { anchor, orthonormal, .. } => {
                if orthonormal.is_empty() {
                    return Ok(Chart::Single(Point::Euclidean(anchor.clone())));
                }
                let (lo, hi) = to_box(bx, orthonormal.len(), "affine subspace")?;
                flat(lo, hi)
            }
            ConvexSetKind::TreeSegment { .. } | ConvexSetKind::DiskSegment { .. } => {
                let len = segment_length(set)?;
                flat(vec![0.0], vec![len])
            }
            ConvexSetKind::Subtree { vertices } => {
                let tree = set.space().tree().expect("subtree lives in a tree");
                if vertices.len() == 1 {
                    return Ok(Chart::Single(Point::Tree(tree.vertex_point(vertices[0]))));
                }
                let edges = (0..tree.edge_count())
                    .filter(|&e| {
                        let (u, v, _) = tree.edge(e);
                        vertices.binary_search(&u).is_ok() && vertices.binary_search(&v).is_ok()
                    })
                    .collect();
                Ok(Chart::Edges { set, edges })
            }
            // hyperbolic polar coordinates around the center: a circle of
            // radius ρ has circumference 2π sinh ρ
            ConvexSetKind::DiskBall { radius, .. } => polar(*radius, libm::sinh(*radius)),
            ConvexSetKind::ProductRectangle { .. } | ConvexSetKind::Diagonal => {
                Err(Error::domain(alloc::format!("brute force does not sample {} sets", set.name())))
            }
        }
    }

    /// Largest per-axis stretch.
    fn max_stretch(&self) -> f64 {
        match self {
            Chart::Cube { stretch, .. } => stretch.iter().copied().fold(0.0, f64::max),
            Chart::Edges { .. } => 1.0,
            Chart::Single(_) => 0.0,
        }
    }

    /// Metric distance from any chart point to the nearest grid point at
    /// the given step.
    fn resolution(&self, step: f64) -> f64 {
        let s2: f64 = match self {
            Chart::Cube { stretch, .. } => stretch.iter().map(|l| l * l).sum(),
            Chart::Edges { .. } => 1.0,
            Chart::Single(_) => 0.0,
        };
        0.5 * step * sqrt(s2)
    }

    fn extent(&self) -> f64 {
        match self {
            Chart::Cube { lo, hi, .. } => lo.iter().zip(hi).map(|(l, h)| h - l).fold(0.0, f64::max),
            Chart::Edges { set, edges } => {
                let tree = set.space().tree().expect("tree chart");
                edges.iter().map(|&e| tree.edge_length(e)).fold(0.0, f64::max)
            }
            Chart::Single(_) => 0.0,
        }
    }

    fn point(&self, params: &[f64]) -> Result<Option<Point>> {
        let Chart::Cube { set, .. } = self else {
            unreachable!("only cube charts map parameters")
        };
        let p = match set.kind() {
            ConvexSetKind::Halfspace { .. } => Point::Euclidean(params.to_vec()),
            ConvexSetKind::Ball { center, .. } => {
                if let Chart::Cube { periodic, .. } = self {
                    if periodic.iter().any(|&b| b) {
                        let (r, a) = (params[0], params[1]);
                        return Ok(Some(Point::Euclidean(vec![
                            center[0] + r * libm::cos(a),
                            center[1] + r * libm::sin(a),
                        ])));
                    }
                }
                Point::Euclidean(params.to_vec())
            }
            ConvexSetKind::AffineSubspace { anchor, orthonormal, .. } => {
                let mut v = anchor.clone();
                for (c, e) in params.iter().zip(orthonormal) {
                    v.iter_mut().zip(e).for_each(|(o, ei)| *o += c * ei);
                }
                return Ok(Some(Point::Euclidean(v)));
            }
            ConvexSetKind::TreeSegment { start, end } => {
                let len = segment_length(set)?;
                let t = if len == 0.0 { 0.0 } else { (params[0] / len).clamp(0.0, 1.0) };
                return set.space().interpolate(&Point::Tree(*start), &Point::Tree(*end), t).map(Some);
            }
            ConvexSetKind::DiskSegment { start, end } => {
                let len = segment_length(set)?;
                let t = if len == 0.0 { 0.0 } else { (params[0] / len).clamp(0.0, 1.0) };
                return set.space().interpolate(&Point::Disk(*start), &Point::Disk(*end), t).map(Some);
            }
            ConvexSetKind::DiskBall { center, .. } => {
                return Ok(Some(Point::Disk(disk_polar(center, params[0], params[1])?)));
            }
            _ => unreachable!("no cube chart for this set"),
        };
        Ok(set.contains(&p, 0.0)?.then_some(p))
    }

    /// Grid samples within `radius` of `center` (or everywhere when
    /// `center` is `None`) at the given step.
    fn samples(&self, center: Option<&Sample>, radius: f64, step: f64) -> Result<Vec<Sample>> {
        match self {
            Chart::Single(p) => Ok(vec![Sample {
                params: Vec::new(),
                point: p.clone(),
            }]),
            Chart::Cube { lo, hi, periodic, .. } => {
                let axes: Vec<Vec<f64>> = (0..lo.len())
                    .map(|i| {
                        let (l, h) = match center {
                            Some(c) if periodic[i] => (c.params[i] - radius, c.params[i] + radius),
                            Some(c) => ((c.params[i] - radius).max(lo[i]), (c.params[i] + radius).min(hi[i])),
                            None => (lo[i], hi[i]),
                        };
                        linspace(l, h, step)
                    })
                    .collect();
                let mut out = Vec::new();
                let mut idx = vec![0usize; axes.len()];
                loop {
                    let params: Vec<f64> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
                    if let Some(point) = self.point(&params)? {
                        out.push(Sample { params, point });
                    }
                    // odometer increment
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            return Ok(out);
                        }
                        idx[k] += 1;
                        if idx[k] < axes[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            }
            Chart::Edges { set, edges } => {
                let tree = set.space().tree().expect("tree chart");
                let mut out = Vec::new();
                for &e in edges {
                    for off in linspace(0.0, tree.edge_length(e), step) {
                        let p = Point::Tree(tree.point(e, off)?);
                        if let Some(c) = center {
                            if set.space().distance(&c.point, &p)? > radius {
                                continue;
                            }
                        }
                        out.push(Sample {
                            params: vec![e as f64, off],
                            point: p,
                        });
                    }
                }
                Ok(out)
            }
        }
    }
}

/// The point at hyperbolic distance `rho` from `c` in direction `angle`.
fn disk_polar(c: &DiskPoint, rho: f64, angle: f64) -> Result<DiskPoint> {
    let s = tanh(0.5 * rho);
    disk_translate(c, &DiskPoint::new(s * libm::cos(angle), s * libm::sin(angle))?)
}

fn segment_length(set: &ConvexSet) -> Result<f64> {
    let s = set.space();
    match set.kind() {
        ConvexSetKind::TreeSegment { start, end } => s.distance(&Point::Tree(*start), &Point::Tree(*end)),
        ConvexSetKind::DiskSegment { start, end } => s.distance(&Point::Disk(*start), &Point::Disk(*end)),
        _ => unreachable!("segment kinds only"),
    }
}

/// Evenly spaced values from `lo` to `hi` (both included) at spacing at
/// most `step`.
fn linspace(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let width = hi - lo;
    if width <= 0.0 {
        return vec![lo];
    }
    let n = libm::ceil(width / step) as usize;
    (0..=n).map(|i| if i == n { hi } else { lo + width * (i as f64 / n as f64) }).collect()
}

struct Best {
    ia: usize,
    ib: usize,
    dist: f64,
    anchor_dist: f64,
}

fn best_among(space: &Space, sa: &[Sample], sb: &[Sample], anchor: Option<&Point>) -> Result<Best> {
    let mut best: Option<Best> = None;
    for (ia, a) in sa.iter().enumerate() {
        let anchor_dist = match anchor {
            Some(p) => space.distance(p, &a.point)?,
            None => 0.0,
        };
        for (ib, b) in sb.iter().enumerate() {
            let d = space.distance(&a.point, &b.point)?;
            let better = match &best {
                None => true,
                Some(cur) => {
                    let tie = 1e-12 * (1.0 + cur.dist);
                    d < cur.dist - tie || (d <= cur.dist + tie && anchor_dist < cur.anchor_dist)
                }
            };
            if better {
                best = Some(Best { ia, ib, dist: d, anchor_dist });
            }
        }
    }
    best.ok_or_else(|| Error::domain("brute-force grid is empty"))
}

/// Minimizes `d(a, b)` over grid samples of `A × B`.
///
/// The search runs coarse to fine: a grid with `points_per_axis` points
/// along the longest chart axis, then repeated refinement by a factor 8 in a
/// window of two coarse steps around the current best pair, until the step
/// is at most `grid.step`. The reported `error_bar` is the distance bound
/// implied by the final step.
pub fn best_pair_bruteforce(a: &ConvexSet, b: &ConvexSet, grid: &GridSpec) -> Result<BestPairResult> {
    if a.space() != b.space() {
        return Err(Error::mismatch("sets live in different spaces"));
    }
    if !(grid.step > 0.0 && grid.step.is_finite()) {
        return Err(Error::domain("grid step must be positive"));
    }
    if grid.points_per_axis < 2 {
        return Err(Error::domain("grid needs at least two points per axis"));
    }
    let space = a.space();
    if let Some(p) = &grid.anchor {
        space.validate(p)?;
    }
    let (ca, cb) = (Chart::new(a, &grid.first_box)?, Chart::new(b, &grid.second_box)?);
    // finish once one chart step moves a point by at most `grid.step`
    let target = grid.step / ca.max_stretch().max(cb.max_stretch()).max(1e-300);
    let extent = ca.extent().max(cb.extent());
    let mut step = if extent > 0.0 {
        (extent / (grid.points_per_axis - 1) as f64).max(target.min(extent))
    } else {
        target
    };
    let mut sa = ca.samples(None, 0.0, step)?;
    let mut sb = cb.samples(None, 0.0, step)?;
    let mut best = best_among(space, &sa, &sb, grid.anchor.as_ref())?;
    while step > target {
        let radius = 2.0 * step;
        step = (step / 8.0).max(target);
        let (ka, kb) = (sa.swap_remove(best.ia), sb.swap_remove(best.ib));
        sa = ca.samples(Some(&ka), radius, step)?;
        sb = cb.samples(Some(&kb), radius, step)?;
        sa.push(ka);
        sb.push(kb);
        best = best_among(space, &sa, &sb, grid.anchor.as_ref())?;
    }
    let error_bar = ca.resolution(step) + cb.resolution(step);
    let (pa, pb) = (sa.swap_remove(best.ia).point, sb.swap_remove(best.ib).point);
    Ok(BestPairResult {
        a: pa,
        b: pb,
        dist: best.dist,
        method: PairMethod::BruteForceGrid,
        error_bar,
    })
}
