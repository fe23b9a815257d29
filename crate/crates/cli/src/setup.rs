//! Turns configuration documents into spaces, sets, points and mappings.

use cat0_core::geometry::DiskPoint;
use cat0_core::{ConvexSet, Error, Mapping, MetricTree, Point, Result, Space};
use serde_json::Value;

use crate::config::{InstanceSpec, MappingSpec, Mode, ProjectionTarget, SetSpec, SpaceSpec, TreePointSpec};

pub fn space(spec: &SpaceSpec) -> Result<Space> {
    match spec {
        SpaceSpec::Euclidean { dim } => Space::euclidean(*dim),
        SpaceSpec::MetricTree { vertices, edges } => {
            let edges = edges.iter().map(|(u, v, l)| (u.as_str(), v.as_str(), *l));
            Ok(Space::metric_tree(MetricTree::new(vertices.iter().cloned(), edges)?))
        }
        SpaceSpec::PoincareDisk {} => Ok(Space::poincare_disk()),
        SpaceSpec::Product { base, lambda } => Space::product(space(base)?, *lambda),
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Domain(format!("malformed {what} {v}: {e}")))
}

fn tree_vertex(tree: &MetricTree, label: &str) -> Result<usize> {
    tree.vertex_index(label)
        .ok_or_else(|| Error::Domain(format!("unknown tree vertex `{label}`")))
}

/// Reads a point payload of `space`.
pub fn point(space: &Space, v: &Value) -> Result<Point> {
    let p = match space.kind() {
        cat0_core::SpaceKind::Euclidean { .. } => Point::Euclidean(from_value(v, "euclidean point")?),
        cat0_core::SpaceKind::PoincareDisk => {
            let [x, y]: [f64; 2] = from_value(v, "disk point")?;
            Point::Disk(DiskPoint::new(x, y)?)
        }
        cat0_core::SpaceKind::MetricTree(tree) => match from_value::<TreePointSpec>(v, "tree point")? {
            TreePointSpec::Vertex { vertex } => Point::Tree(tree.vertex_point(tree_vertex(tree, &vertex)?)),
            TreePointSpec::OnEdge { edge: (from, to), offset } => {
                let (a, b) = (tree_vertex(tree, &from)?, tree_vertex(tree, &to)?);
                let e = (0..tree.edge_count())
                    .find(|&e| {
                        let (u, w, _) = tree.edge(e);
                        (u, w) == (a, b) || (u, w) == (b, a)
                    })
                    .ok_or_else(|| Error::Domain(format!("no edge between `{from}` and `{to}`")))?;
                let (u, _, len) = tree.edge(e);
                let off = if u == a { offset } else { len - offset };
                Point::Tree(tree.point(e, off)?)
            }
        },
        cat0_core::SpaceKind::Product(cs) => {
            #[derive(serde::Deserialize)]
            #[serde(deny_unknown_fields)]
            struct PairDoc {
                first: Value,
                second: Value,
            }
            let doc: PairDoc = from_value(v, "product point")?;
            Point::pair(point(cs.base(), &doc.first)?, point(cs.base(), &doc.second)?)
        }
    };
    space.validate(&p)?;
    Ok(p)
}

/// Writes a point back in the payload format accepted by [`point`].
pub fn point_json(space: &Space, p: &Point) -> Value {
    match (space.kind(), p) {
        (cat0_core::SpaceKind::MetricTree(tree), Point::Tree(tp)) => {
            if let Some(v) = tree.vertex_at(tp) {
                return serde_json::json!({ "vertex": tree.label(v) });
            }
            let (u, w, _) = tree.edge(tp.edge());
            serde_json::json!({ "edge": [tree.label(u), tree.label(w)], "offset": tp.offset() })
        }
        (cat0_core::SpaceKind::Product(cs), Point::Pair(a, b)) => {
            serde_json::json!({ "first": point_json(cs.base(), a), "second": point_json(cs.base(), b) })
        }
        (_, Point::Euclidean(v)) => serde_json::json!(v),
        (_, Point::Disk(d)) => serde_json::json!(d.coords()),
        _ => Value::Null,
    }
}

pub fn set(space: &Space, spec: &SetSpec) -> Result<ConvexSet> {
    match spec {
        SetSpec::Halfspace { normal, offset } => ConvexSet::halfspace(space, normal.clone(), *offset),
        SetSpec::Ball { center, radius } => ConvexSet::ball(space, center.clone(), *radius),
        SetSpec::AffineSubspace { anchor, basis } => ConvexSet::affine_subspace(space, anchor.clone(), basis.clone()),
        SetSpec::TreeSegment { start, end } => ConvexSet::tree_segment(space, &point(space, start)?, &point(space, end)?),
        SetSpec::Subtree { vertices } => {
            let tree = space
                .tree()
                .ok_or_else(|| Error::SpaceMismatch("subtree outside a metric tree".into()))?;
            let idx = vertices
                .iter()
                .map(|l| tree_vertex(tree, l))
                .collect::<Result<Vec<_>>>()?;
            ConvexSet::subtree(space, &idx)
        }
        SetSpec::DiskSegment { start, end } => ConvexSet::disk_segment(
            space,
            DiskPoint::new(start[0], start[1])?,
            DiskPoint::new(end[0], end[1])?,
        ),
        SetSpec::DiskBall { center, radius } => {
            ConvexSet::disk_ball(space, DiskPoint::new(center[0], center[1])?, *radius)
        }
        SetSpec::Rectangle { first, second } => {
            let cs = space
                .as_product()
                .ok_or_else(|| Error::SpaceMismatch("rectangle outside a product space".into()))?;
            ConvexSet::product_rectangle(space, set(cs.base(), first)?, set(cs.base(), second)?)
        }
        SetSpec::Diagonal {} => ConvexSet::diagonal(space),
    }
}

pub fn mapping(space: &Space, spec: &MappingSpec, a: &ConvexSet, b: &ConvexSet) -> Result<Mapping> {
    match spec {
        MappingSpec::Identity {} => Ok(Mapping::identity(space)),
        MappingSpec::Constant { point: p } => Mapping::constant(space, point(space, p)?),
        MappingSpec::Projection(target) => Ok(Mapping::projection(match target {
            ProjectionTarget::Named(n) if n == "A" => a.clone(),
            ProjectionTarget::Named(n) if n == "B" => b.clone(),
            ProjectionTarget::Named(n) => return Err(Error::Domain(format!("unknown set `{n}` (use A or B)"))),
            ProjectionTarget::Inline(s) => set(space, s)?,
        })),
        MappingSpec::Compose { first, then } => {
            Mapping::compose(mapping(space, first, a, b)?, mapping(space, then, a, b)?)
        }
        MappingSpec::ConvexCombination { lambda, left, right } => {
            Mapping::convex_combination(mapping(space, left, a, b)?, mapping(space, right, a, b)?, *lambda)
        }
    }
}

/// Everything an instance needs, built and validated.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub space: Space,
    pub lambda: f64,
    pub mode: Mode,
    pub a: ConvexSet,
    pub b: ConvexSet,
    /// The map iterated on `space`.
    pub map: Mapping,
    /// `Q ∘ U` for `U = P_A × P_B`.
    pub reduction: Mapping,
    pub start: Point,
    pub fixed_point: Option<Point>,
    pub best_pair: Option<(Point, Point)>,
}

pub fn instance(spec: &InstanceSpec) -> Result<Instance> {
    let space = space(&spec.space)?;
    let a = set(&space, &spec.sets.a)?;
    let b = set(&space, &spec.sets.b)?;
    let map = match &spec.mapping {
        Some(m) => mapping(&space, m, &a, &b)?,
        None => match spec.mode {
            Mode::Averaged | Mode::ProductReduction => Mapping::averaged_projections(a.clone(), b.clone(), spec.lambda)?,
            Mode::Composed => Mapping::compose(Mapping::projection(b.clone()), Mapping::projection(a.clone()))?,
        },
    };
    let reduction = Mapping::product_reduction(Mapping::projection(a.clone()), Mapping::projection(b.clone()), spec.lambda)?;
    let start = point(&space, &spec.start)?;
    let fixed_point = spec.fixed_point.as_ref().map(|v| point(&space, v)).transpose()?;
    let best_pair = match &spec.best_pair {
        Some(p) => {
            let (pa, pb) = (point(&space, &p.a)?, point(&space, &p.b)?);
            if !a.contains(&pa, 1e-9)? || !b.contains(&pb, 1e-9)? {
                return Err(Error::Domain("configured best pair is not in A × B".into()));
            }
            Some((pa, pb))
        }
        None => None,
    };
    Ok(Instance {
        name: spec.name.clone(),
        space,
        lambda: spec.lambda,
        mode: spec.mode,
        a,
        b,
        map,
        reduction,
        start,
        fixed_point,
        best_pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn tripod() -> Space {
        space(&serde_json::from_value(json!({"metric-tree": {"vertices": ["O", "A", "B", "C"],
            "edges": [["O", "A", 2.0], ["O", "B", 2.0], ["O", "C", 2.0]]}}))
        .unwrap())
        .unwrap()
    }

    #[test]
    fn tree_points_round_trip() {
        let s = tripod();
        for v in [json!({"vertex": "O"}), json!({"edge": ["O", "B"], "offset": 0.5}), json!({"vertex": "C"})] {
            let p = point(&s, &v).unwrap();
            assert_eq!(point(&s, &point_json(&s, &p)).unwrap(), p);
        }
        let reversed = point(&s, &json!({"edge": ["A", "O"], "offset": 0.5})).unwrap();
        let forward = point(&s, &json!({"edge": ["O", "A"], "offset": 1.5})).unwrap();
        assert_eq!(reversed, forward);
    }

    #[test]
    fn rejects_unknown_vertices_and_bad_points() {
        let s = tripod();
        assert!(point(&s, &json!({"vertex": "Z"})).is_err());
        assert!(point(&Space::poincare_disk(), &json!([1.0, 0.0])).is_err());
        assert!(point(&Space::euclidean(2).unwrap(), &json!([1.0])).is_err());
    }

    #[test]
    fn product_points() {
        let s = Space::product(Space::euclidean(1).unwrap(), 0.5).unwrap();
        let p = point(&s, &json!({"first": [1.0], "second": [2.0]})).unwrap();
        assert_eq!(point_json(&s, &p), json!({"first": [1.0], "second": [2.0]}));
    }
}
