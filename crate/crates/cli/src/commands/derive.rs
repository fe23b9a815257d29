//! Best pairs and fixed points that the run and certify commands compare
//! against.

use cat0_core::analysis::{alternating_projections, best_pair_bruteforce, BestPairResult, GridSpec, PairMethod};
use cat0_core::{Error, Point, Result};
use serde_json::{json, Value};

use crate::config::{InstanceSpec, Mode};
use crate::setup::{point_json, Instance};

/// Stopping tolerance of the alternating-projection estimate.
pub const ALTERNATING_TOL: f64 = 1e-10;

pub struct Targets {
    /// The pair used downstream: configured, else brute force, else
    /// alternating projections.
    pub pair: Option<BestPairResult>,
    pub brute_force: Option<BestPairResult>,
    pub alternating: Option<BestPairResult>,
    /// Why an oracle produced nothing.
    pub skipped: Vec<(&'static str, String)>,
    pub fixed_point: Option<Point>,
    pub fixed_point_source: &'static str,
}

fn grid_of(inst: &Instance, spec: &InstanceSpec) -> GridSpec {
    let mut g = GridSpec::new(1e-3);
    if let Some(doc) = &spec.grid {
        g.step = doc.step;
        if let Some(n) = doc.points_per_axis {
            g.points_per_axis = n;
        }
        g.first_box = doc.first_box.clone();
        g.second_box = doc.second_box.clone();
        if doc.anchor_at_start {
            g.anchor = Some(inst.start.clone());
        }
    }
    g
}

pub fn derive_targets(inst: &Instance, spec: &InstanceSpec) -> Result<Targets> {
    let mut skipped = Vec::new();
    let alternating = match alternating_projections(&inst.a, &inst.b, ALTERNATING_TOL) {
        Ok(r) => Some(r),
        Err(e @ Error::Inconclusive { .. }) => {
            skipped.push(("alternating-projections", e.to_string()));
            None
        }
        Err(e) => return Err(e),
    };
    let brute_force = match best_pair_bruteforce(&inst.a, &inst.b, &grid_of(inst, spec)) {
        Ok(r) => Some(r),
        Err(e @ Error::Domain(_)) => {
            skipped.push(("brute-force-grid", e.to_string()));
            None
        }
        Err(e) => return Err(e),
    };
    let configured = match &inst.best_pair {
        Some((a, b)) => Some(BestPairResult {
            dist: inst.space.distance(a, b)?,
            a: a.clone(),
            b: b.clone(),
            method: PairMethod::ClosedForm,
            error_bar: 0.0,
        }),
        None => None,
    };
    let pair = configured.or_else(|| brute_force.clone()).or_else(|| alternating.clone());
    let (fixed_point, fixed_point_source) = match (&inst.fixed_point, &pair) {
        (Some(p), _) => (Some(p.clone()), "configured"),
        (None, Some(pr)) if spec.mapping.is_none() => (Some(fixed_point_of(inst, pr)?), "best-pair"),
        _ => (None, "unknown"),
    };
    Ok(Targets {
        pair,
        brute_force,
        alternating,
        skipped,
        fixed_point,
        fixed_point_source,
    })
}

/// The fixed point of the instance's default map determined by a best pair:
/// `(1-λ)a + λb` for averaged projections, `a` for `P_A ∘ P_B`.
pub fn fixed_point_of(inst: &Instance, pair: &BestPairResult) -> Result<Point> {
    match inst.mode {
        Mode::Averaged | Mode::ProductReduction => inst.space.interpolate(&pair.a, &pair.b, inst.lambda),
        Mode::Composed => Ok(pair.a.clone()),
    }
}

pub fn pair_json(inst: &Instance, r: &BestPairResult) -> Value {
    json!({
        "a": point_json(&inst.space, &r.a),
        "b": point_json(&inst.space, &r.b),
        "dist": r.dist,
        "method": r.method.as_str(),
        "error_bar": r.error_bar,
    })
}

impl Targets {
    pub fn to_json(&self, inst: &Instance) -> Value {
        json!({
            "best_pair": self.pair.as_ref().map(|r| pair_json(inst, r)),
            "brute_force": self.brute_force.as_ref().map(|r| pair_json(inst, r)),
            "alternating_projections": self.alternating.as_ref().map(|r| pair_json(inst, r)),
            "skipped": self.skipped.iter().map(|(k, why)| json!({"oracle": k, "reason": why})).collect::<Vec<_>>(),
            "fixed_point": self.fixed_point.as_ref().map(|p| point_json(&inst.space, p)),
            "fixed_point_source": self.fixed_point_source,
        })
    }
}
