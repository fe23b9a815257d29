use cat0_core::analysis::check_delta_limit;
use cat0_core::iteration::{IterationTrace, Picard};
use cat0_core::{Mapping, Point, Result};
use serde_json::{json, Value};

use super::derive::{derive_targets, fixed_point_of};
use super::Context;
use crate::report::{Files, Outcome};
use crate::setup::{point_json, Instance};

/// `n,residual,dist_to_p,aux_dist`, one row per iterate. Missing values are
/// left empty.
pub fn trace_csv(trace: &IterationTrace) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "residual", "dist_to_p", "aux_dist"]).expect("in-memory write");
    let cell = |v: Option<&f64>| v.map_or_else(String::new, f64::to_string);
    for n in 0..trace.iterates().len() {
        w.write_record([
            n.to_string(),
            cell(trace.residuals().get(n)),
            cell(trace.to_fixed_point().and_then(|d| d.get(n))),
            cell(trace.aux().and_then(|d| d.get(n))),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Largest increase `d(xₙ₊₁, p) - d(xₙ, p)`; nonpositive for a Fejér
/// monotone trace.
pub fn fejer_violation(dists: &[f64]) -> f64 {
    dists.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

struct ReductionCheck {
    steps: usize,
    /// Largest `max(d(u_n, x_n), d(v_n, x_n)) / n` where `(u_n, v_n)` is the
    /// n-th iterate of `Q ∘ U` from `(x₀, x₀)`.
    worst_scaled_deviation: f64,
    worst_deviation: f64,
    /// Largest `|d_λ(z_n, z_{n+1}) - d(x_n, x_{n+1})|`.
    residual_transfer: f64,
    pass: bool,
}

/// Runs the averaged iteration and the product reduction side by side.
fn check_reduction(inst: &Instance, steps: usize, tol: f64) -> Result<ReductionCheck> {
    let avg = Mapping::averaged_projections(inst.a.clone(), inst.b.clone(), inst.lambda)?;
    let product = inst.reduction.space();
    let cs = product.as_product().expect("reduction acts on the product");
    let direct = Picard::new(&avg, inst.start.clone()).steps(steps).run()?;
    let lifted = Picard::new(&inst.reduction, cs.embed_diagonal(&inst.start)?).steps(steps).run()?;
    let (xs, zs) = (direct.iterates(), lifted.iterates());
    let mut worst_scaled_deviation = 0.0f64;
    let mut worst_deviation = 0.0f64;
    let mut pass = true;
    for n in 0..=steps {
        // Both runs stop once stationary; later iterates equal the last one.
        let x = &xs[n.min(xs.len() - 1)];
        let (u, v) = zs[n.min(zs.len() - 1)].components().expect("pair");
        let dev = inst.space.distance(u, x)?.max(inst.space.distance(v, x)?);
        worst_deviation = worst_deviation.max(dev);
        if n > 0 {
            worst_scaled_deviation = worst_scaled_deviation.max(dev / n as f64);
        }
        pass &= dev <= tol * n as f64;
    }
    let mut residual_transfer = 0.0f64;
    for n in 0..steps {
        let r = direct.residuals().get(n).copied().unwrap_or(0.0);
        let rz = lifted.residuals().get(n).copied().unwrap_or(0.0);
        residual_transfer = residual_transfer.max((r - rz).abs());
    }
    pass &= residual_transfer <= tol;
    Ok(ReductionCheck {
        steps,
        worst_scaled_deviation,
        worst_deviation,
        residual_transfer,
        pass,
    })
}

pub fn run_instance(inst: &Instance, ctx: Context<'_>) -> Result<(Outcome, Value, Files)> {
    let spec = ctx.spec;
    let tol = ctx.config.tolerances;
    let targets = derive_targets(inst, spec)?;
    let steps = spec.n_max.max(spec.reduction_steps);
    let p = targets.fixed_point.as_ref();
    let mut picard = Picard::new(&inst.map, inst.start.clone()).steps(steps).aux_sets(&inst.a, &inst.b);
    if let Some(p) = p {
        picard = picard.reference(p);
    }
    let trace = picard.run()?;
    let reduction = check_reduction(inst, spec.reduction_steps, tol.reduction)?;
    let mut outcome = Outcome::from_pass(reduction.pass);

    let fejer = trace.to_fixed_point().map(|d| {
        let v = fejer_violation(d);
        json!({ "max_increase": v.max(0.0), "tolerance": tol.fejer, "pass": v <= tol.fejer })
    });
    if let Some(f) = &fejer {
        outcome = outcome.and(Outcome::from_pass(f["pass"] == true));
    }

    // The Δ-limit claim comes from the brute-force pair when there is one.
    let claimed = match (&inst.fixed_point, &targets.brute_force) {
        (None, Some(bf)) if spec.mapping.is_none() => Some(fixed_point_of(inst, bf)?),
        _ => targets.fixed_point.clone(),
    };
    let delta = match &claimed {
        Some(c) => {
            let v = check_delta_limit(&inst.space, &trace, c, tol.delta)?;
            outcome = outcome.and(Outcome::from_pass(v.pass));
            json!({
                "claimed": point_json(&inst.space, c),
                "tolerance": tol.delta,
                "pass": v.pass,
                "final_distance": v.final_distance,
                "window_max_distance": v.window_max_distance,
                "center": point_json(&inst.space, &v.center.center),
                "center_radius": v.center.radius,
                "center_offset": v.center_offset,
                "tail_start": v.center.tail_start,
                "candidates": v.center.candidate_count,
                "diverging": v.diverging,
            })
        }
        None => {
            outcome = outcome.and(Outcome::Inconclusive);
            Value::Null
        }
    };

    let res = trace.residuals();
    let last: &Point = trace.last();
    let body = json!({
        "targets": targets.to_json(inst),
        "trace": {
            "steps": trace.steps(),
            "stationary_from": trace.stationary_from(),
            "first_residual": res.first(),
            "last_residual": res.last(),
            "first_n_below_1e-8": res.iter().position(|&r| r < 1e-8),
            "last_iterate": point_json(&inst.space, last),
            "csv": format!("traces/{}.csv", inst.name),
        },
        "reduction": {
            "steps": reduction.steps,
            "tolerance_per_step": tol.reduction,
            "worst_deviation": reduction.worst_deviation,
            "worst_scaled_deviation": reduction.worst_scaled_deviation,
            "residual_transfer": reduction.residual_transfer,
            "pass": reduction.pass,
        },
        "fejer": fejer,
        "delta_limit": delta,
    });
    let mut files = Files::new();
    files.insert(format!("traces/{}.csv", inst.name), trace_csv(&trace));
    Ok((outcome, body, files))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cat0_core::iteration::picard;
    use cat0_core::Space;

    #[test]
    fn csv_leaves_missing_cells_empty() {
        let s = Space::euclidean(1).unwrap();
        let t = picard(&Mapping::identity(&s), Point::Euclidean(vec![1.5]), 3, 0.0).unwrap();
        let text = String::from_utf8(trace_csv(&t)).unwrap();
        assert_eq!(text, "n,residual,dist_to_p,aux_dist\n0,0,,\n1,,,\n");
    }

    #[test]
    fn fejer_increase() {
        assert_eq!(fejer_violation(&[3.0, 2.0, 2.5, 1.0]), 0.5);
        assert!(fejer_violation(&[3.0, 2.0, 1.0]) < 0.0);
    }
}
