use cat0_core::iteration::{
    certify_asymptotic_regularity, certify_best_approx_rate, certify_comp_proj_rate, certify_values, rate_avg_proj,
    rate_comp_proj, rate_phi_b, BestApproxParams, CompProjParams, IterationTrace, Picard, RateCertificate, Verdict,
    AUX_SLACK, RESIDUAL_SLACK,
};
use cat0_core::{Lambda, Point, Result};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::derive::{derive_targets, ALTERNATING_TOL};
use super::Context;
use crate::config::Mode;
use crate::report::{Files, Outcome};
use crate::setup::Instance;

/// Rates need strictly positive data; a computed zero (start already at the
/// fixed point) is replaced by the smallest positive double.
fn positive(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        f64::MIN_POSITIVE
    }
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Pass => Outcome::Pass,
        Verdict::Fail => Outcome::Fail,
        Verdict::Inconclusive | Verdict::HypothesisUnsatisfied => Outcome::Inconclusive,
    }
}

fn certificate_json(rate: &str, c: &RateCertificate) -> Value {
    json!({
        "rate": rate,
        "epsilon": c.epsilon,
        "bound_n": c.bound_n.as_ref().map(|b| b.to_string()),
        "observed_first_n": c.observed_first_n,
        "pass": c.pass(),
        "verdict": c.verdict.as_str(),
        "threshold": c.threshold,
        "worst_after_bound": c.worst_after_bound,
        "horizon": c.horizon,
        "complete": c.complete,
    })
}

/// Trace length: the largest bound, clamped to `[n_max, max_steps]`.
fn horizon(bounds: impl IntoIterator<Item = Result<num_bigint::BigUint>>, n_max: usize, max_steps: usize) -> usize {
    bounds
        .into_iter()
        .map(|b| b.ok().and_then(|b| b.to_usize()).map_or(max_steps, |b| b.min(max_steps)))
        .fold(n_max, usize::max)
}

struct BestApprox {
    params: BestApproxParams,
    eps_grid: Vec<f64>,
}

pub fn certify_instance(inst: &Instance, ctx: Context<'_>) -> Result<(Outcome, Value, Files)> {
    let spec = ctx.spec;
    let targets = derive_targets(inst, spec)?;
    let space = &inst.space;
    let x0 = &inst.start;
    let p = targets.fixed_point.as_ref();
    let r = targets.pair.as_ref().map(|pr| pr.dist);
    let mut skipped: Vec<String> = targets.skipped.iter().map(|(k, why)| format!("{k}: {why}")).collect();

    let b_phi = match (spec.b, p) {
        (Some(b), _) => Some(b),
        (None, Some(p)) => Some(positive(space.distance(x0, p)?)),
        (None, None) => {
            skipped.push("asymptotic regularity: no fixed point and no configured b".into());
            None
        }
    };
    let default_map = spec.mapping.is_none();
    let best_approx = match (&spec.best_approx, inst.mode, default_map) {
        (Some(ba), Mode::Averaged | Mode::ProductReduction, true) => match (ba.r.or(r), p) {
            (Some(r), Some(p)) => {
                let g = space.distance(&inst.a.project(x0)?, &inst.b.project(x0)?)?;
                Some(BestApprox {
                    params: BestApproxParams {
                        m: ba.m.unwrap_or(positive(space.distance(x0, p)?)),
                        b: ba.b.unwrap_or(positive(g * g)),
                        r,
                        lambda: Lambda::new(inst.lambda)?,
                    },
                    eps_grid: ba.eps_grid.clone(),
                })
            }
            _ => {
                skipped.push("best approximation: no best pair".into());
                None
            }
        },
        (Some(_), _, _) => {
            skipped.push("best approximation: only for averaged projections".into());
            None
        }
        _ => None,
    };
    let comp = match (inst.mode, default_map, p, r) {
        (Mode::Composed, true, Some(p), Some(r)) => {
            let x1 = inst.map.evaluate(x0)?;
            Some(CompProjParams {
                m: positive(space.distance(x0, p)?),
                b: positive(space.distance_sq(&x1, &inst.b.project(x0)?)?),
                q: r * r,
            })
        }
        (Mode::Composed, true, _, _) => {
            skipped.push("composed projections: no best pair".into());
            None
        }
        _ => None,
    };

    let mut bounds = Vec::new();
    if let Some(b) = b_phi {
        bounds.extend(spec.eps_grid.iter().map(|&e| rate_phi_b(b, e)));
    }
    if let Some(ba) = &best_approx {
        let p = &ba.params;
        bounds.extend(ba.eps_grid.iter().map(|&e| rate_avg_proj(p.m, p.b, e, inst.lambda)));
    }
    if let Some(c) = &comp {
        bounds.extend(spec.eps_grid.iter().map(|&e| rate_comp_proj(c.m, c.b, e)));
    }
    let n = horizon(bounds, spec.n_max, spec.max_steps);

    let mut certs: Vec<(&'static str, RateCertificate)> = Vec::new();
    if inst.mode == Mode::ProductReduction {
        let cs = inst.reduction.space().as_product().expect("product").clone();
        let mut picard = Picard::new(&inst.reduction, cs.embed_diagonal(x0)?).steps(n);
        let pp = p.map(|p| cs.embed_diagonal(p)).transpose()?;
        if let Some(pp) = &pp {
            picard = picard.reference(pp);
        }
        let trace = picard.run()?;
        if let Some(b) = b_phi {
            certs.extend(certify_asymptotic_regularity(&trace, b, &spec.eps_grid)?.into_iter().map(|c| ("phi_b", c)));
        }
        if let Some(ba) = &best_approx {
            certs.extend(reduced_best_approx(inst, &trace, ba)?.into_iter().map(|c| ("avg_proj", c)));
        }
    } else {
        let mut picard = Picard::new(&inst.map, x0.clone()).steps(n).aux_sets(&inst.a, &inst.b);
        if let Some(p) = p {
            picard = picard.reference(p);
        }
        let trace = picard.run()?;
        if let Some(b) = b_phi {
            certs.extend(certify_asymptotic_regularity(&trace, b, &spec.eps_grid)?.into_iter().map(|c| ("phi_b", c)));
        }
        if let Some(ba) = &best_approx {
            certs.extend(certify_best_approx_rate(&trace, &ba.params, &ba.eps_grid)?.into_iter().map(|c| ("avg_proj", c)));
        }
        if let Some(c) = &comp {
            certs.extend(certify_comp_proj_rate(&trace, &inst.b, c, &spec.eps_grid)?.into_iter().map(|x| ("comp_proj", x)));
        }
    }

    let mut outcome = Outcome::all(certs.iter().map(|(_, c)| verdict_outcome(c.verdict)));
    if certs.is_empty() {
        outcome = Outcome::Inconclusive;
    }
    let q = match r {
        Some(r) => {
            let product = cat0_core::Space::product(space.clone(), inst.lambda)?;
            let cs = product.as_product().expect("product");
            let q = cs.lambda().weight() * r * r;
            let q_alt = cs.product_gap_q(&inst.a, &inst.b, ALTERNATING_TOL).ok();
            json!({ "q": q, "q_alternating": q_alt, "difference": q_alt.map(|a| (a - q).abs()) })
        }
        None => Value::Null,
    };
    let list: Vec<Value> = certs.iter().map(|(rate, c)| certificate_json(rate, c)).collect();
    let mut text = serde_json::to_string_pretty(&list).expect("serializable");
    text.push('\n');
    let mut files = Files::new();
    files.insert(format!("certificates/{}.json", inst.name), text.into_bytes());
    let body = json!({
        "targets": targets.to_json(inst),
        "horizon": n,
        "parameters": {
            "b": b_phi,
            "best_approx": best_approx.as_ref().map(|ba| json!({
                "M": ba.params.m, "b": ba.params.b, "r": ba.params.r, "lambda": inst.lambda,
            })),
            "composed": comp.as_ref().map(|c| json!({ "M": c.m, "b": c.b, "q": c.q })),
        },
        "gap": q,
        "slack": { "residual": RESIDUAL_SLACK, "aux": AUX_SLACK },
        "skipped": skipped,
        "certificates": list,
    });
    Ok((outcome, body, files))
}

/// Best-approximation certificates on a `Q ∘ U` trace, read through the
/// first component of each diagonal iterate.
fn reduced_best_approx(inst: &Instance, trace: &IterationTrace, ba: &BestApprox) -> Result<Vec<RateCertificate>> {
    let xs: Vec<&Point> = trace.iterates().iter().map(|z| z.components().expect("pair").0).collect();
    let aux = xs
        .iter()
        .map(|x| inst.space.distance(&inst.a.project(x)?, &inst.b.project(x)?))
        .collect::<Result<Vec<f64>>>()?;
    let p = &ba.params;
    let ok = aux[0] * aux[0] <= p.b && trace.to_fixed_point().is_none_or(|d| d[0] <= p.m);
    let tail = trace.stationary_from().map(|_| *aux.last().expect("nonempty"));
    ba.eps_grid
        .iter()
        .map(|&e| certify_values(e, &aux, tail, rate_avg_proj(p.m, p.b, e, p.lambda.get()), p.r + e + AUX_SLACK, ok))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn horizon_is_clamped() {
        let b = |n: u32| Ok(BigUint::from(n));
        assert_eq!(horizon([b(21), b(273)], 100, 1000), 273);
        assert_eq!(horizon([b(21)], 100, 1000), 100);
        assert_eq!(horizon([b(5000)], 100, 1000), 1000);
        assert_eq!(horizon([Err(cat0_core::Error::Overflow("k".into()))], 100, 1000), 1000);
    }
}
