//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::path::Path;
use std::time::Instant;

use cat0_core::analysis::{best_pair_bruteforce, check_delta_limit, set_distance, GridSpec};
use cat0_core::geometry::DiskPoint;
use cat0_core::iteration::{rate_avg_proj, rate_comp_proj, rate_phi_b, Picard};
use cat0_core::mappings::check_p2;
use cat0_core::sampling::{sample_point, SampleScale};
use cat0_core::{ConvexSet, Mapping, MetricTree, Point, Space, SpaceKind};
use cat0_feas::commands::{
    certify_instance, derive_targets, fixed_point_of, run_instance, verify_space, Context,
};
use cat0_feas::config::{self, ExperimentConfig, InstanceSpec, Tolerances};
use cat0_feas::setup::{self, Instance};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tripod() -> MetricTree {
    MetricTree::new(["O", "A", "B", "C"], [("O", "A", 2.0), ("O", "B", 2.0), ("O", "C", 2.0)]).unwrap()
}

fn base_spaces() -> Vec<Space> {
    vec![
        Space::euclidean(2).unwrap(),
        Space::euclidean(5).unwrap(),
        Space::metric_tree(tripod()),
        Space::poincare_disk(),
    ]
}

fn all_spaces() -> Vec<Space> {
    let mut out = base_spaces();
    for b in base_spaces() {
        for l in [0.25, 0.5, 0.9] {
            out.push(Space::product(b.clone(), l).unwrap());
        }
    }
    out
}

fn name(space: &Space) -> String {
    match space.kind() {
        SpaceKind::Euclidean { dim } => format!("R^{dim}"),
        SpaceKind::MetricTree(_) => "tripod".into(),
        SpaceKind::PoincareDisk => "disk".into(),
        SpaceKind::Product(cs) => format!("{}^2(l={})", name(cs.base()), cs.lambda().get()),
    }
}

fn sets_in(space: &Space) -> Vec<ConvexSet> {
    let tp = |t: &MetricTree, e: usize, off: f64| Point::Tree(t.point(e, off).unwrap());
    let dp = |x: f64, y: f64| DiskPoint::new(x, y).unwrap();
    match space.kind() {
        SpaceKind::Euclidean { dim } => {
            let d = *dim;
            let mut normal = vec![0.0; d];
            normal[0] = -1.0;
            normal[d - 1] += 0.5;
            let mut e1 = vec![0.0; d];
            e1[0] = 1.0;
            vec![
                ConvexSet::halfspace(space, normal, -0.3).unwrap(),
                ConvexSet::ball(space, vec![0.2; d], 0.7).unwrap(),
                ConvexSet::affine_subspace(space, vec![0.1; d], vec![e1]).unwrap(),
            ]
        }
        SpaceKind::MetricTree(t) => vec![
            ConvexSet::tree_segment(space, &tp(t, 0, 0.5), &tp(t, 1, 1.0)).unwrap(),
            ConvexSet::subtree(space, &[0, 1]).unwrap(),
        ],
        SpaceKind::PoincareDisk => vec![
            ConvexSet::disk_segment(space, dp(-0.4, 0.1), dp(0.5, 0.3)).unwrap(),
            ConvexSet::disk_ball(space, dp(0.5, 0.0), 0.2).unwrap(),
        ],
        SpaceKind::Product(cs) => {
            let base = sets_in(cs.base());
            vec![
                ConvexSet::product_rectangle(space, base[0].clone(), base[1].clone()).unwrap(),
                ConvexSet::diagonal(space).unwrap(),
            ]
        }
    }
}

fn standard() -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/standard.json");
    config::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn instances(cfg: &ExperimentConfig) -> Vec<(&InstanceSpec, Instance)> {
    cfg.instances.iter().map(|s| (s, setup::instance(s).unwrap())).collect()
}

fn ctx<'a>(cfg: &'a ExperimentConfig, spec: &'a InstanceSpec) -> Context<'a> {
    Context {
        config: cfg,
        spec,
        scale: SampleScale::default(),
        rng: rng(cfg.seed),
    }
}

fn certificates<'a>(body: &'a Value, rate: &str) -> Vec<&'a Value> {
    body["certificates"].as_array().unwrap().iter().filter(|c| c["rate"] == rate).collect()
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut r = rng(1);
    let max = |s: &cat0_feas::stats::ResidualSummary| s.quantiles.as_ref().map_or(f64::NAN, |q| q.max);
    let mut worst = (0.0f64, 0.0f64);
    for s in all_spaces() {
        let c = verify_space(&s, 10_000, &mut r, &SampleScale::default(), &tol).map_err(|e| e.to_string())?;
        if !c.pass() {
            return Err(format!("{}: cn max {} four-point max {}", c.space, max(&c.cn_inequality), max(&c.four_point)));
        }
        worst = (worst.0.max(max(&c.cn_inequality)), worst.1.max(max(&c.four_point)));
    }
    let secs = started.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!("16 spaces x 1e4 samples, max cn {:.1e}, max four-point {:.1e}, {secs:.2} s", worst.0, worst.1))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let scale = SampleScale::default();
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for s in all_spaces() {
        for set in sets_in(&s) {
            let p = Mapping::projection(set.clone());
            for _ in 0..1000 {
                let (x, y) = (sample_point(&s, &mut r, &scale), sample_point(&s, &mut r, &scale));
                let v = check_p2(&p, &x, &y).map_err(|e| e.to_string())?;
                if !(v <= 1e-9) {
                    return Err(format!("{} in {}: residual {v}", set.name(), name(&s)));
                }
                worst = worst.max(v);
            }
            count += 1;
        }
    }
    Ok(format!("{count} projections x 1e3 pairs, max residual {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let scale = SampleScale::default();
    let (mut slack, mut ident) = (f64::NEG_INFINITY, 0.0f64);
    for s in all_spaces().into_iter().filter(|s| s.as_product().is_some()) {
        let cs = s.as_product().unwrap();
        for _ in 0..20 {
            let p = sample_point(&s, &mut r, &scale);
            let q = cs.project_q(&p).unwrap();
            let d = cs.d_lambda(&p, &q).unwrap();
            let (x1, x2) = p.components().unwrap();
            let id = (cs.d_lambda_sq(&p, &q).unwrap() - cs.lambda().weight() * cs.base().distance_sq(x1, x2).unwrap()).abs();
            ident = ident.max(id);
            for _ in 0..1000 {
                let w = sample_point(cs.base(), &mut r, &scale);
                slack = slack.max(d - cs.d_lambda(&p, &Point::pair(w.clone(), w)).unwrap());
            }
        }
        if slack > 1e-10 || ident > 1e-10 {
            return Err(format!("{}: slack {slack}, identity error {ident}", name(&s)));
        }
    }
    Ok(format!("12 products x 20 inputs x 1e3 competitors, max slack {slack:.1e}, identity error {ident:.1e}"))
}

fn criterion_4(cfg: &ExperimentConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for (spec, inst) in instances(cfg) {
        let (_, body, _) = run_instance(&inst, ctx(cfg, spec)).map_err(|e| e.to_string())?;
        let red = &body["reduction"];
        if red["pass"] != true || red["steps"] != 200 {
            return Err(format!("{}: {red}", spec.name));
        }
        worst = worst.max(red["worst_scaled_deviation"].as_f64().unwrap());
    }
    Ok(format!("{} instances x 200 steps, max deviation/n {worst:.1e}", cfg.instances.len()))
}

const RATE_INSTANCES: [&str; 4] = ["line-line", "ball-halfspace", "tripod", "disk-balls"];

fn criterion_5(cfg: &ExperimentConfig) -> Outcome {
    let started = Instant::now();
    let mut lines = Vec::new();
    for (spec, inst) in instances(cfg).into_iter().filter(|(s, _)| RATE_INSTANCES.contains(&s.name.as_str())) {
        let (_, body, _) = certify_instance(&inst, ctx(cfg, spec)).map_err(|e| e.to_string())?;
        let certs = certificates(&body, "phi_b");
        if certs.len() != spec.eps_grid.len() || certs.iter().any(|c| c["pass"] != true) {
            return Err(format!("{}: {:?}", spec.name, certs));
        }
        for c in &certs {
            let first = c["observed_first_n"].as_u64().unwrap();
            let bound: BigUint = c["bound_n"].as_str().unwrap().parse().unwrap();
            if BigUint::from(first) * 2u32 > bound {
                return Err(format!("{}: observed_first_n {first} not far below bound {bound}", spec.name));
            }
        }
        let eps: Vec<String> = spec.eps_grid.iter().map(f64::to_string).collect();
        lines.push(format!("{} eps {{{}}}", spec.name, eps.join(",")));
    }
    let secs = started.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!("{}; {secs:.2} s", lines.join("; ")))
}

fn criterion_6(cfg: &ExperimentConfig) -> Outcome {
    let mut lines = Vec::new();
    for (spec, inst) in instances(cfg).into_iter().filter(|(s, _)| ["ball-halfspace", "tripod"].contains(&s.name.as_str())) {
        let (_, body, _) = certify_instance(&inst, ctx(cfg, spec)).map_err(|e| e.to_string())?;
        let certs = certificates(&body, "avg_proj");
        let eps: Vec<f64> = certs.iter().map(|c| c["epsilon"].as_f64().unwrap()).collect();
        if eps != [1.0, 0.5, 0.25] || certs.iter().any(|c| c["pass"] != true) {
            return Err(format!("{}: {:?}", spec.name, certs));
        }
        let r = body["parameters"]["best_approx"]["r"].as_f64().unwrap();
        if (r - 1.0).abs() > 1e-9 {
            return Err(format!("{}: r = {r}", spec.name));
        }
        let diff = body["gap"]["difference"].as_f64().unwrap();
        let q = body["gap"]["q"].as_f64().unwrap();
        if diff > 1e-8 || (q - 0.25).abs() > 1e-8 {
            return Err(format!("{}: q = {q}, cross-check difference {diff}", spec.name));
        }
        lines.push(format!("{} r={r} q={q} |dq|={diff:.1e}", spec.name));
    }
    Ok(lines.join("; "))
}

fn criterion_7(cfg: &ExperimentConfig) -> Outcome {
    let tol = 1e-4;
    let mut worst: f64 = 0.0;
    for (spec, inst) in instances(cfg) {
        let targets = derive_targets(&inst, spec).map_err(|e| e.to_string())?;
        let bf = targets.brute_force.ok_or_else(|| format!("{}: no brute-force pair", spec.name))?;
        let claimed = fixed_point_of(&inst, &bf).unwrap();
        let trace = Picard::new(&inst.map, inst.start.clone()).steps(spec.n_max).run().unwrap();
        let v = check_delta_limit(&inst.space, &trace, &claimed, tol).unwrap();
        if !v.pass {
            return Err(format!("{}: final {} center offset {}", spec.name, v.final_distance, v.center_offset));
        }
        worst = worst.max(v.final_distance.max(v.center_offset));
        // Negative control: move the claim 10⁻² towards the start.
        let d = inst.space.distance(&claimed, &inst.start).unwrap();
        let off = inst.space.interpolate(&claimed, &inst.start, 1e-2 / d).unwrap();
        if check_delta_limit(&inst.space, &trace, &off, tol).unwrap().pass {
            return Err(format!("{}: perturbed claim accepted", spec.name));
        }
    }
    Ok(format!("{} instances at tol 1e-4, worst offset {worst:.1e}; perturbed claims rejected", cfg.instances.len()))
}

fn criterion_8(cfg: &ExperimentConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (spec, inst) in instances(cfg) {
        let doc = spec.grid.as_ref().unwrap();
        let mut grid = GridSpec::new(1e-3).with_boxes(doc.first_box.clone(), doc.second_box.clone());
        if doc.anchor_at_start {
            grid = grid.with_anchor(inst.start.clone());
        }
        let bf = best_pair_bruteforce(&inst.a, &inst.b, &grid).map_err(|e| format!("{}: {e}", spec.name))?;
        let alt = set_distance(&inst.a, &inst.b, 1e-10).map_err(|e| format!("{}: {e}", spec.name))?;
        let gap = (bf.dist - alt).abs();
        if gap > 2e-3 || gap > bf.error_bar + 1e-9 {
            return Err(format!("{}: |{} - {alt}| = {gap}, error bar {}", spec.name, bf.dist, bf.error_bar));
        }
        worst = worst.max(gap);
        n += 1;
    }
    Ok(format!("{n} instances at h = 1e-3, max |delta| {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let checks = [
        ("rate_phi_b(1,1)", rate_phi_b(1.0, 1.0), 21u32),
        ("rate_phi_b(1,0.5)", rate_phi_b(1.0, 0.5), 273),
        ("rate_avg_proj(1,1,1,0.5)", rate_avg_proj(1.0, 1.0, 1.0, 0.5), 258),
        ("rate_comp_proj(1,1,1)", rate_comp_proj(1.0, 1.0, 1.0), 6),
    ];
    for (what, got, want) in &checks {
        match got {
            Ok(v) if *v == BigUint::from(*want) => {}
            other => return Err(format!("{what} = {other:?}, expected {want}")),
        }
    }
    Ok("21, 273, 258, 6".into())
}

fn main() {
    let cfg = standard();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("CAT(0) inequalities on sampled points", Box::new(criterion_1)),
        ("(P2) for every projection", Box::new(criterion_2)),
        ("Q minimality and gap identity", Box::new(criterion_3)),
        ("product reduction matches the direct iteration", Box::new(|| criterion_4(&cfg))),
        ("asymptotic regularity rate", Box::new(|| criterion_5(&cfg))),
        ("averaged-projection rate and q", Box::new(|| criterion_6(&cfg))),
        ("delta-limit proxy with negative control", Box::new(|| criterion_7(&cfg))),
        ("alternating projections vs brute force", Box::new(|| criterion_8(&cfg))),
        ("rate formulas", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (what, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {what} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {what} ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

