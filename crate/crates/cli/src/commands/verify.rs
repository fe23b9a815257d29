use cat0_core::mappings::{check_firmly_nonexpansive, check_p2};
use cat0_core::sampling::{sample_point, sample_unit, SampleScale};
use cat0_core::{Mapping, Point, Result, Space, SpaceKind};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::Context;
use crate::config::Tolerances;
use crate::report::{Files, Outcome};
use crate::setup::Instance;
use crate::stats::ResidualSummary;

const T_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn is_disk(space: &Space) -> bool {
    match space.kind() {
        SpaceKind::PoincareDisk => true,
        SpaceKind::Product(cs) => is_disk(cs.base()),
        _ => false,
    }
}

fn describe(space: &Space) -> String {
    match space.kind() {
        SpaceKind::Euclidean { dim } => format!("euclidean({dim})"),
        SpaceKind::MetricTree(t) => format!("metric-tree({} vertices)", t.vertex_count()),
        SpaceKind::PoincareDisk => "poincare-disk".into(),
        SpaceKind::Product(cs) => format!("product({}, lambda={})", describe(cs.base()), cs.lambda().get()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceCheck {
    pub space: String,
    pub samples: usize,
    pub cn_inequality: ResidualSummary,
    pub four_point: ResidualSummary,
}

impl SpaceCheck {
    pub fn pass(&self) -> bool {
        self.cn_inequality.pass && self.four_point.pass
    }
}

/// Checks the CN inequality on `n` sampled triples and the four-point
/// condition on `n` sampled quadruples.
pub fn verify_space<R: Rng>(space: &Space, n: usize, rng: &mut R, scale: &SampleScale, tol: &Tolerances) -> Result<SpaceCheck> {
    let t = if is_disk(space) { tol.disk } else { tol.exact };
    let mut cn = Vec::with_capacity(n);
    let mut fp = Vec::with_capacity(n);
    for _ in 0..n {
        let [x, y, z, w] = [(); 4].map(|_| sample_point(space, rng, scale));
        let s = sample_unit(rng);
        cn.push(space.check_cn_inequality(&z, &x, &y, s, t)?.residual);
        fp.push(space.check_four_point(&x, &y, &z, &w, t)?.residual);
    }
    Ok(SpaceCheck {
        space: describe(space),
        samples: n,
        cn_inequality: ResidualSummary::new(&cn, t),
        four_point: ResidualSummary::new(&fp, t),
    })
}

pub fn verify_space_instance(inst: &Instance, mut ctx: Context<'_>) -> Result<(Outcome, serde_json::Value, Files)> {
    let cfg = ctx.config;
    let product = Space::product(inst.space.clone(), inst.lambda)?;
    let mut checks = Vec::new();
    for s in [&inst.space, &product] {
        checks.push(verify_space(s, cfg.samples.space, &mut ctx.rng, &ctx.scale, &cfg.tolerances)?);
    }
    let outcome = Outcome::from_pass(checks.iter().all(SpaceCheck::pass));
    Ok((outcome, json!({ "spaces": checks }), Files::new()))
}

#[derive(Clone, Debug, Serialize)]
struct MappingCheck {
    mapping: &'static str,
    space: String,
    /// Whether the residuals decide the verdict; the averaged map is only
    /// measured.
    asserted: bool,
    p2: ResidualSummary,
    firmly_nonexpansive: ResidualSummary,
}

fn check_mapping<R: Rng>(
    name: &'static str,
    map: &Mapping,
    asserted: bool,
    pairs: usize,
    tol: f64,
    rng: &mut R,
    scale: &SampleScale,
) -> Result<MappingCheck> {
    let s = map.space();
    let mut p2 = Vec::with_capacity(pairs);
    let mut fne = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let (x, y) = (sample_point(s, rng, scale), sample_point(s, rng, scale));
        p2.push(check_p2(map, &x, &y)?);
        fne.push(check_firmly_nonexpansive(map, &x, &y, &T_GRID)?);
    }
    Ok(MappingCheck {
        mapping: name,
        space: describe(s),
        asserted,
        p2: ResidualSummary::new(&p2, tol),
        firmly_nonexpansive: ResidualSummary::new(&fne, tol),
    })
}

#[derive(Clone, Debug, Serialize)]
struct QCheck {
    inputs: usize,
    competitors_per_input: usize,
    /// `d_λ(p, Qp) - d_λ(p, (w,w))` over all competitors.
    minimality: ResidualSummary,
    /// `|d_λ(p, Qp)² - λ(1-λ)d²(x₁, x₂)|`.
    gap_identity: ResidualSummary,
}

fn check_q<R: Rng>(product: &Space, inputs: usize, competitors: usize, tol: f64, rng: &mut R, scale: &SampleScale) -> Result<QCheck> {
    let cs = product.as_product().expect("product space");
    let mut slack = Vec::with_capacity(inputs * competitors);
    let mut ident = Vec::with_capacity(inputs);
    for _ in 0..inputs {
        let p = sample_point(product, rng, scale);
        let q = cs.project_q(&p)?;
        let d = cs.d_lambda(&p, &q)?;
        let (x1, x2) = p.components().expect("pair");
        ident.push((cs.d_lambda_sq(&p, &q)? - cs.lambda().weight() * cs.base().distance_sq(x1, x2)?).abs());
        for _ in 0..competitors {
            let w = sample_point(cs.base(), rng, scale);
            slack.push(d - cs.d_lambda(&p, &Point::pair(w.clone(), w))?);
        }
    }
    Ok(QCheck {
        inputs,
        competitors_per_input: competitors,
        minimality: ResidualSummary::new(&slack, tol),
        gap_identity: ResidualSummary::new(&ident, tol),
    })
}

pub fn verify_mapping_instance(inst: &Instance, mut ctx: Context<'_>) -> Result<(Outcome, serde_json::Value, Files)> {
    let cfg = ctx.config;
    let tol = cfg.tolerances;
    let n = cfg.samples.mapping;
    let product = Space::product(inst.space.clone(), inst.lambda)?;
    let (pa, pb) = (Mapping::projection(inst.a.clone()), Mapping::projection(inst.b.clone()));
    let u = Mapping::pair_map(&product, pa.clone(), pb.clone())?;
    let q = Mapping::diagonal_projection(&product)?;
    let maps: [(&'static str, &Mapping, bool); 6] = [
        ("P_A", &pa, true),
        ("P_B", &pb, true),
        ("U", &u, true),
        ("Q", &q, true),
        ("identity", &Mapping::identity(&inst.space), true),
        ("T", &inst.map, false),
    ];
    let mut checks = Vec::new();
    for (name, m, asserted) in maps {
        let t = if name == "identity" { 0.0 } else { tol.mapping };
        checks.push(check_mapping(name, m, asserted, n, t, &mut ctx.rng, &ctx.scale)?);
    }
    let qc = check_q(&product, cfg.samples.q_inputs, cfg.samples.competitors, tol.q, &mut ctx.rng, &ctx.scale)?;
    let outcome = Outcome::from_pass(
        checks
            .iter()
            .filter(|c| c.asserted)
            .all(|c| c.p2.pass && c.firmly_nonexpansive.pass)
            && qc.minimality.pass
            && qc.gap_identity.pass,
    );
    Ok((outcome, json!({ "mappings": checks, "q_projection": qc }), Files::new()))
}
