//! The experiment configuration document.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA: &str = "1";

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub samples: Samples,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sample_scale: Option<ScaleSpec>,
    pub instances: Vec<InstanceSpec>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Samples {
    /// Quadruples/triples per space for `verify-space`.
    pub space: usize,
    /// Point pairs per mapping for `verify-mapping`.
    pub mapping: usize,
    /// Diagonal competitors per input for the `Q` minimality check.
    pub competitors: usize,
    /// Inputs for the `Q` checks.
    pub q_inputs: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            space: 10_000,
            mapping: 1_000,
            competitors: 1_000,
            q_inputs: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// CAT(0) inequalities in exact-arithmetic spaces.
    pub exact: f64,
    /// CAT(0) inequalities in the Poincaré disk.
    pub disk: f64,
    /// (P₂) and firm nonexpansivity residuals of projections.
    pub mapping: f64,
    /// `Q` minimality slack and the `d_λ(p, Qp)²` identity.
    pub q: f64,
    /// Per-step allowance of the reduction identity.
    pub reduction: f64,
    /// Δ-limit proxy.
    pub delta: f64,
    /// Fejér monotonicity slack.
    pub fejer: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-12,
            disk: 1e-8,
            mapping: 1e-9,
            q: 1e-10,
            reduction: 1e-9,
            delta: 1e-4,
            fejer: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub euclid_radius: Option<f64>,
    pub disk_radius: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Averaged,
    Composed,
    ProductReduction,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    pub space: SpaceSpec,
    pub lambda: f64,
    pub sets: SetsSpec,
    #[serde(default)]
    pub mode: Mode,
    /// Overrides the map built from `mode`.
    pub mapping: Option<MappingSpec>,
    pub start: serde_json::Value,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Upper limit on the trace length when extending runs to a rate bound.
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_reduction_steps")]
    pub reduction_steps: usize,
    pub eps_grid: Vec<f64>,
    pub fixed_point: Option<serde_json::Value>,
    pub best_pair: Option<PairSpec>,
    /// The constant of the asymptotic-regularity rate; `d(x₀, p)` when absent.
    pub b: Option<f64>,
    #[serde(default)]
    pub best_approx: Option<BestApproxSpec>,
    pub grid: Option<GridSpecDoc>,
}

fn default_n_max() -> usize {
    1_000
}

fn default_max_steps() -> usize {
    100_000
}

fn default_reduction_steps() -> usize {
    200
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetsSpec {
    #[serde(rename = "A")]
    pub a: SetSpec,
    #[serde(rename = "B")]
    pub b: SetSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub a: serde_json::Value,
    pub b: serde_json::Value,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestApproxSpec {
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub b: Option<f64>,
    pub r: Option<f64>,
    pub eps_grid: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpecDoc {
    #[serde(default = "default_step")]
    pub step: f64,
    pub points_per_axis: Option<usize>,
    pub first_box: Option<Vec<(f64, f64)>>,
    pub second_box: Option<Vec<(f64, f64)>>,
    /// Prefer tied pairs whose first point is nearest the start point.
    #[serde(default)]
    pub anchor_at_start: bool,
}

fn default_step() -> f64 {
    1e-3
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    Euclidean { dim: usize },
    MetricTree {
        vertices: Vec<String>,
        edges: Vec<(String, String, f64)>,
    },
    PoincareDisk {},
    Product { base: Box<SpaceSpec>, lambda: f64 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Halfspace { normal: Vec<f64>, offset: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    AffineSubspace { anchor: Vec<f64>, basis: Vec<Vec<f64>> },
    TreeSegment { start: serde_json::Value, end: serde_json::Value },
    Subtree { vertices: Vec<String> },
    DiskSegment { start: [f64; 2], end: [f64; 2] },
    DiskBall { center: [f64; 2], radius: f64 },
    Rectangle { first: Box<SetSpec>, second: Box<SetSpec> },
    Diagonal {},
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum MappingSpec {
    Identity {},
    Constant { point: serde_json::Value },
    /// `"A"`, `"B"`, or an inline set.
    Projection(ProjectionTarget),
    Compose { first: Box<MappingSpec>, then: Box<MappingSpec> },
    ConvexCombination {
        lambda: f64,
        left: Box<MappingSpec>,
        right: Box<MappingSpec>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ProjectionTarget {
    Named(String),
    Inline(SetSpec),
}

/// Tree point payloads: `{"vertex": "O"}` or
/// `{"edge": ["O", "A"], "offset": 0.5}` with the offset measured from the
/// first label.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum TreePointSpec {
    Vertex { vertex: String },
    OnEdge { edge: (String, String), offset: f64 },
}

/// Parses a configuration document, reporting the path of the offending
/// field on failure.
pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Config(format!(
            "at `{path}` (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let bad = |field: String, msg: &str| Err(CliError::Config(format!("at `{field}`: {msg}")));
    if cfg.schema != SCHEMA {
        return bad("schema".into(), "unsupported schema version (expected \"1\")");
    }
    if cfg.instances.is_empty() {
        return bad("instances".into(), "no instances configured");
    }
    let mut seen = BTreeMap::new();
    for (i, inst) in cfg.instances.iter().enumerate() {
        let at = |f: &str| format!("instances[{i}].{f}");
        if inst.name.is_empty() || !inst.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return bad(at("name"), "names must be nonempty and use only [A-Za-z0-9_-]");
        }
        if let Some(j) = seen.insert(inst.name.clone(), i) {
            return bad(at("name"), &format!("duplicate of instances[{j}].name"));
        }
        if !(inst.lambda > 0.0 && inst.lambda < 1.0) {
            return bad(at("lambda"), "λ must lie strictly between 0 and 1");
        }
        check_grid(&inst.eps_grid).or_else(|m| bad(at("eps_grid"), &m))?;
        if let Some(ba) = &inst.best_approx {
            check_grid(&ba.eps_grid).or_else(|m| bad(at("best_approx.eps_grid"), &m))?;
        }
        if inst.n_max == 0 {
            return bad(at("n_max"), "must be at least 1");
        }
        if inst.max_steps < inst.n_max {
            return bad(at("max_steps"), "must be at least n_max");
        }
    }
    Ok(())
}

fn check_grid(grid: &[f64]) -> Result<(), String> {
    if grid.is_empty() {
        return Err("ε-grid is empty".into());
    }
    if grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err("ε values must be positive and finite".into());
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err("ε-grid must be strictly decreasing".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(extra: &str) -> String {
        format!(
            r#"{{"schema":"1","instances":[{{"name":"t","space":{{"euclidean":{{"dim":2}}}},"lambda":0.5,
            "sets":{{"A":{{"ball":{{"center":[0,0],"radius":1}}}},"B":{{"ball":{{"center":[3,0],"radius":1}}}}}},
            "start":[0,0],"eps_grid":[1,0.5]{extra}}}]}}"#
        )
    }

    #[test]
    fn parses_minimal_document() {
        let cfg = parse(&minimal("")).unwrap();
        assert_eq!(cfg.instances[0].mode, Mode::Averaged);
        assert_eq!(cfg.samples.space, 10_000);
    }

    #[test]
    fn reports_field_path() {
        let err = parse(&minimal(r#","n_max":"many""#)).unwrap_err().to_string();
        assert!(err.contains("instances[0].n_max"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn rejects_bad_lambda_and_grid() {
        let err = parse(&minimal("").replace("\"lambda\":0.5", "\"lambda\":1.0")).unwrap_err();
        assert!(err.to_string().contains("instances[0].lambda"));
        let err = parse(&minimal("").replace("[1,0.5]", "[0.5,1]")).unwrap_err();
        assert!(err.to_string().contains("eps_grid"));
    }

    #[test]
    fn parses_nested_mappings() {
        let m: MappingSpec = serde_json::from_str(
            r#"{"convex-combination":{"lambda":0.5,"left":{"projection":"A"},"right":{"projection":{"halfspace":{"normal":[1,0],"offset":2}}}}}"#,
        )
        .unwrap();
        assert!(matches!(m, MappingSpec::ConvexCombination { .. }));
    }
}
