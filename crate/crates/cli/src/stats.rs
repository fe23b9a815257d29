use serde::Serialize;

/// Order statistics of a residual sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quantiles {
    pub count: usize,
    pub min: f64,
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
    pub max: f64,
}

impl Quantiles {
    /// Nearest-rank quantiles; `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let rank = ((p * v.len() as f64).ceil() as usize).clamp(1, v.len());
            v[rank - 1]
        };
        Some(Quantiles {
            count: v.len(),
            min: v[0],
            p50: q(0.5),
            p90: q(0.9),
            p99: q(0.99),
            max: v[v.len() - 1],
        })
    }
}

/// Residuals checked against a tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub tolerance: f64,
    pub pass: bool,
    pub violations: usize,
    pub quantiles: Option<Quantiles>,
}

impl ResidualSummary {
    pub fn new(values: &[f64], tolerance: f64) -> Self {
        let violations = values.iter().filter(|&&r| !(r <= tolerance)).count();
        ResidualSummary {
            tolerance,
            pass: violations == 0,
            violations,
            quantiles: Quantiles::of(values),
        }
    }
}
