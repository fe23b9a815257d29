use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::mappings::ConvexSet;
use crate::productspace::Lambda;

use super::rates::{rate_avg_proj, rate_comp_proj, rate_phi_b};
use super::IterationTrace;

/// Slack added to `ε` when checking residuals against the `Φ_b` rate.
pub const RESIDUAL_SLACK: f64 = 1e-10;
/// Slack added to `r + ε` when checking `d(P_A xₙ, P_B xₙ)`.
pub const AUX_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The trace ends before the bound and is not known to be stationary.
    Inconclusive,
    /// The start point violates the rate's hypotheses (`d(x₀,p) ≤ b`, …),
    /// so the rate makes no claim about this trace.
    HypothesisUnsatisfied,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::HypothesisUnsatisfied => "hypothesis-unsatisfied",
        }
    }
}

/// The verdict that a rate bound held on a recorded trace for one `ε`.
///
/// A finite trace only covers indices up to its horizon. When the iteration
/// became stationary the remaining values are known exactly and the
/// certificate is `complete`; otherwise a pass means "up to the horizon".
#[derive(Clone, Debug, PartialEq)]
pub struct RateCertificate {
    pub epsilon: f64,
    /// `None` when the bound is too large to materialize.
    pub bound_n: Option<BigUint>,
    /// First recorded index at which the certified quantity is within the
    /// threshold.
    pub observed_first_n: Option<usize>,
    pub verdict: Verdict,
    /// The value the certified quantity must not exceed, slack included.
    pub threshold: f64,
    /// Largest certified value over the indices `n ≥ bound_n` that were
    /// checked (recorded values plus the stationary tail).
    pub worst_after_bound: Option<f64>,
    /// Number of recorded values of the certified quantity.
    pub horizon: usize,
    pub complete: bool,
}

impl RateCertificate {
    pub fn pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Certifies a recorded sequence against a bound: every value at an index
/// `n ≥ bound` must be at most `threshold`. `tail` is the value the sequence
/// keeps forever after its last entry, when that is known (a stationary
/// iteration); an overflowed bound is then covered by the tail alone.
pub fn certify_values(
    epsilon: f64,
    values: &[f64],
    tail: Option<f64>,
    bound: Result<BigUint>,
    threshold: f64,
    hypothesis_ok: bool,
) -> Result<RateCertificate> {
    let bound_n = match bound {
        Ok(b) => Some(b),
        Err(Error::Overflow(_)) => None,
        Err(e) => return Err(e),
    };
    let observed_first_n = values.iter().position(|&v| v <= threshold);
    let start = bound_n.as_ref().and_then(|b| b.to_usize());
    let mut worst: Option<f64> = None;
    if let Some(s) = start {
        if s < values.len() {
            worst = values[s..].iter().copied().reduce(f64::max);
        }
    }
    if let Some(t) = tail {
        worst = Some(worst.map_or(t, |w| w.max(t)));
    }
    let checked_any = worst.is_some();
    let verdict = if !hypothesis_ok {
        Verdict::HypothesisUnsatisfied
    } else if !checked_any {
        Verdict::Inconclusive
    } else if worst.is_some_and(|w| w <= threshold) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(RateCertificate {
        epsilon,
        bound_n,
        observed_first_n,
        verdict,
        threshold,
        worst_after_bound: worst,
        horizon: values.len(),
        complete: tail.is_some(),
    })
}

/// Checks `d(xₙ, xₙ₊₁) ≤ ε` for every recorded `n ≥ Φ_b(ε)`.
///
/// If the trace carries distances to a reference fixed point, the hypothesis
/// `d(x₀, p) ≤ b` is checked as well.
pub fn certify_asymptotic_regularity(trace: &IterationTrace, b: f64, eps_grid: &[f64]) -> Result<Vec<RateCertificate>> {
    let hypothesis_ok = trace.to_fixed_point().is_none_or(|d| d[0] <= b);
    let tail = trace.stationary_from().map(|_| 0.0);
    eps_grid
        .iter()
        .map(|&eps| {
            certify_values(
                eps,
                trace.residuals(),
                tail,
                rate_phi_b(b, eps),
                eps + RESIDUAL_SLACK,
                hypothesis_ok,
            )
        })
        .collect()
}

/// Data for the composed-projection rate: `d(x₀, x*) ≤ M`,
/// `d²(P_A P_B x₀, P_B x₀) ≤ b`, and `q = d²(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompProjParams {
    pub m: f64,
    pub b: f64,
    pub q: f64,
}

/// Checks `d²(xₙ, P_B xₙ) ≤ q + ε` for every recorded `n ≥ ⌊4M²b/ε²⌋ + 2`
/// on a trace of `T = P_A ∘ P_B`.
///
/// When the trace carries distances to a reference point, that point is
/// taken to be `x*` and `d(x₀, x*) ≤ M` is checked.
pub fn certify_comp_proj_rate(
    trace: &IterationTrace,
    b_set: &ConvexSet,
    params: &CompProjParams,
    eps_grid: &[f64],
) -> Result<Vec<RateCertificate>> {
    let it = trace.iterates();
    let space = b_set.space();
    let gaps = it
        .iter()
        .map(|x| space.distance_sq(x, &b_set.project(x)?))
        .collect::<Result<Vec<f64>>>()?;
    let first_gap = match it.get(1) {
        Some(x1) => space.distance_sq(x1, &b_set.project(&it[0])?)?,
        None => 0.0,
    };
    let hypothesis_ok = first_gap <= params.b && trace.to_fixed_point().is_none_or(|d| d[0] <= params.m);
    let tail = trace.stationary_from().map(|_| *gaps.last().expect("nonempty trace"));
    eps_grid
        .iter()
        .map(|&eps| {
            certify_values(
                eps,
                &gaps,
                tail,
                rate_comp_proj(params.m, params.b, eps),
                params.q + eps + AUX_SLACK,
                hypothesis_ok,
            )
        })
        .collect()
}

/// Data for the averaged-projection rate: `d(x₀, u*) ≤ M`,
/// `d²(P_A x₀, P_B x₀) ≤ b`, and the gap `r = d(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BestApproxParams {
    pub m: f64,
    pub b: f64,
    pub r: f64,
    pub lambda: Lambda,
}

/// Checks `d(P_A xₙ, P_B xₙ) ≤ r + ε` for every recorded
/// `n ≥ ⌊64M²b/(ε⁴λ(1-λ))⌋ + 2`.
///
/// The trace must have been recorded with auxiliary sets; when it also
/// carries distances to a reference point, that point is taken to be
/// `u* = (1-λ)x* + λy*` and `d(x₀, u*) ≤ M` is checked.
pub fn certify_best_approx_rate(
    trace: &IterationTrace,
    params: &BestApproxParams,
    eps_grid: &[f64],
) -> Result<Vec<RateCertificate>> {
    let aux = trace
        .aux()
        .ok_or_else(|| Error::domain("trace was recorded without auxiliary sets"))?;
    let hypothesis_ok = aux[0] * aux[0] <= params.b && trace.to_fixed_point().is_none_or(|d| d[0] <= params.m);
    let tail = trace.stationary_from().map(|_| *aux.last().expect("nonempty aux"));
    eps_grid
        .iter()
        .map(|&eps| {
            certify_values(
                eps,
                aux,
                tail,
                rate_avg_proj(params.m, params.b, eps, params.lambda.get()),
                params.r + eps + AUX_SLACK,
                hypothesis_ok,
            )
        })
        .collect()
}
