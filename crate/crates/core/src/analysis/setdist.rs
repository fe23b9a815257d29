use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mappings::ConvexSet;

/// Iteration budget of [`alternating_projections`].
pub const MAX_ALTERNATING_STEPS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMethod {
    ClosedForm,
    BruteForceGrid,
    AlternatingProjections,
}

impl PairMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PairMethod::ClosedForm => "closed-form",
            PairMethod::BruteForceGrid => "brute-force-grid",
            PairMethod::AlternatingProjections => "alternating-projections",
        }
    }
}

/// A pair `a ∈ A`, `b ∈ B` with `dist = d(a, b)`. `error_bar` bounds
/// `dist - d(A, B)` for grid results and is the stopping tolerance
/// otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct BestPairResult {
    pub a: Point,
    pub b: Point,
    pub dist: f64,
    pub method: PairMethod,
    pub error_bar: f64,
}

/// Alternating projections `bₙ = P_B aₙ`, `aₙ₊₁ = P_A bₙ` started from the
/// projection of the space's origin onto `A`.
///
/// Stops once an iteration moves `aₙ` by at most `tol·10⁻³`. The gaps
/// `d(aₙ, bₙ)` decrease to `d(A, B)`.
pub fn alternating_projections(a: &ConvexSet, b: &ConvexSet, tol: f64) -> Result<BestPairResult> {
    if a.space() != b.space() {
        return Err(Error::mismatch("sets live in different spaces"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let space = a.space();
    let mut x = a.project(&space.origin())?;
    let mut y = b.project(&x)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_ALTERNATING_STEPS {
        let nx = a.project_unchecked(&y)?;
        change = space.distance(&x, &nx)?;
        x = nx;
        y = b.project_unchecked(&x)?;
        if change <= tol * 1e-3 {
            let dist = space.distance(&x, &y)?;
            return Ok(BestPairResult {
                a: x,
                b: y,
                dist,
                method: PairMethod::AlternatingProjections,
                error_bar: tol,
            });
        }
    }
    Err(Error::Inconclusive {
        iterations: MAX_ALTERNATING_STEPS,
        best_upper: space.distance(&x, &y)?,
        last_change: change,
    })
}

/// `d(A, B) = inf { d(a, b) : a ∈ A, b ∈ B }`, estimated by
/// [`alternating_projections`].
pub fn set_distance(a: &ConvexSet, b: &ConvexSet, tol: f64) -> Result<f64> {
    alternating_projections(a, b, tol).map(|r| r.dist)
}
