//! Set distances, best approximation pairs, asymptotic centers, and a
//! finite-dimensional proxy for Δ-convergence.
//!
//! In the shipped spaces (Euclidean space, finite trees, the hyperbolic
//! disk) bounded Fejér-monotone Picard sequences converge in metric, so
//! their Δ-limit is checked through the metric limit of the trace tail
//! together with the asymptotic center of that tail.

mod bruteforce;
mod center;
mod setdist;

pub use bruteforce::{best_pair_bruteforce, GridSpec};
pub use center::{
    check_delta_limit, estimate_asymptotic_center, tail_window, AsymptoticCenterEstimate, DeltaLimitVerdict,
    MAX_MIDPOINT_BASE,
};
pub use setdist::{alternating_projections, set_distance, BestPairResult, PairMethod, MAX_ALTERNATING_STEPS};
