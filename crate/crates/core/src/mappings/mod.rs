//! Convex sets with metric projections, mapping combinators, and empirical
//! checks of firm nonexpansivity and property (P₂).
//!
//! The checkers return signed residuals (`lhs - rhs`) rather than booleans;
//! a mapping passes at a pair of points when the residual is at most the
//! caller's tolerance.

mod mapping;
mod sets;

pub use mapping::Mapping;
pub use sets::{ConvexSet, ConvexSetKind};

use crate::error::Result;
use crate::geometry::Point;

/// Residual of property (P₂) at `(x, y)`:
///
/// ```text
/// 2d²(Tx,Ty) - [d²(x,Ty) + d²(y,Tx) - d²(x,Tx) - d²(y,Ty)]
/// ```
pub fn check_p2(t: &Mapping, x: &Point, y: &Point) -> Result<f64> {
    let s = t.space();
    let (tx, ty) = (t.evaluate(x)?, t.evaluate(y)?);
    let lhs = 2.0 * s.distance_sq(&tx, &ty)?;
    let rhs = s.distance_sq(x, &ty)? + s.distance_sq(y, &tx)? - s.distance_sq(x, &tx)? - s.distance_sq(y, &ty)?;
    Ok(lhs - rhs)
}

/// Largest value over `t_grid` of `d(Tx,Ty) - d((1-t)x + tTx, (1-t)y + tTy)`.
pub fn check_firmly_nonexpansive(t: &Mapping, x: &Point, y: &Point, t_grid: &[f64]) -> Result<f64> {
    let s = t.space();
    let (tx, ty) = (t.evaluate(x)?, t.evaluate(y)?);
    let d = s.distance(&tx, &ty)?;
    let mut worst = f64::NEG_INFINITY;
    for &tt in t_grid {
        let gap = d - s.distance(&s.interpolate(x, &tx, tt)?, &s.interpolate(y, &ty, tt)?)?;
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// `d(x, Tx)`.
pub fn fixed_point_residual(t: &Mapping, x: &Point) -> Result<f64> {
    t.space().distance(x, &t.evaluate(x)?)
}
