use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{Point, Space};
use crate::iteration::IterationTrace;

/// Midpoint enrichment uses at most this many distinct tail points.
pub const MAX_MIDPOINT_BASE: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticCenterEstimate {
    pub center: Point,
    /// `max` over the tail of `d(center, xₙ)`, estimating `r((xₙ))`.
    pub radius: f64,
    /// Index of the first tail iterate within the trace.
    pub tail_start: usize,
    pub candidate_count: usize,
}

fn distinct(points: &[Point]) -> Vec<Point> {
    let mut v: Vec<Point> = points.to_vec();
    v.sort_by(Point::total_cmp);
    v.dedup_by(|a, b| a.bit_eq(b));
    v
}

/// Minimizes `y ↦ max_{x ∈ tail} d(y, x)` over the candidates.
///
/// Without explicit candidates, the distinct tail points and the geodesic
/// midpoints of their pairs are used (midpoints are formed from at most
/// [`MAX_MIDPOINT_BASE`] evenly chosen points). Ties are broken by
/// [`Point::total_cmp`], so the result does not depend on candidate order.
pub fn estimate_asymptotic_center(
    space: &Space,
    tail: &[Point],
    candidates: Option<&[Point]>,
) -> Result<AsymptoticCenterEstimate> {
    if tail.is_empty() {
        return Err(Error::domain("asymptotic center of an empty tail"));
    }
    let tail = distinct(tail);
    for p in &tail {
        space.validate(p)?;
    }
    let cands = match candidates {
        Some(c) if !c.is_empty() => {
            c.iter().try_for_each(|p| space.validate(p))?;
            c.to_vec()
        }
        Some(_) => return Err(Error::domain("empty candidate list")),
        None => {
            let stride = tail.len().div_ceil(MAX_MIDPOINT_BASE);
            let base: Vec<&Point> = tail.iter().step_by(stride).collect();
            let mut c = tail.clone();
            for i in 0..base.len() {
                for j in i + 1..base.len() {
                    c.push(space.interpolate(base[i], base[j], 0.5)?);
                }
            }
            c
        }
    };
    let mut best: Option<(f64, &Point)> = None;
    'cands: for y in &cands {
        let mut r = 0.0f64;
        for x in &tail {
            r = r.max(space.distance(y, x)?);
            if best.is_some_and(|(br, _)| r > br) {
                continue 'cands;
            }
        }
        let better = match best {
            None => true,
            Some((br, bp)) => r < br || (r == br && y.total_cmp(bp) == Ordering::Less),
        };
        if better {
            best = Some((r, y));
        }
    }
    let (radius, center) = best.expect("nonempty candidates");
    Ok(AsymptoticCenterEstimate {
        center: center.clone(),
        radius,
        tail_start: 0,
        candidate_count: cands.len(),
    })
}

/// The tail of a trace used as a stand-in for its limit behavior: the last
/// iterate of a stationary trace, otherwise the last `max(50, 10%)` iterates.
/// Returns the index of the first tail iterate and the tail.
pub fn tail_window(trace: &IterationTrace) -> (usize, &[Point]) {
    let it = trace.iterates();
    let len = if trace.stationary_from().is_some() {
        1
    } else {
        (it.len() / 10).max(50).min(it.len())
    };
    (it.len() - len, &it[it.len() - len..])
}

/// Outcome of the Δ-limit proxy with the numbers behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaLimitVerdict {
    pub pass: bool,
    /// `d(x_N, claimed)` for the last iterate.
    pub final_distance: f64,
    /// Largest `d(xₙ, claimed)` over the tail window.
    pub window_max_distance: f64,
    /// `d(center, claimed)` for the tail's asymptotic center.
    pub center_offset: f64,
    pub center: AsymptoticCenterEstimate,
    /// The last iterate is farther from `claimed` than the start.
    pub diverging: bool,
}

/// Checks that the trace tail converges to `claimed`: the last iterate and
/// the asymptotic center of the tail window are both within `tol` of it, and
/// the trace does not drift away from it.
pub fn check_delta_limit(space: &Space, trace: &IterationTrace, claimed: &Point, tol: f64) -> Result<DeltaLimitVerdict> {
    space.validate(claimed)?;
    let (start, tail) = tail_window(trace);
    let mut center = estimate_asymptotic_center(space, tail, None)?;
    center.tail_start = start;
    let it = trace.iterates();
    let first = space.distance(&it[0], claimed)?;
    let final_distance = space.distance(trace.last(), claimed)?;
    let mut window_max_distance = 0.0f64;
    for x in tail {
        window_max_distance = window_max_distance.max(space.distance(x, claimed)?);
    }
    let center_offset = space.distance(&center.center, claimed)?;
    let diverging = final_distance > first + tol;
    Ok(DeltaLimitVerdict {
        pass: !diverging && final_distance <= tol && center_offset <= tol,
        final_distance,
        window_max_distance,
        center_offset,
        center,
        diverging,
    })
}
