use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mappings::{ConvexSet, Mapping};

/// Recorded Picard iterates `x₀, Tx₀, T²x₀, …`.
///
/// `residuals[n] = d(xₙ, xₙ₊₁)`, so there is one residual fewer than
/// iterates. When an iterate is reproduced bit for bit the sequence is
/// constant from then on; `stationary_from` records the first index of that
/// constant tail and the run stops there.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    iterates: Vec<Point>,
    residuals: Vec<f64>,
    to_fixed_point: Option<Vec<f64>>,
    aux: Option<Vec<f64>>,
    stationary_from: Option<usize>,
}

impl IterationTrace {
    pub fn iterates(&self) -> &[Point] {
        &self.iterates
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// `d(xₙ, p)` for the reference point supplied to the run.
    pub fn to_fixed_point(&self) -> Option<&[f64]> {
        self.to_fixed_point.as_deref()
    }

    /// `d(P_A xₙ, P_B xₙ)` when sets were supplied to the run.
    pub fn aux(&self) -> Option<&[f64]> {
        self.aux.as_deref()
    }

    pub fn stationary_from(&self) -> Option<usize> {
        self.stationary_from
    }

    /// Number of steps taken.
    pub fn steps(&self) -> usize {
        self.residuals.len()
    }

    pub fn last(&self) -> &Point {
        self.iterates.last().expect("a trace holds at least the start point")
    }
}

/// Builder for a Picard run.
#[derive(Clone, Debug)]
pub struct Picard<'a> {
    map: &'a Mapping,
    start: Point,
    n_max: usize,
    stop_tol: f64,
    reference: Option<&'a Point>,
    aux_sets: Option<(&'a ConvexSet, &'a ConvexSet)>,
}

impl<'a> Picard<'a> {
    pub fn new(map: &'a Mapping, start: Point) -> Self {
        Picard {
            map,
            start,
            n_max: 1,
            stop_tol: 0.0,
            reference: None,
            aux_sets: None,
        }
    }

    /// Maximum number of steps.
    pub fn steps(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    /// Stop once a residual falls strictly below `tol` (default 0: never).
    pub fn stop_tol(mut self, tol: f64) -> Self {
        self.stop_tol = tol;
        self
    }

    /// Record distances to a known fixed point.
    pub fn reference(mut self, p: &'a Point) -> Self {
        self.reference = Some(p);
        self
    }

    /// Record `d(P_A xₙ, P_B xₙ)` at every iterate.
    pub fn aux_sets(mut self, a: &'a ConvexSet, b: &'a ConvexSet) -> Self {
        self.aux_sets = Some((a, b));
        self
    }

    pub fn run(self) -> Result<IterationTrace> {
        if self.n_max == 0 {
            return Err(Error::domain("a Picard run needs at least one step"));
        }
        let space = self.map.space();
        space.validate(&self.start)?;
        if let Some(p) = self.reference {
            space.validate(p)?;
        }
        let mut trace = IterationTrace {
            iterates: Vec::with_capacity(self.n_max.min(1 << 16) + 1),
            residuals: Vec::with_capacity(self.n_max.min(1 << 16)),
            to_fixed_point: self.reference.map(|_| Vec::new()),
            aux: self.aux_sets.map(|_| Vec::new()),
            stationary_from: None,
        };
        let record = |trace: &mut IterationTrace, x: &Point| -> Result<()> {
            if let (Some(p), Some(v)) = (self.reference, trace.to_fixed_point.as_mut()) {
                v.push(space.distance(x, p)?);
            }
            if let (Some((a, b)), Some(v)) = (self.aux_sets, trace.aux.as_mut()) {
                v.push(a.space().distance(&a.project(x)?, &b.project(x)?)?);
            }
            Ok(())
        };
        record(&mut trace, &self.start)?;
        trace.iterates.push(self.start);
        for step in 0..self.n_max {
            let current = trace.iterates.last().expect("nonempty");
            let next = self.map.evaluate(current)?;
            if !next.is_finite() {
                return Err(Error::NonFinite { step: step + 1 });
            }
            let stationary = next.bit_eq(current);
            let residual = if stationary { 0.0 } else { space.distance(current, &next)? };
            record(&mut trace, &next)?;
            trace.iterates.push(next);
            trace.residuals.push(residual);
            if stationary {
                trace.stationary_from = Some(step);
                break;
            }
            if residual < self.stop_tol {
                break;
            }
        }
        Ok(trace)
    }
}

/// Runs `n_max` Picard steps of `map` from `x0`, stopping early when a
/// residual drops below `stop_tol` or the iteration becomes stationary.
pub fn picard(map: &Mapping, x0: Point, n_max: usize, stop_tol: f64) -> Result<IterationTrace> {
    Picard::new(map, x0).steps(n_max).stop_tol(stop_tol).run()
}
