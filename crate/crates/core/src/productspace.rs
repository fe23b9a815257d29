//! The weighted square `(X², d_λ)` of a CAT(0) space, with
//!
//! ```text
//! d_λ((x₁,x₂),(y₁,y₂)) = √((1-λ)d²(x₁,y₁) + λd²(x₂,y₂))
//! ```
//!
//! The product is again CAT(0), geodesics are componentwise, and the
//! diagonal `Δ = {(x,x)}` has the explicit metric projection
//! `Q(x₁,x₂) = (c,c)` with `c = (1-λ)x₁ + λx₂`. Iterating `Q ∘ U` with
//! `U = T₁ × T₂` from a diagonal point reproduces the iteration of
//! `(1-λ)T₁ + λT₂` on `X`.

use crate::analysis;
use crate::error::{Error, Result};
use crate::geometry::{Point, Space};
use crate::mappings::{ConvexSet, Mapping};
use crate::math::sqrt;

/// A convex-combination weight strictly inside `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Lambda(f64);

impl Lambda {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::domain(alloc::format!("lambda {value} must lie strictly inside (0, 1)")));
        }
        Ok(Lambda(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - λ`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }

    /// `λ(1 - λ)`.
    pub fn weight(self) -> f64 {
        self.0 * (1.0 - self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCombinationSpace {
    base: Space,
    lambda: Lambda,
}

impl ConvexCombinationSpace {
    pub fn new(base: Space, lambda: f64) -> Result<Self> {
        Ok(ConvexCombinationSpace {
            base,
            lambda: Lambda::new(lambda)?,
        })
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    fn split<'a>(&self, p: &'a Point) -> Result<(&'a Point, &'a Point)> {
        p.components()
            .ok_or_else(|| Error::mismatch(alloc::format!("{} point where a pair was expected", p.tag())))
    }

    pub fn d_lambda_sq(&self, p: &Point, q: &Point) -> Result<f64> {
        let (x1, x2) = self.split(p)?;
        let (y1, y2) = self.split(q)?;
        Ok(self.lambda.complement() * self.base.distance_sq(x1, y1)? + self.lambda.get() * self.base.distance_sq(x2, y2)?)
    }

    pub fn d_lambda(&self, p: &Point, q: &Point) -> Result<f64> {
        self.d_lambda_sq(p, q).map(sqrt)
    }

    /// Componentwise geodesic `((1-t)x₁ + ty₁, (1-t)x₂ + ty₂)`.
    pub fn interpolate_product(&self, p: &Point, q: &Point, t: f64) -> Result<Point> {
        let (x1, x2) = self.split(p)?;
        let (y1, y2) = self.split(q)?;
        Ok(Point::pair(
            self.base.interpolate(x1, y1, t)?,
            self.base.interpolate(x2, y2, t)?,
        ))
    }

    /// Metric projection onto the diagonal.
    pub fn project_q(&self, p: &Point) -> Result<Point> {
        let (x1, x2) = self.split(p)?;
        let c = self.base.interpolate(x1, x2, self.lambda.get())?;
        Ok(Point::pair(c.clone(), c))
    }

    /// `x ↦ (x, x)`.
    pub fn embed_diagonal(&self, x: &Point) -> Result<Point> {
        self.base.validate(x)?;
        Ok(Point::pair(x.clone(), x.clone()))
    }

    /// Inverse of [`embed_diagonal`](Self::embed_diagonal). Accepts pairs
    /// whose components are within `10⁻⁸·(1 + d(first, origin))`.
    pub fn diagonal_component(&self, p: &Point) -> Result<Point> {
        let (x1, x2) = self.split(p)?;
        let gap = self.base.distance(x1, x2)?;
        let tolerance = 1e-8 * (1.0 + self.base.distance(x1, &self.base.origin())?);
        if gap > tolerance {
            return Err(Error::NotDiagonal { distance: gap, tolerance });
        }
        Ok(x1.clone())
    }

    /// Lifts a pair `(a, b)` of `X` to the pair `((u,u), (a,b))` of the
    /// product, with `u = (1-λ)a + λb`.
    pub fn lift_best_pair(&self, a: &Point, b: &Point) -> Result<(Point, Point)> {
        let u = self.base.interpolate(a, b, self.lambda.get())?;
        Ok((Point::pair(u.clone(), u), Point::pair(a.clone(), b.clone())))
    }

    /// Squared gap `d²(Δ, A×B) = λ(1-λ)·d²(A,B)`, with `d(A,B)` estimated by
    /// alternating projections to within `tol`.
    pub fn product_gap_q(&self, a: &ConvexSet, b: &ConvexSet, tol: f64) -> Result<f64> {
        let r = analysis::set_distance(a, b, tol)?;
        Ok(self.lambda.weight() * r * r)
    }
}

/// `U(x₁, x₂) = (T₁x₁, T₂x₂)`.
pub fn map_u(t1: &Mapping, t2: &Mapping, p: &Point) -> Result<Point> {
    let (x1, x2) = p
        .components()
        .ok_or_else(|| Error::mismatch("U acts on pairs"))?;
    Ok(Point::pair(t1.evaluate(x1)?, t2.evaluate(x2)?))
}

/// Slack `ε²λ(1-λ)/4` under which a near-minimal pair of `(Δ, A×B)`
/// projects to an `ε`-best pair of `(A, B)`.
pub fn quant_incl_slack(eps: f64, lambda: Lambda) -> f64 {
    eps * eps * lambda.weight() / 4.0
}
