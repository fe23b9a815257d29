use alloc::boxed::Box;

use crate::error::{Error, Result};
use crate::geometry::{Point, Space};
use crate::productspace::Lambda;

use super::ConvexSet;

/// An evaluable self-map of a space.
#[derive(Clone, Debug, PartialEq)]
pub enum Mapping {
    Identity(Space),
    Constant(Space, Point),
    Projection(ConvexSet),
    /// `then ∘ first`.
    Compose { first: Box<Mapping>, then: Box<Mapping> },
    /// `(1-λ)·left + λ·right`, evaluated as `(1-λ)left(x) + λ right(x)`
    /// along the geodesic.
    ConvexCombination {
        left: Box<Mapping>,
        right: Box<Mapping>,
        lambda: Lambda,
    },
    /// `U(x₁, x₂) = (T₁x₁, T₂x₂)` on a product space.
    PairMap {
        space: Space,
        first: Box<Mapping>,
        second: Box<Mapping>,
    },
    /// `Q`, the projection onto the diagonal of a product space.
    DiagonalProjection(Space),
}

fn same_space(a: &Space, b: &Space) -> Result<()> {
    if a != b {
        return Err(Error::mismatch(alloc::format!(
            "mappings act on different spaces ({} vs {})",
            a.tag(),
            b.tag()
        )));
    }
    Ok(())
}

impl Mapping {
    pub fn identity(space: &Space) -> Self {
        Mapping::Identity(space.clone())
    }

    pub fn constant(space: &Space, value: Point) -> Result<Self> {
        space.validate(&value)?;
        Ok(Mapping::Constant(space.clone(), value))
    }

    pub fn projection(set: ConvexSet) -> Self {
        Mapping::Projection(set)
    }

    /// `then ∘ first`: apply `first`, then `then`.
    pub fn compose(first: Mapping, then: Mapping) -> Result<Self> {
        same_space(first.space(), then.space())?;
        Ok(Mapping::Compose {
            first: Box::new(first),
            then: Box::new(then),
        })
    }

    pub fn convex_combination(left: Mapping, right: Mapping, lambda: f64) -> Result<Self> {
        same_space(left.space(), right.space())?;
        Ok(Mapping::ConvexCombination {
            left: Box::new(left),
            right: Box::new(right),
            lambda: Lambda::new(lambda)?,
        })
    }

    /// `(1-λ)P_A + λP_B`.
    pub fn averaged_projections(a: ConvexSet, b: ConvexSet, lambda: f64) -> Result<Self> {
        Self::convex_combination(Mapping::Projection(a), Mapping::Projection(b), lambda)
    }

    /// `U = first × second` on `product`, whose base must be the factors' space.
    pub fn pair_map(product: &Space, first: Mapping, second: Mapping) -> Result<Self> {
        let cs = product
            .as_product()
            .ok_or_else(|| Error::mismatch("pair map needs a product space"))?;
        same_space(cs.base(), first.space())?;
        same_space(cs.base(), second.space())?;
        Ok(Mapping::PairMap {
            space: product.clone(),
            first: Box::new(first),
            second: Box::new(second),
        })
    }

    pub fn diagonal_projection(product: &Space) -> Result<Self> {
        product
            .as_product()
            .ok_or_else(|| Error::mismatch("diagonal projection needs a product space"))?;
        Ok(Mapping::DiagonalProjection(product.clone()))
    }

    /// `Q ∘ U` on `(X², d_λ)` for `U = t1 × t2`.
    pub fn product_reduction(t1: Mapping, t2: Mapping, lambda: f64) -> Result<Self> {
        let product = Space::product(t1.space().clone(), lambda)?;
        let u = Self::pair_map(&product, t1, t2)?;
        Self::compose(u, Self::diagonal_projection(&product)?)
    }

    pub fn space(&self) -> &Space {
        match self {
            Mapping::Identity(s) | Mapping::Constant(s, _) | Mapping::DiagonalProjection(s) => s,
            Mapping::PairMap { space, .. } => space,
            Mapping::Projection(c) => c.space(),
            Mapping::Compose { first, .. } => first.space(),
            Mapping::ConvexCombination { left, .. } => left.space(),
        }
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        self.space().validate(x)?;
        self.eval(x)
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        match self {
            Mapping::Identity(_) => Ok(x.clone()),
            Mapping::Constant(_, c) => Ok(c.clone()),
            Mapping::Projection(set) => set.project_unchecked(x),
            Mapping::Compose { first, then } => then.eval(&first.eval(x)?),
            Mapping::ConvexCombination { left, right, lambda } => {
                self.space()
                    .interpolate(&left.eval(x)?, &right.eval(x)?, lambda.get())
            }
            Mapping::PairMap { first, second, .. } => {
                let (a, b) = x.components().ok_or_else(|| Error::mismatch("U acts on pairs"))?;
                Ok(Point::pair(first.eval(a)?, second.eval(b)?))
            }
            Mapping::DiagonalProjection(s) => s.as_product().expect("validated product").project_q(x),
        }
    }
}
