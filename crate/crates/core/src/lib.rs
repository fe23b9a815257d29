//! Averaged firmly nonexpansive mappings on CAT(0) spaces.
//!
//! The crate models a handful of concrete CAT(0) spaces (Euclidean space,
//! finite metric trees, the Poincaré disk) together with the weighted product
//! `(X², d_λ)`, metric projections onto convex sets, and the Picard iteration
//! of convex combinations `(1-λ)T₁ + λT₂`. The averaged iteration on `X` is
//! mirrored by the iteration of `Q ∘ U` on the product, where `U` acts
//! componentwise and `Q` projects onto the diagonal.
//!
//! On top of that sit explicit rates of asymptotic regularity, certificates
//! that check observed traces against those rates, and brute-force oracles for
//! best approximation pairs and asymptotic centers.
//!
//! The crate is `no_std` (it needs `alloc`). IO, configuration and the command
//! line runner live in the `cat0-feas` crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod exact;
mod math;

pub mod analysis;
pub mod geometry;
pub mod iteration;
pub mod mappings;
pub mod productspace;
pub mod sampling;

pub use error::{Error, Result};
pub use geometry::{Check, DiskPoint, MetricTree, Point, Space, SpaceKind, TreePoint};
pub use mappings::{ConvexSet, ConvexSetKind, Mapping};
pub use productspace::{ConvexCombinationSpace, Lambda};
