//! Constant-mean-curvature-one surfaces in hyperbolic space: Weierstrass
//! data, the lift ODE, curvature invariants, and the bookkeeping behind
//! the low total-curvature classification.

// `!(x < y)` comparisons are NaN guards; index loops mirror the recurrences they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod classifier;
pub mod error;
pub mod expr;
pub mod families;
pub mod frobenius;
pub mod invariants;
pub mod lift;
pub mod mesh;
pub mod monodromy;
pub mod quadrature;

pub use error::{Error, Result};
