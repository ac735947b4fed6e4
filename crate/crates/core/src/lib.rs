//! Security-constrained economic dispatch that trades operating cost
//! against the number of transmission lines loaded into their emergency
//! thermal zones.
//!
//! The zone count is a cardinality (ℓ0) term. It is replaced by a
//! piecewise-linear difference-of-convex surrogate and minimized with a
//! proximal difference-of-convex algorithm whose convex subproblems are
//! solved by the dense QP solver in [`qp`]. A rolling-horizon driver
//! carries generator output and per-line emergency-duration counters from
//! one period to the next, and [`oracle`] enumerates zone assignments to
//! certify solutions on small networks.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dca;
pub mod error;
pub mod exec;
pub mod formulation;
pub mod grid;
pub mod network;
pub mod oracle;
pub mod qp;
pub mod report;
pub mod rolling;
pub mod synthetic;

pub use error::{Error, Result};
