//! Stability operator and first-eigenvalue bounds for constant mean curvature
//! surfaces in Killing submersions.

// `!(x > 0.0)` style guards double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod spectral;
pub mod submersion;
pub mod surface;
pub mod verify;
pub mod warped;

pub use error::{Error, Result};
