//! Boundary-integral solvers for simultaneous electric and hydrodynamic
//! cloaking of an object in a Hele-Shaw cell driven by electro-osmosis.

// NaN must fail the positivity guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod error;
pub mod exterior;
pub mod field;
pub mod geometry;
pub mod layerpot;
mod linalg;
pub mod metrics;
pub mod optimizer;
pub mod presets;
pub mod validation;

pub use error::{CloakError, Result};
