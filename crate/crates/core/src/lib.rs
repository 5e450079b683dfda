//! Bismut-Ricci-flat generalized metrics on aligned homogeneous spaces
//! `G₁×G₂/K` and on compact Lie groups.
pub mod aligned;
pub mod brf_solver;
pub mod catalog;
pub mod curvature;
pub mod error;
pub mod report;
pub mod grflow;
pub mod group_brf;
pub mod linalg;
pub mod liealg;
pub mod scalar;
pub use error::{BrfError, Result};
