//! Verification toolkit for improved Poincaré–Hardy inequalities on hyperbolic
//! space.

pub mod cli;
pub mod constants;
pub mod error;
pub mod halfspace;
pub mod jet;
pub mod mode_reduction;
pub mod radial;
pub mod report;
pub mod suite;
pub mod verifier;

pub use error::{Error, Result};
