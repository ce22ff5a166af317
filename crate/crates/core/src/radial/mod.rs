//! Radial calculus on ℍ^N: test functions, operators and quadrature.

pub mod operators;
pub mod quadrature;
pub mod test_function;

pub use operators::{
    grad_norm_sq, iterated_laplace, iterated_laplace_jet, laplace_jet, laplace_radial,
    mode_operator, nabla_power_sq, to_v_transform,
};
pub use quadrature::{integrate_terms, integrate_weighted, Measure, QuadratureSpec, RadialWeight};
pub use test_function::{Profile, RadialTestFunction};
