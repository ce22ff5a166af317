//! Margins of the inequalities on ℍ^N and sharpness probes.

pub mod margins;
pub mod sharpness;

pub use margins::{
    margin_general, margin_poincare_hardy, margin_rellich, margin_thm21, margin_yang,
    margin_yang_with, DEFAULT_TOL, GENERAL_K_MAX,
};
pub use sharpness::{sharpness_probe, FamilyParam, SharpnessCase, SharpnessRow, SharpnessTable};
