//! Report records shared by the verifier, the mode-reduction checks and the
//! half-space checks.
//!
//! Integrals over ℍ^N omit the area of the unit sphere, and half-space
//! integrals omit the area of S^{N−2}; both factors multiply every term.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

/// One integral of an inequality with its constant applied: value =
/// coefficient · integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub side: Side,
    pub coefficient: f64,
    pub integral: f64,
    pub value: f64,
    /// change of the integral under the last panel doubling
    pub change: f64,
}

impl Term {
    pub fn new(
        name: impl Into<String>,
        side: Side,
        coefficient: f64,
        integral: f64,
        change: f64,
    ) -> Term {
        Term {
            name: name.into(),
            side,
            coefficient,
            integral,
            value: coefficient * integral,
            change,
        }
    }
}

/// lhs − rhs of one inequality on one function.
///
/// `noise` bounds the numerical uncertainty of `margin`: the coefficient-weighted
/// doubling changes plus a rounding floor of one ulp-scale per term. The verdict
/// passes iff `margin ≥ −tol·scale` and `noise ≤ tol·scale`, so a tolerance
/// tighter than what the numerics can resolve is reported as a failure rather
/// than a pass by luck.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub case: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub function_id: String,
    pub terms: Vec<Term>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub scale: f64,
    pub noise: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

impl MarginReport {
    pub fn assemble(
        case: impl Into<String>,
        n: u32,
        function_id: impl Into<String>,
        terms: Vec<Term>,
        tol: f64,
    ) -> MarginReport {
        let side_sum =
            |s: Side| -> f64 { terms.iter().filter(|t| t.side == s).map(|t| t.value).sum() };
        let (lhs, rhs) = (side_sum(Side::Lhs), side_sum(Side::Rhs));
        let margin = lhs - rhs;
        let scale = lhs.abs() + rhs.abs();
        let noise = terms
            .iter()
            .map(|t| (t.coefficient * t.change).abs() + f64::EPSILON * t.value.abs())
            .sum::<f64>();
        let ok = margin >= -tol * scale && noise <= tol * scale;
        MarginReport {
            case: case.into(),
            n,
            function_id: function_id.into(),
            terms,
            lhs,
            rhs,
            margin,
            scale,
            noise,
            tol,
            verdict: Verdict::from_bool(ok),
        }
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// Margin recomputed from the terms; agrees with `margin` up to rounding.
    pub fn recomputed_margin(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| match t.side {
                Side::Lhs => t.value,
                Side::Rhs => -t.value,
            })
            .sum()
    }
}

/// A second reading of an identity whose printed form differs from the
/// derived one, evaluated on the same points or integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternateReading {
    pub reading: String,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub verdict: Verdict,
}

/// Residuals of a pointwise or integral identity.
///
/// Relative residuals divide by the sum of the magnitudes of the terms in the
/// identity, so they stay meaningful where both sides vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidualReport {
    pub identity_name: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub function_id: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    /// Points at which a pointwise identity was sampled, each as [r] or [ρ, y];
    /// empty for integral identities.
    pub sample_grid: Vec<Vec<f64>>,
    pub reading: String,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub tol: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alternate: Option<AlternateReading>,
}

/// Running maxima of absolute and relative residuals.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ResidualAcc {
    pub max_abs: f64,
    pub max_rel: f64,
}

impl ResidualAcc {
    pub fn push(&mut self, lhs: f64, rhs: f64, magnitude: f64) {
        let abs = (lhs - rhs).abs();
        let rel = if magnitude > 0.0 {
            abs / magnitude
        } else if abs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self
            .max_rel
            .max(if rel.is_nan() { f64::INFINITY } else { rel });
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel < tol
    }
}
