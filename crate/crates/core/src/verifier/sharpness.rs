//! Quotient tables along families that approach the sharp constants.

use serde::{Deserialize, Serialize};

use super::margins::{d1_sq, lap_sq, sq};
use crate::constants::{poincare_base, thm21_constants, to_f64};
use crate::error::{Error, Result};
use crate::radial::quadrature::{integrate_terms, support_breaks, Measure};
use crate::radial::{QuadratureSpec, RadialTestFunction};

/// Relative slack allowed below the sharp constant.
pub const LOWER_BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharpnessCase {
    /// ∫|∇u|² / ∫u², sharp value ((N−1)/2)².
    PoincareK1,
    /// (∫(Δu)² − ((N−1)/2)²∫|∇u|²) / ∫u²/r², sharp value (N−1)²/16.
    Thm21R2,
}

impl SharpnessCase {
    pub fn label(&self) -> &'static str {
        match self {
            SharpnessCase::PoincareK1 => "poincare_k1",
            SharpnessCase::Thm21R2 => "thm21_r2",
        }
    }

    pub fn parse(s: &str) -> Result<SharpnessCase> {
        match s {
            "poincare_k1" => Ok(SharpnessCase::PoincareK1),
            "thm21_r2" => Ok(SharpnessCase::Thm21R2),
            _ => Err(Error::domain(format!("unknown sharpness case '{s}'"))),
        }
    }

    pub fn sharp_constant(&self, n: u32) -> Result<f64> {
        match self {
            SharpnessCase::PoincareK1 => Ok(to_f64(&poincare_base(n))),
            SharpnessCase::Thm21R2 => Ok(to_f64(&thm21_constants(n)?.c_r2)),
        }
    }

    /// The probe family used when none is given. Exponential rates approach
    /// (N−1)/2 from above with the cutoff radius as large as the double range
    /// allows.
    pub fn default_family(&self, n: u32) -> Vec<FamilyParam> {
        match self {
            SharpnessCase::PoincareK1 => {
                let a0 = (n as f64 - 1.0) / 2.0;
                let radius = default_radius(n);
                [1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002]
                    .iter()
                    .map(|&d| FamilyParam::ExpCutoff {
                        rate: a0 + d,
                        radius,
                    })
                    .collect()
            }
            SharpnessCase::Thm21R2 => {
                let mut v: Vec<FamilyParam> = [
                    (2.0, 8.0),
                    (2.0, 20.0),
                    (3.0, 50.0),
                    (4.0, 100.0),
                    (5.0, 120.0),
                ]
                .iter()
                .map(|&(lo, hi)| FamilyParam::LogWindow { lo, hi })
                .collect();
                v.extend(
                    [(4.0, 6.0), (9.0, 11.0), (19.0, 21.0), (39.0, 41.0)]
                        .iter()
                        .map(|&(a, b)| FamilyParam::Bump { a, b }),
                );
                v
            }
        }
    }
}

/// sinh^{N−1} r overflows a double near (N−1)r ≈ 709; the cutoff family lives
/// on [0, 2R].
const MAX_SINH_EXPONENT: f64 = 640.0;

fn default_radius(n: u32) -> f64 {
    (MAX_SINH_EXPONENT / (2.0 * (n as f64 - 1.0))).min(80.0)
}

/// One member of a probe family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParam {
    /// u = e^{−ar}·cutoff(r/R)
    ExpCutoff { rate: f64, radius: f64 },
    /// u = sinh^{−(N−1)/2} r · r^{1/2} · (bump in log r over [lo, hi])
    LogWindow { lo: f64, hi: f64 },
    /// u = the bump on [a, b]
    Bump { a: f64, b: f64 },
}

impl FamilyParam {
    /// The scalar that orders the table: the rate, or the upper support end.
    pub fn value(&self) -> f64 {
        match *self {
            FamilyParam::ExpCutoff { rate, .. } => rate,
            FamilyParam::LogWindow { hi, .. } => hi,
            FamilyParam::Bump { b, .. } => b,
        }
    }

    fn function(&self, case: SharpnessCase, n: u32) -> Result<RadialTestFunction> {
        let bad = |msg: String| Err(Error::domain(msg));
        match (case, *self) {
            (SharpnessCase::PoincareK1, FamilyParam::ExpCutoff { rate, radius }) => {
                let a0 = (n as f64 - 1.0) / 2.0;
                if !(rate > a0) || !(radius > 0.0) {
                    return bad(format!("exp-cutoff family needs a > (N−1)/2 = {a0} and R > 0 (got a={rate}, R={radius})"));
                }
                if 2.0 * radius * (n as f64 - 1.0) > MAX_SINH_EXPONENT {
                    return bad(format!(
                        "exp-cutoff radius R={radius} exceeds the double range at N={n} (need R ≤ {})",
                        MAX_SINH_EXPONENT / (2.0 * (n as f64 - 1.0))
                    ));
                }
                Ok(RadialTestFunction::exp_cutoff(rate, radius))
            }
            (SharpnessCase::Thm21R2, FamilyParam::LogWindow { lo, hi }) => {
                if !(0.0 < lo && lo < hi) {
                    return bad(format!("log window needs 0 < lo < hi (got [{lo}, {hi}])"));
                }
                Ok(RadialTestFunction::log_bump(0.5, lo, hi).sinh_power(-(n as f64 - 1.0) / 2.0))
            }
            (SharpnessCase::Thm21R2, FamilyParam::Bump { a, b }) => {
                if !(0.0 < a && a < b) {
                    return bad(format!("bump family needs 0 < a < b (got [{a}, {b}])"));
                }
                Ok(RadialTestFunction::bump(a, b, 0))
            }
            (c, p) => bad(format!("family {p:?} does not apply to {}", c.label())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub param: FamilyParam,
    pub function_id: String,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessTable {
    pub case: SharpnessCase,
    #[serde(rename = "N")]
    pub n: u32,
    pub sharp_constant: f64,
    pub rows: Vec<SharpnessRow>,
    pub min_quotient: f64,
    /// every quotient ≥ sharp_constant·(1 − LOWER_BOUND_SLACK)
    pub lower_bound_holds: bool,
}

impl SharpnessTable {
    /// Whether quotients decrease strictly along the rows.
    pub fn is_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].quotient < w[0].quotient)
    }

    pub fn last_quotient(&self) -> Option<f64> {
        self.rows.last().map(|r| r.quotient)
    }
}

fn quotient(
    case: SharpnessCase,
    u: &RadialTestFunction,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let breaks = support_breaks(u.breakpoints(), spec)?;
    let measure = Measure::Ambient(n);
    let label = format!("{} N={n} {}", case.label(), u.id);
    match case {
        SharpnessCase::PoincareK1 => {
            let out = integrate_terms(&label, &breaks, 2, spec, |r| {
                let j = u.jet(r, 1);
                let w = measure.density(r);
                vec![d1_sq(&j) * w, sq(&j) * w]
            })?;
            Ok(out.values[0] / out.values[1])
        }
        SharpnessCase::Thm21R2 => {
            let out = integrate_terms(&label, &breaks, 3, spec, |r| {
                let j = u.jet(r, 2);
                let w = measure.density(r);
                vec![lap_sq(&j, n) * w, d1_sq(&j) * w, sq(&j) / (r * r) * w]
            })?;
            let p2 = to_f64(&poincare_base(n));
            Ok((out.values[0] - p2 * out.values[1]) / out.values[2])
        }
    }
}

/// Evaluates the quotient of `case` on each family member, in the given order.
pub fn sharpness_probe(
    case: SharpnessCase,
    family: &[FamilyParam],
    n: u32,
    spec: &QuadratureSpec,
) -> Result<SharpnessTable> {
    let sharp = case.sharp_constant(n)?;
    if family.is_empty() {
        return Err(Error::domain("empty probe family"));
    }
    let rows = family
        .iter()
        .map(|p| {
            let u = p.function(case, n)?;
            Ok(SharpnessRow {
                param: *p,
                quotient: quotient(case, &u, n, spec)?,
                function_id: u.id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_quotient = rows
        .iter()
        .map(|r| r.quotient)
        .fold(f64::INFINITY, f64::min);
    Ok(SharpnessTable {
        case,
        n,
        sharp_constant: sharp,
        lower_bound_holds: min_quotient >= sharp * (1.0 - LOWER_BOUND_SLACK),
        min_quotient,
        rows,
    })
}
