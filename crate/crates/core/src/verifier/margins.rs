//! Margins of the inequalities on ℍ^N for radial test functions.

use crate::constants::{
    chain_replay, dk_ek, poincare_base, poincare_constant, thm21_constants, to_f64, yang_constants,
    CaseSpec,
};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::radial::operators::{laplace_jet, nabla_power_sq_from_jet};
use crate::radial::quadrature::{integrate_terms, support_breaks, Measure};
use crate::radial::{QuadratureSpec, RadialTestFunction};
use crate::report::{MarginReport, Side, Term};

/// Default relative verdict tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// One integral of a margin: name, side, constant, and the pointwise
/// integrand (before the volume element) computed from the jet of u.
pub(crate) struct TermDef<'a> {
    pub name: String,
    pub side: Side,
    pub coefficient: f64,
    pub integrand: Box<dyn Fn(&Jet, f64) -> f64 + Sync + 'a>,
}

impl<'a> TermDef<'a> {
    pub fn new(
        name: impl Into<String>,
        side: Side,
        coefficient: f64,
        integrand: impl Fn(&Jet, f64) -> f64 + Sync + 'a,
    ) -> Self {
        TermDef {
            name: name.into(),
            side,
            coefficient,
            integrand: Box::new(integrand),
        }
    }
}

/// Integrates every term against `measure` and assembles the report. Jets of
/// u of order `jet_order` are shared by all terms at each node.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_margin(
    case: &str,
    n: u32,
    u: &RadialTestFunction,
    measure: Measure,
    jet_order: usize,
    defs: Vec<TermDef<'_>>,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    let breaks = support_breaks(u.breakpoints(), spec)?;
    let label = format!("{case} N={n} {}", u.id);
    let out = integrate_terms(&label, &breaks, defs.len(), spec, |r| {
        let j = u.jet(r, jet_order);
        let dens = measure.density(r);
        defs.iter().map(|d| (d.integrand)(&j, r) * dens).collect()
    })?;
    let terms = defs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Term::new(
                d.name.clone(),
                d.side,
                d.coefficient,
                out.values[i],
                out.changes[i],
            )
        })
        .collect();
    Ok(MarginReport::assemble(case, n, &u.id, terms, tol))
}

pub(crate) fn lap_sq(j: &Jet, n: u32) -> f64 {
    let l = laplace_jet(j, n).map(|l| l.value()).unwrap_or(f64::NAN);
    l * l
}

pub(crate) fn d1_sq(j: &Jet) -> f64 {
    j.coeffs[1] * j.coeffs[1]
}

pub(crate) fn sq(j: &Jet) -> f64 {
    j.value() * j.value()
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(msg))
    }
}

/// ∫(Δu)² − ((N−1)/2)²∫|∇u|² − (N−1)²/16 ∫u²/r² − 9/16 ∫u²/r⁴
/// − c_sinh2 ∫u²/sinh² − c_sinh4 ∫u²/sinh⁴.
pub fn margin_thm21(
    u: &RadialTestFunction,
    n: u32,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    let c = thm21_constants(n)?;
    let defs = vec![
        TermDef::new("(Δu)^2", Side::Lhs, 1.0, move |j, _| lap_sq(j, n)),
        TermDef::new("|∇u|^2", Side::Rhs, to_f64(&poincare_base(n)), |j, _| {
            d1_sq(j)
        }),
        TermDef::new("u^2/r^2", Side::Rhs, to_f64(&c.c_r2), |j, r| {
            sq(j) / r.powi(2)
        }),
        TermDef::new("u^2/r^4", Side::Rhs, to_f64(&c.c_r4), |j, r| {
            sq(j) / r.powi(4)
        }),
        TermDef::new("u^2/sinh^2", Side::Rhs, to_f64(&c.c_sinh2), |j, r| {
            sq(j) / r.sinh().powi(2)
        }),
        TermDef::new("u^2/sinh^4", Side::Rhs, to_f64(&c.c_sinh4), |j, r| {
            sq(j) / r.sinh().powi(4)
        }),
    ];
    assemble_margin("thm21", n, u, Measure::Ambient(n), 2, defs, spec, tol)
}

/// ∫|∇u|² − ((N−1)/2)²∫u² − (1/4)∫u²/r²
pub fn margin_poincare_hardy(
    u: &RadialTestFunction,
    n: u32,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    require(n > 2, format!("requires N > 2 (got N={n})"))?;
    let defs = vec![
        TermDef::new("|∇u|^2", Side::Lhs, 1.0, |j, _| d1_sq(j)),
        TermDef::new("u^2", Side::Rhs, to_f64(&poincare_base(n)), |j, _| sq(j)),
        TermDef::new("u^2/r^2", Side::Rhs, 0.25, |j, r| sq(j) / r.powi(2)),
    ];
    assemble_margin("poincare", n, u, Measure::Ambient(n), 1, defs, spec, tol)
}

/// ∫(Δu)² − ((N−1)/2)⁴∫u² − ((N−1)²/8)∫u²/r² − (9/16)∫u²/r⁴
pub fn margin_rellich(
    u: &RadialTestFunction,
    n: u32,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    require(n > 4, format!("requires N > 4 (got N={n})"))?;
    let (d2, e2) = dk_ek(2, n)?;
    let p = poincare_constant(&CaseSpec::new(2, 0, n)?);
    let defs = vec![
        TermDef::new("(Δu)^2", Side::Lhs, 1.0, move |j, _| lap_sq(j, n)),
        TermDef::new("u^2", Side::Rhs, to_f64(&p), |j, _| sq(j)),
        TermDef::new("u^2/r^2", Side::Rhs, to_f64(&d2), |j, r| sq(j) / r.powi(2)),
        TermDef::new("u^2/r^4", Side::Rhs, to_f64(&e2), |j, r| sq(j) / r.powi(4)),
    ];
    assemble_margin("rellich", n, u, Measure::Ambient(n), 2, defs, spec, tol)
}

/// ∫(Δu)²/r^β − w4 ∫u²/r^{β+4} − w2 ∫u²/r^{β+2} − w0 ∫u²/r^β
pub fn margin_yang(
    u: &RadialTestFunction,
    n: u32,
    beta: u32,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    let w = yang_constants(beta, n)?;
    margin_yang_with(
        u,
        n,
        beta,
        [to_f64(&w.w4), to_f64(&w.w2), to_f64(&w.w0)],
        spec,
        tol,
    )
}

/// [`margin_yang`] with explicit weights (w4, w2, w0).
pub fn margin_yang_with(
    u: &RadialTestFunction,
    n: u32,
    beta: u32,
    weights: [f64; 3],
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    let b = beta as i32;
    let defs = vec![
        TermDef::new(format!("(Δu)^2/r^{beta}"), Side::Lhs, 1.0, move |j, r| {
            lap_sq(j, n) * r.powi(-b)
        }),
        TermDef::new(
            format!("u^2/r^{}", beta + 4),
            Side::Rhs,
            weights[0],
            move |j, r| sq(j) * r.powi(-b - 4),
        ),
        TermDef::new(
            format!("u^2/r^{}", beta + 2),
            Side::Rhs,
            weights[1],
            move |j, r| sq(j) * r.powi(-b - 2),
        ),
        TermDef::new(
            format!("u^2/r^{beta}"),
            Side::Rhs,
            weights[2],
            move |j, r| sq(j) * r.powi(-b),
        ),
    ];
    assemble_margin(
        &format!("yang(beta={beta})"),
        n,
        u,
        Measure::Ambient(n),
        2,
        defs,
        spec,
        tol,
    )
}

/// Largest k accepted by [`margin_general`].
pub const GENERAL_K_MAX: u32 = 4;

/// ∫|∇^k u|² − ((N−1)/2)^{2(k−l)}∫|∇^l u|² − Σ_i α^i ∫u²/r^{2i} with the
/// chain coefficients α^i.
pub fn margin_general(
    case: &CaseSpec,
    u: &RadialTestFunction,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<MarginReport> {
    require(
        case.k <= GENERAL_K_MAX,
        format!(
            "margin_general supports k ≤ {GENERAL_K_MAX} (got k={})",
            case.k
        ),
    )?;
    let (k, l, n) = (case.k, case.l, case.n);
    let chain = chain_replay(case)?;
    let mut defs = vec![
        TermDef::new(format!("|∇^{k}u|^2"), Side::Lhs, 1.0, move |j, _| {
            nabla_power_sq_from_jet(j, n, k).unwrap_or(f64::NAN)
        }),
        TermDef::new(
            format!("|∇^{l}u|^2"),
            Side::Rhs,
            to_f64(&poincare_constant(case)),
            move |j, _| nabla_power_sq_from_jet(j, n, l).unwrap_or(f64::NAN),
        ),
    ];
    for (i, c) in chain.iter().enumerate() {
        let p = 2 * (i as i32 + 1);
        defs.push(TermDef::new(
            format!("u^2/r^{p}"),
            Side::Rhs,
            to_f64(c),
            move |j, r| sq(j) / r.powi(p),
        ));
    }
    let label = format!("general(k={k},l={l})");
    assemble_margin(
        &label,
        n,
        u,
        Measure::Ambient(n),
        2 * k as usize + 2,
        defs,
        spec,
        tol,
    )
}
