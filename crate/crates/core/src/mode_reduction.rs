//! Checks of the spherical-mode reduction on ℍ^N: the pointwise transform
//! identities for v = sinh^{(N−1)/2} u, the integrated mode estimates, and
//! the three 1-D inequalities they feed into.
//!
//! Mode-level integrals carry the line measure dr. For a radial u the n = 0
//! mode coefficient is d = sinh^{(N−1)/2} u, so ambient integrals of u equal
//! line integrals of d.

use crate::constants::{lambda_n, poincare_base, thm21_constants, to_f64};
use crate::error::{Error, Result};
use crate::jet::{coth_r, sinh_cosh_r};
use crate::radial::operators::{laplace_radial, to_v_transform};
use crate::radial::quadrature::{chebyshev_points, integrate_terms, support_breaks, Measure};
use crate::radial::{QuadratureSpec, RadialTestFunction};
use crate::report::{
    AlternateReading, IdentityResidualReport, MarginReport, ResidualAcc, Side, Verdict,
};
use crate::verifier::margin_thm21;
use crate::verifier::margins::{assemble_margin, d1_sq, sq, TermDef};

pub const POINTWISE_TOL: f64 = 1e-10;
pub const INTEGRAL_TOL: f64 = 1e-8;

/// The mode coefficient d = sinh^{(N−1)/2} u of a radial function.
pub fn mode_coefficient(u: &RadialTestFunction, n: u32) -> RadialTestFunction {
    u.sinh_power((n as f64 - 1.0) / 2.0)
}

/// 50 Chebyshev points in the support, 1% away from each end.
pub fn default_grid(u: &RadialTestFunction) -> Vec<f64> {
    let (a, b) = u.support();
    chebyshev_points(a, b, 50, 0.01)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    match grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        Some(r) => Err(Error::domain(format!(
            "sample points must lie in (0, ∞) (got {r})"
        ))),
        None => Ok(()),
    }
}

fn pointwise_report(
    name: &str,
    n: u32,
    u: &RadialTestFunction,
    grid: &[f64],
    acc: ResidualAcc,
) -> IdentityResidualReport {
    IdentityResidualReport {
        identity_name: name.into(),
        n,
        function_id: u.id.clone(),
        mode: None,
        alpha: None,
        sample_grid: grid.iter().map(|&r| vec![r]).collect(),
        reading: "displayed".into(),
        max_abs_residual: acc.max_abs,
        max_rel_residual: acc.max_rel,
        tol: POINTWISE_TOL,
        verdict: Verdict::from_bool(acc.passes(POINTWISE_TOL)),
        alternate: None,
    }
}

/// (u′)² = sinh^{−(N−1)}·((v′)² + ((N−1)²/4)coth²·v² − (N−1)coth·v·v′)
pub fn check_ph1(u: &RadialTestFunction, n: u32, grid: &[f64]) -> Result<IdentityResidualReport> {
    check_grid(grid)?;
    let c = n as f64 - 1.0;
    let mut acc = ResidualAcc::default();
    for &r in grid {
        let du = u.jet(r, 1).coeffs[1];
        let v = to_v_transform(u, n, r, 1)?;
        let (v0, v1) = (v.value(), v.coeffs[1]);
        let coth = coth_r(r, 0).value();
        let w = r.sinh().powf(-c);
        let terms = [
            v1 * v1,
            c * c / 4.0 * coth * coth * v0 * v0,
            -c * coth * v0 * v1,
        ];
        let lhs = du * du;
        let rhs = w * terms.iter().sum::<f64>();
        acc.push(
            lhs,
            rhs,
            lhs + w * terms.iter().map(|t| t.abs()).sum::<f64>(),
        );
    }
    Ok(pointwise_report("ph1", n, u, grid, acc))
}

/// Δu = sinh^{−(N−1)/2}·(v″ − (((N−1)(N−3)/4)coth² + (N−1)/2)·v)
pub fn check_trans1(
    u: &RadialTestFunction,
    n: u32,
    grid: &[f64],
) -> Result<IdentityResidualReport> {
    check_grid(grid)?;
    let nf = n as f64;
    let mut acc = ResidualAcc::default();
    for &r in grid {
        let lhs = laplace_radial(u, n, r, 0)?.value();
        let v = to_v_transform(u, n, r, 2)?;
        let coth = coth_r(r, 0).value();
        let (s, _) = sinh_cosh_r(r, 0);
        let w = s.value().powf(-(nf - 1.0) / 2.0);
        let t2 = (nf - 1.0) * (nf - 3.0) / 4.0 * coth * coth * v.value();
        let t3 = (nf - 1.0) / 2.0 * v.value();
        let v2 = v.derivative_value(2);
        let rhs = w * (v2 - t2 - t3);
        acc.push(lhs, rhs, lhs.abs() + w * (v2.abs() + t2.abs() + t3.abs()));
    }
    Ok(pointwise_report("trans1", n, u, grid, acc))
}

fn require_dimension(n: u32) -> Result<()> {
    if n >= 5 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "mode estimates require N ≥ 5 (got N={n})"
        )))
    }
}

/// d″, d′, d and the powers of 1/sinh at one node.
struct ModeNode {
    d0: f64,
    d1: f64,
    d2: f64,
    s2: f64,
    coth: f64,
}

fn mode_node(d: &RadialTestFunction, r: f64) -> ModeNode {
    let j = d.jet(r, 2);
    let s = r.sinh();
    ModeNode {
        d0: j.value(),
        d1: j.coeffs[1],
        d2: j.derivative_value(2),
        s2: 1.0 / (s * s),
        coth: coth_r(r, 0).value(),
    }
}

fn mode_integrals<F>(
    label: &str,
    d: &RadialTestFunction,
    width: usize,
    spec: &QuadratureSpec,
    f: F,
) -> Result<Vec<f64>>
where
    F: Fn(&ModeNode) -> Vec<f64> + Sync,
{
    if d.is_zero() {
        return Ok(vec![0.0; width]);
    }
    let breaks = support_breaks(d.breakpoints(), spec)?;
    Ok(integrate_terms(label, &breaks, width, spec, |r| f(&mode_node(d, r)))?.values)
}

fn integral_report(
    name: &str,
    n: u32,
    mode: u32,
    d: &RadialTestFunction,
    reading: &str,
    lhs: f64,
    rhs: f64,
    alternate: Option<AlternateReading>,
) -> IdentityResidualReport {
    let mut acc = ResidualAcc::default();
    acc.push(lhs, rhs, lhs.abs());
    IdentityResidualReport {
        identity_name: name.into(),
        n,
        function_id: d.id.clone(),
        mode: Some(mode),
        alpha: None,
        sample_grid: vec![],
        reading: reading.into(),
        max_abs_residual: acc.max_abs,
        max_rel_residual: acc.max_rel,
        tol: INTEGRAL_TOL,
        verdict: Verdict::from_bool(acc.passes(INTEGRAL_TOL)),
        alternate,
    }
}

/// ∫(d″ − (q/4)coth²·d − ((N−1)/2)d − λ_n d/sinh²)² dr against its expansion
/// into six integrals, q = (N−1)(N−3).
pub fn check_estimate1(
    d: &RadialTestFunction,
    mode: u32,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<IdentityResidualReport> {
    require_dimension(n)?;
    let nf = n as f64;
    let lam = lambda_n(mode, n) as f64;
    let q = (nf - 1.0) * (nf - 3.0);
    let vals = mode_integrals(
        &format!("estimate1 n={mode} N={n} {}", d.id),
        d,
        7,
        spec,
        |m| {
            let e = m.d2
                - q / 4.0 * m.coth * m.coth * m.d0
                - (nf - 1.0) / 2.0 * m.d0
                - lam * m.s2 * m.d0;
            vec![
                e * e,
                m.d2 * m.d2,
                m.d1 * m.d1,
                m.d1 * m.d1 * m.s2,
                m.d0 * m.d0,
                m.d0 * m.d0 * m.s2 * m.s2,
                m.d0 * m.d0 * m.s2,
            ]
        },
    )?;
    let coef = [
        1.0,
        (nf - 1.0).powi(2) / 2.0,
        q / 2.0 + 2.0 * lam,
        (nf - 1.0).powi(4) / 16.0,
        lam * lam + q * lam / 2.0 - 6.0 * lam + q * q / 16.0 - 1.5 * q,
        q * q / 8.0 + (nf - 1.0).powi(2) * (nf - 3.0) / 4.0 + q * lam / 2.0 + (nf - 5.0) * lam - q,
    ];
    let rhs: f64 = coef.iter().zip(&vals[1..]).map(|(c, v)| c * v).sum();
    Ok(integral_report(
        "estimate1",
        n,
        mode,
        d,
        "six displayed terms summed",
        vals[0],
        rhs,
        None,
    ))
}

/// ((N−1)/2)²∫((d′)² + λ_n d²/sinh² + ((N−1)²/4)coth²·d² − (N−1)coth·d·d′) dr
/// against ((N−1)/2)²∫(d′)² + ((N−1)⁴/16)∫d² + c∫d²/sinh² with
/// c = (N−1)²λ_n/4 + (N−1)³(N−3)/16. The alternate reading uses the
/// displayed signs and drops the λ_n term.
pub fn check_estimate2(
    d: &RadialTestFunction,
    mode: u32,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<IdentityResidualReport> {
    require_dimension(n)?;
    let nf = n as f64;
    let lam = lambda_n(mode, n) as f64;
    let p2 = to_f64(&poincare_base(n));
    let vals = mode_integrals(
        &format!("estimate2 n={mode} N={n} {}", d.id),
        d,
        4,
        spec,
        |m| {
            let direct = m.d1 * m.d1
                + lam * m.d0 * m.d0 * m.s2
                + (nf - 1.0).powi(2) / 4.0 * m.coth * m.coth * m.d0 * m.d0
                - (nf - 1.0) * m.coth * m.d0 * m.d1;
            vec![p2 * direct, m.d1 * m.d1, m.d0 * m.d0, m.d0 * m.d0 * m.s2]
        },
    )?;
    let (lhs, g, l2, s2) = (vals[0], vals[1], vals[2], vals[3]);
    let c4 = (nf - 1.0).powi(4) / 16.0;
    let c_s = (nf - 1.0).powi(3) * (nf - 3.0) / 16.0;
    let derived = p2 * g + c4 * l2 + ((nf - 1.0).powi(2) * lam / 4.0 + c_s) * s2;
    let displayed = p2 * g - c4 * l2 - c_s * s2;
    let mut alt = ResidualAcc::default();
    alt.push(lhs, displayed, lhs.abs());
    let alternate = AlternateReading {
        reading: "displayed signs, no lambda term".into(),
        max_abs_residual: alt.max_abs,
        max_rel_residual: alt.max_rel,
        verdict: Verdict::from_bool(alt.passes(INTEGRAL_TOL)),
    };
    Ok(integral_report(
        "estimate2",
        n,
        mode,
        d,
        "integrated by parts",
        lhs,
        derived,
        Some(alternate),
    ))
}

/// Labels of the three 1-D inequalities, in the order returned by
/// [`lemma_margins`].
pub const LEMMA_CASES: [&str; 3] = ["hardy1d_sinh", "hardy1d", "rellich1d"];

/// The three 1-D margins of one function d on (0, ∞) with dr:
/// ∫d′²/sinh² − (9/4)∫d²/sinh⁴ − ∫d²/sinh²; ∫d′² − (1/4)∫d²/r²;
/// ∫d″² − (9/16)∫d²/r⁴.
pub fn lemma_margins(
    d: &RadialTestFunction,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<[MarginReport; 3]> {
    let s2 = |r: f64| r.sinh().powi(-2);
    let sinh = vec![
        TermDef::new("u'^2/sinh^2", Side::Lhs, 1.0, move |j, r| d1_sq(j) * s2(r)),
        TermDef::new("u^2/sinh^4", Side::Rhs, 2.25, move |j, r| {
            sq(j) * s2(r) * s2(r)
        }),
        TermDef::new("u^2/sinh^2", Side::Rhs, 1.0, move |j, r| sq(j) * s2(r)),
    ];
    let hardy = vec![
        TermDef::new("u'^2", Side::Lhs, 1.0, |j, _| d1_sq(j)),
        TermDef::new("u^2/r^2", Side::Rhs, 0.25, |j, r| sq(j) / r.powi(2)),
    ];
    let rellich = vec![
        TermDef::new("u''^2", Side::Lhs, 1.0, |j, _| {
            j.derivative_value(2).powi(2)
        }),
        TermDef::new("u^2/r^4", Side::Rhs, 9.0 / 16.0, |j, r| sq(j) / r.powi(4)),
    ];
    // The dimension is not used by line integrals and is reported as 1.
    Ok([
        assemble_margin(LEMMA_CASES[0], 1, d, Measure::Line, 1, sinh, spec, tol)?,
        assemble_margin(LEMMA_CASES[1], 1, d, Measure::Line, 1, hardy, spec, tol)?,
        assemble_margin(LEMMA_CASES[2], 1, d, Measure::Line, 2, rellich, spec, tol)?,
    ])
}

/// [`lemma_margins`] on the mode coefficients d = sinh^{(N−1)/2}u of every
/// suite member; each report carries N.
pub fn check_1d_lemmas(
    suite: &[RadialTestFunction],
    n: u32,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Vec<MarginReport>> {
    let mut out = Vec::with_capacity(3 * suite.len());
    for u in suite {
        let d = mode_coefficient(u, n);
        for mut r in lemma_margins(&d, spec, tol)? {
            r.n = n;
            out.push(r);
        }
    }
    Ok(out)
}

/// The n = 0 reduction of the second-order margin on ℍ^N.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode0Decomposition {
    pub thm21: MarginReport,
    /// hardy1d_sinh, hardy1d, rellich1d margins of d = sinh^{(N−1)/2}u
    pub lemmas: [MarginReport; 3],
    /// rellich1d + ((N−1)/2)²·hardy1d + ((N−1)(N−3)/2)·hardy1d_sinh
    pub recombined: f64,
    /// |thm21.margin − recombined| / thm21.scale
    pub rel_residual: f64,
}

/// Expresses the margin of the second-order inequality with its four
/// remainder terms as a nonnegative combination of the three 1-D margins
/// of the n = 0 mode coefficient.
pub fn mode0_decomposition(
    u: &RadialTestFunction,
    n: u32,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Mode0Decomposition> {
    thm21_constants(n)?;
    let thm21 = margin_thm21(u, n, spec, tol)?;
    let lemmas = lemma_margins(&mode_coefficient(u, n), spec, tol)?;
    let nf = n as f64;
    let recombined = lemmas[2].margin
        + to_f64(&poincare_base(n)) * lemmas[1].margin
        + (nf - 1.0) * (nf - 3.0) / 2.0 * lemmas[0].margin;
    let rel_residual = if thm21.scale > 0.0 {
        (thm21.margin - recombined).abs() / thm21.scale
    } else {
        (thm21.margin - recombined).abs()
    };
    Ok(Mode0Decomposition {
        thm21,
        lemmas,
        recombined,
        rel_residual,
    })
}
