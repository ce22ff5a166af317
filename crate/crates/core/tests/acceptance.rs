//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use hyperbolic_hardy::constants::{
    anbn, case_leading_constants, chain_replay, dk_ek, thm21_constants, yang_constants, CaseSpec,
    HalfspaceVariant, Rational,
};
use hyperbolic_hardy::halfspace::{
    check_pf1, check_pf2, geodesic_distance, margin_halfspace, margin_hardy_mazya, pf2_grid,
    HalfspacePoint, Quadrature2d,
};
use hyperbolic_hardy::mode_reduction::{
    check_1d_lemmas, check_estimate1, check_estimate2, check_ph1, check_trans1, default_grid,
    mode_coefficient,
};
use hyperbolic_hardy::radial::{QuadratureSpec, RadialTestFunction};
use hyperbolic_hardy::report::MarginReport;
use hyperbolic_hardy::suite::{radial_suite, separable_suite};
use hyperbolic_hardy::verifier::{
    margin_general, margin_poincare_hardy, margin_rellich, margin_thm21, margin_yang,
    sharpness_probe, SharpnessCase, DEFAULT_TOL,
};

type Outcome = Result<String, String>;

fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn qpow(b: &Rational, e: u32) -> Rational {
    num_traits::pow(b.clone(), e as usize)
}

/// d_k and e_k written out from the parity formulas.
fn dk_ek_oracle(k: u32, n: u32) -> (Rational, Rational) {
    let (m, n1) = (k / 2, q(n as i64 - 1, 1));
    let two = q(2, 1);
    let nn = n as i64;
    if k % 2 == 0 {
        let d = (1..=m).fold(Rational::zero(), |s, j| s + qpow(&n1, 4 * m - 2 * j))
            / qpow(&two, 4 * m - 1);
        let e = (1..m as i64).fold(q(9, 1), |p, j| {
            p * q((nn + 4 * j).pow(2), 1) * q((nn - 4 * j - 4).pow(2), 1)
        }) / qpow(&two, 4 * m);
        (d, e)
    } else {
        let d = (1..=m).fold(Rational::zero(), |s, j| s + qpow(&n1, 4 * m - 2 * j + 2))
            / qpow(&two, 4 * m + 1)
            + qpow(&n1, 2 * m) / qpow(&two, 4 * m + 2);
        let e = (1..=m as i64).fold(Rational::one(), |p, j| {
            p * q((nn + 4 * j - 2).pow(2), 1) * q((nn - 4 * j - 2).pow(2), 1)
        }) / qpow(&two, 4 * m + 2);
        (d, e)
    }
}

fn criterion1() -> Outcome {
    let mut cases = 0;
    for k in 1..=6u32 {
        for n in 2 * k + 1..=2 * k + 10 {
            let (d, e) = dk_ek(k, n).map_err(|e| e.to_string())?;
            if (d.clone(), e.clone()) != dk_ek_oracle(k, n) {
                return Err(format!("d_k/e_k mismatch at k={k}, N={n}"));
            }
            if n > 4 {
                let (nn, t) = (n as i64, thm21_constants(n).map_err(|e| e.to_string())?);
                let want = [
                    q((nn - 1).pow(2), 16),
                    q(9, 16),
                    q((nn - 1) * (nn - 3) * (nn * nn - 2 * nn - 7), 16),
                    q((nn - 1) * (nn - 3) * (nn * nn - 4 * nn - 3), 16),
                ];
                if [t.c_r2, t.c_r4, t.c_sinh2, t.c_sinh4] != want {
                    return Err(format!("remainder constants mismatch at N={n}"));
                }
                for beta in 0..n - 4 {
                    let (b, w) = (
                        beta as i64,
                        yang_constants(beta, n).map_err(|e| e.to_string())?,
                    );
                    let want = [
                        q((nn + b).pow(2) * (nn - b - 4).pow(2), 16),
                        q((nn - 2 - b) * (nn - 2 + b) * (nn - 1), 8),
                        q((nn - 1).pow(2), 16),
                    ];
                    if [w.w4, w.w2, w.w0] != want {
                        return Err(format!(
                            "weighted Rellich weights mismatch at β={beta}, N={n}"
                        ));
                    }
                }
            }
            for l in 0..k {
                let case = CaseSpec::new(k, l, n).map_err(|e| e.to_string())?;
                let (first, last) = case_leading_constants(&case).map_err(|e| e.to_string())?;
                if l == 0 && (first.clone(), last.clone()) != (d.clone(), e.clone()) {
                    return Err(format!("l = 0 row differs from d_k/e_k at k={k}, N={n}"));
                }
                let chain = chain_replay(&case).map_err(|e| e.to_string())?;
                if chain.len() != k as usize || chain[0] != first || chain[k as usize - 1] != last {
                    return Err(format!(
                        "chain ends differ from leading constants at {case:?}"
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, exact rational equality"))
}

fn criterion2() -> Outcome {
    for n in 5..=30u32 {
        let nn = n as i64;
        let (a0, b0) = anbn(0, n);
        let base = (nn - 1) * (nn - 3);
        if a0 != q(base * (nn * nn - 4 * nn - 3), 16) || b0 != q(base * (nn * nn - 2 * nn - 7), 16)
        {
            return Err(format!("A_0/B_0 closed form mismatch at N={n}"));
        }
        for mode in 1..=100 {
            let (a, b) = anbn(mode, n);
            if a < a0 || b < b0 {
                return Err(format!("minimum not at n = 0: N={n}, n={mode}"));
            }
        }
    }
    Ok("N = 5..30, n = 0..100".into())
}

fn margins_ok(reports: &[MarginReport], tol: f64, what: &str) -> Result<(), String> {
    for r in reports {
        if r.margin < -tol * r.scale {
            return Err(format!(
                "{what}: {} N={} {} margin {:.3e} (scale {:.3e})",
                r.case, r.n, r.function_id, r.margin, r.scale
            ));
        }
    }
    Ok(())
}

/// All reports of criterion 3, reused by the panel-doubling part of criterion 8.
fn suite_margins(spec: &QuadratureSpec) -> Result<Vec<MarginReport>, String> {
    let suite = radial_suite("standard").map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let s = |e: hyperbolic_hardy::Error| e.to_string();
    for n in 5..=10u32 {
        for u in &suite {
            out.push(margin_thm21(u, n, spec, DEFAULT_TOL).map_err(s)?);
            out.push(margin_rellich(u, n, spec, DEFAULT_TOL).map_err(s)?);
            out.push(margin_poincare_hardy(u, n, spec, DEFAULT_TOL).map_err(s)?);
            for beta in [0, 2] {
                if beta + 4 < n {
                    out.push(margin_yang(u, n, beta, spec, DEFAULT_TOL).map_err(s)?);
                }
            }
            for k in 1..=3 {
                for l in 0..k {
                    if n > 2 * k {
                        let case = CaseSpec::new(k, l, n).map_err(s)?;
                        out.push(margin_general(&case, u, spec, DEFAULT_TOL).map_err(s)?);
                    }
                }
            }
        }
        out.extend(check_1d_lemmas(&suite, n, spec, DEFAULT_TOL).map_err(s)?);
    }
    Ok(out)
}

fn criterion3(reports: &[MarginReport]) -> Outcome {
    margins_ok(reports, 1e-8, "margin")?;
    let worst = reports
        .iter()
        .map(|r| r.margin / r.scale.max(f64::MIN_POSITIVE))
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{} margins ≥ −1e−8·scale (smallest margin/scale {worst:.3e})",
        reports.len()
    ))
}

fn criterion4(spec: &QuadratureSpec) -> Outcome {
    let suite = radial_suite("standard").map_err(|e| e.to_string())?;
    let mut worst = [0.0f64; 4];
    let mut count = 0;
    for n in [5, 7, 9] {
        for u in &suite {
            let g = default_grid(u);
            let mut reports = vec![
                check_ph1(u, n, &g).map_err(|e| e.to_string())?,
                check_trans1(u, n, &g).map_err(|e| e.to_string())?,
            ];
            let d = mode_coefficient(u, n);
            for mode in 0..=2 {
                reports.push(check_estimate1(&d, mode, n, spec).map_err(|e| e.to_string())?);
                reports.push(check_estimate2(&d, mode, n, spec).map_err(|e| e.to_string())?);
            }
            for r in reports {
                let slot = ["ph1", "trans1", "estimate1", "estimate2"]
                    .iter()
                    .position(|s| *s == r.identity_name)
                    .unwrap();
                worst[slot] = worst[slot].max(r.max_rel_residual);
                count += 1;
                if !r.verdict.passed() {
                    return Err(format!(
                        "{} N={n} n={:?} {}: residual {:.3e}",
                        r.identity_name, r.mode, r.function_id, r.max_rel_residual
                    ));
                }
            }
        }
    }
    Ok(format!(
        "{count} reports; worst ph1 {:.1e}, trans1 {:.1e}, estimate1 {:.1e}, estimate2 {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn criterion5(spec: &QuadratureSpec) -> Outcome {
    let case = SharpnessCase::PoincareK1;
    let t = sharpness_probe(case, &case.default_family(5), 5, spec).map_err(|e| e.to_string())?;
    let last = t.last_quotient().unwrap();
    if !t.is_decreasing() {
        return Err(format!(
            "quotients not decreasing: {:?}",
            t.rows.iter().map(|r| r.quotient).collect::<Vec<_>>()
        ));
    }
    if (last - 4.0).abs() > 0.01 * 4.0 {
        return Err(format!("last quotient {last} not within 1% of 4"));
    }
    Ok(format!(
        "{} rates, decreasing, last quotient {last:.6}",
        t.rows.len()
    ))
}

fn criterion6(spec: &QuadratureSpec) -> Outcome {
    let case = SharpnessCase::Thm21R2;
    let t = sharpness_probe(case, &case.default_family(5), 5, spec).map_err(|e| e.to_string())?;
    if t.min_quotient < 1.0 - 1e-6 {
        return Err(format!(
            "minimum quotient {} below 1 − 1e−6",
            t.min_quotient
        ));
    }
    Ok(format!(
        "{} probes, minimum quotient {:.6}",
        t.rows.len(),
        t.min_quotient
    ))
}

fn criterion7() -> Outcome {
    let spec = Quadrature2d::default();
    let s = |e: hyperbolic_hardy::Error| e.to_string();
    let d = geodesic_distance(&HalfspacePoint::new(vec![0.0], std::f64::consts::E).map_err(s)?)
        .map_err(s)?;
    if (d - 1.0).abs() > 1e-12 {
        return Err(format!("geodesic_distance(0, e) = {d}"));
    }
    let suite = separable_suite("standard").map_err(s)?;
    let (mut pf1, mut pf2, mut reports) = (0.0f64, 0.0f64, Vec::new());
    for n in [5u32, 6] {
        let nf = n as f64;
        for v in &suite {
            for alpha in [(nf - 2.0) / 2.0, (nf - 4.0) / 2.0] {
                let a = check_pf1(v, alpha, n, &spec).map_err(s)?;
                let b = check_pf2(v, alpha, n, &pf2_grid(v)).map_err(s)?;
                pf1 = pf1.max(a.max_rel_residual);
                pf2 = pf2.max(b.max_rel_residual);
                if a.max_rel_residual >= 1e-8 || b.max_rel_residual >= 1e-8 {
                    return Err(format!(
                        "identity residual at α={alpha}, N={n}, {}: pf1 {:.2e}, pf2 {:.2e}",
                        v.id, a.max_rel_residual, b.max_rel_residual
                    ));
                }
            }
            reports
                .push(margin_halfspace(HalfspaceVariant::Rellich1, v, n, &spec, 1e-7).map_err(s)?);
            reports
                .push(margin_halfspace(HalfspaceVariant::Rellich2, v, n, &spec, 1e-7).map_err(s)?);
            reports.push(margin_hardy_mazya(v, n, &spec, 1e-7).map_err(s)?);
        }
    }
    margins_ok(&reports, 1e-7, "half-space margin")?;
    Ok(format!(
        "pf1 worst {pf1:.1e}, pf2 worst {pf2:.1e}, {} margins nonnegative, d(0,e) = 1",
        reports.len()
    ))
}

fn jet_fd_check() -> Result<usize, String> {
    let mut checked = 0;
    for u in radial_suite("standard").map_err(|e| e.to_string())? {
        let (a, b) = u.support();
        let h = 1e-4 * (b - a);
        let points: Vec<f64> = (1..10)
            .map(|i| a + (b - a) * (0.05 + 0.9 * i as f64 / 10.0))
            .collect();
        for k in 0..8usize {
            let dk = |x: f64| u.jet(x, k).derivative_value(k);
            let exact: Vec<f64> = points
                .iter()
                .map(|&r| u.jet(r, k + 1).derivative_value(k + 1))
                .collect();
            let scale = exact.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for (&r, &e) in points.iter().zip(&exact) {
                let fd = (dk(r - 2.0 * h) - 8.0 * dk(r - h) + 8.0 * dk(r + h) - dk(r + 2.0 * h))
                    / (12.0 * h);
                if (fd - e).abs() > 1e-5 * scale {
                    return Err(format!(
                        "{} order {} at r={r}: fd {fd} vs jet {e}",
                        u.id,
                        k + 1
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn criterion8(spec: &QuadratureSpec, reports: &[MarginReport]) -> Outcome {
    let s = |e: hyperbolic_hardy::Error| e.to_string();
    let u = RadialTestFunction::bump(0.3, 1.3, 2);
    let v = &separable_suite("standard").map_err(s)?[2];
    let spec2 = Quadrature2d::default();
    let mut functionals = 0;
    for c in [0.5, 3.0] {
        let uc = u.scaled(c);
        let pairs: Vec<(MarginReport, MarginReport)> = vec![
            (
                margin_thm21(&u, 6, spec, DEFAULT_TOL).map_err(s)?,
                margin_thm21(&uc, 6, spec, DEFAULT_TOL).map_err(s)?,
            ),
            (
                margin_rellich(&u, 6, spec, DEFAULT_TOL).map_err(s)?,
                margin_rellich(&uc, 6, spec, DEFAULT_TOL).map_err(s)?,
            ),
            (
                margin_poincare_hardy(&u, 6, spec, DEFAULT_TOL).map_err(s)?,
                margin_poincare_hardy(&uc, 6, spec, DEFAULT_TOL).map_err(s)?,
            ),
            (
                margin_yang(&u, 9, 2, spec, DEFAULT_TOL).map_err(s)?,
                margin_yang(&uc, 9, 2, spec, DEFAULT_TOL).map_err(s)?,
            ),
            {
                let case = CaseSpec::new(3, 1, 7).map_err(s)?;
                (
                    margin_general(&case, &u, spec, DEFAULT_TOL).map_err(s)?,
                    margin_general(&case, &uc, spec, DEFAULT_TOL).map_err(s)?,
                )
            },
            (
                margin_halfspace(HalfspaceVariant::Rellich1, v, 5, &spec2, 1e-7).map_err(s)?,
                margin_halfspace(HalfspaceVariant::Rellich1, &v.scaled(c), 5, &spec2, 1e-7)
                    .map_err(s)?,
            ),
            (
                margin_halfspace(HalfspaceVariant::Rellich2, v, 5, &spec2, 1e-7).map_err(s)?,
                margin_halfspace(HalfspaceVariant::Rellich2, &v.scaled(c), 5, &spec2, 1e-7)
                    .map_err(s)?,
            ),
            (
                margin_hardy_mazya(v, 5, &spec2, 1e-7).map_err(s)?,
                margin_hardy_mazya(&v.scaled(c), 5, &spec2, 1e-7).map_err(s)?,
            ),
        ];
        for (a, b) in &pairs {
            if (b.margin - c * c * a.margin).abs() > 1e-10 * (c * c * a.margin).abs() {
                return Err(format!(
                    "homogeneity fails for {} at c={c}: {} vs {}",
                    a.case,
                    b.margin,
                    c * c * a.margin
                ));
            }
        }
        functionals = pairs.len();
    }
    let mut integrals = 0;
    for r in reports {
        for t in &r.terms {
            if t.change > 1e-10 * t.integral.abs() {
                return Err(format!(
                    "{} {} {}: doubling change {:.2e} of {:.3e}",
                    r.case, r.function_id, t.name, t.change, t.integral
                ));
            }
            integrals += 1;
        }
    }
    let fd = jet_fd_check()?;
    Ok(format!("{functionals} functionals homogeneous, {integrals} integrals doubling-stable, {fd} jet/FD comparisons"))
}

fn main() -> ExitCode {
    let spec = QuadratureSpec::default();
    let mut all = true;
    let mut report = |id: u32, what: &str, budget: Option<u64>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let dt = start.elapsed();
        let over = budget.is_some_and(|b| dt > Duration::from_secs(b));
        let ok = outcome.is_ok() && !over;
        all &= ok;
        let detail = match &outcome {
            Ok(s) => s.clone(),
            Err(s) => s.clone(),
        };
        let limit = budget.map(|b| format!(" / {b} s")).unwrap_or_default();
        let late = if over { " [over budget]" } else { "" };
        println!(
            "criterion {id} {}: {what}: {detail} ({:.2} s{limit}){late}",
            if ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64()
        );
    };
    report(1, "constant exactness", Some(5), &mut criterion1);
    report(2, "A_n/B_n minima", Some(1), &mut criterion2);
    let mut margins = Vec::new();
    report(3, "inequality margins", Some(60), &mut || {
        margins = suite_margins(&spec)?;
        criterion3(&margins)
    });
    report(4, "proof-identity residuals", Some(30), &mut || {
        criterion4(&spec)
    });
    report(5, "Poincaré sharpness approach", Some(10), &mut || {
        criterion5(&spec)
    });
    report(6, "second-order 1/r² lower bound", Some(10), &mut || {
        criterion6(&spec)
    });
    report(
        7,
        "half-space identities and margins",
        Some(60),
        &mut criterion7,
    );
    report(8, "numerical hygiene", None, &mut || {
        criterion8(&spec, &margins)
    });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
