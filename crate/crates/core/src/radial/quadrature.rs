//! Composite Gauss–Legendre quadrature with panel doubling.
//!
//! Several integrands are evaluated at once from one closure returning a vector,
//! so that the jets at each node are shared between terms. Panels are
//! evaluated in parallel and reduced in panel order, which keeps results
//! bitwise reproducible.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, QuadratureFailure, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Upper end of the integration range; `None` means the support end.
    pub r_max: Option<f64>,
    /// Panels on the first pass, before doubling.
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Number of extra geometrically shrinking panels next to r = 0 when the
    /// range starts at the origin.
    pub origin_levels: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Doubling stops with a failure once this many panels would be exceeded.
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            r_max: None,
            panels: 32,
            nodes_per_panel: 64,
            origin_levels: 8,
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_panels: 2048,
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> GaussLegendre {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
            .clone()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }
}

/// Panel endpoints over the breakpoint-separated range. `panels` are
/// distributed across segments in proportion to their length. If the range
/// starts at 0, the panel touching it is split geometrically into
/// `origin_levels + 1` pieces, each cut again into `refine` equal parts so that
/// doubling `panels` (and `refine` with it) refines the graded zone too.
pub fn panel_edges(
    breaks: &[f64],
    panels: usize,
    origin_levels: usize,
    refine: usize,
) -> Vec<(f64, f64)> {
    let total = breaks.last().unwrap() - breaks[0];
    let mut out = Vec::new();
    for seg in breaks.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if b <= a {
            continue;
        }
        let p = ((panels as f64 * (b - a) / total).round() as usize).max(1);
        let h = (b - a) / p as f64;
        for i in 0..p {
            let lo = a + h * i as f64;
            let hi = if i + 1 == p {
                b
            } else {
                a + h * (i + 1) as f64
            };
            if lo == 0.0 && origin_levels > 0 {
                let mut cuts = vec![0.0];
                let mut edge = hi / 2f64.powi(origin_levels as i32);
                for _ in 0..origin_levels {
                    cuts.push(edge);
                    edge *= 2.0;
                }
                cuts.push(hi);
                for w in cuts.windows(2) {
                    let step = (w[1] - w[0]) / refine as f64;
                    for k in 0..refine {
                        let end = if k + 1 == refine {
                            w[1]
                        } else {
                            w[0] + step * (k + 1) as f64
                        };
                        out.push((w[0] + step * k as f64, end));
                    }
                }
            } else {
                out.push((lo, hi));
            }
        }
    }
    out
}

fn integrate_once<F>(
    f: &F,
    width: usize,
    edges: &[(f64, f64)],
    rule: &GaussLegendre,
) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(f64) -> Vec<f64> + Sync,
{
    let partials: Vec<(Vec<f64>, Vec<f64>)> = edges
        .par_iter()
        .map(|&(a, b)| {
            let mut s = vec![0.0; width];
            let mut sa = vec![0.0; width];
            for (x, w) in rule.mapped(a, b) {
                let vals = f(x);
                for ((acc, abs), v) in s.iter_mut().zip(sa.iter_mut()).zip(&vals) {
                    *acc += w * v;
                    *abs += w * v.abs();
                }
            }
            (s, sa)
        })
        .collect();
    let mut total = vec![0.0; width];
    let mut total_abs = vec![0.0; width];
    for (s, sa) in partials {
        for j in 0..width {
            total[j] += s[j];
            total_abs[j] += sa[j];
        }
    }
    (total, total_abs)
}

/// Converged values of several integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrals {
    pub values: Vec<f64>,
    /// |I(2P) − I(P)| from the last doubling.
    pub changes: Vec<f64>,
    /// ∫|f_j|
    pub abs_values: Vec<f64>,
    pub panels: usize,
}

/// Integrates the `width` components of `f` over the range spanned by `breaks`
/// (sorted, first is the lower limit), doubling panels until every component
/// changes by at most rel_tol·∫|f_j| + abs_tol.
pub fn integrate_terms<F>(
    label: &str,
    breaks: &[f64],
    width: usize,
    spec: &QuadratureSpec,
    f: F,
) -> Result<Integrals>
where
    F: Fn(f64) -> Vec<f64> + Sync,
{
    if breaks.len() < 2 || !breaks.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::internal(format!(
            "{label}: bad breakpoints {breaks:?}"
        )));
    }
    let rule = GaussLegendre::get(spec.nodes_per_panel);
    let base = spec.panels.max(1);
    let mut panels = base;
    let edges = |p: usize| panel_edges(breaks, p, spec.origin_levels, p / base);
    let mut prev = integrate_once(&f, width, &edges(panels), &rule).0;
    let mut tried = vec![panels];
    let mut last_values = vec![];
    loop {
        panels *= 2;
        tried.push(panels);
        let (cur, abs) = integrate_once(&f, width, &edges(panels), &rule);
        if cur.iter().any(|v| !v.is_finite()) {
            return Err(Error::Quadrature(QuadratureFailure {
                label: format!("{label}: non-finite integrand"),
                panels_tried: tried,
                last_values: cur,
                last_change: f64::NAN,
                allowed_change: f64::NAN,
            }));
        }
        let changes: Vec<f64> = cur.iter().zip(&prev).map(|(a, b)| (a - b).abs()).collect();
        let allowed: Vec<f64> = abs
            .iter()
            .map(|a| spec.rel_tol * a + spec.abs_tol)
            .collect();
        let worst = changes
            .iter()
            .zip(&allowed)
            .enumerate()
            .max_by(|x, y| (x.1 .0 - x.1 .1).total_cmp(&(y.1 .0 - y.1 .1)))
            .map(|(j, _)| j);
        let ok = changes.iter().zip(&allowed).all(|(c, a)| c <= a);
        if ok {
            return Ok(Integrals {
                values: cur,
                changes,
                abs_values: abs,
                panels,
            });
        }
        if panels * 2 > spec.max_panels {
            let j = worst.unwrap_or(0);
            last_values.push(prev[j]);
            last_values.push(cur[j]);
            return Err(Error::Quadrature(QuadratureFailure {
                label: format!("{label} (component {j})"),
                panels_tried: tried,
                last_values,
                last_change: changes[j],
                allowed_change: allowed[j],
            }));
        }
        prev = cur;
    }
}

/// Named radial weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialWeight {
    One,
    /// r^{−2j}
    InvRPow(u32),
    InvSinh2,
    InvSinh4,
    Coth2,
}

impl RadialWeight {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialWeight::One => 1.0,
            RadialWeight::InvRPow(j) => r.powi(-2 * *j as i32),
            RadialWeight::InvSinh2 => r.sinh().powi(-2),
            RadialWeight::InvSinh4 => r.sinh().powi(-4),
            RadialWeight::Coth2 => r.tanh().powi(-2),
        }
    }
}

/// Whether an integral carries the hyperbolic volume element sinh^{N−1} r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// sinh^{N−1} r dr (the sphere area is omitted)
    Ambient(u32),
    /// dr
    Line,
}

impl Measure {
    pub fn density(&self, r: f64) -> f64 {
        match self {
            Measure::Ambient(n) => r.sinh().powi(*n as i32 - 1),
            Measure::Line => 1.0,
        }
    }
}

/// ∫ g(r) w(r) dμ over the breakpoint range.
pub fn integrate_weighted<G>(
    label: &str,
    g: G,
    breaks: &[f64],
    measure: Measure,
    weight: RadialWeight,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    G: Fn(f64) -> f64 + Sync,
{
    let out = integrate_terms(label, breaks, 1, spec, |r| {
        vec![g(r) * weight.eval(r) * measure.density(r)]
    })?;
    Ok(out.values[0])
}

/// `m` Chebyshev points of the first kind in [a, b] shrunk by `margin`·(b − a)
/// at each end, in increasing order.
pub fn chebyshev_points(a: f64, b: f64, m: usize, margin: f64) -> Vec<f64> {
    let (lo, hi) = (a + margin * (b - a), b - margin * (b - a));
    let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    (0..m)
        .rev()
        .map(|i| mid + half * (std::f64::consts::PI * (i as f64 + 0.5) / m as f64).cos())
        .collect()
}

/// Breakpoints of a function's support, checked against `spec.r_max`.
pub fn support_breaks(mut breaks: Vec<f64>, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let end = *breaks.last().unwrap();
    if let Some(r_max) = spec.r_max {
        if r_max < end {
            return Err(Error::domain(format!(
                "r_max = {r_max} is below the support end {end}"
            )));
        }
        if r_max > end {
            breaks.push(r_max);
        }
    }
    Ok(breaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let rule = GaussLegendre::get(n);
            let s: f64 = rule.weights.iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-14);
            for deg in 0..(2 * n).min(40) {
                let q: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn origin_grading() {
        let edges = panel_edges(&[0.0, 1.0], 4, 3, 1);
        assert_eq!(edges[0], (0.0, 0.25 / 8.0));
        assert_eq!(edges[3], (0.125, 0.25));
        assert_eq!(edges.last().unwrap().1, 1.0);
        for w in edges.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        // Doubling halves every panel, including the graded ones.
        let fine = panel_edges(&[0.0, 1.0], 8, 3, 2);
        assert!(fine.len() > edges.len());
        assert!(fine
            .iter()
            .all(|&(a, b)| edges.iter().any(|&(c, d)| c <= a && b <= d)));
        let interior = panel_edges(&[1.0, 2.0, 4.0], 6, 3, 1);
        assert_eq!(interior.len(), 6);
        assert_eq!(interior[2].0, 2.0);
    }

    #[test]
    fn exponential_against_closed_form() {
        // ∫₀^40 e^{−4r} sinh² r dr, equal to 1/24 up to e^{−80}.
        let spec = QuadratureSpec::default();
        let g = |r: f64| (-4.0 * r).exp();
        let v = integrate_weighted(
            "exp",
            g,
            &[0.0, 40.0],
            Measure::Ambient(3),
            RadialWeight::One,
            &spec,
        )
        .unwrap();
        // sinh² = (e^{2r} − 2 + e^{−2r})/4
        let exact = 0.25 * (1.0 / 2.0 - 2.0 / 4.0 + 1.0 / 6.0);
        assert_relative_eq!(v, exact, max_relative = 1e-12);
    }

    #[test]
    fn zero_integrand() {
        let out = integrate_terms("zero", &[0.0, 1.0], 3, &QuadratureSpec::default(), |_| {
            vec![0.0; 3]
        })
        .unwrap();
        assert_eq!(out.values, vec![0.0; 3]);
    }

    #[test]
    fn non_convergence_reports_diagnostics() {
        let spec = QuadratureSpec {
            panels: 1,
            nodes_per_panel: 2,
            origin_levels: 0,
            max_panels: 8,
            ..QuadratureSpec::default()
        };
        let err = integrate_terms("kink", &[0.0, 1.0], 1, &spec, |r| {
            vec![(r - 0.3).abs().sqrt()]
        })
        .unwrap_err();
        match err {
            Error::Quadrature(q) => {
                assert!(q.label.starts_with("kink"));
                assert_eq!(q.panels_tried, vec![1, 2, 4, 8]);
                assert!(q.last_change > q.allowed_change);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn reduction_is_deterministic() {
        let spec = QuadratureSpec::default();
        let f = |r: f64| vec![(r * 3.1).sin() * r.exp(), r.cos()];
        let a = integrate_terms("det", &[0.0, 2.0], 2, &spec, f).unwrap();
        let b = integrate_terms("det", &[0.0, 2.0], 2, &spec, f).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn chebyshev_points_are_interior_and_sorted() {
        let p = chebyshev_points(1.0, 2.0, 50, 0.01);
        assert_eq!(p.len(), 50);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!(p[0] > 1.01 && p[49] < 1.99);
    }
}
