//! Radial differential operators on ℍ^N evaluated through jets.

use super::test_function::RadialTestFunction;
use crate::constants::lambda_n;
use crate::error::{Error, Result};
use crate::jet::{coth_r, sinh_cosh_r, Jet};

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "radial operators require r > 0 (got r={r})"
        )))
    }
}

/// Δ on a radial jet: f″ + (N−1) coth r · f′. The result is two orders lower.
pub fn laplace_jet(f: &Jet, n: u32) -> Result<Jet> {
    if f.order() < 2 {
        return Err(Error::internal(format!(
            "laplacian needs a jet of order ≥ 2 (got {})",
            f.order()
        )));
    }
    let d1 = f.derivative();
    let d2 = d1.derivative();
    let order = d2.order();
    let coth = coth_r(f.center, order);
    Ok(&d2 + &coth.mul_jet(&d1.truncate(order)).scale((n - 1) as f64))
}

/// Jet of u″ + (N−1) coth r · u′ at r, to `order`.
pub fn laplace_radial(u: &RadialTestFunction, n: u32, r: f64, order: usize) -> Result<Jet> {
    check_radius(r)?;
    laplace_jet(&u.jet(r, order + 2), n)
}

/// Jet of Δ^m u at r, to `order`; m = 0 returns the jet of u.
pub fn iterated_laplace_jet(
    u: &RadialTestFunction,
    n: u32,
    m: u32,
    r: f64,
    order: usize,
) -> Result<Jet> {
    check_radius(r)?;
    iterate_laplace(u.jet(r, order + 2 * m as usize), n, m)
}

pub(crate) fn iterate_laplace(mut f: Jet, n: u32, m: u32) -> Result<Jet> {
    for _ in 0..m {
        f = laplace_jet(&f, n)?;
    }
    Ok(f)
}

pub fn iterated_laplace(u: &RadialTestFunction, n: u32, m: u32, r: f64) -> Result<f64> {
    Ok(iterated_laplace_jet(u, n, m, r, 0)?.value())
}

/// (u′(r))²
pub fn grad_norm_sq(u: &RadialTestFunction, r: f64) -> Result<f64> {
    check_radius(r)?;
    let d = u.jet(r, 1).coeffs[1];
    Ok(d * d)
}

/// |∇^j u|² from a jet of u of order ≥ j: (Δ^{j/2}u)² for even j and
/// ((Δ^{(j−1)/2}u)′)² for odd j.
pub fn nabla_power_sq_from_jet(f: &Jet, n: u32, j: u32) -> Result<f64> {
    let m = j / 2;
    let g = iterate_laplace(f.clone(), n, m)?;
    let v = if j % 2 == 0 {
        g.value()
    } else {
        if g.order() < 1 {
            return Err(Error::internal(
                "odd-order energy needs one spare jet order",
            ));
        }
        g.coeffs[1]
    };
    Ok(v * v)
}

pub fn nabla_power_sq(u: &RadialTestFunction, n: u32, j: u32, r: f64) -> Result<f64> {
    check_radius(r)?;
    nabla_power_sq_from_jet(&u.jet(r, j as usize), n, j)
}

/// d″ + (N−1) coth r · d′ − λ_n d / sinh² r
pub fn mode_operator(d: &RadialTestFunction, mode: u32, n: u32, r: f64) -> Result<f64> {
    check_radius(r)?;
    let j = d.jet(r, 2);
    let lap = laplace_jet(&j, n)?.value();
    let s = r.sinh();
    Ok(lap - lambda_n(mode, n) as f64 * j.value() / (s * s))
}

/// Jet of v = sinh(r)^{(N−1)/2} u at r.
pub fn to_v_transform(u: &RadialTestFunction, n: u32, r: f64, order: usize) -> Result<Jet> {
    check_radius(r)?;
    let (s, _) = sinh_cosh_r(r, order);
    Ok(s.powf((n as f64 - 1.0) / 2.0).mul_jet(&u.jet(r, order)))
}

/// Inverse of [`to_v_transform`] on jets: u = sinh(r)^{−(N−1)/2} v.
pub fn from_v_jet(v: &Jet, n: u32) -> Jet {
    let (s, _) = sinh_cosh_r(v.center, v.order());
    s.powf(-(n as f64 - 1.0) / 2.0).mul_jet(v)
}
