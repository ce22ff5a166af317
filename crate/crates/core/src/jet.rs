//! Truncated Taylor arithmetic in one variable.
//!
//! A [`Jet`] at `center` stores `coeffs[j] = f^{(j)}(center)/j!` for
//! `j = 0..=order`. All operations truncate at the order of the shorter operand.

use std::ops::{Add, Mul, Neg, Sub};

/// Below this radius coth is evaluated as 1/r plus its odd power series.
pub const COTH_SERIES_BELOW: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(center: f64, value: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { center, coeffs }
    }

    pub fn zero(center: f64, order: usize) -> Jet {
        Jet::constant(center, 0.0, order)
    }

    /// The identity function r ↦ r at `center`.
    pub fn variable(center: f64, order: usize) -> Jet {
        let mut j = Jet::constant(center, center, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// f^{(k)}(center), or 0 when k exceeds the order.
    pub fn derivative_value(&self, k: usize) -> f64 {
        self.coeffs.get(k).map(|c| c * factorial(k)).unwrap_or(0.0)
    }

    /// Jet of f′, one order lower.
    pub fn derivative(&self) -> Jet {
        let coeffs = if self.coeffs.len() <= 1 {
            vec![0.0]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| j as f64 * c)
                .collect()
        };
        Jet {
            center: self.center,
            coeffs,
        }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        Jet {
            center: self.center,
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        self.map_coeffs(|c| c * s)
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    fn map_coeffs(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    fn binary(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        Jet {
            center: self.center,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul_jet(&self, other: &Jet) -> Jet {
        let n = self.coeffs.len().min(other.coeffs.len());
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        Jet {
            center: self.center,
            coeffs,
        }
    }

    pub fn square(&self) -> Jet {
        self.mul_jet(self)
    }

    /// 1/f; requires f(center) ≠ 0.
    pub fn recip(&self) -> Jet {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0 / a[0];
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s * b[0];
        }
        Jet {
            center: self.center,
            coeffs: b,
        }
    }

    pub fn div_jet(&self, other: &Jet) -> Jet {
        self.mul_jet(&other.recip())
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].exp();
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Jet {
            center: self.center,
            coeffs: b,
        }
    }

    /// log f; requires f(center) > 0.
    pub fn ln(&self) -> Jet {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].ln();
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|j| j as f64 * b[j] * a[k - j]).sum();
            b[k] = (a[k] - s / k as f64) / a[0];
        }
        Jet {
            center: self.center,
            coeffs: b,
        }
    }

    /// f^p for real p; requires f(center) > 0.
    pub fn powf(&self, p: f64) -> Jet {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].powf(p);
        for k in 1..a.len() {
            let s: f64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * a[j] * b[k - j])
                .sum();
            b[k] = s / (k as f64 * a[0]);
        }
        Jet {
            center: self.center,
            coeffs: b,
        }
    }

    /// f^n by repeated squaring; valid at zeros of f.
    pub fn powi(&self, n: u32) -> Jet {
        let mut result = Jet::constant(self.center, 1.0, self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_jet(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// (sinh f, cosh f) computed together.
    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let n = a.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sinh();
        c[0] = a[0].cosh();
        for k in 1..n {
            let (mut ss, mut cc) = (0.0, 0.0);
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = cc / k as f64;
        }
        (
            Jet {
                center: self.center,
                coeffs: s,
            },
            Jet {
                center: self.center,
                coeffs: c,
            },
        )
    }

    /// Evaluates the polynomial Σ p[i] f^i by Horner's rule.
    pub fn compose_poly(&self, p: &[f64]) -> Jet {
        let mut acc = Jet::zero(self.center, self.order());
        for &c in p.iter().rev() {
            acc = acc.mul_jet(self).add_scalar(c);
        }
        acc
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.binary(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.binary(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// x/3 − x³/45 + 2x⁵/945 − x⁷/4725 + 2x⁹/93555: coth x − 1/x near 0.
const COTH_TAIL: [f64; 10] = [
    0.0,
    1.0 / 3.0,
    0.0,
    -1.0 / 45.0,
    0.0,
    2.0 / 945.0,
    0.0,
    -1.0 / 4725.0,
    0.0,
    2.0 / 93555.0,
];

/// Jets of sinh r, cosh r at r0 (of the variable itself, not a composite).
pub fn sinh_cosh_r(r0: f64, order: usize) -> (Jet, Jet) {
    let (s, c) = (r0.sinh(), r0.cosh());
    let mut sj = vec![0.0; order + 1];
    let mut cj = vec![0.0; order + 1];
    for k in 0..=order {
        let f = factorial(k);
        let (sk, ck) = if k % 2 == 0 { (s, c) } else { (c, s) };
        sj[k] = sk / f;
        cj[k] = ck / f;
    }
    (
        Jet {
            center: r0,
            coeffs: sj,
        },
        Jet {
            center: r0,
            coeffs: cj,
        },
    )
}

/// Jet of 1/r at r0 > 0.
pub fn recip_r(r0: f64, order: usize) -> Jet {
    let mut coeffs = vec![0.0; order + 1];
    let mut p = 1.0 / r0;
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = if k % 2 == 0 { p } else { -p };
        p /= r0;
    }
    Jet { center: r0, coeffs }
}

/// Jet of coth r at r0 > 0, switching to the series form below
/// [`COTH_SERIES_BELOW`].
pub fn coth_r(r0: f64, order: usize) -> Jet {
    coth_r_with_threshold(r0, order, COTH_SERIES_BELOW)
}

pub fn coth_r_with_threshold(r0: f64, order: usize, threshold: f64) -> Jet {
    if r0 < threshold {
        let x = Jet::variable(r0, order);
        &recip_r(r0, order) + &x.compose_poly(&COTH_TAIL)
    } else {
        let (s, c) = sinh_cosh_r(r0, order);
        c.div_jet(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn products_and_powers() {
        let x = Jet::variable(2.0, 5);
        let x3 = x.powi(3);
        assert_relative_eq!(x3.derivative_value(0), 8.0);
        assert_relative_eq!(x3.derivative_value(1), 12.0);
        assert_relative_eq!(x3.derivative_value(2), 12.0);
        assert_relative_eq!(x3.derivative_value(3), 6.0);
        assert_eq!(x3.derivative_value(4), 0.0);
        let xf = x.powf(3.0);
        for k in 0..=5 {
            assert_relative_eq!(xf.coeffs[k], x3.coeffs[k], epsilon = 1e-12);
        }
        let inv = x.recip();
        for k in 0..=5 {
            assert_relative_eq!(
                inv.coeffs[k],
                recip_r(2.0, 5).coeffs[k],
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn exp_log_inverse() {
        let x = Jet::variable(0.7, 8);
        let f = (&x * &x).add_scalar(1.0);
        let back = f.ln().exp();
        for k in 0..=8 {
            assert_relative_eq!(back.coeffs[k], f.coeffs[k], epsilon = 1e-13);
        }
        let e = x.exp();
        for k in 0..=8 {
            assert_relative_eq!(e.derivative_value(k), 0.7f64.exp(), max_relative = 1e-13);
        }
    }

    #[test]
    fn sinh_cosh_composite_matches_direct() {
        let x = Jet::variable(1.3, 7);
        let (s, c) = x.sinh_cosh();
        let (sd, cd) = sinh_cosh_r(1.3, 7);
        for k in 0..=7 {
            assert_relative_eq!(s.coeffs[k], sd.coeffs[k], max_relative = 1e-13);
            assert_relative_eq!(c.coeffs[k], cd.coeffs[k], max_relative = 1e-13);
        }
    }

    #[test]
    fn coth_series_continuous_at_threshold() {
        for order in [0, 4, 10] {
            let below = coth_r_with_threshold(COTH_SERIES_BELOW, order, 1.0);
            let above = coth_r_with_threshold(COTH_SERIES_BELOW, order, 0.0);
            assert!((below.value() - above.value()).abs() <= 1e-13 * above.value());
            for k in 0..=order {
                assert_relative_eq!(below.coeffs[k], above.coeffs[k], max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let x = Jet::variable(0.5, 4);
        let d = x.powi(4).derivative();
        assert_eq!(d.order(), 3);
        assert_relative_eq!(d.value(), 4.0 * 0.125);
        assert_relative_eq!(d.derivative_value(1), 12.0 * 0.25);
    }
}
