//! Smooth compactly supported radial profiles with exact jets of any order.

use std::fmt;
use std::sync::Arc;

use crate::jet::{sinh_cosh_r, Jet};

/// Below this exponent exp(−1/s) underflows to zero in the jets.
const BUMP_EXP_FLOOR: f64 = -600.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    /// r^p · exp(−1/(1−t²)), t = (r−c)/w. With c = 0 the bump is even in r and
    /// does not vanish at the origin.
    Bump {
        center: f64,
        half_width: f64,
        power: u32,
    },
    /// e^{−ar} χ(r/R) where χ = 1 on [0,1], 0 on [2,∞), smooth in between.
    ExpCutoff {
        rate: f64,
        radius: f64,
    },
    /// r^γ · exp(−1/(1−t²)), t the affine image of log r onto [−1, 1] over
    /// [lo, hi].
    LogBump {
        exponent: f64,
        lo: f64,
        hi: f64,
    },
    /// sinh(r)^e · inner
    SinhPower {
        exponent: f64,
        inner: Arc<Profile>,
    },
    Scaled {
        factor: f64,
        inner: Arc<Profile>,
    },
}

/// A labelled profile. Cloning is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTestFunction {
    pub id: String,
    pub profile: Arc<Profile>,
}

impl fmt::Display for RadialTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl RadialTestFunction {
    pub fn new(id: impl Into<String>, profile: Profile) -> Self {
        RadialTestFunction {
            id: id.into(),
            profile: Arc::new(profile),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", Profile::Zero)
    }

    /// The bump supported on [a, b], times r^p. `a = 0` gives the origin-centred
    /// bump of radius b.
    pub fn bump(a: f64, b: f64, power: u32) -> Self {
        assert!(0.0 <= a && a < b, "bad bump support [{a}, {b}]");
        let (center, half_width) = if a == 0.0 {
            (0.0, b)
        } else {
            ((a + b) / 2.0, (b - a) / 2.0)
        };
        Self::new(
            format!("bump_{a}_{b}_p{power}"),
            Profile::Bump {
                center,
                half_width,
                power,
            },
        )
    }

    pub fn exp_cutoff(rate: f64, radius: f64) -> Self {
        Self::new(
            format!("expcut_a{rate}_R{radius}"),
            Profile::ExpCutoff { rate, radius },
        )
    }

    pub fn log_bump(exponent: f64, lo: f64, hi: f64) -> Self {
        assert!(0.0 < lo && lo < hi, "bad log-bump support [{lo}, {hi}]");
        Self::new(
            format!("logbump_g{exponent}_{lo}_{hi}"),
            Profile::LogBump { exponent, lo, hi },
        )
    }

    /// sinh(r)^e · self
    pub fn sinh_power(&self, exponent: f64) -> Self {
        Self::new(
            format!("sinh^{exponent}*{}", self.id),
            Profile::SinhPower {
                exponent,
                inner: self.profile.clone(),
            },
        )
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            format!("{factor}*{}", self.id),
            Profile::Scaled {
                factor,
                inner: self.profile.clone(),
            },
        )
    }

    pub fn support(&self) -> (f64, f64) {
        self.profile.support()
    }

    /// Support ends plus interior points where the profile is not analytic.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.profile.breakpoints();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    pub fn jet(&self, r0: f64, order: usize) -> Jet {
        self.profile.jet(r0, order)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r, 0).value()
    }

    pub fn is_zero(&self) -> bool {
        self.profile.is_zero()
    }
}

/// exp(−1/x) for x > 0, zero otherwise.
fn flat_step_base(x: &Jet) -> Jet {
    if x.value() <= 0.0 || -1.0 / x.value() < BUMP_EXP_FLOOR {
        return Jet::zero(x.center, x.order());
    }
    x.recip().scale(-1.0).exp()
}

/// exp(−1/(1−t²)) on |t| < 1.
fn bump_of(t: &Jet) -> Jet {
    let s = t.square().scale(-1.0).add_scalar(1.0);
    flat_step_base(&s)
}

/// Smooth step equal to 0 for z ≤ 0 and 1 for z ≥ 1.
fn smooth_step(z: &Jet) -> Jet {
    let order = z.order();
    if z.value() <= 0.0 {
        return Jet::zero(z.center, order);
    }
    if z.value() >= 1.0 {
        return Jet::constant(z.center, 1.0, order);
    }
    let f = flat_step_base(z);
    let g = flat_step_base(&z.scale(-1.0).add_scalar(1.0));
    f.div_jet(&(&f + &g))
}

impl Profile {
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile::Zero => (0.0, 1.0),
            Profile::Bump {
                center, half_width, ..
            } => ((center - half_width).max(0.0), center + half_width),
            Profile::ExpCutoff { radius, .. } => (0.0, 2.0 * radius),
            Profile::LogBump { lo, hi, .. } => (*lo, *hi),
            Profile::SinhPower { inner, .. } | Profile::Scaled { inner, .. } => inner.support(),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support();
        let mut out = vec![a, b];
        match self {
            Profile::ExpCutoff { radius, .. } => out.push(*radius),
            Profile::SinhPower { inner, .. } | Profile::Scaled { inner, .. } => {
                out.extend(inner.breakpoints())
            }
            _ => {}
        }
        out
    }

    fn is_zero(&self) -> bool {
        match self {
            Profile::Zero => true,
            Profile::Scaled { factor, inner } => *factor == 0.0 || inner.is_zero(),
            Profile::SinhPower { inner, .. } => inner.is_zero(),
            _ => false,
        }
    }

    pub fn jet(&self, r0: f64, order: usize) -> Jet {
        let zero = || Jet::zero(r0, order);
        let (a, b) = self.support();
        if self.is_zero() || r0 >= b || (r0 <= a && a > 0.0) {
            return zero();
        }
        let x = Jet::variable(r0, order);
        match self {
            Profile::Zero => zero(),
            Profile::Bump {
                center,
                half_width,
                power,
            } => {
                let t = x.add_scalar(-center).scale(1.0 / half_width);
                let base = bump_of(&t);
                if *power == 0 {
                    base
                } else {
                    x.powi(*power).mul_jet(&base)
                }
            }
            Profile::ExpCutoff { rate, radius } => {
                let decay = x.scale(-rate).exp();
                let z = x.scale(-1.0 / radius).add_scalar(2.0);
                decay.mul_jet(&smooth_step(&z))
            }
            Profile::LogBump { exponent, lo, hi } => {
                let (ll, lh) = (lo.ln(), hi.ln());
                let logx = x.ln();
                let t = logx.add_scalar(-(ll + lh) / 2.0).scale(2.0 / (lh - ll));
                x.powf(*exponent).mul_jet(&bump_of(&t))
            }
            Profile::SinhPower { exponent, inner } => {
                let (s, _) = sinh_cosh_r(r0, order);
                s.powf(*exponent).mul_jet(&inner.jet(r0, order))
            }
            Profile::Scaled { factor, inner } => inner.jet(r0, order).scale(*factor),
        }
    }
}
