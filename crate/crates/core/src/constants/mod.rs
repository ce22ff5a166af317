//! Closed-form constants of the improved Poincaré inequalities on ℍ^N.
//!
//! Everything here is exact rational arithmetic over big integers. Floating
//! point only appears where the numerical verifier converts a constant for use
//! as a quadrature weight.
//!
//! Naming follows the roles the constants play:
//!
//! * `poincare_constant`: the sharp ((N−1)/2)^{2(k−l)},
//! * `a_gamma`, `b_gamma_beta`: constant and top coefficients of the iterated
//!   weighted Rellich bound for ∫(Δ^γ u)²/r^β,
//! * `dk_ek`: the r→∞ and r→0 leading remainders for l = 0,
//! * `case_leading_constants`: the same pair for any 0 ≤ l < k,
//! * [`chain::chain_replay`]: the full coefficient vector obtained by replaying
//!   the proofs in exact arithmetic.

pub mod chain;
mod table;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chain::chain_replay;
pub use table::{constant_table, ConstantTable};

pub type Rational = BigRational;

pub(crate) fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// ((N−1)/2)², the k = 1, l = 0 Poincaré constant. Every other Poincaré constant
/// is a power of it.
pub fn poincare_base(n: u32) -> Rational {
    let n = n as i64;
    ratio((n - 1) * (n - 1), 4)
}

/// An inequality instance: outer order `k`, inner order `l`, dimension `n` (N).
///
/// Construction enforces `0 ≤ l < k` and `N > 2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseSpec {
    pub k: u32,
    pub l: u32,
    #[serde(rename = "N")]
    pub n: u32,
}

impl CaseSpec {
    pub fn new(k: u32, l: u32, n: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("requires k ≥ 1"));
        }
        if l >= k {
            return Err(Error::domain(format!(
                "requires 0 ≤ l < k (got k={k}, l={l})"
            )));
        }
        if n <= 2 * k {
            return Err(Error::domain(format!(
                "requires N > {} (N > 2k with k={k}; got N={n})",
                2 * k
            )));
        }
        Ok(CaseSpec { k, l, n })
    }

    /// ⌊k/2⌋
    pub fn m(&self) -> u32 {
        self.k / 2
    }

    /// ⌊l/2⌋
    pub fn h(&self) -> u32 {
        self.l / 2
    }

    pub fn k_even(&self) -> bool {
        self.k % 2 == 0
    }

    pub fn l_even(&self) -> bool {
        self.l % 2 == 0
    }
}

/// ((N−1)/2)^{2(k−l)}.
pub fn poincare_constant(case: &CaseSpec) -> Rational {
    pow(&poincare_base(case.n), case.k - case.l)
}

/// a_γ = (N−1)^{2γ}/2^{4γ}, with a_0 = 1.
pub fn a_gamma(gamma: u32, n: u32) -> Rational {
    pow(&ratio((n as i64 - 1) * (n as i64 - 1), 16), gamma)
}

/// One factor (N+β)²(N−β−4)²/16 of b_{γ,β}; it is also the top weight of the
/// single-step weighted Rellich inequality.
fn rellich_top_weight(beta: i64, n: i64) -> Rational {
    let plus = n + beta;
    let minus = n - beta - 4;
    Rational::new(
        BigInt::from(plus * plus) * BigInt::from(minus * minus),
        BigInt::from(16),
    )
}

/// b_{γ,β} = Π_{j=0}^{γ−1} (N+β+4j)²(N−β−4j−4)²/16. The empty product (γ = 0)
/// is 1.
pub fn b_gamma_beta(gamma: u32, beta: u32, n: u32) -> Result<Rational> {
    if gamma > 0 && n <= beta + 4 * gamma {
        return Err(Error::domain(format!(
            "b_{{γ,β}} requires N > β + 4γ (got N={n}, β={beta}, γ={gamma})"
        )));
    }
    let mut acc = Rational::one();
    for j in 0..gamma {
        acc *= rellich_top_weight((beta + 4 * j) as i64, n as i64);
    }
    Ok(acc)
}

/// d_k without the hypothesis check; d_0 = 0.
pub(crate) fn d_unchecked(k: u32, n: u32) -> Rational {
    if k == 0 {
        return Rational::zero();
    }
    let nm1 = int(n as i64 - 1);
    let m = k / 2;
    let mut sum = Rational::zero();
    if k % 2 == 0 {
        let den = pow(&int(2), 4 * m - 1);
        for j in 1..=m {
            sum += pow(&nm1, 4 * m - 2 * j) / &den;
        }
    } else {
        let den = pow(&int(2), 4 * m + 1);
        for j in 1..=m {
            sum += pow(&nm1, 4 * m - 2 * j + 2) / &den;
        }
        sum += pow(&nm1, 2 * m) / pow(&int(2), 4 * m + 2);
    }
    sum
}

/// e_k without the hypothesis check.
pub(crate) fn e_unchecked(k: u32, n: u32) -> Rational {
    let m = k / 2;
    let n = n as i64;
    let mut prod = BigInt::one();
    if k % 2 == 0 {
        for j in 1..m as i64 {
            let (p, q) = (n + 4 * j, n - 4 * j - 4);
            prod *= BigInt::from(p * p) * BigInt::from(q * q);
        }
        int(9) * Rational::from_integer(prod) / pow(&int(2), 4 * m)
    } else {
        for j in 1..=m as i64 {
            let (p, q) = (n + 4 * j - 2, n - 4 * j - 2);
            prod *= BigInt::from(p * p) * BigInt::from(q * q);
        }
        Rational::from_integer(prod) / pow(&int(2), 4 * m + 2)
    }
}

/// (d_k, e_k): the coefficients of ∫u²/r² and ∫u²/r^{2k} in the l = 0 inequality.
pub fn dk_ek(k: u32, n: u32) -> Result<(Rational, Rational)> {
    if k == 0 {
        return Err(Error::domain("requires k ≥ 1"));
    }
    if n <= 2 * k {
        return Err(Error::domain(format!(
            "requires N > {} (N > 2k with k={k}; got N={n})",
            2 * k
        )));
    }
    Ok((d_unchecked(k, n), e_unchecked(k, n)))
}

/// The four remainder constants of the k = 2, l = 1 inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm21Constants {
    /// (N−1)²/16, in front of ∫u²/r²
    pub c_r2: Rational,
    /// 9/16, in front of ∫u²/r⁴
    pub c_r4: Rational,
    /// (N−1)(N−3)(N²−2N−7)/16, in front of ∫u²/sinh²r
    pub c_sinh2: Rational,
    /// (N−1)(N−3)(N²−4N−3)/16, in front of ∫u²/sinh⁴r
    pub c_sinh4: Rational,
}

pub fn thm21_constants(n: u32) -> Result<Thm21Constants> {
    if n <= 4 {
        return Err(Error::domain(format!("requires N > 4 (got N={n})")));
    }
    let n = n as i64;
    Ok(Thm21Constants {
        c_r2: ratio((n - 1) * (n - 1), 16),
        c_r4: ratio(9, 16),
        c_sinh2: ratio((n - 1) * (n - 3) * (n * n - 2 * n - 7), 16),
        c_sinh4: ratio((n - 1) * (n - 3) * (n * n - 4 * n - 3), 16),
    })
}

/// Weights of the weighted Rellich inequality
/// ∫(Δu)²/r^β ≥ w4 ∫u²/r^{β+4} + w2 ∫u²/r^{β+2} + w0 ∫u²/r^β, valid for 0 ≤ β < N−4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YangWeights {
    pub w4: Rational,
    pub w2: Rational,
    pub w0: Rational,
}

pub fn yang_constants(beta: u32, n: u32) -> Result<YangWeights> {
    if beta as i64 >= n as i64 - 4 {
        return Err(Error::domain(format!(
            "weighted Rellich bound requires 0 ≤ β < N − 4 (got β={beta}, N={n})"
        )));
    }
    let (b, n) = (beta as i64, n as i64);
    Ok(YangWeights {
        w4: rellich_top_weight(b, n),
        w2: ratio((n - 2 - b) * (n - 2 + b) * (n - 1), 8),
        w0: ratio((n - 1) * (n - 1), 16),
    })
}

/// (α¹, α^k): the coefficients of ∫u²/r² and ∫u²/r^{2k} for a general case.
///
/// For l = 0 this is `dk_ek`. For l ≥ 1 the row is selected by the parities of
/// k and l. The even-k / odd-l row uses
/// `(1/4)((N−1)/2)^{4(m−h)−2} a_h + d_{2(m−h−1)} a_{h+1}`, which is what the
/// chain of inequalities produces: ((N−1)/2)^{4(m−h−1)} in front of
/// ∫(Δ^{h+1}u)² times (N−1)²/16 from the k=2, l=1 bound, then a_h. At h = m−1 it
/// collapses to a_1 a_{m−1}.
pub fn case_leading_constants(case: &CaseSpec) -> Result<(Rational, Rational)> {
    let n = case.n;
    if case.l == 0 {
        return dk_ek(case.k, n);
    }
    let (m, h) = (case.m(), case.h());
    let a = |g: u32| a_gamma(g, n);
    let quarter = ratio(1, 4);
    let even_odd_first = || {
        &quarter * pow(&poincare_base(n), 2 * (m - h) - 1) * a(h)
            + d_unchecked(2 * (m - h - 1), n) * a(h + 1)
    };
    let pair = match (case.k_even(), case.l_even()) {
        (true, true) => (
            d_unchecked(2 * (m - h), n) * a(h),
            e_unchecked(2 * (m - h), n) * b_gamma_beta(h, 4 * (m - h), n)?,
        ),
        (true, false) => {
            let last = if h == m - 1 {
                ratio(9, 16) * b_gamma_beta(m - 1, 4, n)?
            } else {
                e_unchecked(2 * (m - h - 1), n) * b_gamma_beta(h + 1, 4 * (m - h - 1), n)?
            };
            (even_odd_first(), last)
        }
        (false, true) => (
            int(4) * a(1) * a(h) * d_unchecked(2 * (m - h), n) + &quarter * a(m),
            &quarter * b_gamma_beta(m, 2, n)?,
        ),
        (false, false) => (
            &quarter * a(m) + int(4) * a(1) * even_odd_first(),
            &quarter * b_gamma_beta(m, 2, n)?,
        ),
    };
    Ok(pair)
}

/// λ_n = n² + (N−2)n, the n-th eigenvalue of −Δ on S^{N−1}.
pub fn lambda_n(n: u32, dim: u32) -> u64 {
    let n = n as u64;
    n * n + (dim as u64 - 2) * n
}

/// Dimension of the space of degree-n spherical harmonics on S^{N−1}.
pub fn harmonic_dim(n: u32, dim: u32) -> BigUint {
    match n {
        0 => BigUint::one(),
        1 => BigUint::from(dim),
        _ => {
            let n = n as u64;
            let d = dim as u64;
            binomial(BigUint::from(d + n - 1), BigUint::from(n))
                - binomial(BigUint::from(d + n - 3), BigUint::from(n - 2))
        }
    }
}

/// (A_n, B_n): the per-mode coefficients of ∫d_n²/sinh⁴ and ∫d_n²/sinh² left
/// over after the 1-D Hardy, Rellich and hyperbolic Hardy bounds, as displayed.
pub fn anbn(mode: u32, dim: u32) -> (Rational, Rational) {
    let lam = int(lambda_n(mode, dim) as i64);
    let n = dim as i64;
    let q = (n - 1) * (n - 3);
    let a_n = &lam * &lam + ratio(n * (n - 4), 2) * &lam + ratio(q * q, 16) - ratio(3 * q, 8);
    let b_n = ratio(n * n - 2 * n - 5, 4) * &lam
        + ratio((n - 1) * (n - 1) * (n - 3), 4)
        + ratio((n - 1) * (n - 1) * (n - 3) * (n - 5), 16)
        - ratio(q, 2);
    (a_n, b_n)
}

/// Which of the two half-space Rellich inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfspaceVariant {
    /// u = y^{(N−2)/2} v
    Rellich1,
    /// u = y^{(N−4)/2} v
    Rellich2,
}

impl HalfspaceVariant {
    pub fn label(&self) -> &'static str {
        match self {
            HalfspaceVariant::Rellich1 => "rellich1",
            HalfspaceVariant::Rellich2 => "rellich2",
        }
    }
}

/// Constants of a half-space Rellich inequality. `grad` multiplies the
/// gradient term on the left; `y_weight` multiplies ∫∫v²/y² (rellich1) or
/// ∫∫v²/y⁴ (rellich2); `d2` and `d4` multiply the geodesic-distance weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceConstants {
    pub variant: HalfspaceVariant,
    pub grad: Rational,
    pub y_weight: Rational,
    pub d2: Rational,
    pub d4: Rational,
}

pub fn halfspace_constants(variant: HalfspaceVariant, n: u32) -> Result<HalfspaceConstants> {
    if n <= 4 {
        return Err(Error::domain(format!("requires N > 4 (got N={n})")));
    }
    let n = n as i64;
    let (grad, y_weight) = match variant {
        HalfspaceVariant::Rellich1 => (ratio(n * n - 2 * n - 1, 4), ratio(n * (n - 2), 16)),
        HalfspaceVariant::Rellich2 => (
            ratio(n * n - 2 * n - 9, 4),
            ratio(9 * (n + 2) * (n - 4), 16),
        ),
    };
    Ok(HalfspaceConstants {
        variant,
        grad,
        y_weight,
        d2: ratio((n - 1) * (n - 1), 16),
        d4: ratio(9, 16),
    })
}

/// Lossy conversion used at the numerical boundary.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
