//! Replay of the inequality chains in exact arithmetic.
//!
//! A chain state is a lower bound of the form
//! `∫|∇^k u|² ≥ target·∫|∇^l u|² + Σ_i coeff[i]·∫u²/r^{2i}`. Each building block
//! (the k = 1 Poincaré–Hardy bound, the k = 2 Rellich bound, the k = 2, l = 1
//! bound, and the weighted Rellich bound in 1/r^β) is applied in the order the
//! case proofs use, collecting like powers of 1/r. Terms in 1/sinh are dropped.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{poincare_base, ratio, yang_constants, CaseSpec, Rational};
use crate::error::{Error, Result};

/// Coefficients keyed by i, standing for ∫u²/r^{2i}.
pub type HardyTerms = BTreeMap<u32, Rational>;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    /// coefficient of the lower-order energy ∫|∇^l u|²
    pub target: Rational,
    pub hardy: HardyTerms,
}

fn add_scaled(acc: &mut HardyTerms, terms: &HardyTerms, scale: &Rational) {
    for (i, c) in terms {
        *acc.entry(*i).or_insert_with(Rational::zero) += c * scale;
    }
}

fn scaled(terms: &HardyTerms, scale: &Rational) -> HardyTerms {
    terms.iter().map(|(i, c)| (*i, c * scale)).collect()
}

/// Bound for ∫(Δ^γ u)²/r^{2i} obtained by applying the weighted Rellich bound γ
/// times, outermost Laplacian first.
fn lift(gamma: u32, i: u32, n: u32) -> Result<HardyTerms> {
    let mut cur = HardyTerms::from([(i, Rational::one())]);
    for _ in 0..gamma {
        let mut next = HardyTerms::new();
        for (ii, c) in &cur {
            let w = yang_constants(2 * ii, n).map_err(|e| {
                Error::internal(format!("chain step leaves the weighted Rellich range: {e}"))
            })?;
            for (shift, weight) in [(2, &w.w4), (1, &w.w2), (0, &w.w0)] {
                *next.entry(ii + shift).or_insert_with(Rational::zero) += c * weight;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Adds one gradient on top of an even-order state: p2·state + (1/4)·lift(m, 1).
fn odd_step(state: ChainState, m: u32, n: u32) -> Result<ChainState> {
    let p2 = poincare_base(n);
    let mut hardy = scaled(&state.hardy, &p2);
    add_scaled(&mut hardy, &lift(m, 1, n)?, &ratio(1, 4));
    Ok(ChainState {
        target: state.target * p2,
        hardy,
    })
}

/// l = 0 chain for order k.
fn chain_l0(k: u32, n: u32) -> Result<ChainState> {
    if k == 0 {
        return Ok(ChainState {
            target: Rational::one(),
            hardy: HardyTerms::new(),
        });
    }
    if k % 2 == 1 {
        return odd_step(chain_l0(k - 1, n)?, k / 2, n);
    }
    // Δ^{m+1}u = Δ(Δ^m u): the Rellich bound on the outer Laplacian, then the
    // order-2m chain for Δu, lifted through one weighted Rellich step.
    let inner = chain_l0(k - 2, n)?;
    let p2 = poincare_base(n);
    let rellich = HardyTerms::from([(1, ratio(((n - 1) * (n - 1)) as i64, 8)), (2, ratio(9, 16))]);
    let mut hardy = scaled(&rellich, &inner.target);
    for (i, c) in &inner.hardy {
        add_scaled(&mut hardy, &lift(1, *i, n)?, c);
    }
    Ok(ChainState {
        target: inner.target * &p2 * &p2,
        hardy,
    })
}

fn lift_state(inner: &ChainState, gamma: u32, n: u32) -> Result<HardyTerms> {
    let mut hardy = HardyTerms::new();
    for (i, c) in &inner.hardy {
        add_scaled(&mut hardy, &lift(gamma, *i, n)?, c);
    }
    Ok(hardy)
}

/// k = 2m, l = 2h: the l = 0 chain of order 2(m−h) applied to Δ^h u.
fn even_even(m: u32, h: u32, n: u32) -> Result<ChainState> {
    let inner = chain_l0(2 * (m - h), n)?;
    let hardy = lift_state(&inner, h, n)?;
    Ok(ChainState {
        target: inner.target,
        hardy,
    })
}

/// k = 2m, l = 2h+1: the l = 0 chain of order 2(m−h−1) applied to Δ^{h+1}u,
/// then the k = 2, l = 1 bound applied to Δ^h u.
fn even_odd(m: u32, h: u32, n: u32) -> Result<ChainState> {
    let inner = chain_l0(2 * (m - h - 1), n)?;
    let mut hardy = lift_state(&inner, h + 1, n)?;
    let t = &inner.target;
    add_scaled(
        &mut hardy,
        &lift(h, 1, n)?,
        &(t * ratio(((n - 1) * (n - 1)) as i64, 16)),
    );
    add_scaled(&mut hardy, &lift(h, 2, n)?, &(t * ratio(9, 16)));
    Ok(ChainState {
        target: inner.target * poincare_base(n),
        hardy,
    })
}

/// The full chain state for a case.
pub fn chain_state(case: &CaseSpec) -> Result<ChainState> {
    let (n, m, h) = (case.n, case.m(), case.h());
    match (case.l, case.k_even(), case.l_even()) {
        (0, _, _) => chain_l0(case.k, n),
        (_, true, true) => even_even(m, h, n),
        (_, true, false) => even_odd(m, h, n),
        (_, false, true) => odd_step(even_even(m, h, n)?, m, n),
        (_, false, false) => odd_step(even_odd(m, h, n)?, m, n),
    }
}

/// α¹..α^k as produced by the chain. Fails if any index 1..k is missing or
/// nonpositive, or if the chain produces a term outside that range.
pub fn chain_replay(case: &CaseSpec) -> Result<Vec<Rational>> {
    let state = chain_state(case)?;
    if state.target != super::poincare_constant(case) {
        return Err(Error::internal(format!(
            "chain for {case:?} ends with energy coefficient {} instead of the Poincaré constant",
            state.target
        )));
    }
    let keys: Vec<u32> = state.hardy.keys().copied().collect();
    let expected: Vec<u32> = (1..=case.k).collect();
    if keys != expected {
        return Err(Error::internal(format!(
            "chain for {case:?} produced weights at indices {keys:?}, expected {expected:?}"
        )));
    }
    let coeffs: Vec<Rational> = state.hardy.into_values().collect();
    if let Some((i, c)) = coeffs
        .iter()
        .enumerate()
        .find(|(_, c)| **c <= Rational::zero())
    {
        return Err(Error::internal(format!(
            "chain for {case:?} produced nonpositive coefficient {c} at index {}",
            i + 1
        )));
    }
    Ok(coeffs)
}
