//! The full named constant table for a case, with a lossless serde form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{
    a_gamma, anbn, b_gamma_beta, case_leading_constants, chain_replay, d_unchecked, e_unchecked,
    poincare_constant, ratio, thm21_constants, CaseSpec, Rational,
};
use crate::error::Result;

/// Digits after the decimal point in the `decimal` rendering.
const DECIMAL_PLACES: usize = 20;

/// A rational that serializes as `{"num": "...", "den": "...", "decimal": "..."}`.
/// Numerator and denominator are exact decimal-digit strings; `decimal` is
/// informational and rounded to 20 places.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl Exact {
    pub fn decimal(&self) -> String {
        decimal_string(&self.0, DECIMAL_PLACES)
    }
}

impl From<Rational> for Exact {
    fn from(q: Rational) -> Self {
        Exact(q)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn decimal_string(q: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let (num, den) = (q.numer() * &scale, q.denom().clone());
    let (mut quot, rem) = num.abs().div_rem(&den);
    if rem * 2 >= den {
        quot += 1;
    }
    let digits = quot.to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if q.is_negative() && !(quot.is_zero()) {
        "-"
    } else {
        ""
    };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    num: String,
    den: String,
    #[serde(default, skip_deserializing)]
    decimal: String,
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactRepr {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
            decimal: self.decimal(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ExactRepr::deserialize(d)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Exact(Rational::new(num, den)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedConstant {
    pub name: String,
    pub value: Exact,
}

/// Every named constant attached to one case.
///
/// `chain` holds α¹..α^k (named `c1..ck` when l = 0 and `alpha1..alphak`
/// otherwise). `aux` holds the auxiliary families that enter the case, keyed as
/// `a_1`, `b_1,4`, `d_2`, `e_2`, `c_2^1`, `A_0`, `B_0`, plus `hardy` for
/// k = 1 and the four remainder constants for k = 2, l = 1. Entries that vanish
/// (such as d_0) are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantTable {
    pub case: CaseSpec,
    pub poincare: Exact,
    pub leading_small_r: Exact,
    pub leading_large_r: Exact,
    pub chain: Vec<NamedConstant>,
    pub aux: BTreeMap<String, Exact>,
}

impl ConstantTable {
    /// Iterates over every constant: poincare, leading pair, chain, aux.
    pub fn entries(&self) -> Vec<(String, &Exact)> {
        let mut out = vec![
            ("poincare".to_string(), &self.poincare),
            ("leading_small_r".to_string(), &self.leading_small_r),
            ("leading_large_r".to_string(), &self.leading_large_r),
        ];
        out.extend(self.chain.iter().map(|c| (c.name.clone(), &c.value)));
        out.extend(self.aux.iter().map(|(k, v)| (k.clone(), v)));
        out
    }

    pub fn get(&self, name: &str) -> Option<&Exact> {
        self.entries()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

pub fn constant_table(case: &CaseSpec) -> Result<ConstantTable> {
    let n = case.n;
    let chain = chain_replay(case)?;
    let (first, last) = case_leading_constants(case)?;
    let prefix = if case.l == 0 { "c" } else { "alpha" };

    let mut aux: BTreeMap<String, Rational> = BTreeMap::new();
    let (m, h) = (case.m(), case.h());
    for g in 1..=m.max(h + 1).min(case.k) {
        aux.insert(format!("a_{g}"), a_gamma(g, n));
    }
    let put_b = |g: u32, beta: u32, aux: &mut BTreeMap<String, Rational>| -> Result<()> {
        if g > 0 {
            aux.insert(format!("b_{g},{beta}"), b_gamma_beta(g, beta, n)?);
        }
        Ok(())
    };
    if case.l == 0 {
        for (i, c) in chain.iter().enumerate() {
            aux.insert(format!("c_{}^{}", case.k, i + 1), c.clone());
        }
        aux.insert(format!("d_{}", case.k), d_unchecked(case.k, n));
        aux.insert(format!("e_{}", case.k), e_unchecked(case.k, n));
    } else {
        let inner = match (case.k_even(), case.l_even()) {
            (true, true) | (false, true) => 2 * (m - h),
            (true, false) | (false, false) => 2 * (m - h - 1),
        };
        if inner > 0 {
            aux.insert(format!("d_{inner}"), d_unchecked(inner, n));
            aux.insert(format!("e_{inner}"), e_unchecked(inner, n));
        }
        match (case.k_even(), case.l_even()) {
            (true, true) => put_b(h, 4 * (m - h), &mut aux)?,
            (true, false) if h == m - 1 => put_b(m - 1, 4, &mut aux)?,
            (true, false) => put_b(h + 1, 4 * (m - h - 1), &mut aux)?,
            _ => put_b(m, 2, &mut aux)?,
        }
    }
    if case.k == 1 {
        aux.insert("hardy".into(), ratio(1, 4));
    }
    if (case.k, case.l) == (2, 1) {
        let t = thm21_constants(n)?;
        aux.insert("c_r2".into(), t.c_r2);
        aux.insert("c_r4".into(), t.c_r4);
        aux.insert("c_sinh2".into(), t.c_sinh2);
        aux.insert("c_sinh4".into(), t.c_sinh4);
    }
    if n >= 5 {
        let (a0, b0) = anbn(0, n);
        aux.insert("A_0".into(), a0);
        aux.insert("B_0".into(), b0);
    }
    aux.retain(|_, v| *v > Rational::zero());

    Ok(ConstantTable {
        case: *case,
        poincare: poincare_constant(case).into(),
        leading_small_r: last.into(),
        leading_large_r: first.into(),
        chain: chain
            .into_iter()
            .enumerate()
            .map(|(i, value)| NamedConstant {
                name: format!("{prefix}{}", i + 1),
                value: value.into(),
            })
            .collect(),
        aux: aux.into_iter().map(|(k, v)| (k, v.into())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::int;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&ratio(1, 4), 20), "0.25");
        assert_eq!(decimal_string(&int(2), 20), "2");
        assert_eq!(decimal_string(&ratio(-1, 3), 5), "-0.33333");
        assert_eq!(decimal_string(&ratio(2, 3), 5), "0.66667");
        assert_eq!(decimal_string(&ratio(-1, 10_000_000), 3), "0");
    }

    #[test]
    fn exact_round_trip() {
        let big = Exact(num_traits::pow(ratio(7, 3), 40));
        let json = serde_json::to_string(&big).unwrap();
        assert!(json.contains("\"num\""));
        let back: Exact = serde_json::from_str(&json).unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn rellich_table() {
        let t = constant_table(&CaseSpec::new(2, 0, 5).unwrap()).unwrap();
        assert_eq!(t.get("c1").unwrap().0, int(2));
        assert_eq!(t.get("c2").unwrap().0, ratio(9, 16));
        assert_eq!(t.poincare.0, int(16));
        assert_eq!(t.get("c_2^1").unwrap().0, int(2));
    }

    #[test]
    fn hardy_table() {
        let t = constant_table(&CaseSpec::new(1, 0, 3).unwrap()).unwrap();
        assert_eq!(t.poincare.0, int(1));
        assert_eq!(t.get("hardy").unwrap().0, ratio(1, 4));
        assert!(t.get("A_0").is_none());
    }

    #[test]
    fn all_entries_positive_and_ends_consistent() {
        for k in 1..=6 {
            for l in 0..k {
                for n in 2 * k + 1..=2 * k + 10 {
                    let t = constant_table(&CaseSpec::new(k, l, n).unwrap()).unwrap();
                    for (name, v) in t.entries() {
                        assert!(v.0 > Rational::zero(), "{name} in {:?}", t.case);
                    }
                    assert_eq!(t.chain.first().unwrap().value, t.leading_large_r);
                    assert_eq!(t.chain.last().unwrap().value, t.leading_small_r);
                }
            }
        }
    }

    #[test]
    fn table_round_trips_through_json() {
        let t = constant_table(&CaseSpec::new(5, 2, 13).unwrap()).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let back: ConstantTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    proptest::proptest! {
        #[test]
        fn random_tables_round_trip(k in 1u32..=8, l in 0u32..8, extra in 1u32..24) {
            let case = CaseSpec::new(k, l % k, 2 * k + extra).unwrap();
            let t = constant_table(&case).unwrap();
            let back: ConstantTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
            proptest::prop_assert_eq!(&back, &t);
            proptest::prop_assert_eq!(t.chain.len() as u32, k);
        }
    }
}
