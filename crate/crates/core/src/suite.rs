//! Named test-function suites, read from the manifest shipped with the crate.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::halfspace::SeparableTestFunction;
use crate::radial::RadialTestFunction;

const MANIFEST: &str = include_str!("../suites/manifest.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct RadialSuiteSpec {
    pub supports: Vec<[f64; 2]>,
    pub powers: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FactorSpec {
    pub support: [f64; 2],
    pub power: u32,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SeparableSpec {
    pub phi: FactorSpec,
    pub psi: FactorSpec,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub radial: BTreeMap<String, RadialSuiteSpec>,
    pub separable: BTreeMap<String, Vec<SeparableSpec>>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest> {
        let m: Manifest = toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        for (name, s) in &m.radial {
            for [a, b] in &s.supports {
                if !(0.0 <= *a && a < b) {
                    return Err(Error::Manifest(format!(
                        "suite {name}: bad support [{a}, {b}]"
                    )));
                }
            }
        }
        for (name, list) in &m.separable {
            for s in list {
                let [lo, _] = s.psi.support;
                if lo <= 0.0 {
                    return Err(Error::Manifest(format!(
                        "suite {name}: psi support must start above y = 0"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn radial_suite(&self, name: &str) -> Result<Vec<RadialTestFunction>> {
        let s = self
            .radial
            .get(name)
            .ok_or_else(|| Error::domain(format!("unknown radial suite '{name}'")))?;
        Ok(s.supports
            .iter()
            .flat_map(|[a, b]| {
                s.powers
                    .iter()
                    .map(move |&p| RadialTestFunction::bump(*a, *b, p))
            })
            .collect())
    }

    pub fn separable_suite(&self, name: &str) -> Result<Vec<SeparableTestFunction>> {
        let list = self
            .separable
            .get(name)
            .ok_or_else(|| Error::domain(format!("unknown separable suite '{name}'")))?;
        list.iter()
            .map(|s| {
                let f =
                    |x: &FactorSpec| RadialTestFunction::bump(x.support[0], x.support[1], x.power);
                SeparableTestFunction::new(f(&s.phi), f(&s.psi))
            })
            .collect()
    }
}

/// The manifest compiled into the binary.
pub fn manifest() -> &'static Manifest {
    static M: OnceLock<Manifest> = OnceLock::new();
    M.get_or_init(|| Manifest::parse(MANIFEST).expect("bundled manifest is valid"))
}

pub fn version() -> &'static str {
    &manifest().version
}

pub fn radial_suite(name: &str) -> Result<Vec<RadialTestFunction>> {
    manifest().radial_suite(name)
}

pub fn separable_suite(name: &str) -> Result<Vec<SeparableTestFunction>> {
    manifest().separable_suite(name)
}
