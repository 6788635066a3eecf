use serde::{Deserialize, Serialize};
use upsilon_core::complex::KnotExpr;
use upsilon_core::upsilon::{upsilon_with, SectorData};
use upsilon_core::upsilon2::Upsilon2Context;
use upsilon_core::{PiecewiseLinear, Rational, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub t: Rational,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityEntry {
    pub t: Rational,
    pub slope_jump: Rational,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma2: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upsilon2: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub not_applicable: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub schema_version: u32,
    pub expression: String,
    pub canonical: String,
    pub generator_count: usize,
    pub upsilon: Vec<Breakpoint>,
    pub singularities: Vec<SingularityEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

impl InvariantReport {
    pub fn upsilon_function(&self) -> Result<PiecewiseLinear> {
        PiecewiseLinear::from_breakpoints(
            self.upsilon
                .iter()
                .map(|b| (b.t.clone(), b.value.clone()))
                .collect(),
        )
    }

    pub fn upsilon2_at(&self, t: &Rational) -> Option<&Rational> {
        self.singularities
            .iter()
            .find(|s| &s.t == t)
            .and_then(|s| s.upsilon2.as_ref())
    }
}

/// Computes Upsilon and Upsilon2 at every singularity for the canonical
/// form of `expr`. The `expression` field is set to the canonical form.
pub fn compute_report(expr: &KnotExpr, grid: usize) -> Result<InvariantReport> {
    let canonical = expr.canonical()?;
    let complex = expr.to_canonical_complex()?;
    let data = SectorData::new(&complex);
    let upsilon = upsilon_with(&data, grid)?;
    let ctx = Upsilon2Context::from_parts(data, upsilon.clone());
    let mut singularities = Vec::new();
    for (t, jump) in upsilon.singularities() {
        let mut entry = SingularityEntry {
            t: t.clone(),
            slope_jump: jump,
            gamma: None,
            gamma2: None,
            upsilon2: None,
            not_applicable: None,
        };
        match ctx.gamma2_at(&t) {
            Ok(res) => {
                ctx.verify(&res)?;
                entry.upsilon2 = Some(res.upsilon2());
                entry.gamma = Some(res.gamma);
                entry.gamma2 = Some(res.gamma2);
            }
            Err(e @ upsilon_core::Error::NonPositiveJump { .. }) => {
                entry.not_applicable = Some(e.to_string());
            }
            Err(e) => return Err(e),
        }
        singularities.push(entry);
    }
    Ok(InvariantReport {
        schema_version: SCHEMA_VERSION,
        expression: canonical.clone(),
        canonical,
        generator_count: complex.len(),
        upsilon: upsilon
            .breakpoints()
            .iter()
            .map(|(t, v)| Breakpoint {
                t: t.clone(),
                value: v.clone(),
            })
            .collect(),
        singularities,
        timing_ms: None,
    })
}
