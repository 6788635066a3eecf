//! The subcommands. Each returns the text to print and an exit code so the
//! binary and the tests share one code path.

use std::fs;
use std::path::Path;
use std::time::Instant;

use num_integer::Integer;
use serde::Serialize;
use upsilon_core::complex::{staircase_complex, KnotExpr};
use upsilon_core::semigroup::{alexander_torus, step_vector, torus_steps};
use upsilon_core::upsilon::upsilon;
use upsilon_core::{BifilteredComplex, Rational};

use crate::report::{compute_report, InvariantReport};
use crate::{cache, plot, CliError, Options, Outcome};

fn coprime(a: u64, b: u64) -> bool {
    a.gcd(&b) == 1
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Report for one expression, served from the cache when possible. The
/// `expression` field echoes the input; everything else depends only on the
/// canonical form.
pub fn invariants_report(expr: &str, opts: &Options) -> Result<InvariantReport, CliError> {
    let start = Instant::now();
    let parsed = KnotExpr::parse(expr)?;
    let canonical = parsed.canonical()?;
    let cached = opts
        .cache
        .as_deref()
        .and_then(|dir| cache::load(dir, &canonical));
    let mut report = match cached {
        Some(r) => r,
        None => {
            let r = compute_report(&parsed, opts.grid)?;
            if let Some(dir) = &opts.cache {
                cache::store(dir, &r)?;
            }
            r
        }
    };
    report.expression = expr.to_string();
    report.timing_ms = (!opts.no_timing).then(|| start.elapsed().as_millis() as u64);
    Ok(report)
}

pub fn cmd_invariants(expr: &str, opts: &Options) -> Result<Outcome, CliError> {
    let report = invariants_report(expr, opts)?;
    Ok(Outcome {
        stdout: to_json(&report),
        exit_code: 0,
    })
}

#[derive(Debug, Serialize)]
pub struct FkReport {
    pub p: u64,
    pub q: u64,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub max_gap: Rational,
}

/// Compares `Upsilon(T(p, q))` with `Upsilon(T(p, q - p)) + Upsilon(T(p, p + 1))`.
pub fn verify_fk(p: u64, q: u64) -> Result<FkReport, CliError> {
    if p == 0 || p >= q || !coprime(p, q) {
        return Err(CliError::usage(format!(
            "verify-fk needs coprime 0 < p < q, got ({p}, {q})"
        )));
    }
    let ups = |a: u64, b: u64| -> Result<_, CliError> {
        Ok(upsilon(&staircase_complex(&torus_steps(a, b)?))?)
    };
    let lhs = ups(p, q)?;
    let rhs = ups(p, q - p)?.add(&ups(p, p + 1)?);
    Ok(FkReport {
        p,
        q,
        lhs: format!("T({p},{q})"),
        rhs: format!("T({p},{}) # T({p},{})", q - p, p + 1),
        equal: lhs == rhs,
        max_gap: lhs.max_gap(&rhs),
    })
}

pub fn cmd_verify_fk(p: u64, q: u64, opts: &Options) -> Result<Outcome, CliError> {
    let report = verify_fk(p, q)?;
    let stdout = if opts.json {
        to_json(&report)
    } else {
        format!(
            "Upsilon {} vs {}: {} (max gap at breakpoints {})\n",
            report.lhs,
            report.rhs,
            if report.equal { "EQUAL" } else { "DIFFERENT" },
            report.max_gap
        )
    };
    Ok(Outcome {
        stdout,
        exit_code: if report.equal { 0 } else { 1 },
    })
}

pub const DISCLAIMER: &str =
    "a NOT DISTINGUISHED verdict does not prove stable equivalence";

#[derive(Debug, Serialize)]
pub struct Separation {
    pub invariant: String,
    pub t: Rational,
    pub first: Rational,
    pub second: Rational,
}

#[derive(Debug, Serialize)]
pub struct Upsilon2Comparison {
    pub t: Rational,
    pub first: Option<Rational>,
    pub second: Option<Rational>,
}

#[derive(Debug, Serialize)]
pub struct DistinguishReport {
    pub first: String,
    pub second: String,
    pub upsilon_equal: bool,
    pub upsilon2: Vec<Upsilon2Comparison>,
    pub distinguished: bool,
    pub verdict: String,
    pub witness: Option<Separation>,
    pub disclaimer: String,
}

pub fn distinguish(e1: &str, e2: &str, opts: &Options) -> Result<DistinguishReport, CliError> {
    let a = invariants_report(e1, opts)?;
    let b = invariants_report(e2, opts)?;
    let fa = a.upsilon_function()?;
    let fb = b.upsilon_function()?;
    let upsilon_equal = fa == fb;
    let mut witness = None;
    let mut comparisons = Vec::new();
    if !upsilon_equal {
        let mut ts: Vec<Rational> = fa
            .breakpoints()
            .iter()
            .chain(fb.breakpoints())
            .map(|(t, _)| t.clone())
            .collect();
        ts.sort();
        ts.dedup();
        let t = ts
            .into_iter()
            .find(|t| fa.eval(t).ok() != fb.eval(t).ok())
            .expect("different canonical functions differ at a breakpoint");
        witness = Some(Separation {
            invariant: "upsilon".into(),
            first: fa.eval(&t)?,
            second: fb.eval(&t)?,
            t,
        });
    } else {
        for s in &a.singularities {
            let first = s.upsilon2.clone();
            let second = b.upsilon2_at(&s.t).cloned();
            if witness.is_none() {
                if let (Some(x), Some(y)) = (&first, &second) {
                    if x != y {
                        witness = Some(Separation {
                            invariant: "upsilon2".into(),
                            t: s.t.clone(),
                            first: x.clone(),
                            second: y.clone(),
                        });
                    }
                }
            }
            comparisons.push(Upsilon2Comparison {
                t: s.t.clone(),
                first,
                second,
            });
        }
    }
    let distinguished = witness.is_some();
    Ok(DistinguishReport {
        first: e1.to_string(),
        second: e2.to_string(),
        upsilon_equal,
        upsilon2: comparisons,
        distinguished,
        verdict: if distinguished {
            "DISTINGUISHED".into()
        } else {
            "NOT DISTINGUISHED BY THESE INVARIANTS".into()
        },
        witness,
        disclaimer: DISCLAIMER.into(),
    })
}

fn render_distinguish(r: &DistinguishReport) -> String {
    let mut out = format!("{} vs {}\n", r.first, r.second);
    out.push_str(&format!(
        "Upsilon: {}\n",
        if r.upsilon_equal { "equal" } else { "different" }
    ));
    for c in &r.upsilon2 {
        let show = |v: &Option<Rational>| v.as_ref().map_or("n/a".to_string(), ToString::to_string);
        out.push_str(&format!(
            "Upsilon2 at t = {}: {} vs {}\n",
            c.t,
            show(&c.first),
            show(&c.second)
        ));
    }
    match &r.witness {
        Some(w) => out.push_str(&format!(
            "{} via {} at t = {} ({} vs {})\n",
            r.verdict, w.invariant, w.t, w.first, w.second
        )),
        None => out.push_str(&format!("{} ({})\n", r.verdict, r.disclaimer)),
    }
    out
}

pub fn cmd_distinguish(e1: &str, e2: &str, opts: &Options) -> Result<Outcome, CliError> {
    let report = distinguish(e1, e2, opts)?;
    Ok(Outcome {
        stdout: if opts.json {
            to_json(&report)
        } else {
            render_distinguish(&report)
        },
        exit_code: if report.distinguished { 0 } else { 1 },
    })
}

#[derive(Debug, Serialize)]
pub struct ConjectureReport {
    pub p: u64,
    pub k: u64,
    /// Singularities where the two `Upsilon2` values differ.
    pub separating: Vec<Rational>,
    pub comparison: DistinguishReport,
}

pub fn conjecture(p: u64, k: u64, opts: &Options) -> Result<ConjectureReport, CliError> {
    if p < 5 || k < 2 || k + 2 > p || !coprime(p, k) {
        return Err(CliError::usage(format!(
            "conjecture needs p >= 5, 2 <= k <= p - 2 and gcd(p, k) = 1, got ({p}, {k})"
        )));
    }
    let first = format!("T({p},{})", p + k);
    let second = format!("T({k},{p}) # T({p},{})", p + 1);
    let comparison = distinguish(&first, &second, opts)?;
    let separating = comparison
        .upsilon2
        .iter()
        .filter(|c| matches!((&c.first, &c.second), (Some(x), Some(y)) if x != y))
        .map(|c| c.t.clone())
        .collect();
    Ok(ConjectureReport {
        p,
        k,
        separating,
        comparison,
    })
}

pub fn cmd_conjecture(p: u64, k: u64, opts: &Options) -> Result<Outcome, CliError> {
    let report = conjecture(p, k, opts)?;
    let stdout = if opts.json {
        to_json(&report)
    } else {
        let mut s = render_distinguish(&report.comparison);
        let ts: Vec<String> = report.separating.iter().map(ToString::to_string).collect();
        s.push_str(&format!(
            "separating singularities: {}\n",
            if ts.is_empty() { "none".into() } else { ts.join(", ") }
        ));
        s
    };
    Ok(Outcome {
        stdout,
        exit_code: if report.comparison.distinguished { 0 } else { 1 },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotFormat {
    Csv,
    Svg,
}

pub fn cmd_plot(expr: &str, out: &Path, format: PlotFormat, opts: &Options) -> Result<Outcome, CliError> {
    let report = invariants_report(expr, opts)?;
    let f = report.upsilon_function()?;
    let body = match format {
        PlotFormat::Csv => f.to_csv(),
        PlotFormat::Svg => plot::svg(&f, &format!("Upsilon of {}", report.canonical)),
    };
    fs::write(out, body).map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
    Ok(Outcome {
        stdout: format!("wrote {}\n", out.display()),
        exit_code: 0,
    })
}

#[derive(Debug, Serialize)]
pub struct StaircaseReport {
    pub p: u64,
    pub q: u64,
    pub alexander_exponents: Vec<u64>,
    pub steps: Vec<u64>,
    pub complex: BifilteredComplex,
}

pub fn staircase(p: u64, q: u64) -> Result<StaircaseReport, CliError> {
    let (lo, hi) = (p.min(q), p.max(q));
    let (exponents, steps) = if lo == 1 {
        (vec![0], torus_steps(lo, hi)?)
    } else {
        let poly = alexander_torus(lo, hi)?;
        let steps = step_vector(&poly)?;
        (poly.exponents().to_vec(), steps)
    };
    Ok(StaircaseReport {
        p,
        q,
        alexander_exponents: exponents,
        steps: steps.steps().to_vec(),
        complex: staircase_complex(&steps),
    })
}

pub fn cmd_staircase(p: u64, q: u64) -> Result<Outcome, CliError> {
    Ok(Outcome {
        stdout: to_json(&staircase(p, q)?),
        exit_code: 0,
    })
}
