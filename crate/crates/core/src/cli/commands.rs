use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{Check, RunReport};
use super::{usage, Cli, Command, IntRange};
use crate::codebounds::{
    audit_certificate, audit_code, code_audit, delsarte_bound, delsarte_lp, greedy_code, parse_angle, theorem61_bound,
    BoundCertificate, PairAverageCertificate, PartitionPattern,
};
use crate::constraints::{
    eigenvalue_violator, hierarchy_report, hierarchy_violator, reconstruct, FeasiblePair, RECONSTRUCT_RANK_TOL,
};
use crate::error::{Error, Result};
use crate::gegenbauer::{
    addition_coefficients, addition_residual, orthogonality_mc, orthogonality_quad, weighted_inner_1d,
};
use crate::poly::Poly1;
use crate::rng::SplitMix64;
use crate::spherical::{kernel_matrix, named_code, sample_sphere};
use crate::symlin::DEFAULT_PSD_TOL;

pub const PSD_TOL: f64 = 1e-8;
pub const Z_LIMIT: f64 = 4.0;
pub const QUAD_TOL: f64 = 1e-8;
pub const ADDITION_TOL: f64 = 1e-9;
pub const ROUND_TRIP_TOL: f64 = 1e-8;
const GREEDY_REJECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum PairSource {
    /// Gram data of random sphere points.
    Realizable,
    /// Lifted points that fail the top level.
    Violator,
    /// `T - U U^T` indefinite.
    Eigenvalue,
}

/// Angle as radians or a `pi` literal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Radians(f64),
    Text(String),
}

impl AngleValue {
    fn radians(&self) -> Result<f64> {
        match self {
            AngleValue::Radians(x) => Ok(*x),
            AngleValue::Text(s) => parse_angle(s),
        }
    }
}

fn default_grid() -> usize {
    4096
}

/// Input of the `bound` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundConfig {
    /// Optimize a Delsarte certificate by linear programming.
    Lp {
        n: u32,
        theta: AngleValue,
        degree: u32,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Check a given certificate `f` (monomial coefficients).
    Delsarte { n: u32, theta: AngleValue, f: Vec<f64> },
    /// Level-`m` bound from the pair average of a Delsarte certificate `g`.
    PairAverage { n: u32, theta: AngleValue, m: u32, g: Vec<f64> },
    /// Level-`m` inequality with supplied `f_0`, `f(1,..,1)` and `B_omega`.
    Theorem61 {
        m: u32,
        f0: f64,
        f_diag: f64,
        #[serde(default)]
        b_values: BTreeMap<String, f64>,
    },
}

pub fn execute(cli: &Cli) -> Result<RunReport> {
    let seed = cli.common.seed;
    match &cli.command {
        Command::VerifyPsd { n, m, k, r, seeds } => verify_psd(*n, *m, *k, *r, *seeds, seed),
        Command::VerifyOrthogonality { n, m, k, l, samples } => verify_orthogonality(*n, *m, *k, *l, *samples, seed),
        Command::VerifyAddition { n, m, k, samples } => verify_addition(*n, *m, *k, *samples, seed),
        Command::Hierarchy { pair, generate, n, r, d } => {
            let (pair, source) = match (pair, generate) {
                (Some(path), _) => (FeasiblePair::from_json(&read(path)?)?, "file".to_string()),
                (None, Some(src)) => (generate_pair(*src, *n, *r, *d, seed)?, format!("{src:?}").to_lowercase()),
                (None, None) => return Err(usage("hierarchy needs --pair or --generate")),
            };
            hierarchy(&pair, &source, *d, seed)
        }
        Command::Bound { config, n, theta, degree, grid, certificate } => {
            let cfg = match config {
                Some(path) => serde_json::from_str(&read(path)?)?,
                None => {
                    let (Some(n), Some(theta), Some(degree)) = (n, theta, degree) else {
                        return Err(usage("bound needs --config, or --n, --theta and --degree"));
                    };
                    BoundConfig::Lp { n: *n, theta: AngleValue::Text(theta.text.clone()), degree: *degree, grid: *grid }
                }
            };
            bound(&cfg, certificate.as_deref(), seed)
        }
        Command::Codes { n, theta, seeds, degree } => codes(*n, theta.radians, *seeds, *degree, seed),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn stream(seed: u64, index: u64) -> u64 {
    SplitMix64::derive(seed, index).next_u64()
}

pub fn verify_psd(n: u32, m: IntRange, k: IntRange, r: usize, seeds: u32, seed: u64) -> Result<RunReport> {
    if n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    if m.hi + 2 > n {
        return Err(usage(format!("--m {m} must satisfy m <= n - 2 = {}", n as i64 - 2)));
    }
    if r == 0 {
        return Err(usage("--r must be positive"));
    }
    let mut report = RunReport::new("verify-psd", seed);
    report.param("n", n).param("m", m).param("k", k).param("r", r).param("seeds", seeds);
    if seeds == 0 {
        for mm in m.iter() {
            for kk in k.iter() {
                report.checks.push(Check::skip(format!("psd m={mm} k={kk}")));
            }
        }
        return Ok(report);
    }
    let configs = (0..seeds)
        .into_par_iter()
        .map(|s| sample_sphere(n as usize, r, stream(seed, s as u64)))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(u32, u32, u32)> =
        m.iter().flat_map(|mm| k.iter().flat_map(move |kk| (0..seeds).map(move |s| (mm, kk, s)))).collect();
    let results = cells
        .par_iter()
        .map(|&(mm, kk, s)| Ok(kernel_matrix(&configs[s as usize], mm, kk)?.is_psd(PSD_TOL)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = f64::INFINITY;
    for (&(mm, kk, s), rep) in cells.iter().zip(&results) {
        worst = worst.min(rep.relative_min());
        report.checks.push(Check::at_least(format!("psd m={mm} k={kk} seed#{s}"), rep.relative_min(), -PSD_TOL));
    }
    report.results = json!({ "cells": cells.len(), "worst_relative_min_eigenvalue": worst });
    Ok(report)
}

pub fn verify_orthogonality(n: u32, m: u32, k: u32, l: u32, samples: u64, seed: u64) -> Result<RunReport> {
    let mut report = RunReport::new("verify-orthogonality", seed);
    report.param("n", n).param("m", m).param("k", k).param("l", l).param("samples", samples);
    let one = |_: &[f64], _: &[f64]| 1.0;
    let mc = orthogonality_mc(n, m, k, l, &one, samples, seed)?;
    if k != l {
        report.checks.push(Check::at_most("monte carlo |z|", mc.z.abs(), Z_LIMIT));
    } else {
        report.checks.push(Check::flag("monte carlo norm positive", mc.mean > 0.0, Some(mc.mean)));
    }
    let mut quad = None;
    if m <= 2 {
        let q = orthogonality_quad(n, m, k, l, &one)?;
        if k != l {
            report.checks.push(Check::at_most("quadrature relative integral", q.relative, QUAD_TOL));
        } else {
            report.checks.push(Check::flag("quadrature norm positive", q.value > 0.0, Some(q.value)));
        }
        quad = Some(q);
    } else {
        report.checks.push(Check::skip("quadrature (m > 2)"));
    }
    if m == 0 {
        let exact = weighted_inner_1d(n, k, l)? / weighted_inner_1d(n, 0, 0)?;
        let z = if mc.stderr > 0.0 { (mc.mean - exact).abs() / mc.stderr } else { (mc.mean - exact).abs() };
        report.checks.push(Check::at_most("monte carlo vs quadrature |z|", z, Z_LIMIT));
    }
    report.results = json!({ "monte_carlo": mc, "quadrature": quad });
    Ok(report)
}

pub fn verify_addition(n: u32, m: Option<IntRange>, k: IntRange, samples: u64, seed: u64) -> Result<RunReport> {
    if n < 3 {
        return Err(usage("--n must be at least 3"));
    }
    let m = m.unwrap_or(IntRange { lo: 1, hi: n - 2 });
    if m.lo < 1 || m.hi + 2 > n {
        return Err(usage(format!("--m {m} must lie in 1..{}", n - 2)));
    }
    if samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let mut report = RunReport::new("verify-addition", seed);
    report.param("n", n).param("m", m).param("k", k).param("samples", samples);
    let cells: Vec<(u32, u32)> = m.iter().flat_map(|mm| k.iter().map(move |kk| (mm, kk))).collect();
    let residuals = cells
        .par_iter()
        .enumerate()
        .map(|(i, &(mm, kk))| {
            let mut rng = SplitMix64::derive(seed, i as u64);
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let x = rng.unit_vector(n as usize);
                let y = rng.unit_vector(n as usize);
                let t = crate::symlin::dot(&x, &y);
                let mu = mm as usize;
                worst = worst.max(addition_residual(t, &x[..mu], &y[..mu], n, mm, kk)?);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    for (&(mm, kk), &res) in cells.iter().zip(&residuals) {
        report.checks.push(Check::at_most(format!("addition residual m={mm} k={kk}"), res, ADDITION_TOL));
    }
    let mut dims: Vec<u32> = m.iter().map(|mm| n - mm + 1).collect();
    dims.dedup();
    for big_n in dims {
        for kk in k.iter() {
            let c = addition_coefficients(big_n, kk)?;
            report.checks.push(Check::at_most(
                format!("c_(N={big_n}, k={kk}, s=0) = 1"),
                (c.c[0] - 1.0).abs(),
                ADDITION_TOL,
            ));
        }
    }
    report.results = json!({ "max_residual": residuals.iter().copied().fold(0.0, f64::max) });
    Ok(report)
}

pub fn generate_pair(source: PairSource, n: usize, r: usize, d: u32, seed: u64) -> Result<FeasiblePair> {
    match source {
        PairSource::Realizable => FeasiblePair::from_points(&sample_sphere(n, r, seed)?),
        PairSource::Violator => Ok(hierarchy_violator(n, r, d, seed, DEFAULT_PSD_TOL)?.0),
        PairSource::Eigenvalue => eigenvalue_violator(n, r, seed),
    }
}

pub fn hierarchy(pair: &FeasiblePair, source: &str, d: u32, seed: u64) -> Result<RunReport> {
    let mut report = RunReport::new("hierarchy", seed);
    report.param("n", pair.n()).param("r", pair.r()).param("d", d).param("source", source);
    let h = hierarchy_report(pair, d, DEFAULT_PSD_TOL)?;
    report.checks.push(Check::flag("monotone membership", h.monotone, None));
    if source == "realizable" {
        report.checks.push(Check::flag(
            "realizable pair is a member at every level",
            h.levels.iter().all(|l| l.member),
            None,
        ));
    }
    let mut reconstruction = None;
    if h.delta.member {
        match reconstruct(pair) {
            Ok(rec) => {
                report.checks.push(Check::at_most("reconstruction round trip", rec.max_error, ROUND_TRIP_TOL));
                reconstruction = Some(json!({ "rank": rec.rank, "max_error": rec.max_error }));
            }
            Err(e) => report.checks.push(Check::flag(format!("reconstruction ({e})"), false, None)),
        }
    } else {
        report.checks.push(Check::skip("reconstruction (not in delta)"));
    }
    let table: Vec<_> = h.levels.iter().map(|l| json!({ "m": l.m, "member": l.member })).collect();
    report.results = json!({
        "levels": table,
        "symmetric_levels": h.symmetric_levels.iter().map(|s| json!({ "m": s.m, "member": s.member })).collect::<Vec<_>>(),
        "delta": h.delta.member,
        "rank_tolerance": RECONSTRUCT_RANK_TOL,
        "reconstruction": reconstruction,
        "report": h,
    });
    Ok(report)
}

pub fn bound(cfg: &BoundConfig, certificate: Option<&Path>, seed: u64) -> Result<RunReport> {
    let mut report = RunReport::new("bound", seed);
    let cert: Result<BoundCertificate> = match cfg {
        BoundConfig::Lp { n, theta, degree, grid } => {
            report
                .param("method", "lp")
                .param("n", n)
                .param("theta", theta.radians()?)
                .param("degree", degree)
                .param("grid", grid);
            delsarte_lp(*n, theta.radians()?, *degree, *grid)
        }
        BoundConfig::Delsarte { n, theta, f } => {
            report.param("method", "delsarte").param("n", n).param("theta", theta.radians()?);
            delsarte_bound(&Poly1::new(f.clone()), *n, theta.radians()?)
        }
        BoundConfig::PairAverage { n, theta, m, g } => {
            report.param("method", "pair-average").param("n", n).param("theta", theta.radians()?).param("m", m);
            return pair_average(report, &Poly1::new(g.clone()), *n, theta.radians()?, *m, certificate);
        }
        BoundConfig::Theorem61 { m, f0, f_diag, b_values } => {
            report.param("method", "theorem61").param("m", m).param("f0", f0).param("f_diag", f_diag);
            let b = b_values
                .iter()
                .map(|(k, &v)| Ok((k.parse::<PartitionPattern>()?, v)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            let t = theorem61_bound(*m, *f0, *f_diag, &b)?;
            report.checks.push(Check::flag(
                "inequality fails at n_max + 1",
                t.residual_at_next < 0.0,
                Some(t.residual_at_next),
            ));
            report.results = json!({ "bound": t.n_max, "theorem61": t });
            write_certificate(certificate, &report.results, None)?;
            return Ok(report);
        }
    };
    match cert {
        Ok(c) => {
            for line in &c.verification {
                report.checks.push(Check::flag(format!("certificate: {line}"), true, None));
            }
            report.results = json!({ "bound": c.bound, "certificate": c });
            write_certificate(certificate, &serde_json::to_value(&c)?, Some(c.coefficients_csv()))?;
            Ok(report)
        }
        Err(Error::CertificateRejected(why)) => {
            report.checks.push(Check::flag(format!("certificate rejected: {why}"), false, None));
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

fn pair_average(
    mut report: RunReport,
    g: &Poly1,
    n: u32,
    theta: f64,
    m: u32,
    certificate: Option<&Path>,
) -> Result<RunReport> {
    let cert = match PairAverageCertificate::new(g, n, theta, m) {
        Ok(c) => c,
        Err(Error::CertificateRejected(why)) => {
            report.checks.push(Check::flag(format!("certificate rejected: {why}"), false, None));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    for line in &cert.verification {
        report.checks.push(Check::flag(format!("certificate: {line}"), true, None));
    }
    let t = cert.bound()?;
    let b: BTreeMap<String, f64> = cert.b_values.iter().map(|(w, &v)| (w.to_string(), v)).collect();
    report.results = json!({ "bound": t.n_max, "theorem61": t, "f0": cert.problem.f0, "b_values": b });
    write_certificate(certificate, &report.results, None)?;
    Ok(report)
}

fn write_certificate(path: Option<&Path>, value: &serde_json::Value, csv: Option<String>) -> Result<()> {
    let Some(path) = path else {
        return Ok(());
    };
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    if let Some(csv) = csv {
        std::fs::write(path.with_extension("csv"), csv)?;
    }
    Ok(())
}

pub fn codes(n: u32, theta: f64, seeds: u32, degree: u32, seed: u64) -> Result<RunReport> {
    let mut report = RunReport::new("codes", seed);
    report.param("n", n).param("theta", theta).param("seeds", seeds).param("degree", degree);
    if n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let g = audit_certificate(n, theta, degree)?;
    let mut witnesses = vec![format!("cross_polytope({n})"), format!("simplex({n})")];
    if n == 3 {
        witnesses.push("icosahedron".into());
    }
    let mut audits = Vec::new();
    for name in witnesses {
        let code = named_code(&name)?;
        if !code_audit(&code, theta) {
            report.checks.push(Check::skip(format!("{name} (not a code at this angle)")));
            continue;
        }
        let a = audit_code(&code, theta, &g)?;
        report.checks.push(Check::flag(format!("{name}: bounds >= {}", a.size), a.sound, Some(a.size as f64)));
        audits.push(json!({ "code": name, "audit": a }));
    }
    let greedy = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let code = greedy_code(n as usize, theta, GREEDY_REJECTIONS, stream(seed, s as u64))?;
            audit_code(&code, theta, &g)
        })
        .collect::<Result<Vec<_>>>()?;
    for (s, a) in greedy.iter().enumerate() {
        report.checks.push(Check::flag(
            format!("greedy#{s}: bounds >= {}", a.size),
            a.sound && a.valid_code,
            Some(a.size as f64),
        ));
        audits.push(json!({ "code": format!("greedy#{s}"), "audit": a }));
    }
    report.results = json!({ "certificate": g.coeffs, "audits": audits });
    Ok(report)
}
