use std::path::Path;

use ddbar_core::fock_basis::HermiteCoeffs;
use ddbar_core::numeric::{fd_residual_map, GridSpec};
use ddbar_core::spectral::{
    factorial_f64, in_normalization, operator_norm_probe, seeded_box_data, solve as solve_problem, solve_disk,
    DiskProblem, DiskQuadrature, DiskReport, ProblemSpec, BOUND_TOLERANCE, CERTIFICATION_GRID,
};
use ddbar_core::symbolic::{lemma_cases, lemma_suite, verify_quadratic_form_complete, weight_identity_suite, VerificationReport};
use ddbar_core::CoreError;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::files::{emit_json, read_json, write_atomic};
use crate::problem::{ComplexJson, ExpansionJson, ProblemFile, SolutionFile};

/// Relative residual accepted from a float solve.
const RESIDUAL_TOLERANCE: f64 = 1e-10;

pub fn solve(input: &Path, output: Option<&Path>) -> Result<bool, CliError> {
    let problem: ProblemFile = read_json(input)?;
    let spec = problem.to_spec()?;
    let (u, report) = solve_problem(&spec)?;
    let ok = report.bound_holds && report.residual_norm <= RESIDUAL_TOLERANCE * report.f_norm;
    let solution = SolutionFile {
        k: problem.k,
        c: problem.c,
        truncation: problem.truncation,
        normalization: problem.normalization,
        f: problem.f,
        u: ExpansionJson::hermite(&in_normalization(&u, problem.normalization)),
        report,
    };
    emit_json(&solution, output)?;
    Ok(ok)
}

#[derive(Serialize)]
struct Failure {
    parameters: String,
    witness: Option<String>,
    details: Vec<(String, String)>,
}

#[derive(Serialize)]
struct SuiteSummary {
    identity: String,
    passed: usize,
    total: usize,
    holds: bool,
    failures: Vec<Failure>,
}

#[derive(Serialize)]
struct VerifyReport {
    k: u32,
    trials: usize,
    seed: u64,
    holds: bool,
    suites: Vec<SuiteSummary>,
}

fn summarize(identity: String, reports: &[VerificationReport]) -> SuiteSummary {
    let failures: Vec<Failure> = reports
        .iter()
        .filter(|r| !r.holds)
        .map(|r| Failure {
            parameters: r.parameters.clone(),
            witness: r.witness.as_ref().map(|w| w.to_string()),
            details: r.details.clone(),
        })
        .collect();
    SuiteSummary {
        identity,
        passed: reports.len() - failures.len(),
        total: reports.len(),
        holds: failures.is_empty(),
        failures,
    }
}

pub fn verify(k: u32, trials: usize, seed: u64, output: Option<&Path>) -> Result<bool, CliError> {
    if k == 0 {
        return Err(CoreError::InvalidInput("k must be at least 1".into()).into());
    }
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be at least 1".into()).into());
    }
    let reports = lemma_suite(k, trials, seed);
    let mut names: Vec<String> = Vec::new();
    for r in &reports {
        if !names.contains(&r.identity_name) {
            names.push(r.identity_name.clone());
        }
    }
    let mut suites: Vec<SuiteSummary> = names
        .into_iter()
        .map(|name| {
            let group: Vec<_> = reports.iter().filter(|r| r.identity_name == name).cloned().collect();
            summarize(name, &group)
        })
        .collect();
    // Same φ as the lemma suite, checked over the full index range.
    let complete: Vec<_> = lemma_cases(k, trials, seed)
        .iter()
        .map(|(phi, _)| verify_quadratic_form_complete(k, phi))
        .collect();
    if let Some(first) = complete.first() {
        suites.push(summarize(first.identity_name.clone(), &complete));
    }
    if k == 1 {
        let w = weight_identity_suite(trials, seed);
        if let Some(first) = w.first() {
            suites.push(summarize(first.identity_name.clone(), &w));
        }
    }
    let holds = suites.iter().all(|s| s.holds);
    emit_json(&VerifyReport { k, trials, seed, holds, suites }, output)?;
    Ok(holds)
}

#[derive(Serialize)]
struct CertifyRun {
    k: u32,
    c: ComplexJson,
    max_bound_ratio: f64,
    max_relative_residual: f64,
    max_tail_estimate: f64,
    holds: bool,
}

#[derive(Serialize)]
struct CertifyReport {
    truncation: u32,
    trials: usize,
    seed: u64,
    bound_tolerance: f64,
    residual_tolerance: f64,
    holds: bool,
    runs: Vec<CertifyRun>,
}

pub fn certify(
    k: Option<u32>,
    c: Option<Complex64>,
    truncation: u32,
    trials: usize,
    seed: u64,
    output: Option<&Path>,
) -> Result<bool, CliError> {
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be at least 1".into()).into());
    }
    let orders: Vec<u32> = match k {
        Some(k) => vec![k],
        None => (1..=4).collect(),
    };
    let constants: Vec<Complex64> = match c {
        Some(c) => vec![c],
        None => CERTIFICATION_GRID.to_vec(),
    };
    let mut runs = Vec::new();
    for &k in &orders {
        let limit = ProblemSpec { k, c: Complex64::new(0.0, 0.0), truncation, f: HermiteCoeffs::orthonormal() }
            .certified_limit()?;
        for (ci, &c) in constants.iter().enumerate() {
            let (mut bound, mut residual, mut tail) = (0.0f64, 0.0f64, 0.0f64);
            for t in 0..trials as u64 {
                let f = seeded_box_data(seed ^ (u64::from(k) << 40) ^ ((ci as u64) << 32) ^ t, limit);
                let (_, r) = solve_problem(&ProblemSpec { k, c, truncation, f })?;
                bound = bound.max(r.bound_ratio);
                residual = residual.max(r.residual_norm / r.f_norm);
                tail = tail.max(r.tail_estimate);
            }
            runs.push(CertifyRun {
                k,
                c: c.into(),
                max_bound_ratio: bound,
                max_relative_residual: residual,
                max_tail_estimate: tail,
                holds: bound <= 1.0 + BOUND_TOLERANCE && residual <= RESIDUAL_TOLERANCE,
            });
        }
    }
    let holds = runs.iter().all(|r| r.holds);
    let report = CertifyReport {
        truncation,
        trials,
        seed,
        bound_tolerance: BOUND_TOLERANCE,
        residual_tolerance: RESIDUAL_TOLERANCE,
        holds,
        runs,
    };
    emit_json(&report, output)?;
    Ok(holds)
}

#[derive(Serialize)]
struct ProbeReport {
    k: u32,
    c: ComplexJson,
    truncation: u32,
    trials: usize,
    seed: u64,
    probe: f64,
    operator_bound: f64,
    holds: bool,
}

pub fn probe(
    k: u32,
    c: Complex64,
    truncation: u32,
    trials: usize,
    seed: u64,
    output: Option<&Path>,
) -> Result<bool, CliError> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(CoreError::InvalidInput("constant c must be finite".into()).into());
    }
    let p = operator_norm_probe(k, c, trials, truncation, seed)?;
    let bound = 1.0 / factorial_f64(k);
    let holds = p <= bound + BOUND_TOLERANCE;
    let report = ProbeReport {
        k,
        c: c.into(),
        truncation,
        trials,
        seed,
        probe: p,
        operator_bound: bound,
        holds,
    };
    emit_json(&report, output)?;
    Ok(holds)
}

#[derive(Serialize)]
struct CsvRow {
    x: f64,
    y: f64,
    re_residual: f64,
    im_residual: f64,
}

pub fn eval(input: &Path, output: Option<&Path>, grid: &GridSpec) -> Result<bool, CliError> {
    let problem: ProblemFile = read_json(input)?;
    if problem.k != 1 {
        return Err(CoreError::InvalidInput(format!("eval needs k = 1, got {}", problem.k)).into());
    }
    grid.validate()?;
    let spec = problem.to_spec()?;
    let (u, _) = solve_problem(&spec)?;
    let points = fd_residual_map(&u, &spec.f, spec.c, grid)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &points {
        w.serialize(CsvRow { x: p.x, y: p.y, re_residual: p.residual.re, im_residual: p.residual.im })?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    match output {
        Some(path) => write_atomic(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(true)
}

#[derive(Serialize)]
struct DiskOutput {
    k: u32,
    c: ComplexJson,
    truncation: u32,
    center: ComplexJson,
    radius: f64,
    report: DiskReport,
}

pub fn disk(
    input: &Path,
    output: Option<&Path>,
    center: Complex64,
    radius: f64,
    quadrature: Option<DiskQuadrature>,
) -> Result<bool, CliError> {
    let problem: ProblemFile = read_json(input)?;
    let p = DiskProblem {
        center,
        radius,
        f_poly: problem.f.to_poly()?,
        k: problem.k,
        c: problem.c.into(),
        truncation: problem.truncation,
        quadrature,
    };
    let s = solve_disk(&p)?;
    let holds = s.report.bound_holds;
    let out = DiskOutput {
        k: problem.k,
        c: problem.c,
        truncation: problem.truncation,
        center: center.into(),
        radius,
        report: s.report,
    };
    emit_json(&out, output)?;
    Ok(holds)
}
