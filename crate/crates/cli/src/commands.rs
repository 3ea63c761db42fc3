use std::fs;

use anyhow::{bail, Context as _};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use fekete_core::ball::{build_ball_simplex, lebesgue_ball_enumerate_capped, lebesgue_ball_exact};
use fekete_core::cube::{
    constructible_orders, cube_points, cube_witness, hadamard_of_order, is_constructible_order,
    lebesgue_cube_enumerate_capped, HadamardMatrix,
};
use fekete_core::simplex::{lebesgue_simplex, standard_simplex};
use fekete_core::torus::{fourier_matrix, lebesgue_torus_sample, torus_points, torus_witness};
use fekete_core::verification::{
    bound_check, fejer_check, fekete_local_opt, vdm_closed_form_check, Check, VerificationReport,
    FEKETE_PROBE_MAX_DIM,
};
use fekete_core::{
    AnyMatrix, Domain, LebesgueResult, Method, PointSet, WitnessCertificate, DEFAULT_MAX_ENUM_DIM,
};

use crate::output::{emit, fmt_f64, to_csv, to_json};
use crate::{
    DomainArg, Format, HadamardArgs, LebesgueArgs, MethodArg, PointsArgs, SweepArgs, Usage,
    VerifyArgs, WitnessArgs,
};

pub const MAX_ENUM_ENV: &str = "FEKETE_MAX_ENUM_DIM";
const IDENTITY_TOL: f64 = 1e-10;
const PROBE_STEP: f64 = 0.05;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn enum_cap() -> anyhow::Result<usize> {
    match std::env::var(MAX_ENUM_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{MAX_ENUM_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_ENUM_DIM),
    }
}

fn to_usize(v: u64) -> anyhow::Result<usize> {
    usize::try_from(v).map_err(|_| usage(format!("{v} is too large")))
}

fn cube_hadamard(d: usize) -> anyhow::Result<HadamardMatrix> {
    let n = d.checked_add(1).ok_or_else(|| usage("dimension too large"))?;
    if !is_constructible_order(n) {
        let valid: Vec<String> = constructible_orders(n)
            .into_iter()
            .filter(|&o| o >= 2)
            .map(|o| (o - 1).to_string())
            .collect();
        return Err(usage(format!(
            "cube points need d + 1 to be a constructible Hadamard order (a power of two); \
             d = {d} gives {n}. Valid d <= {d}: {}",
            valid.join(", ")
        )));
    }
    Ok(hadamard_of_order(n)?)
}

fn witness_hadamard(m: usize) -> anyhow::Result<HadamardMatrix> {
    if m < 2 || !is_constructible_order(m) {
        let valid: Vec<String> = constructible_orders(m.max(2))
            .into_iter()
            .filter(|&o| o >= 2)
            .map(|o| o.to_string())
            .collect();
        return Err(usage(format!(
            "no constructible Hadamard matrix of order m = {m}; valid m <= {}: {}",
            m.max(2),
            valid.join(", ")
        )));
    }
    Ok(hadamard_of_order(m)?)
}

pub fn point_set(domain: Domain, d: usize) -> anyhow::Result<PointSet> {
    Ok(match domain {
        Domain::Simplex => standard_simplex(d)?.to_point_set(),
        Domain::Ball => build_ball_simplex(d)?.to_point_set(),
        Domain::Cube => cube_points(&cube_hadamard(d)?)?.to_point_set(),
        Domain::Torus => torus_points(&fourier_matrix(d + 1)?)?.to_point_set(),
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum Rows {
    Real(Vec<Vec<f64>>),
    Complex(Vec<Vec<Complex64>>),
}

#[derive(Serialize)]
struct PointsDoc {
    domain: Domain,
    d: usize,
    n_points: usize,
    field: &'static str,
    points: Rows,
}

fn points_doc(p: &PointSet) -> PointsDoc {
    let (field, points) = match p.points() {
        AnyMatrix::Real(x) => ("real", Rows::Real(x.to_rows())),
        AnyMatrix::Complex(z) => ("complex", Rows::Complex(z.to_rows())),
    };
    PointsDoc {
        domain: p.domain(),
        d: p.d(),
        n_points: p.n_points(),
        field,
        points,
    }
}

pub fn points(a: &PointsArgs) -> anyhow::Result<bool> {
    let p = point_set(a.domain.into(), to_usize(a.dim)?)?;
    let doc = points_doc(&p);
    let bytes = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&doc)?,
        Format::Csv => {
            let d = doc.d;
            let (header, rows): (Vec<String>, Vec<Vec<String>>) = match &doc.points {
                Rows::Real(r) => (
                    (1..=d).map(|j| format!("x{j}")).collect(),
                    r.iter().map(|row| row.iter().map(|v| fmt_f64(*v)).collect()).collect(),
                ),
                Rows::Complex(r) => (
                    (1..=d).flat_map(|j| [format!("z{j}_re"), format!("z{j}_im")]).collect(),
                    r.iter()
                        .map(|row| row.iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect())
                        .collect(),
                ),
            };
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            to_csv(&header, &rows)?
        }
    };
    emit(&bytes, a.output.out.as_deref())?;
    Ok(true)
}

fn square_root(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// `m` from `--m`, or from `--dim` when `d + 1` is a perfect square.
fn witness_order(dim: Option<usize>, m: Option<usize>) -> anyhow::Result<usize> {
    match (dim, m) {
        (_, Some(m)) => {
            if let Some(d) = dim {
                if d + 1 != m * m {
                    return Err(usage(format!("--dim {d} does not equal m² − 1 for --m {m}")));
                }
            }
            Ok(m)
        }
        (Some(d), None) => square_root(d + 1)
            .ok_or_else(|| usage(format!("witness needs d + 1 to be a perfect square, got d = {d}"))),
        (None, None) => Err(usage("witness needs --m or --dim")),
    }
}

pub fn witness_certificate(domain: Domain, m: usize) -> anyhow::Result<WitnessCertificate> {
    match domain {
        Domain::Cube => Ok(cube_witness(&witness_hadamard(m)?)?),
        Domain::Torus => Ok(torus_witness(m)?),
        other => Err(usage(format!("no witness construction for the {other} domain"))),
    }
}

fn methods_for(domain: Domain) -> &'static str {
    match domain {
        Domain::Simplex => "sample",
        Domain::Ball => "exact, enumerate",
        Domain::Cube => "enumerate, witness",
        Domain::Torus => "sample, witness",
    }
}

/// One Lebesgue computation; `dim` is required except for witnesses given `m`.
pub fn compute_lebesgue(
    domain: Domain,
    method: MethodArg,
    dim: Option<usize>,
    m: Option<usize>,
    samples: usize,
    seed: u64,
) -> anyhow::Result<LebesgueResult> {
    if method == MethodArg::Witness {
        if !matches!(domain, Domain::Cube | Domain::Torus) {
            return Err(usage(format!(
                "method `witness` is not available for {domain}; use one of: {}",
                methods_for(domain)
            )));
        }
        let m = witness_order(dim, m)?;
        return Ok(witness_certificate(domain, m)?.into());
    }
    if m.is_some() {
        return Err(usage("--m only applies to --method witness"));
    }
    let d = dim.ok_or_else(|| usage("--dim is required"))?;
    Ok(match (domain, method) {
        (Domain::Simplex, MethodArg::Sample) => lebesgue_simplex(&standard_simplex(d)?, samples, seed)?,
        (Domain::Ball, MethodArg::Exact) => lebesgue_ball_exact(d)?,
        (Domain::Ball, MethodArg::Enumerate) => lebesgue_ball_enumerate_capped(d, enum_cap()?)?,
        (Domain::Cube, MethodArg::Enumerate) => {
            lebesgue_cube_enumerate_capped(&cube_points(&cube_hadamard(d)?)?, enum_cap()?)?
        }
        (Domain::Torus, MethodArg::Sample) => {
            lebesgue_torus_sample(&torus_points(&fourier_matrix(d + 1)?)?, samples, seed)?
        }
        _ => {
            return Err(usage(format!(
                "method `{method}` is not available for {domain}; use one of: {}",
                methods_for(domain)
            )))
        }
    })
}

const RESULT_HEADER: [&str; 8] = [
    "domain",
    "d",
    "method",
    "value",
    "lower_bound",
    "upper_bound",
    "sqrt_d",
    "sqrt_d_plus_1",
];

pub fn lebesgue(a: &LebesgueArgs) -> anyhow::Result<bool> {
    let dim = a.dim.map(to_usize).transpose()?;
    let m = a.m.map(to_usize).transpose()?;
    let r = compute_lebesgue(a.domain.into(), a.method, dim, m, a.samples, a.seed)?;
    let bytes = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&r)?,
        Format::Csv => to_csv(
            &RESULT_HEADER,
            &[vec![
                r.domain.to_string(),
                r.d.to_string(),
                r.method.to_string(),
                fmt_f64(r.value),
                fmt_f64(r.lower_bound),
                fmt_f64(r.upper_bound),
                fmt_f64(r.sqrt_d),
                fmt_f64(r.sqrt_d_plus_1),
            ]],
        )?,
    };
    emit(&bytes, a.output.out.as_deref())?;
    Ok(true)
}

/// The full check list for the canonical point set of `domain` in dimension `d`.
pub fn verify_domain(
    domain: Domain,
    d: usize,
    samples: usize,
    trials: usize,
    seed: u64,
) -> anyhow::Result<VerificationReport> {
    let mut report = VerificationReport::new(Some(domain), d);
    let p = point_set(domain, d)?;
    report.extend(fejer_check(&p, samples, seed)?);
    let cap = enum_cap()?;
    match domain {
        Domain::Simplex => {
            let r = lebesgue_simplex(&standard_simplex(d)?, samples, seed)?;
            report.push(Check::new("simplex_lebesgue_is_one", (r.value - 1.0).abs(), 1e-12));
        }
        Domain::Ball => {
            let r = build_ball_simplex(d)?.residuals();
            report.push(Check::new("ball_row_norm", r.row_norm, IDENTITY_TOL));
            report.push(Check::new("ball_centroid", r.centroid, IDENTITY_TOL));
            report.push(Check::new("ball_column_gram", r.column_gram, IDENTITY_TOL));
            report.push(Check::new("ball_row_gram", r.row_gram, IDENTITY_TOL));
            report.push(Check::new("ball_pairwise_distance", r.pairwise_distance, IDENTITY_TOL));
            report.extend(vdm_closed_form_check(Domain::Ball, d)?);
            let exact = lebesgue_ball_exact(d)?;
            report.extend(bound_check(d, exact.value));
            if d <= cap {
                let e = lebesgue_ball_enumerate_capped(d, cap)?;
                report.push(Check::new("exact_matches_enumeration", (exact.value - e.value).abs(), 1e-12));
            }
        }
        Domain::Cube => {
            let h = cube_hadamard(d)?;
            report.push(Check::new("hadamard_integer_gram", h.gram_residual() as f64, 0.0));
            report.push(Check::new("hadamard_normalized", if h.is_normalized() { 0.0 } else { 1.0 }, 0.0));
            report.extend(vdm_closed_form_check(Domain::Cube, d)?);
            let witness = square_root(d + 1)
                .filter(|&m| is_constructible_order(m) && m >= 2)
                .map(|m| cube_witness(&hadamard_of_order(m)?).map(|w| (m, w)))
                .transpose()?;
            if let Some((m, w)) = &witness {
                report.push(Check::new("witness_attains_m", (w.value - *m as f64).abs(), 1e-12));
            }
            if d <= cap {
                let e = lebesgue_cube_enumerate_capped(&cube_points(&h)?, cap)?;
                // √d from below is only guaranteed when a witness exists
                report.extend(upper_bound_only(bound_check(d, e.value), witness.is_some()));
                if let Some((_, w)) = &witness {
                    report.push(Check::new("enumeration_matches_witness", (e.value - w.value).abs(), 1e-12));
                }
            }
        }
        Domain::Torus => {
            let f = fourier_matrix(d + 1)?;
            report.push(Check::new("fourier_unitarity", f.unitarity_residual(), IDENTITY_TOL));
            let s = lebesgue_torus_sample(&torus_points(&f)?, samples, seed)?;
            // sampling only ever certifies from below, so √d is not a fair test
            report.extend(upper_bound_only(bound_check(d, s.value), false));
            if let Some(m) = square_root(d + 1) {
                let w = torus_witness(m)?;
                report.push(Check::new("witness_attains_m", (w.value - m as f64).abs(), 1e-9));
            }
        }
    }
    if d <= FEKETE_PROBE_MAX_DIM {
        report.extend(fekete_local_opt(&p, trials, PROBE_STEP, seed)?);
    }
    Ok(report)
}

fn upper_bound_only(mut bounds: VerificationReport, keep_lower: bool) -> VerificationReport {
    if !keep_lower {
        bounds.checks.retain(|c| c.name != "lower_bound_sqrt_d");
    }
    bounds
}

pub fn verify(a: &VerifyArgs) -> anyhow::Result<bool> {
    let d = to_usize(a.dim)?;
    let mut report = verify_domain(a.domain.into(), d, a.samples, a.trials, a.seed)?;
    if let Some(tol) = a.tolerance {
        if tol.is_nan() || tol < 0.0 {
            return Err(usage(format!("--tolerance must be non-negative, got {tol}")));
        }
        report.checks = report
            .checks
            .into_iter()
            .map(|c| Check::new(c.name, c.residual, tol))
            .collect();
    }
    let bytes = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Csv => to_csv(
            &["check", "residual", "tolerance", "passed"],
            &report
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), fmt_f64(c.residual), fmt_f64(c.tolerance), c.passed.to_string()])
                .collect::<Vec<_>>(),
        )?,
    };
    emit(&bytes, a.output.out.as_deref())?;
    for c in report.failures() {
        eprintln!("FAILED {}: residual {} > tolerance {}", c.name, fmt_f64(c.residual), fmt_f64(c.tolerance));
    }
    Ok(report.passed())
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub lambda: Option<f64>,
    pub sqrt_d: f64,
    pub sqrt_d_plus_1: f64,
    pub method: Method,
    pub status: String,
}

pub fn sweep_rows(
    domain: Domain,
    method: MethodArg,
    dims: Option<&[usize]>,
    ms: Option<&[usize]>,
    samples: usize,
    seed: u64,
) -> anyhow::Result<Vec<SweepRow>> {
    let items: Vec<(usize, Option<usize>)> = match (dims, ms) {
        (Some(ds), None) => ds.iter().map(|&d| (d, None)).collect(),
        (None, Some(ms)) if method == MethodArg::Witness => {
            ms.iter().map(|&m| (m.saturating_mul(m).saturating_sub(1), Some(m))).collect()
        }
        (None, Some(_)) => bail!(Usage("--ms only applies to --method witness".into())),
        _ => bail!(Usage("give --dims or --ms".into())),
    };
    // domain/method mismatches are usage errors, not per-row failures
    if !methods_for(domain).split(", ").any(|m| m == method.to_string()) {
        return Err(usage(format!(
            "method `{method}` is not available for {domain}; use one of: {}",
            methods_for(domain)
        )));
    }
    Ok(items
        .into_iter()
        .map(|(d, m)| {
            let dim = if m.is_some() { None } else { Some(d) };
            let (lambda, status) = match compute_lebesgue(domain, method, dim, m, samples, seed) {
                Ok(r) => (Some(r.value), "ok".to_string()),
                Err(e) => (None, format!("error: {e:#}")),
            };
            SweepRow {
                d,
                lambda,
                sqrt_d: (d as f64).sqrt(),
                sqrt_d_plus_1: ((d + 1) as f64).sqrt(),
                method: method.into(),
                status,
            }
        })
        .collect())
}

pub const SWEEP_HEADER: [&str; 6] = ["d", "lambda", "sqrt_d", "sqrt_d_plus_1", "method", "status"];

pub fn sweep(a: &SweepArgs) -> anyhow::Result<bool> {
    let rows = sweep_rows(
        a.domain.into(),
        a.method,
        a.dims.as_ref().map(|l| l.0.as_slice()),
        a.ms.as_ref().map(|l| l.0.as_slice()),
        a.samples,
        a.seed,
    )?;
    let bytes = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(
            &SWEEP_HEADER,
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        r.lambda.map(fmt_f64).unwrap_or_default(),
                        fmt_f64(r.sqrt_d),
                        fmt_f64(r.sqrt_d_plus_1),
                        r.method.to_string(),
                        r.status.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    emit(&bytes, a.output.out.as_deref())?;
    let failed: Vec<&SweepRow> = rows.iter().filter(|r| r.status != "ok").collect();
    for r in &failed {
        eprintln!("d = {}: {}", r.d, r.status);
    }
    Ok(failed.is_empty())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<i64>>),
    Wrapped { rows: Vec<Vec<i64>> },
}

fn read_matrix(path: &std::path::Path) -> anyhow::Result<Vec<Vec<i64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with(['[', '{']) {
        let parsed: MatrixFile = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{}: expected a JSON integer matrix: {e}", path.display())))?;
        return Ok(match parsed {
            MatrixFile::Bare(rows) | MatrixFile::Wrapped { rows } => rows,
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            rec.iter()
                .map(|f| f.parse::<i64>().map_err(|e| usage(format!("`{f}`: {e}"))))
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct HadamardDoc {
    order: usize,
    rows: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct HadamardCheckDoc {
    order: usize,
    valid: bool,
    normalized: bool,
    symmetric: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

pub fn hadamard(a: &HadamardArgs) -> anyhow::Result<bool> {
    let format = a.output.format.unwrap_or(Format::Json);
    if let Some(path) = &a.check {
        let rows = read_matrix(path)?;
        let doc = match HadamardMatrix::from_rows(&rows) {
            Ok(h) => HadamardCheckDoc {
                order: h.order(),
                valid: h.gram_residual() == 0,
                normalized: h.is_normalized(),
                symmetric: h.is_symmetric(),
                reason: None,
            },
            Err(e) => HadamardCheckDoc {
                order: rows.len(),
                valid: false,
                normalized: false,
                symmetric: false,
                reason: Some(e.to_string()),
            },
        };
        let bytes = match format {
            Format::Json => to_json(&doc)?,
            Format::Csv => to_csv(
                &["order", "valid", "normalized", "symmetric", "reason"],
                &[vec![
                    doc.order.to_string(),
                    doc.valid.to_string(),
                    doc.normalized.to_string(),
                    doc.symmetric.to_string(),
                    doc.reason.clone().unwrap_or_default(),
                ]],
            )?,
        };
        emit(&bytes, a.output.out.as_deref())?;
        return Ok(doc.valid);
    }
    let n = a.order.expect("clap requires --order without --check");
    if n == 0 {
        return Err(usage("order must be positive"));
    }
    if !is_constructible_order(n) {
        let valid: Vec<String> = constructible_orders(n).iter().map(ToString::to_string).collect();
        return Err(usage(format!(
            "no constructible Hadamard matrix of order {n}; valid orders <= {n}: {}",
            valid.join(", ")
        )));
    }
    let h = hadamard_of_order(n)?;
    let bytes = match format {
        Format::Json => to_json(&HadamardDoc { order: n, rows: h.to_rows() })?,
        Format::Csv => {
            let header: Vec<String> = (1..=n).map(|j| format!("c{j}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = h
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.to_string()).collect())
                .collect();
            to_csv(&header, &rows)?
        }
    };
    emit(&bytes, a.output.out.as_deref())?;
    Ok(true)
}

pub fn witness(a: &WitnessArgs) -> anyhow::Result<bool> {
    let domain: Domain = a.domain.into();
    if !matches!(a.domain, DomainArg::Cube | DomainArg::Torus) {
        return Err(usage(format!("no witness construction for the {domain} domain; use cube or torus")));
    }
    let w = witness_certificate(domain, to_usize(a.m)?)?;
    emit(&to_json(&w)?, a.out.as_deref())?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_order_resolution() {
        assert_eq!(witness_order(Some(15), None).unwrap(), 4);
        assert_eq!(witness_order(None, Some(3)).unwrap(), 3);
        assert!(witness_order(Some(14), None).is_err());
        assert!(witness_order(Some(15), Some(3)).is_err());
    }

    #[test]
    fn cube_dimension_error_lists_valid_d() {
        let msg = cube_hadamard(8).unwrap_err().to_string();
        assert!(msg.contains("1, 3, 7"), "{msg}");
    }

    #[test]
    fn sweep_marks_unconstructible_cube_witness() {
        let rows = sweep_rows(Domain::Cube, MethodArg::Witness, None, Some(&[2, 3, 4]), 1, 0).unwrap();
        let got: Vec<_> = rows.iter().map(|r| (r.d, r.lambda)).collect();
        assert_eq!(got, vec![(3, Some(2.0)), (8, None), (15, Some(4.0))]);
        assert!(rows[1].status.starts_with("error"));
    }
}
