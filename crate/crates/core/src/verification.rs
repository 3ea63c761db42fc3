//! Cross-domain certification of point sets and Lebesgue constants.
//!
//! Lagrange values here come from a generic inverse of the Vandermonde matrix
//! (see [`PointSet::lagrange_basis`]), never from the per-domain closed forms
//! they are checked against.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::build_ball_simplex;
use crate::cube::hadamard_of_order;
use crate::error::{Error, Result};
use crate::sampling;
use crate::types::{Domain, DomainPoint, PointSet};

pub const FEJER_TOL: f64 = 1e-10;
pub const FEKETE_TOL: f64 = 1e-9;
pub const BOUND_TOL: f64 = 1e-9;
pub const VDM_TOL: f64 = 1e-9;
/// Largest `d` accepted by [`fekete_local_opt`].
pub const FEKETE_PROBE_MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    /// `passed` is `residual <= tolerance`; a NaN residual fails.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: residual <= tolerance,
            residual,
            tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub domain: Option<Domain>,
    pub d: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(domain: Option<Domain>, d: usize) -> Self {
        Self {
            domain,
            d,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Random point of `K`. Odd draws land on the boundary (sphere, cube
/// vertex, simplex vertex) where the Fejér maximum is attained.
fn sample_domain(rng: &mut impl Rng, points: &PointSet, boundary: bool) -> DomainPoint {
    let d = points.d();
    match points.domain() {
        Domain::Ball if boundary => DomainPoint::Real(sampling::unit_sphere(rng, d)),
        Domain::Ball => DomainPoint::Real(sampling::uniform_ball(rng, d, 1.0)),
        Domain::Cube if boundary => DomainPoint::Real(sampling::random_vertex(rng, d)),
        Domain::Cube => DomainPoint::Real(sampling::uniform_cube(rng, d)),
        Domain::Torus => DomainPoint::Complex(
            sampling::uniform_angles(rng, d)
                .into_iter()
                .map(|t| Complex64::from_polar(1.0, t))
                .collect(),
        ),
        Domain::Simplex => {
            let idx = rng.random_range(0..=d);
            let w: Vec<f64> = if boundary {
                (0..=d).map(|i| if i == idx { 1.0 } else { 0.0 }).collect()
            } else {
                sampling::dirichlet(rng, d + 1)
            };
            let DomainPoint::Real(first) = points.node(0) else { unreachable!() };
            let mut y = vec![0.0; first.len()];
            for (i, wi) in w.iter().enumerate() {
                let DomainPoint::Real(v) = points.node(i) else { unreachable!() };
                y.iter_mut().zip(&v).for_each(|(a, b)| *a += wi * b);
            }
            DomainPoint::Real(y)
        }
    }
}

fn norm_sq(p: &DomainPoint) -> f64 {
    match p {
        DomainPoint::Real(v) => v.iter().map(|x| x * x).sum(),
        DomainPoint::Complex(v) => v.iter().map(|z| z.norm_sqr()).sum(),
    }
}

/// Closed form of `Σ|ℓᵢ|²` for the canonical point set of each domain.
fn fejer_closed_form(domain: Domain, d: usize, p: &DomainPoint) -> Option<f64> {
    let n = (d + 1) as f64;
    match domain {
        Domain::Ball => Some((1.0 + d as f64 * norm_sq(p)) / n),
        Domain::Cube | Domain::Torus => Some((1.0 + norm_sq(p)) / n),
        Domain::Simplex => None,
    }
}

/// Samples `Σ|ℓᵢ|²` over `K`: the maximum must not exceed 1, it must equal 1
/// at the nodes, and for ball, cube and torus it must match the closed form.
pub fn fejer_check(points: &PointSet, samples: usize, seed: u64) -> Result<VerificationReport> {
    let basis = points.lagrange_basis()?;
    let d = points.d();
    let sum_sq = |p: &DomainPoint| -> Result<f64> {
        Ok(basis.abs_values(p)?.iter().map(|a| a * a).sum())
    };
    let per_sample: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, i);
            let p = sample_domain(&mut rng, points, i % 2 == 1);
            let s = sum_sq(&p)?;
            let identity = fejer_closed_form(points.domain(), d, &p).map_or(0.0, |f| (s - f).abs());
            Ok((s, identity))
        })
        .collect::<Result<_>>()?;
    let max_sum = per_sample.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let identity = per_sample.iter().map(|p| p.1).fold(0.0, f64::max);
    let nodes = (0..points.n_points())
        .map(|i| sum_sq(&points.node(i)).map(|s| (s - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let mut report = VerificationReport::new(Some(points.domain()), d);
    report.push(Check::new("fejer_max_sum_squares", (max_sum - 1.0).max(0.0), FEJER_TOL));
    report.push(Check::new("fejer_nodes_attain_one", nodes, FEJER_TOL));
    if points.domain() != Domain::Simplex {
        report.push(Check::new("fejer_closed_form_identity", identity, FEJER_TOL));
    }
    Ok(report)
}

fn project(domain: Domain, p: DomainPoint) -> DomainPoint {
    match (domain, p) {
        (Domain::Ball, DomainPoint::Real(mut v)) => {
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 1.0 {
                v.iter_mut().for_each(|x| *x /= r);
            }
            DomainPoint::Real(v)
        }
        (Domain::Cube, DomainPoint::Real(v)) => {
            DomainPoint::Real(v.into_iter().map(|x| x.clamp(-1.0, 1.0)).collect())
        }
        (Domain::Simplex, DomainPoint::Real(v)) => {
            // barycentric clamp-and-renormalize against the standard simplex
            let head = (1.0 - v.iter().sum::<f64>()).max(0.0);
            let tail: Vec<f64> = v.into_iter().map(|x| x.max(0.0)).collect();
            let total = head + tail.iter().sum::<f64>();
            DomainPoint::Real(tail.into_iter().map(|x| x / total).collect())
        }
        (Domain::Torus, DomainPoint::Complex(v)) => {
            DomainPoint::Complex(v.into_iter().map(|z| z / z.norm()).collect())
        }
        (_, p) => p,
    }
}

/// Local Fekete probe: moves one node at a time by at most `step`, projects
/// back into `K`, and records the largest gain in `log|det V|`.
///
/// For the simplex domain `K` is the standard simplex.
pub fn fekete_local_opt(
    points: &PointSet,
    trials: usize,
    step: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let d = points.d();
    if d > FEKETE_PROBE_MAX_DIM {
        return Err(Error::Resource(format!(
            "Fekete probe limited to d <= {FEKETE_PROBE_MAX_DIM}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let base = points.vandermonde().log_abs_det()?;
    let gains: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::stream(seed, t);
            let i = rng.random_range(0..points.n_points());
            let radius = step * rng.random::<f64>();
            let moved = match points.node(i) {
                DomainPoint::Real(v) => {
                    let dir = sampling::unit_sphere(&mut rng, d);
                    DomainPoint::Real(v.iter().zip(&dir).map(|(x, u)| x + radius * u).collect())
                }
                DomainPoint::Complex(v) => {
                    let dir = sampling::unit_sphere(&mut rng, 2 * d);
                    DomainPoint::Complex(
                        v.iter()
                            .enumerate()
                            .map(|(k, z)| z + radius * Complex64::new(dir[2 * k], dir[2 * k + 1]))
                            .collect(),
                    )
                }
            };
            let moved = project(points.domain(), moved);
            let logdet = points.with_node(i, &moved)?.vandermonde().log_abs_det()?;
            Ok(logdet - base)
        })
        .collect::<Result<_>>()?;
    let max_gain = gains.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let mut report = VerificationReport::new(Some(points.domain()), d);
    report.push(Check::new("vandermonde_nonsingular", if base.is_finite() { 0.0 } else { f64::INFINITY }, 0.0));
    report.push(Check::new("fekete_no_logdet_increase", max_gain.max(0.0), FEKETE_TOL));
    Ok(report)
}

/// `√d ≤ value ≤ √(d+1)` with slack [`BOUND_TOL`].
pub fn bound_check(d: usize, value: f64) -> VerificationReport {
    let lower = (d as f64).sqrt();
    let upper = ((d + 1) as f64).sqrt();
    let mut report = VerificationReport::new(None, d);
    report.push(Check::new("lower_bound_sqrt_d", (lower - value).max(0.0), BOUND_TOL));
    report.push(Check::new("upper_bound_sqrt_d_plus_1", (value - upper).max(0.0), BOUND_TOL));
    report
}

/// Expected `log|det [𝟙 | X]|`: `((d+1)/2) ln(d+1) − (d/2) ln d` for the ball,
/// `((d+1)/2) ln(d+1)` for the cube.
pub fn vdm_closed_form(domain: Domain, d: usize) -> Result<f64> {
    let n = (d + 1) as f64;
    match domain {
        Domain::Ball => Ok(n / 2.0 * n.ln() - d as f64 / 2.0 * (d as f64).ln()),
        Domain::Cube => Ok(n / 2.0 * n.ln()),
        other => Err(Error::UnsupportedDomain(other)),
    }
}

pub fn vdm_closed_form_check(domain: Domain, d: usize) -> Result<VerificationReport> {
    let expected = vdm_closed_form(domain, d)?;
    let actual = match domain {
        Domain::Ball => build_ball_simplex(d)?.vandermonde().log_abs_det()?,
        _ => hadamard_of_order(d + 1)?.to_real().log_abs_det()?,
    };
    let mut report = VerificationReport::new(Some(domain), d);
    report.push(Check::new("vandermonde_log_det_closed_form", (actual - expected).abs(), VDM_TOL));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{cube_points, sylvester};
    use crate::linalg::{AnyMatrix, RealMatrix};
    use crate::simplex::standard_simplex;
    use crate::torus::{fourier_matrix, torus_points};
    use approx::assert_abs_diff_eq;

    #[test]
    fn check_pass_flag_tracks_residual() {
        assert!(Check::new("a", 1e-11, 1e-10).passed);
        assert!(!Check::new("a", 2e-10, 1e-10).passed);
        assert!(!Check::new("a", f64::NAN, 1e-10).passed);
    }

    #[test]
    fn fejer_ball_d3() {
        let p = build_ball_simplex(3).unwrap().to_point_set();
        let r = fejer_check(&p, 2000, 0).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn fejer_cube_d3() {
        let p = cube_points(&sylvester(2).unwrap()).unwrap().to_point_set();
        let r = fejer_check(&p, 2000, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        // vertices are sampled, so the sampled maximum reaches 1
        assert_eq!(r.check("fejer_max_sum_squares").unwrap().residual, 0.0);
    }

    #[test]
    fn fejer_torus_d8() {
        let p = torus_points(&fourier_matrix(9).unwrap()).unwrap().to_point_set();
        assert!(fejer_check(&p, 1000, 4).unwrap().passed());
    }

    #[test]
    fn fejer_standard_simplex() {
        let p = standard_simplex(4).unwrap().to_point_set();
        assert!(fejer_check(&p, 1000, 0).unwrap().passed());
    }

    #[test]
    fn fejer_detects_non_fejer_set() {
        // A small triangle inside the unit disc is not Fejér for the ball.
        let x = RealMatrix::from_rows(&[vec![-0.3, -0.2], vec![0.3, -0.2], vec![0.0, 0.3]]).unwrap();
        let p = PointSet::new(Domain::Ball, AnyMatrix::Real(x)).unwrap();
        assert!(!fejer_check(&p, 500, 0).unwrap().passed());
    }

    #[test]
    fn fekete_probe_ball_and_cube() {
        let ball = build_ball_simplex(3).unwrap().to_point_set();
        assert!(fekete_local_opt(&ball, 1000, 0.05, 0).unwrap().passed());
        let cube = cube_points(&sylvester(2).unwrap()).unwrap().to_point_set();
        assert!(fekete_local_opt(&cube, 1000, 0.5, 0).unwrap().passed());
    }

    #[test]
    fn fekete_probe_detects_shrunken_simplex() {
        let x = RealMatrix::from_rows(&[vec![0.0, 0.0], vec![0.6, 0.1], vec![0.0, 1.0]]).unwrap();
        let p = PointSet::new(Domain::Simplex, AnyMatrix::Real(x)).unwrap();
        let r = fekete_local_opt(&p, 1000, 0.05, 0).unwrap();
        assert!(!r.passed());
        assert!(r.check("fekete_no_logdet_increase").unwrap().residual > 1e-3);
        // the standard simplex itself is volume-maximal in K
        let s = standard_simplex(2).unwrap().to_point_set();
        assert!(fekete_local_opt(&s, 1000, 0.05, 0).unwrap().passed());
    }

    #[test]
    fn fekete_probe_arguments() {
        let big = build_ball_simplex(9).unwrap().to_point_set();
        assert!(matches!(fekete_local_opt(&big, 10, 0.1, 0), Err(Error::Resource(_))));
        let p = build_ball_simplex(2).unwrap().to_point_set();
        assert!(matches!(fekete_local_opt(&p, 10, 0.0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn bound_examples() {
        assert!(bound_check(3, 2.0).passed());
        assert!(bound_check(2, 5.0 / 3.0).passed());
        let r = bound_check(4, 1.0);
        assert!(!r.passed());
        assert!(!r.check("lower_bound_sqrt_d").unwrap().passed);
    }

    #[test]
    fn vdm_examples() {
        assert_abs_diff_eq!(
            vdm_closed_form(Domain::Ball, 3).unwrap(),
            (16.0 / 3f64.powf(1.5)).ln(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(vdm_closed_form(Domain::Cube, 3).unwrap(), 16f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(vdm_closed_form(Domain::Ball, 1).unwrap(), 2f64.ln(), epsilon = 1e-15);
        for d in [1, 3, 10] {
            assert!(vdm_closed_form_check(Domain::Ball, d).unwrap().passed());
        }
        assert!(vdm_closed_form_check(Domain::Cube, 3).unwrap().passed());
        assert!(matches!(
            vdm_closed_form_check(Domain::Torus, 3),
            Err(Error::UnsupportedDomain(Domain::Torus))
        ));
    }
}
