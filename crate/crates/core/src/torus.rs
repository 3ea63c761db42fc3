//! `K = 𝕋^d`, the complex torus: Fekete points from the Fourier matrix.
//!
//! `F_n = [ω^{jk}]` with `ω = e^{2πi/n}` and 0-based indices, so row and
//! column 0 are all ones. Dropping column 0 of `F_{d+1}` gives `d + 1` torus
//! points with Vandermonde matrix `F`. Since `F*F = nI` and `Fᵗ = F`, the
//! Lagrange basis is `ℓ(z) = F* [1; z] / (d+1)` and `Σ|ℓᵢ|² = 1` on `𝕋^d`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{AnyMatrix, ComplexMatrix};
use crate::sampling::{self, golden_section_max};
use crate::types::{Domain, DomainPoint, LebesgueResult, Method, PointSet, SignVector, WitnessCertificate};

/// Distance from the unit circle tolerated for points passed as torus points.
pub const TORUS_MODULUS_TOL: f64 = 1e-9;

/// Coordinate-ascent sweeps applied to each record sample.
pub const REFINEMENT_PASSES: usize = 3;
const GOLDEN_ITERATIONS: usize = 60;

/// `ω^r` for `ω = e^{2πi/n}`, exact at multiples of a quarter turn.
pub fn root_of_unity(r: usize, n: usize) -> Complex64 {
    let r = r % n;
    if (4 * r) % n == 0 {
        return match 4 * r / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (TAU * r as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

/// `F_n`, with the exponent reduced mod `n` before any trigonometry.
pub fn fourier_matrix(n: usize) -> Result<FourierMatrix> {
    if n < 1 {
        return Err(Error::Domain("Fourier matrix order must be at least 1".into()));
    }
    let matrix = ComplexMatrix::from_fn(n, n, |j, k| root_of_unity((j * k) % n, n));
    Ok(FourierMatrix { n, matrix })
}

impl FourierMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `max |F*F − nI|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n as f64;
        self.matrix
            .adjoint()
            .matmul(&self.matrix)
            .expect("square")
            .max_abs_residual(&ComplexMatrix::identity(self.n).scale(Complex64::new(n, 0.0)))
            .expect("square")
    }
}

/// `d + 1` points of `𝕋^d`: the rows of `F_{d+1}` without the leading 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPointSet {
    d: usize,
    points: ComplexMatrix,
    #[serde(skip)]
    fourier: FourierMatrix,
}

pub fn torus_points(f: &FourierMatrix) -> Result<TorusPointSet> {
    if f.n < 2 {
        return Err(Error::Domain("torus points need a Fourier matrix of order at least 2".into()));
    }
    let d = f.n - 1;
    let points = ComplexMatrix::from_fn(f.n, d, |i, j| f.matrix[(i, j + 1)]);
    Ok(TorusPointSet {
        d,
        points,
        fourier: f.clone(),
    })
}

impl TorusPointSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &ComplexMatrix {
        &self.points
    }

    pub fn vandermonde(&self) -> &FourierMatrix {
        &self.fourier
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::new(Domain::Torus, AnyMatrix::Complex(self.points.clone()))
            .expect("torus point set has d+1 rows")
    }

    /// `ℓ(z) = F* [1; z] / (d+1)`; defined for any `z ∈ ℂ^d`.
    pub fn lagrange(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.d, z.len())?;
        Ok(self.lagrange_unchecked(z))
    }

    fn lagrange_unchecked(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.d + 1;
        let inv_n = 1.0 / n as f64;
        (0..n)
            .map(|i| {
                // Fᵗ = F, so column i of F* is the conjugate of row i
                let row = self.fourier.matrix.row(i);
                let s = row[0].conj()
                    + row[1..]
                        .iter()
                        .zip(z)
                        .map(|(f, &zk)| f.conj() * zk)
                        .sum::<Complex64>();
                s * inv_n
            })
            .collect()
    }

    /// `Σ|ℓᵢ(z)|` for `z` on the torus.
    pub fn lebesgue_function(&self, z: &[Complex64]) -> Result<f64> {
        check_len(self.d, z.len())?;
        if let Some((j, zj)) = z
            .iter()
            .enumerate()
            .find(|(_, zj)| (zj.norm() - 1.0).abs() > TORUS_MODULUS_TOL)
        {
            return Err(Error::Domain(format!(
                "coordinate {j} has modulus {}, not on the torus",
                zj.norm()
            )));
        }
        Ok(l1(&self.lagrange_unchecked(z)))
    }

    fn lebesgue_at_angles(&self, theta: &[f64]) -> f64 {
        let z: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        l1(&self.lagrange_unchecked(&z))
    }

    /// Coordinate-wise golden-section ascent over each angle's full period.
    fn refine(&self, mut theta: Vec<f64>, mut value: f64) -> (f64, Vec<f64>) {
        for _ in 0..REFINEMENT_PASSES {
            for k in 0..theta.len() {
                let centre = theta[k];
                let mut probe = theta.clone();
                let (angle, v) = golden_section_max(
                    |a| {
                        probe[k] = a;
                        self.lebesgue_at_angles(&probe)
                    },
                    centre - PI,
                    centre + PI,
                    GOLDEN_ITERATIONS,
                );
                if v > value {
                    value = v;
                    theta[k] = angle.rem_euclid(TAU);
                }
            }
        }
        (value, theta)
    }
}

fn l1(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).sum()
}

pub fn torus_lagrange(p: &TorusPointSet, z: &[Complex64]) -> Result<Vec<Complex64>> {
    p.lagrange(z)
}

pub fn lebesgue_torus_function(p: &TorusPointSet, z: &[Complex64]) -> Result<f64> {
    p.lebesgue_function(z)
}

/// Sampled lower bound on `Λ₁` over `𝕋^d`.
///
/// Draws `samples` uniform torus points, then refines every record (a sample
/// beating all earlier ones) by coordinate ascent and reports the best
/// refined value. Records of a prefix are records of the whole stream, so
/// the result never decreases as `samples` grows for a fixed seed.
pub fn lebesgue_torus_sample(p: &TorusPointSet, samples: usize, seed: u64) -> Result<LebesgueResult> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let d = p.d;
    let angles = |i: u64| sampling::uniform_angles(&mut sampling::stream(seed, i), d);
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| p.lebesgue_at_angles(&angles(i)))
        .collect();
    let mut records = Vec::new();
    let mut running = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > running {
            running = v;
            records.push(i as u64);
        }
    }
    let refined: Vec<(f64, Vec<f64>)> = records
        .par_iter()
        .map(|&i| p.refine(angles(i), values[i as usize]))
        .collect();
    let (value, theta) = refined
        .into_iter()
        .reduce(|best, cand| if cand.0 > best.0 { cand } else { best })
        .expect("at least one record");
    let mut result = LebesgueResult::new(Domain::Torus, d, Method::Sampling, value);
    result.lower_bound = value.min(result.upper_bound);
    result.point = Some(DomainPoint::Complex(
        theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect(),
    ));
    Ok(result)
}

/// Extremal certificate on `𝕋^d`, `d = m² − 1`.
///
/// `ε` stacks the columns of `F_m*`. Every entry of `w = F_{d+1} ε` then has
/// modulus `m`; after rotating `ε` by a global phase so that `w₀ = m`, the
/// point `zⱼ = w_{j+1}/|w_{j+1}|` gives
/// `(w₀ + Σ conj(zⱼ) w_{j+1})/(d+1) = m = √(d+1)`.
pub fn torus_witness(m: usize) -> Result<WitnessCertificate> {
    if m < 1 {
        return Err(Error::Domain("witness order m must be at least 1".into()));
    }
    let fm = fourier_matrix(m)?;
    let n = m * m;
    let big = fourier_matrix(n)?;
    // column j of F_m* holds conj(F_m[j][i]) in row i
    let mut eps: Vec<Complex64> = (0..m)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .map(|(i, j)| fm.matrix[(j, i)].conj())
        .collect();
    let mf = m as f64;
    let mut w = big.matrix.mat_vec(&eps)?;
    if let Some((j, wj)) = w
        .iter()
        .enumerate()
        .find(|(_, wj)| (wj.norm() - mf).abs() > 1e-9)
    {
        return Err(Error::Consistency(format!(
            "|w_{j}| = {}, expected {m}",
            wj.norm()
        )));
    }
    let phase = w[0].conj() / w[0].norm();
    eps.iter_mut().for_each(|e| *e *= phase);
    w.iter_mut().for_each(|x| *x *= phase);
    let z: Vec<Complex64> = w[1..].iter().map(|x| x / x.norm()).collect();
    let total = w[0] + z.iter().zip(&w[1..]).map(|(zj, wj)| zj.conj() * wj).sum::<Complex64>();
    let value = total / n as f64;
    if value.im.abs() > 1e-9 {
        return Err(Error::Consistency(format!(
            "witness value has imaginary part {}",
            value.im
        )));
    }
    Ok(WitnessCertificate {
        domain: Domain::Torus,
        d: n - 1,
        m,
        epsilon: SignVector::Phases(eps),
        point: DomainPoint::Complex(z),
        value: value.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_fourier_matrices() {
        assert_eq!(fourier_matrix(1).unwrap().matrix().to_rows(), vec![vec![c(1.0, 0.0)]]);
        let f2 = fourier_matrix(2).unwrap();
        assert_eq!(
            f2.matrix().to_rows(),
            vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(-1.0, 0.0)]]
        );
        let f4 = fourier_matrix(4).unwrap();
        assert_eq!(
            f4.matrix().row(1),
            &[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]
        );
        assert!(f4.unitarity_residual() <= 1e-15);
        assert!(fourier_matrix(0).is_err());
    }

    #[test]
    fn fourier_matrix_is_symmetric() {
        let f = fourier_matrix(12).unwrap();
        assert_eq!(f.matrix().transpose(), *f.matrix());
    }

    #[test]
    fn torus_points_examples() {
        let p1 = torus_points(&fourier_matrix(2).unwrap()).unwrap();
        assert_eq!(p1.points().to_rows(), vec![vec![c(1.0, 0.0)], vec![c(-1.0, 0.0)]]);
        let p3 = torus_points(&fourier_matrix(4).unwrap()).unwrap();
        assert_eq!(p3.points().row(1), &[c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        let p8 = torus_points(&fourier_matrix(9).unwrap()).unwrap();
        assert_eq!(p8.points().as_slice().len(), 72);
        for z in p8.points().as_slice() {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-12);
        }
        assert!(torus_points(&fourier_matrix(1).unwrap()).is_err());
    }

    #[test]
    fn lagrange_interpolates() {
        let p = torus_points(&fourier_matrix(6).unwrap()).unwrap();
        for j in 0..6 {
            let l = p.lagrange(p.points().row(j)).unwrap();
            for (i, li) in l.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((li - c(e, 0.0)).norm() <= 1e-10);
            }
        }
        for li in p.lagrange(&[c(0.0, 0.0); 5]).unwrap() {
            assert!((li - c(1.0 / 6.0, 0.0)).norm() <= 1e-15);
        }
    }

    #[test]
    fn fejer_identity_on_torus() {
        let p = torus_points(&fourier_matrix(6).unwrap()).unwrap();
        let mut rng = sampling::stream(3, 0);
        for _ in 0..100 {
            let z: Vec<Complex64> = sampling::uniform_angles(&mut rng, 5)
                .into_iter()
                .map(|t| Complex64::from_polar(1.0, t))
                .collect();
            let s: f64 = p.lagrange(&z).unwrap().iter().map(|l| l.norm_sqr()).sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn lebesgue_function_domain_checks() {
        let p = torus_points(&fourier_matrix(4).unwrap()).unwrap();
        assert!(matches!(
            p.lebesgue_function(&[c(0.5, 0.0), c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(p.lebesgue_function(&[c(1.0, 0.0)]), Err(Error::Length { .. })));
        let node = p.points().row(2).to_vec();
        assert_abs_diff_eq!(p.lebesgue_function(&node).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn d1_constant_is_sqrt2_on_angle_grid() {
        // (|1 + z| + |1 − z|)/2 on the unit circle, brute-forced
        let grid_max = (0..100_000)
            .map(|k| {
                let z = Complex64::from_polar(1.0, TAU * k as f64 / 100_000.0);
                ((c(1.0, 0.0) + z).norm() + (c(1.0, 0.0) - z).norm()) / 2.0
            })
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(grid_max, 2f64.sqrt(), epsilon = 1e-12);
        let p = torus_points(&fourier_matrix(2).unwrap()).unwrap();
        let r = lebesgue_torus_sample(&p, 1000, 0).unwrap();
        assert_abs_diff_eq!(r.value, grid_max, epsilon = 1e-9);
    }

    #[test]
    fn sampled_d3_reaches_witness_value() {
        let p = torus_points(&fourier_matrix(4).unwrap()).unwrap();
        let r = lebesgue_torus_sample(&p, 2000, 1).unwrap();
        assert!(r.value >= 2.0 - 1e-6 && r.value <= 2.0 + 1e-9, "{}", r.value);
        let Some(DomainPoint::Complex(z)) = &r.point else { panic!() };
        assert_abs_diff_eq!(p.lebesgue_function(z).unwrap(), r.value, epsilon = 1e-12);
    }

    #[test]
    fn witness_small_m() {
        let w1 = torus_witness(1).unwrap();
        assert_eq!((w1.d, w1.value), (0, 1.0));
        for m in 2..=4 {
            let w = torus_witness(m).unwrap();
            assert_eq!(w.d, m * m - 1);
            assert_abs_diff_eq!(w.value, m as f64, epsilon = 1e-10);
            let p = torus_points(&fourier_matrix(m * m).unwrap()).unwrap();
            let DomainPoint::Complex(z) = &w.point else { panic!() };
            assert_abs_diff_eq!(p.lebesgue_function(z).unwrap(), w.value, epsilon = 1e-10);
        }
        assert!(torus_witness(0).is_err());
    }
}
