use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{AnyMatrix, ComplexMatrix, Matrix, RealMatrix, Scalar};

/// The body `K` on which points live and the Lebesgue constant is maximized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Simplex,
    Ball,
    Cube,
    Torus,
}

impl Domain {
    pub const ALL: [Domain; 4] = [Domain::Simplex, Domain::Ball, Domain::Cube, Domain::Torus];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Simplex => "simplex",
            Domain::Ball => "ball",
            Domain::Cube => "cube",
            Domain::Torus => "torus",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Domain::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown domain `{s}`")))
    }
}

/// How a Lebesgue constant was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Enumeration,
    Sampling,
    Witness,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Enumeration => "enumeration",
            Method::Sampling => "sampling",
            Method::Witness => "witness",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sign vector `ε ∈ {±1}^{d+1}` or unimodular phase vector on the torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SignVector {
    Signs(Vec<i64>),
    Phases(Vec<Complex64>),
}

/// A point of `K`: real for simplex, ball and cube, complex for the torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DomainPoint {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl DomainPoint {
    pub fn len(&self) -> usize {
        match self {
            DomainPoint::Real(v) => v.len(),
            DomainPoint::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Outcome of a Lebesgue-constant computation.
///
/// `lower_bound` and `upper_bound` are certified: the lower bound is either a
/// proven bound or a value attained at `point`, the upper bound is analytic.
/// `sqrt_d` and `sqrt_d_plus_1` are the reference growth rates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LebesgueResult {
    pub domain: Domain,
    pub d: usize,
    pub method: Method,
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub sqrt_d: f64,
    pub sqrt_d_plus_1: f64,
    /// `Σ εⱼ` of the maximizing sign vector (ball only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_sum: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<SignVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<DomainPoint>,
}

impl LebesgueResult {
    pub(crate) fn new(domain: Domain, d: usize, method: Method, value: f64) -> Self {
        let sqrt_d = (d as f64).sqrt();
        let sqrt_d_plus_1 = ((d + 1) as f64).sqrt();
        Self {
            domain,
            d,
            method,
            value,
            lower_bound: value,
            upper_bound: sqrt_d_plus_1,
            sqrt_d,
            sqrt_d_plus_1,
            sign_sum: None,
            epsilon: None,
            point: None,
        }
    }
}

/// An explicit `(ε, point)` pair attaining a Lebesgue-function value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessCertificate {
    pub domain: Domain,
    pub d: usize,
    pub m: usize,
    pub epsilon: SignVector,
    pub point: DomainPoint,
    pub value: f64,
}

impl From<WitnessCertificate> for LebesgueResult {
    fn from(w: WitnessCertificate) -> Self {
        let mut result = LebesgueResult::new(w.domain, w.d, Method::Witness, w.value);
        result.epsilon = Some(w.epsilon);
        result.point = Some(w.point);
        result
    }
}

/// Barycentric coordinates; for degree one these are the Lagrange basis values.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BarycentricVector(Vec<f64>);

impl BarycentricVector {
    pub(crate) fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `‖λ‖₁`, the degree-one Lebesgue function.
    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn sum_squares(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

/// `d + 1` interpolation nodes in `K`, one per row, tagged with `K`.
///
/// Lagrange values computed here go through a generic inverse of the
/// Vandermonde matrix `[𝟙 | X]` and do not use any domain-specific formula.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSet {
    domain: Domain,
    d: usize,
    points: AnyMatrix,
}

impl PointSet {
    pub fn new(domain: Domain, points: AnyMatrix) -> Result<Self> {
        let d = points.cols();
        if points.rows() != d + 1 {
            return Err(Error::Shape(format!(
                "expected {} points in dimension {d}, got {}",
                d + 1,
                points.rows()
            )));
        }
        if points.is_complex() != (domain == Domain::Torus) {
            return Err(Error::ScalarKind);
        }
        Ok(Self { domain, d, points })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_points(&self) -> usize {
        self.d + 1
    }

    pub fn points(&self) -> &AnyMatrix {
        &self.points
    }

    /// `[𝟙 | X]`.
    pub fn vandermonde(&self) -> AnyMatrix {
        match &self.points {
            AnyMatrix::Real(x) => AnyMatrix::Real(prepend_ones(x)),
            AnyMatrix::Complex(z) => AnyMatrix::Complex(prepend_ones(z)),
        }
    }

    /// Node `i` as a domain point.
    pub fn node(&self, i: usize) -> DomainPoint {
        match &self.points {
            AnyMatrix::Real(x) => DomainPoint::Real(x.row(i).to_vec()),
            AnyMatrix::Complex(z) => DomainPoint::Complex(z.row(i).to_vec()),
        }
    }

    pub fn with_node(&self, i: usize, p: &DomainPoint) -> Result<Self> {
        check_len(self.d, p.len())?;
        let points = match (&self.points, p) {
            (AnyMatrix::Real(x), DomainPoint::Real(v)) => {
                AnyMatrix::Real(Matrix::from_fn(x.rows(), x.cols(), |r, c| {
                    if r == i {
                        v[c]
                    } else {
                        x[(r, c)]
                    }
                }))
            }
            (AnyMatrix::Complex(z), DomainPoint::Complex(v)) => {
                AnyMatrix::Complex(Matrix::from_fn(z.rows(), z.cols(), |r, c| {
                    if r == i {
                        v[c]
                    } else {
                        z[(r, c)]
                    }
                }))
            }
            _ => return Err(Error::ScalarKind),
        };
        Ok(Self { points, ..*self })
    }

    /// Precomputes `V⁻¹` so that `ℓ(x) = V⁻ᵗ [1; x]` is a matrix-vector product.
    pub fn lagrange_basis(&self) -> Result<LagrangeBasis> {
        Ok(match self.vandermonde() {
            AnyMatrix::Real(v) => LagrangeBasis::Real(v.inverse()?),
            AnyMatrix::Complex(v) => LagrangeBasis::Complex(v.inverse()?),
        })
    }
}

/// Inverse Vandermonde matrix of a [`PointSet`].
#[derive(Clone, Debug)]
pub enum LagrangeBasis {
    Real(RealMatrix),
    Complex(ComplexMatrix),
}

impl LagrangeBasis {
    /// Moduli `|ℓᵢ(x)|` of the Lagrange basis at `x`.
    pub fn abs_values(&self, x: &DomainPoint) -> Result<Vec<f64>> {
        match (self, x) {
            (LagrangeBasis::Real(inv), DomainPoint::Real(v)) => {
                Ok(eval(inv, v)?.into_iter().map(f64::abs).collect())
            }
            (LagrangeBasis::Complex(inv), DomainPoint::Complex(v)) => {
                Ok(eval(inv, v)?.into_iter().map(|c| c.norm()).collect())
            }
            _ => Err(Error::ScalarKind),
        }
    }
}

fn eval<T: Scalar>(inv: &Matrix<T>, x: &[T]) -> Result<Vec<T>> {
    check_len(inv.rows() - 1, x.len())?;
    let mut w = Vec::with_capacity(x.len() + 1);
    w.push(T::one());
    w.extend_from_slice(x);
    inv.tr_mat_vec(&w)
}

pub(crate) fn prepend_ones<T: Scalar>(x: &Matrix<T>) -> Matrix<T> {
    Matrix::from_fn(x.rows(), x.cols() + 1, |i, j| {
        if j == 0 {
            T::one()
        } else {
            x[(i, j - 1)]
        }
    })
}
