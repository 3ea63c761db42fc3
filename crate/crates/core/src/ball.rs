//! `K` the unit ball: a regular simplex inscribed in the unit sphere.
//!
//! The vertex matrix `X_d` is built by lifting `X_{d-1}`: scale it onto the
//! slice `x_d = -1/d` of the sphere and add the north pole. The resulting
//! points satisfy
//!
//! * `Xᵗ𝟙 = 0` (centroid at the origin),
//! * `XᵗX = (d+1)/d · I_d`,
//! * `XXᵗ = (d+1)/d · I_{d+1} − 1/d · 𝟙𝟙ᵗ`,
//!
//! from which the barycentric coordinates have the closed form
//! `λ(y) = 𝟙/(d+1) + d/(d+1) · X y` and `Σλⱼ² = (1 + d‖y‖²)/(d+1)`.
//!
//! Maximizing `‖λ(y)‖₁` over the ball reduces to maximizing
//! `f(s) = (s + √d·√((d+1)² − s²))/(d+1)` over the attainable sign sums
//! `s = Σεⱼ`, `ε ∈ {±1}^{d+1}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{AnyMatrix, RealMatrix};
use crate::types::{
    prepend_ones, BarycentricVector, Domain, DomainPoint, LebesgueResult, Method, PointSet,
    SignVector,
};
use crate::DEFAULT_MAX_ENUM_DIM;

/// Vertices of the regular simplex inscribed in the unit sphere of `ℝ^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallSimplex {
    d: usize,
    x: RealMatrix,
}

/// Largest violation of each structural identity of [`BallSimplex`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BallResiduals {
    /// `max |‖xᵢ‖₂ − 1|`
    pub row_norm: f64,
    /// `‖Xᵗ𝟙‖∞`
    pub centroid: f64,
    /// `XᵗX` against `(d+1)/d · I`
    pub column_gram: f64,
    /// `XXᵗ` against `(d+1)/d · I − 1/d · 𝟙𝟙ᵗ`
    pub row_gram: f64,
    /// `max |‖xᵢ − xⱼ‖² − 2(d+1)/d|`
    pub pairwise_distance: f64,
}

impl BallResiduals {
    pub fn max(&self) -> f64 {
        [
            self.row_norm,
            self.centroid,
            self.column_gram,
            self.row_gram,
            self.pairwise_distance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl BallSimplex {
    /// `X₁ = [[-1], [1]]`.
    pub fn base() -> Self {
        Self {
            d: 1,
            x: RealMatrix::from_fn(2, 1, |i, _| if i == 0 { -1.0 } else { 1.0 }),
        }
    }

    /// `X_{d+1}` from `X_d`.
    pub fn lift(&self) -> Self {
        let d = self.d + 1;
        let df = d as f64;
        // √(d²−1)/d, factored to avoid cancellation
        let radius = (df - 1.0).sqrt() * (df + 1.0).sqrt() / df;
        let x = RealMatrix::from_fn(d + 1, d, |i, j| match (i == d, j == d - 1) {
            (false, false) => radius * self.x[(i, j)],
            (false, true) => -1.0 / df,
            (true, false) => 0.0,
            (true, true) => 1.0,
        });
        Self { d, x }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The `(d+1)×d` vertex matrix.
    pub fn points(&self) -> &RealMatrix {
        &self.x
    }

    pub fn vandermonde(&self) -> RealMatrix {
        prepend_ones(&self.x)
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::new(Domain::Ball, AnyMatrix::Real(self.x.clone()))
            .expect("ball simplex has d+1 rows")
    }

    pub fn barycentric(&self, y: &[f64]) -> Result<BarycentricVector> {
        check_len(self.d, y.len())?;
        let n = (self.d + 1) as f64;
        let scale = self.d as f64 / n;
        let xy = self.x.mat_vec(y)?;
        Ok(BarycentricVector::new(
            xy.into_iter().map(|v| 1.0 / n + scale * v).collect(),
        ))
    }

    pub fn barycentric_sum_squares(&self, y: &[f64]) -> Result<f64> {
        Ok(self.barycentric(y)?.sum_squares())
    }

    /// `‖λ(y)‖₁`.
    pub fn lebesgue_function(&self, y: &[f64]) -> Result<f64> {
        Ok(self.barycentric(y)?.l1_norm())
    }

    pub fn residuals(&self) -> BallResiduals {
        let d = self.d;
        let df = d as f64;
        let x = &self.x;
        let row_norm = (0..=d)
            .map(|i| (norm(x.row(i)) - 1.0).abs())
            .fold(0.0, f64::max);
        let centroid = x
            .tr_mat_vec(&vec![1.0; d + 1])
            .expect("shape")
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max);
        let xt = x.transpose();
        let column_gram = xt
            .matmul(x)
            .expect("shape")
            .max_abs_residual(&RealMatrix::identity(d).scale((df + 1.0) / df))
            .expect("shape");
        let expected_rows =
            RealMatrix::from_fn(d + 1, d + 1, |i, j| if i == j { 1.0 } else { -1.0 / df });
        let row_gram = x
            .matmul(&xt)
            .expect("shape")
            .max_abs_residual(&expected_rows)
            .expect("shape");
        let target = 2.0 * (df + 1.0) / df;
        let pairwise_distance = (0..=d)
            .flat_map(|i| (i + 1..=d).map(move |j| (i, j)))
            .map(|(i, j)| {
                let sq: f64 = x
                    .row(i)
                    .iter()
                    .zip(x.row(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (sq - target).abs()
            })
            .fold(0.0, f64::max);
        BallResiduals {
            row_norm,
            centroid,
            column_gram,
            row_gram,
            pairwise_distance,
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn build_ball_simplex(d: usize) -> Result<BallSimplex> {
    if d < 1 {
        return Err(Error::Domain("ball dimension must be at least 1".into()));
    }
    let mut s = BallSimplex::base();
    while s.d < d {
        s = s.lift();
    }
    Ok(s)
}

/// `f(s) = (s + √d·√((d+1)² − s²))/(d+1)` for `0 ≤ s ≤ d+1`.
pub fn s_profile(d: usize, s: usize) -> Result<f64> {
    if s > d + 1 {
        return Err(Error::Domain(format!("sign sum {s} outside [0, {}]", d + 1)));
    }
    let n = (d + 1) as f64;
    let sf = s as f64;
    let root = ((n - sf) * (n + sf)).sqrt();
    Ok((sf + (d as f64).sqrt() * root) / n)
}

/// `Λ₁` of the unit ball, as the maximum of `f` over sign sums with the
/// parity of `d + 1` (the only ones a sign vector of length `d + 1` can have).
pub fn lebesgue_ball_exact(d: usize) -> Result<LebesgueResult> {
    if d < 1 {
        return Err(Error::Domain("ball dimension must be at least 1".into()));
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for s in ((d + 1) % 2..=d + 1).step_by(2) {
        let v = s_profile(d, s)?;
        if v > best.0 {
            best = (v, s);
        }
    }
    let mut result = LebesgueResult::new(Domain::Ball, d, Method::ClosedForm, best.0);
    result.lower_bound = result.sqrt_d;
    result.sign_sum = Some(best.1 as i64);
    Ok(result)
}

pub fn lebesgue_ball_enumerate(d: usize) -> Result<LebesgueResult> {
    lebesgue_ball_enumerate_capped(d, DEFAULT_MAX_ENUM_DIM)
}

/// Brute force over all `ε ∈ {±1}^{d+1}` of
/// `εᵗλ(y_ε) = (Σεⱼ + d‖Xᵗε‖₂)/(d+1)` with `y_ε = Xᵗε/‖Xᵗε‖₂`.
///
/// Sign vectors are ordered lexicographically with `-1 < +1`; among
/// numerically tied maxima the first one wins.
pub fn lebesgue_ball_enumerate_capped(d: usize, max_dim: usize) -> Result<LebesgueResult> {
    if d < 1 {
        return Err(Error::Domain("ball dimension must be at least 1".into()));
    }
    if d > max_dim {
        return Err(Error::Resource(format!(
            "enumeration over 2^{} sign vectors exceeds the cap d <= {max_dim}",
            d + 1
        )));
    }
    let simplex = build_ball_simplex(d)?;
    let n = d + 1;
    let scale = d as f64 / n as f64;
    let value_of = |eps: &[f64]| -> f64 {
        let v = simplex.x.tr_mat_vec(eps).expect("length d+1");
        let s: f64 = eps.iter().sum();
        s / n as f64 + scale * norm(&v)
    };
    let (value, index) = max_over_sign_vectors(n, value_of);
    let eps = sign_vector(index, n);
    let v = simplex.x.tr_mat_vec(&eps)?;
    let len = norm(&v);
    let y = if len > 0.0 {
        v.iter().map(|c| c / len).collect()
    } else {
        // ε = ±𝟙 gives Xᵗε = 0 and value ±1, attained at any y
        vec![0.0; d]
    };
    let mut result = LebesgueResult::new(Domain::Ball, d, Method::Enumeration, value);
    result.lower_bound = result.sqrt_d;
    result.sign_sum = Some(eps.iter().sum::<f64>().round() as i64);
    result.epsilon = Some(SignVector::Signs(eps.iter().map(|&e| e as i64).collect()));
    result.point = Some(DomainPoint::Real(y));
    Ok(result)
}

/// `ε` for enumeration index `index`: entry 0 is the most significant bit,
/// bit set means `+1`.
pub(crate) fn sign_vector(index: u64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| if (index >> (n - 1 - j)) & 1 == 1 { 1.0 } else { -1.0 })
        .collect()
}

const CHUNK_BITS: usize = 12;

/// Maximum of `value_of` over all `2^n` sign vectors, as `(value, index)`.
/// Work is split into fixed chunks and reduced in index order, so the result
/// does not depend on the thread count.
fn max_over_sign_vectors(n: usize, value_of: impl Fn(&[f64]) -> f64 + Sync) -> (f64, u64) {
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    let better = |cand: f64, best: f64| {
        best == f64::NEG_INFINITY || cand > best + 1e-13 * (1.0 + best.abs())
    };
    let per_chunk: Vec<(f64, u64)> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut best = (f64::NEG_INFINITY, 0);
            for index in c * chunk..(c + 1) * chunk {
                let v = value_of(&sign_vector(index, n));
                if better(v, best.0) {
                    best = (v, index);
                }
            }
            best
        })
        .collect();
    per_chunk
        .into_iter()
        .fold((f64::NEG_INFINITY, 0), |best, cand| {
            if better(cand.0, best.0) {
                cand
            } else {
                best
            }
        })
}
