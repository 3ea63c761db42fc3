//! `K` a simplex: its own vertices are the Fekete points and `Λ₁ ≡ 1`.
//!
//! The Lagrange polynomials are the barycentric coordinates, which are
//! non-negative on `K` and sum to one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{AnyMatrix, RealMatrix};
use crate::sampling;
use crate::types::{prepend_ones, BarycentricVector, Domain, DomainPoint, LebesgueResult, Method, PointSet};

/// Vertices of a non-degenerate simplex in `ℝ^d`, one per row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexPointSet {
    d: usize,
    vertices: RealMatrix,
}

impl SimplexPointSet {
    /// Accepts any `(d+1)×d` vertex matrix whose Vandermonde matrix is nonsingular.
    pub fn new(vertices: RealMatrix) -> Result<Self> {
        let d = vertices.cols();
        if vertices.rows() != d + 1 {
            return Err(Error::Shape(format!(
                "a simplex in dimension {d} needs {} vertices, got {}",
                d + 1,
                vertices.rows()
            )));
        }
        if prepend_ones(&vertices).log_abs_det()? == f64::NEG_INFINITY {
            return Err(Error::Singular);
        }
        Ok(Self { d, vertices })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vertices(&self) -> &RealMatrix {
        &self.vertices
    }

    pub fn vandermonde(&self) -> RealMatrix {
        prepend_ones(&self.vertices)
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::new(Domain::Simplex, AnyMatrix::Real(self.vertices.clone()))
            .expect("simplex shape checked at construction")
    }

    /// Barycentric coordinates of `y`: solves `[𝟙 | V]ᵗ λ = [1; y]`.
    pub fn barycentric(&self, y: &[f64]) -> Result<BarycentricVector> {
        check_len(self.d, y.len())?;
        let mut rhs = Vec::with_capacity(self.d + 1);
        rhs.push(1.0);
        rhs.extend_from_slice(y);
        let lambda = self.vandermonde().transpose().solve(&rhs)?;
        Ok(BarycentricVector::new(lambda))
    }

    pub fn lebesgue_function(&self, y: &[f64]) -> Result<f64> {
        Ok(self.barycentric(y)?.l1_norm())
    }

    /// `Σ wᵢ vᵢ`.
    pub fn convex_combination(&self, weights: &[f64]) -> Result<Vec<f64>> {
        self.vertices.tr_mat_vec(weights)
    }
}

/// The origin together with the `d` canonical unit vectors.
pub fn standard_simplex(d: usize) -> Result<SimplexPointSet> {
    if d < 1 {
        return Err(Error::Domain("simplex dimension must be at least 1".into()));
    }
    let vertices = RealMatrix::from_fn(d + 1, d, |i, j| if i == j + 1 { 1.0 } else { 0.0 });
    SimplexPointSet::new(vertices)
}

pub fn simplex_barycentric(s: &SimplexPointSet, y: &[f64]) -> Result<BarycentricVector> {
    s.barycentric(y)
}

/// Largest `Σ|λᵢ|` over `samples` uniform points of the simplex itself.
///
/// Every sampled point is a convex combination, so the result is `1` up to
/// rounding. The vertices are always evaluated as well.
pub fn lebesgue_simplex(s: &SimplexPointSet, samples: usize, seed: u64) -> Result<LebesgueResult> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let n = s.d + 1;
    let evaluated: Vec<(f64, Vec<f64>)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, i);
            let w = sampling::dirichlet(&mut rng, n);
            let y = s.convex_combination(&w)?;
            Ok((s.lebesgue_function(&y)?, y))
        })
        .collect::<Result<_>>()?;
    let vertices = (0..n).map(|i| {
        let y = s.vertices.row(i).to_vec();
        s.lebesgue_function(&y).map(|v| (v, y))
    });
    let mut best: Option<(f64, Vec<f64>)> = None;
    for candidate in evaluated.into_iter().map(Ok).chain(vertices) {
        let (v, y) = candidate?;
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, y));
        }
    }
    let (value, y) = best.expect("at least one candidate");
    let mut result = LebesgueResult::new(Domain::Simplex, s.d, Method::Sampling, value);
    // rounding can push the attained value a few ulps past the exact constant
    result.upper_bound = 1.0;
    result.lower_bound = value.min(1.0);
    result.point = Some(DomainPoint::Real(y));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn standard_simplex_small_cases() {
        let s1 = standard_simplex(1).unwrap();
        assert_eq!(s1.vertices().to_rows(), vec![vec![0.0], vec![1.0]]);
        let s2 = standard_simplex(2).unwrap();
        assert_eq!(
            s2.vertices().to_rows(),
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]
        );
        assert!(standard_simplex(0).is_err());
    }

    #[test]
    fn standard_simplex_has_unit_vandermonde() {
        let s = standard_simplex(9).unwrap();
        assert_abs_diff_eq!(s.vandermonde().log_abs_det().unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_vertices_rejected() {
        let flat = RealMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(SimplexPointSet::new(flat), Err(Error::Singular));
        let wrong = RealMatrix::zeros(2, 2);
        assert!(matches!(SimplexPointSet::new(wrong), Err(Error::Shape(_))));
    }

    #[test]
    fn barycentric_at_vertices_and_centroid() {
        let s = standard_simplex(4).unwrap();
        for i in 0..5 {
            let lambda = s.barycentric(s.vertices().row(i)).unwrap();
            for (j, &l) in lambda.as_slice().iter().enumerate() {
                assert_abs_diff_eq!(l, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
        let centroid = s.convex_combination(&[0.2; 5]).unwrap();
        for &l in s.barycentric(&centroid).unwrap().as_slice() {
            assert_abs_diff_eq!(l, 0.2, epsilon = 1e-15);
        }
        assert!(matches!(s.barycentric(&[0.0; 3]), Err(Error::Length { .. })));
    }

    #[test]
    fn interior_points_have_unit_lebesgue_function() {
        let s = standard_simplex(4).unwrap();
        let mut rng = sampling::stream(11, 0);
        for _ in 0..200 {
            let w = sampling::dirichlet(&mut rng, 5);
            let y = s.convex_combination(&w).unwrap();
            let lambda = s.barycentric(&y).unwrap();
            assert!(lambda.as_slice().iter().all(|&l| l >= -1e-14));
            assert_abs_diff_eq!(lambda.l1_norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(lambda.sum(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn outside_point_exceeds_one() {
        let s = standard_simplex(3).unwrap();
        let v = s.lebesgue_function(&[-0.1; 3]).unwrap();
        // λ = (1.3, -0.1, -0.1, -0.1)
        assert_abs_diff_eq!(v, 1.6, epsilon = 1e-14);
    }

    #[test]
    fn sampled_constant_is_one() {
        for d in [1, 2, 7] {
            let s = standard_simplex(d).unwrap();
            let r = lebesgue_simplex(&s, 300, 5).unwrap();
            assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
            assert_eq!(r.method, Method::Sampling);
        }
        assert!(lebesgue_simplex(&standard_simplex(2).unwrap(), 0, 0).is_err());
    }

    #[test]
    fn arbitrary_simplex_also_has_unit_constant() {
        let v = RealMatrix::from_rows(&[vec![-3.0, 1.0], vec![2.0, 0.5], vec![0.25, 4.0]]).unwrap();
        let s = SimplexPointSet::new(v).unwrap();
        let r = lebesgue_simplex(&s, 500, 1).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
    }
}
