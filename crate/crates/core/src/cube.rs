//! `K = [-1, 1]^d`: Fekete points from a normalized Hadamard matrix.
//!
//! Dropping the all-ones first column of a normalized Hadamard matrix
//! `H_{d+1}` leaves `d + 1` cube vertices whose Vandermonde matrix is `H`
//! itself, which has the largest determinant among `±1` matrices. Because
//! `H⁻¹ = Hᵗ/(d+1)`, the Lagrange basis is `ℓ(x) = H [1; x] / (d+1)` and
//! `Σℓᵢ² = (1 + ‖x‖²)/(d+1)`.
//!
//! All Hadamard arithmetic is done in integers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::linalg::{AnyMatrix, RealMatrix};
use crate::types::{Domain, DomainPoint, LebesgueResult, Method, PointSet, SignVector, WitnessCertificate};
use crate::DEFAULT_MAX_ENUM_DIM;

/// Largest order [`sylvester`] builds by default.
pub const DEFAULT_MAX_ORDER: usize = 1 << 14;

/// A square `±1` matrix with `H·Hᵗ = n·I`, checked exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HadamardMatrix {
    n: usize,
    #[serde(serialize_with = "serialize_entries")]
    entries: Vec<i8>,
}

fn serialize_entries<S: serde::Serializer>(entries: &[i8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(entries.iter().map(|&e| i64::from(e)))
}

impl HadamardMatrix {
    /// Validates a user-supplied matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidHadamard("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidHadamard(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &e) in row.iter().enumerate() {
                match e {
                    1 => entries.push(1),
                    -1 => entries.push(-1),
                    _ => {
                        return Err(Error::InvalidHadamard(format!(
                            "entry ({i}, {j}) is {e}, not ±1"
                        )))
                    }
                }
            }
        }
        let h = Self { n, entries };
        let residual = h.gram_residual();
        if residual != 0 {
            return Err(Error::InvalidHadamard(format!(
                "H·Hᵗ differs from {n}·I by up to {residual}"
            )));
        }
        Ok(h)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        i64::from(self.entries[i * self.n + j])
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&e| i64::from(e)).collect())
            .collect()
    }

    pub fn to_real(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j) as f64)
    }

    /// First row and first column all `+1`.
    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|k| self.entry(0, k) == 1 && self.entry(k, 0) == 1)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// `max |(H·Hᵗ − n·I)ᵢⱼ|`, computed in integers.
    pub fn gram_residual(&self) -> i64 {
        let n = self.n;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let ri = self.row(i);
                (0..n)
                    .map(|j| {
                        let dot: i64 = ri
                            .iter()
                            .zip(self.row(j))
                            .map(|(&a, &b)| i32::from(a * b))
                            .sum::<i32>()
                            .into();
                        let expected = if i == j { n as i64 } else { 0 };
                        (dot - expected).abs()
                    })
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// `Hᵗ ε` in integers.
    pub fn tr_mul(&self, eps: &[i64]) -> Vec<i64> {
        let mut t = vec![0i64; self.n];
        for (i, &e) in eps.iter().enumerate() {
            for (tj, &h) in t.iter_mut().zip(self.row(i)) {
                *tj += i64::from(h) * e;
            }
        }
        t
    }
}

/// Sylvester's matrix of order `2^k`, capped at [`DEFAULT_MAX_ORDER`].
pub fn sylvester(k: u32) -> Result<HadamardMatrix> {
    sylvester_with_max_order(k, DEFAULT_MAX_ORDER)
}

/// Repeated doubling `H ↦ [[H, H], [H, −H]]` from `H₁ = [1]`.
pub fn sylvester_with_max_order(k: u32, max_order: usize) -> Result<HadamardMatrix> {
    let order = 1usize
        .checked_shl(k)
        .filter(|&n| n <= max_order)
        .ok_or_else(|| {
            Error::Resource(format!("Sylvester order 2^{k} exceeds the limit {max_order}"))
        })?;
    let mut n = 1;
    let mut entries = vec![1i8];
    while n < order {
        let m = 2 * n;
        let mut next = vec![0i8; m * m];
        for i in 0..n {
            for j in 0..n {
                let h = entries[i * n + j];
                next[i * m + j] = h;
                next[i * m + j + n] = h;
                next[(i + n) * m + j] = h;
                next[(i + n) * m + j + n] = -h;
            }
        }
        entries = next;
        n = m;
    }
    Ok(HadamardMatrix { n, entries })
}

/// `A ⊗ B`; a Kronecker product of Hadamard matrices is Hadamard.
pub fn kronecker_hadamard(a: &HadamardMatrix, b: &HadamardMatrix) -> HadamardMatrix {
    let n = a.n * b.n;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(a.entries[(i / b.n) * a.n + j / b.n] * b.entries[(i % b.n) * b.n + j % b.n]);
        }
    }
    HadamardMatrix { n, entries }
}

/// Flips row signs so column 0 is all `+1`, then column signs so row 0 is.
pub fn normalize_hadamard(h: &HadamardMatrix) -> HadamardMatrix {
    let n = h.n;
    let mut entries = h.entries.clone();
    for i in 0..n {
        if entries[i * n] < 0 {
            entries[i * n..(i + 1) * n].iter_mut().for_each(|e| *e = -*e);
        }
    }
    for j in 0..n {
        if entries[j] < 0 {
            for i in 0..n {
                entries[i * n + j] = -entries[i * n + j];
            }
        }
    }
    HadamardMatrix { n, entries }
}

/// Orders this crate can construct: powers of two (Sylvester, and Kronecker
/// products of Sylvester matrices).
pub fn is_constructible_order(n: usize) -> bool {
    n.is_power_of_two()
}

/// Constructible orders `n ≤ max`.
pub fn constructible_orders(max: usize) -> Vec<usize> {
    (0..usize::BITS)
        .map(|k| 1usize << k)
        .take_while(|&n| n <= max)
        .collect()
}

/// A normalized Hadamard matrix of order `n`, when one can be built.
pub fn hadamard_of_order(n: usize) -> Result<HadamardMatrix> {
    if !is_constructible_order(n) {
        let supported: Vec<String> = constructible_orders(n.max(2) * 2)
            .iter()
            .map(ToString::to_string)
            .collect();
        return Err(Error::Domain(format!(
            "no constructible Hadamard matrix of order {n}; supported orders are powers of two ({}, ...)",
            supported.join(", ")
        )));
    }
    sylvester(n.trailing_zeros())
}

/// `d + 1` vertices of `[-1, 1]^d` read off a normalized Hadamard matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubePointSet {
    d: usize,
    points: RealMatrix,
    #[serde(skip)]
    hadamard: HadamardMatrix,
}

/// Drops the first column of a normalized `H`; `V = H` is the Vandermonde matrix.
pub fn cube_points(h: &HadamardMatrix) -> Result<CubePointSet> {
    if !h.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if h.n < 2 {
        return Err(Error::Domain("a Hadamard matrix of order 1 gives no cube points".into()));
    }
    let d = h.n - 1;
    let points = RealMatrix::from_fn(h.n, d, |i, j| h.entry(i, j + 1) as f64);
    Ok(CubePointSet {
        d,
        points,
        hadamard: h.clone(),
    })
}

impl CubePointSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &RealMatrix {
        &self.points
    }

    pub fn vandermonde(&self) -> &HadamardMatrix {
        &self.hadamard
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::new(Domain::Cube, AnyMatrix::Real(self.points.clone()))
            .expect("cube point set has d+1 rows")
    }

    /// `ℓ(x) = H [1; x] / (d+1)`.
    pub fn lagrange(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.d, x.len())?;
        let n = self.d + 1;
        Ok((0..n)
            .map(|i| {
                let row = self.hadamard.row(i);
                let dot = f64::from(row[0])
                    + row[1..].iter().zip(x).map(|(&h, &xj)| f64::from(h) * xj).sum::<f64>();
                dot / n as f64
            })
            .collect())
    }

    pub fn lebesgue_function(&self, x: &[f64]) -> Result<f64> {
        Ok(self.lagrange(x)?.iter().map(|l| l.abs()).sum())
    }
}

pub fn cube_lagrange(p: &CubePointSet, x: &[f64]) -> Result<Vec<f64>> {
    p.lagrange(x)
}

pub fn lebesgue_cube_enumerate(p: &CubePointSet) -> Result<LebesgueResult> {
    lebesgue_cube_enumerate_capped(p, DEFAULT_MAX_ENUM_DIM)
}

/// `Λ₁ = max_ε max_{x ∈ {±1}^d} [1 xᵗ] Hᵗε / (d+1)`.
///
/// For fixed `ε`, with `t = Hᵗε`, the inner maximum is `t₀ + Σ_{j≥1} |tⱼ|`
/// at `xⱼ = sgn tⱼ`. The outer maximum runs over all `2^{d+1}` sign vectors
/// in integers; ties go to the lexicographically smallest `ε` (`-1 < +1`).
pub fn lebesgue_cube_enumerate_capped(p: &CubePointSet, max_dim: usize) -> Result<LebesgueResult> {
    let d = p.d;
    if d > max_dim {
        return Err(Error::Resource(format!(
            "enumeration over 2^{} sign vectors exceeds the cap d <= {max_dim}",
            d + 1
        )));
    }
    let n = d + 1;
    let h = &p.hadamard;
    let score = |index: u64| -> i64 {
        let t = h.tr_mul(&int_sign_vector(index, n));
        t[0] + t[1..].iter().map(|v| v.abs()).sum::<i64>()
    };
    let total = 1u64 << n;
    let chunk = total.min(1 << 12);
    let per_chunk: Vec<(i64, u64)> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            (c * chunk..(c + 1) * chunk)
                .map(|i| (score(i), i))
                .fold((i64::MIN, 0), |best, cand| if cand.0 > best.0 { cand } else { best })
        })
        .collect();
    let (numerator, index) = per_chunk
        .into_iter()
        .fold((i64::MIN, 0), |best, cand| if cand.0 > best.0 { cand } else { best });
    let eps = int_sign_vector(index, n);
    let t = h.tr_mul(&eps);
    let x: Vec<f64> = t[1..].iter().map(|&v| if v < 0 { -1.0 } else { 1.0 }).collect();
    let mut result = LebesgueResult::new(Domain::Cube, d, Method::Enumeration, numerator as f64 / n as f64);
    result.epsilon = Some(SignVector::Signs(eps));
    result.point = Some(DomainPoint::Real(x));
    Ok(result)
}

fn int_sign_vector(index: u64, n: usize) -> Vec<i64> {
    (0..n)
        .map(|j| if (index >> (n - 1 - j)) & 1 == 1 { 1 } else { -1 })
        .collect()
}

/// Extremal certificate for `H_{d+1} = H_m ⊗ H_m`, `d = m² − 1`.
///
/// `ε` stacks the columns of `H_m`; then every entry of `t = H_{d+1}ᵗ ε` is
/// `±m`, and `xⱼ = sgn t_{j+1}` gives `[1 xᵗ] t / (d+1) = m = √(d+1)`.
/// `H_m` is normalized first so the certificate refers to
/// `cube_points(H_m ⊗ H_m)`.
pub fn cube_witness(hm: &HadamardMatrix) -> Result<WitnessCertificate> {
    let m = hm.n;
    if m < 2 {
        return Err(Error::Domain("witness needs a Hadamard matrix of order at least 2".into()));
    }
    let hm = normalize_hadamard(hm);
    let h = kronecker_hadamard(&hm, &hm);
    let n = h.n;
    let mut eps: Vec<i64> = (0..m)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .map(|(i, j)| hm.entry(i, j))
        .collect();
    let mut t = h.tr_mul(&eps);
    if let Some((j, v)) = t.iter().enumerate().find(|(_, v)| v.unsigned_abs() != m as u64) {
        return Err(Error::Consistency(format!(
            "component {j} of Hᵗε is {v}, expected ±{m}"
        )));
    }
    if t[0] < 0 {
        eps.iter_mut().for_each(|e| *e = -*e);
        t.iter_mut().for_each(|v| *v = -*v);
    }
    let x: Vec<i64> = t[1..].iter().map(|&v| v.signum()).collect();
    let numerator = t[0] + x.iter().zip(&t[1..]).map(|(a, b)| a * b).sum::<i64>();
    if numerator != (m * n) as i64 {
        return Err(Error::Consistency(format!(
            "witness numerator {numerator} differs from m·(d+1) = {}",
            m * n
        )));
    }
    Ok(WitnessCertificate {
        domain: Domain::Cube,
        d: n - 1,
        m,
        epsilon: SignVector::Signs(eps),
        point: DomainPoint::Real(x.into_iter().map(|v| v as f64).collect()),
        value: numerator as f64 / n as f64,
    })
}
