//! Canonical Bingham parameterisation.
//!
//! A Bingham law with parameter matrix `A` has density proportional to
//! `exp(-xᵀAx)` on the unit sphere. Rotating into the eigenbasis of `A` and
//! shifting the eigenvalues so the smallest is zero gives the canonical form
//! `exp(-Σ λᵢ xᵢ²)` with `λ₁ ≥ … ≥ λ_{q-1} ≥ λ_q = 0`; only the first `q - 1`
//! concentrations are stored.

use crate::error::{BinghamError, Result};

/// Largest number of cyclic Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius tolerance, relative to the Frobenius norm of the input.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

/// Inputs shorter than this (in Euclidean norm) are rejected as directions.
pub const MIN_DIRECTION_NORM: f64 = 1e-8;

/// A point on the unit sphere `S^{q-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Normalises `coords` onto the sphere.
    ///
    /// Vectors already unit to within a few ulps are stored verbatim so that
    /// a write/read cycle through text preserves every bit.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(BinghamError::InvalidInput(format!(
                "unit vectors need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(BinghamError::InvalidInput("non-finite coordinate".into()));
        }
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        let norm = norm_sq.sqrt();
        if norm < MIN_DIRECTION_NORM {
            return Err(BinghamError::InvalidInput(format!(
                "vector norm {norm:e} is too small to define a direction"
            )));
        }
        if (norm_sq - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(Self { coords });
        }
        Ok(Self {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Wraps coordinates that the caller guarantees are unit norm.
    pub(crate) fn from_normalized(coords: Vec<f64>) -> Self {
        debug_assert!((coords.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs() <= 1e-12);
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The antipodal point `-x`.
    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.coords
    }
}

/// A dense symmetric `q × q` matrix, symmetrised on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    q: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds from row-major entries, replacing `A` by `(A + Aᵀ) / 2`.
    pub fn from_row_major(q: usize, entries: &[f64]) -> Result<Self> {
        if q == 0 || entries.len() != q * q {
            return Err(BinghamError::InvalidInput(format!(
                "expected {} entries for a {q}x{q} matrix, got {}",
                q * q,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(BinghamError::InvalidInput("non-finite matrix entry".into()));
        }
        let mut sym = vec![0.0; q * q];
        for i in 0..q {
            sym[i * q + i] = entries[i * q + i];
            for j in (i + 1)..q {
                let v = 0.5 * (entries[i * q + j] + entries[j * q + i]);
                sym[i * q + j] = v;
                sym[j * q + i] = v;
            }
        }
        Ok(Self { q, entries: sym })
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let q = d.len();
        let mut entries = vec![0.0; q * q];
        for (i, v) in d.iter().enumerate() {
            entries[i * q + i] = *v;
        }
        Self::from_row_major(q, &entries)
    }

    pub fn dim(&self) -> usize {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.q + j]
    }

    pub fn row_major(&self) -> &[f64] {
        &self.entries
    }

    /// Quadratic form `xᵀAx`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.q, "quadratic form dimension mismatch");
        let q = self.q;
        let mut acc = 0.0;
        for i in 0..q {
            let row = &self.entries[i * q..(i + 1) * q];
            acc += x[i] * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        acc
    }
}

/// Orthogonal eigenvectors (as columns of a row-major matrix) and eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub q: usize,
    /// Row-major `q × q`; column `k` is the eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
}

impl EigenDecomposition {
    /// Column `k` of `V`.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.q).map(|i| self.vectors[i * self.q + k]).collect()
    }

    /// `Vᵀx`: coordinates of `x` in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &[f64]) -> Vec<f64> {
        (0..self.q)
            .map(|k| (0..self.q).map(|i| self.vectors[i * self.q + k] * x[i]).sum())
            .collect()
    }

    /// `Vy`: maps eigenbasis coordinates back to the ambient frame.
    pub fn from_eigenbasis(&self, y: &[f64]) -> Vec<f64> {
        (0..self.q)
            .map(|i| (0..self.q).map(|k| self.vectors[i * self.q + k] * y[k]).sum())
            .collect()
    }
}

/// Symmetric eigendecomposition `A = V diag(d) Vᵀ` by cyclic Jacobi rotations.
///
/// Eigenvalues come back in descending order; ties keep their original
/// diagonal position order.
pub fn eigen_decompose(a: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let q = a.dim();
    let mut m = a.row_major().to_vec();
    let mut v = vec![0.0; q * q];
    for i in 0..q {
        v[i * q + i] = 1.0;
    }

    let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = JACOBI_TOLERANCE * norm;
    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..q {
            for j in 0..q {
                if i != j {
                    s += m[i * q + j] * m[i * q + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = norm == 0.0 || off_norm(&m) <= tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(BinghamError::NoConvergence {
                sweeps,
                off_norm: off_norm(&m),
            });
        }
        for p in 0..q {
            for r in (p + 1)..q {
                jacobi_rotate(&mut m, &mut v, q, p, r);
            }
        }
        sweeps += 1;
        converged = off_norm(&m) <= tol;
    }

    let diag: Vec<f64> = (0..q).map(|i| m[i * q + i]).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let values = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = vec![0.0; q * q];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..q {
            vectors[i * q + col] = v[i * q + k];
        }
    }
    Ok(EigenDecomposition { q, vectors, values })
}

/// Annihilates `m[p][r]` with the rotation `m ← Pᵀ m P`, accumulating `v ← v P`.
fn jacobi_rotate(m: &mut [f64], v: &mut [f64], q: usize, p: usize, r: usize) {
    let apr = m[p * q + r];
    if apr == 0.0 {
        return;
    }
    let theta = (m[r * q + r] - m[p * q + p]) / (2.0 * apr);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..q {
        let mkp = m[k * q + p];
        let mkr = m[k * q + r];
        m[k * q + p] = c * mkp - s * mkr;
        m[k * q + r] = s * mkp + c * mkr;
    }
    for k in 0..q {
        let mpk = m[p * q + k];
        let mrk = m[r * q + k];
        m[p * q + k] = c * mpk - s * mrk;
        m[r * q + k] = s * mpk + c * mrk;
    }
    m[p * q + r] = 0.0;
    m[r * q + p] = 0.0;
    for k in 0..q {
        let vkp = v[k * q + p];
        let vkr = v[k * q + r];
        v[k * q + p] = c * vkp - s * vkr;
        v[k * q + r] = s * vkp + c * vkr;
    }
}

/// Ordered concentrations `λ₁ ≥ … ≥ λ_{q-1} ≥ 0`; `λ_q = 0` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaVector {
    lambdas: Vec<f64>,
}

impl LambdaVector {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(BinghamError::InvalidInput(
                "need at least one concentration (q >= 2)".into(),
            ));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(BinghamError::InvalidInput("non-finite concentration".into()));
        }
        if !is_ordered_nonnegative(&lambdas) {
            return Err(BinghamError::InvalidInput(format!(
                "concentrations must satisfy l1 >= l2 >= ... >= 0, got {lambdas:?}"
            )));
        }
        Ok(Self { lambdas })
    }

    /// The uniform distribution on `S^{q-1}`.
    pub fn zeros(q: usize) -> Self {
        assert!(q >= 2, "q must be at least 2");
        Self {
            lambdas: vec![0.0; q - 1],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lambdas
    }

    /// Ambient dimension `q`.
    pub fn q(&self) -> usize {
        self.lambdas.len() + 1
    }

    /// Largest concentration, `λ₁`.
    pub fn max(&self) -> f64 {
        self.lambdas[0]
    }
}

/// `λ₁ ≥ λ₂ ≥ … ≥ λ_{q-1} ≥ 0`.
pub fn is_ordered_nonnegative(lambdas: &[f64]) -> bool {
    lambdas.windows(2).all(|w| w[0] >= w[1]) && lambdas.last().is_some_and(|&l| l >= 0.0)
}

/// Sorts eigenvalues descending, shifts the minimum to exactly zero and drops it.
pub fn canonicalize(d: &[f64]) -> Result<LambdaVector> {
    if d.len() < 2 {
        return Err(BinghamError::InvalidInput(format!(
            "need at least 2 eigenvalues, got {}",
            d.len()
        )));
    }
    let mut sorted = d.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let min = sorted[sorted.len() - 1];
    sorted.pop();
    LambdaVector::new(sorted.into_iter().map(|x| x - min).collect())
}

/// `(n, τ₁, …, τ_{q-1})`: sample size and mean squared coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientStats {
    n: usize,
    taus: Vec<f64>,
}

impl SufficientStats {
    pub fn new(n: usize, taus: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(BinghamError::InvalidInput("sample size must be >= 1".into()));
        }
        if taus.is_empty() {
            return Err(BinghamError::InvalidInput("need at least one tau (q >= 2)".into()));
        }
        if taus.iter().any(|t| !t.is_finite() || *t < 0.0 || *t > 1.0) {
            return Err(BinghamError::InvalidInput(format!(
                "each tau must lie in [0, 1], got {taus:?}"
            )));
        }
        let total: f64 = taus.iter().sum();
        // Summation of values computed from unit vectors can overshoot by a few ulps.
        if total > 1.0 + 1e-12 {
            return Err(BinghamError::InvalidInput(format!(
                "taus must sum to at most 1, got {total}"
            )));
        }
        Ok(Self { n, taus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn q(&self) -> usize {
        self.taus.len() + 1
    }
}

/// Sufficient statistics of a sample of unit vectors.
pub fn sufficient_stats(data: &[UnitVector]) -> Result<SufficientStats> {
    let first = data
        .first()
        .ok_or_else(|| BinghamError::InvalidInput("empty data set".into()))?;
    let q = first.dim();
    let mut sums = vec![0.0; q - 1];
    for x in data {
        if x.dim() != q {
            return Err(BinghamError::DimensionMismatch {
                expected: q,
                got: x.dim(),
            });
        }
        for (s, c) in sums.iter_mut().zip(x.coords()) {
            *s += c * c;
        }
    }
    let n = data.len();
    SufficientStats::new(n, sums.into_iter().map(|s| s / n as f64).collect())
}

/// `log f*(x; Λ) = -Σ_{i<q} λᵢ xᵢ²`.
pub fn log_unnorm_bingham(x: &UnitVector, lam: &LambdaVector) -> f64 {
    assert_eq!(x.dim(), lam.q(), "dimension mismatch");
    -lam.as_slice()
        .iter()
        .zip(x.coords())
        .map(|(l, c)| l * c * c)
        .sum::<f64>()
}

/// Log of the unnormalised likelihood, `-n Σ λᵢ τᵢ`.
pub fn log_unnorm_lik(stats: &SufficientStats, lam: &LambdaVector) -> f64 {
    log_unnorm_lik_raw(stats, lam.as_slice())
}

pub(crate) fn log_unnorm_lik_raw(stats: &SufficientStats, lambdas: &[f64]) -> f64 {
    assert_eq!(stats.taus.len(), lambdas.len(), "dimension mismatch");
    -(stats.n as f64)
        * lambdas
            .iter()
            .zip(&stats.taus)
            .map(|(l, t)| l * t)
            .sum::<f64>()
}
