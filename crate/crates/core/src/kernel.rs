//! Distances, kernels and dense similarity matrices.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Largest point count for which an `n x n` matrix is materialized.
pub const DEFAULT_DENSE_CAP: usize = 20_000;

/// Euclidean distance, accumulated in ascending feature order.
pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    Ok(dist(a, b))
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += d * d;
    }
    s.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Gaussian,
    Laplacian,
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(KernelKind::Gaussian),
            "laplacian" => Ok(KernelKind::Laplacian),
            other => Err(Error::UnknownKernel(other.to_string())),
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::Gaussian => "gaussian",
            KernelKind::Laplacian => "laplacian",
        })
    }
}

/// Radial kernel turning a distance into a similarity in `(0, 1]`.
///
/// Gaussian: `exp(-d^2 / (2 sigma^2))`. Laplacian: `exp(-d / (2 sigma^2))`,
/// which is `exp(-d / 2)` at `sigma = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    sigma: f64,
}

impl Kernel {
    pub fn new(kind: KernelKind, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("kernel sigma must be positive, got {sigma}")));
        }
        Ok(Self { kind, sigma })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(KernelKind::Gaussian, sigma)
    }

    pub fn laplacian(sigma: f64) -> Result<Self> {
        Self::new(KernelKind::Laplacian, sigma)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn weight(&self, dist: f64) -> Result<f64> {
        if dist < 0.0 || dist.is_nan() {
            return Err(Error::NegativeDistance(dist));
        }
        Ok(self.eval(dist))
    }

    #[inline]
    pub(crate) fn eval(&self, dist: f64) -> f64 {
        let s2 = 2.0 * self.sigma * self.sigma;
        match self.kind {
            KernelKind::Gaussian => (-(dist * dist) / s2).exp(),
            KernelKind::Laplacian => (-dist / s2).exp(),
        }
    }
}

impl Default for Kernel {
    fn default() -> Self {
        Self { kind: KernelKind::Laplacian, sigma: 1.0 }
    }
}

pub fn kernel_weight(k: &Kernel, dist: f64) -> Result<f64> {
    k.weight(dist)
}

/// Dense symmetric similarity matrix.
///
/// `pathbased` distinguishes raw kernel weights from maximin path
/// similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    w: Vec<f64>,
    pathbased: bool,
}

impl SimilarityMatrix {
    /// Builds a matrix from row-major entries, checking shape and symmetry.
    pub fn from_dense(n: usize, w: Vec<f64>, pathbased: bool) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::SizeMismatch { expected: n * n, found: w.len() });
        }
        for i in 0..n {
            for j in 0..n {
                let v = w[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidParameter(format!("entry ({i}, {j}) = {v} is not a finite weight")));
                }
                if v != w[j * n + i] {
                    return Err(Error::InvalidParameter(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, w, pathbased })
    }

    pub fn from_rows(rows: &[Vec<f64>], pathbased: bool) -> Result<Self> {
        let n = rows.len();
        let mut w = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: r.len() });
            }
            w.extend_from_slice(r);
        }
        Self::from_dense(n, w, pathbased)
    }

    pub(crate) fn from_raw(n: usize, w: Vec<f64>, pathbased: bool) -> Self {
        debug_assert_eq!(w.len(), n * n);
        Self { n, w, pathbased }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_pathbased(&self) -> bool {
        self.pathbased
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    /// Multiplies every entry by `c`, keeping the path-based flag.
    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, w: self.w.iter().map(|v| v * c).collect(), pathbased: self.pathbased }
    }
}

pub fn similarity_matrix(d: &Dataset, k: &Kernel) -> Result<SimilarityMatrix> {
    similarity_matrix_capped(d, k, DEFAULT_DENSE_CAP)
}

pub fn similarity_matrix_capped(d: &Dataset, k: &Kernel, cap: usize) -> Result<SimilarityMatrix> {
    let n = d.n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let mut w = vec![1.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = k.eval(dist(d.row(i), d.row(j)));
            w[i * n + j] = v;
            w[j * n + i] = v;
        }
    }
    Ok(SimilarityMatrix::from_raw(n, w, false))
}

/// Per-point degree: the full row sum of a similarity matrix, self term
/// included.
#[derive(Debug, Clone, PartialEq)]
pub struct Degrees(Vec<f64>);

impl Degrees {
    pub fn from_vec(d: Vec<f64>) -> Self {
        Self(d)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Degrees {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn degrees(s: &SimilarityMatrix) -> Degrees {
    Degrees((0..s.n()).map(|i| s.row(i).iter().sum()).collect())
}
