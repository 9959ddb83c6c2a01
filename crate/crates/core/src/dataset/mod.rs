//! Point datasets: loading, normalization, duplicate elimination and
//! synthetic generators.

mod csv;
mod synth;

use std::collections::HashMap;

pub use self::csv::{load_csv, parse_csv, TruthColumn};
pub use self::synth::{gen_synthetic, Preset, Role, SynthParams, Synthetic};

use crate::error::{Error, Result};

/// A dense `n x dim` feature matrix with optional ground-truth labels.
///
/// Truth labels are dense `0..k` class ids; `-1` marks a point generated as
/// noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<f64>,
    n: usize,
    dim: usize,
    truth: Option<Vec<i64>>,
}

impl Dataset {
    /// Builds a dataset from row-major storage.
    pub fn new(points: Vec<f64>, dim: usize, truth: Option<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDataset("feature dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        if points.len() % dim != 0 {
            return Err(Error::InvalidDataset(format!("{} values do not form rows of width {dim}", points.len())));
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!("non-finite value at row {}, column {}", pos / dim, pos % dim)));
        }
        let n = points.len() / dim;
        if let Some(t) = &truth {
            if t.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: t.len() });
            }
        }
        Ok(Self { points, n, dim, truth })
    }

    pub fn from_rows(rows: &[Vec<f64>], truth: Option<Vec<i64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).ok_or(Error::Empty)?;
        let mut points = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Ragged { row: i, expected: dim, found: row.len() });
            }
            points.extend_from_slice(row);
        }
        Self::new(points, dim, truth)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn truth(&self) -> Option<&[i64]> {
        self.truth.as_deref()
    }

    pub fn with_truth(mut self, truth: Option<Vec<i64>>) -> Result<Self> {
        if let Some(t) = &truth {
            if t.len() != self.n {
                return Err(Error::SizeMismatch { expected: self.n, found: t.len() });
            }
        }
        self.truth = truth;
        Ok(self)
    }

    /// Sub-dataset of the given rows, in the given order. Truth follows along.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut points = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            points.extend_from_slice(self.row(i));
        }
        let truth = self.truth.as_ref().map(|t| indices.iter().map(|&i| t[i]).collect());
        Self::new(points, self.dim, truth)
    }
}

/// Maps every feature column onto `[0, 1]` by `(f - min) / (max - min)`.
/// Constant columns become all zeros.
pub fn minmax_normalize(d: &Dataset) -> Dataset {
    let dim = d.dim;
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for row in d.rows() {
        for (c, &v) in row.iter().enumerate() {
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
    }
    let mut points = d.points.clone();
    for row in points.chunks_exact_mut(dim) {
        for (c, v) in row.iter_mut().enumerate() {
            let range = hi[c] - lo[c];
            *v = if range > 0.0 { ((*v - lo[c]) / range).clamp(0.0, 1.0) } else { 0.0 };
        }
    }
    Dataset { points, n: d.n, dim, truth: d.truth.clone() }
}

/// Representative bookkeeping produced by [`dedup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedupMap {
    /// Original row index of each representative, in first-appearance order.
    pub kept: Vec<usize>,
    /// For each original row, the original index of its representative.
    pub owner: Vec<usize>,
    /// For each original row, the position of its representative in `kept`.
    pub slot: Vec<usize>,
}

impl DedupMap {
    /// Expands per-representative values to one value per original row.
    pub fn broadcast<T: Copy>(&self, values: &[T]) -> Result<Vec<T>> {
        if values.len() != self.kept.len() {
            return Err(Error::SizeMismatch { expected: self.kept.len(), found: values.len() });
        }
        Ok(self.slot.iter().map(|&s| values[s]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.kept.len() == self.owner.len()
    }
}

/// Keeps one representative per distinct feature vector.
///
/// Vectors are compared bit for bit, except that `-0.0` and `0.0` are treated
/// as the same value since both sit at distance zero from each other.
pub fn dedup(d: &Dataset) -> (Dataset, DedupMap) {
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(d.n);
    let mut kept = Vec::new();
    let mut owner = Vec::with_capacity(d.n);
    let mut slot = Vec::with_capacity(d.n);
    for (i, row) in d.rows().enumerate() {
        let key: Vec<u64> = row.iter().map(|&v| (v + 0.0).to_bits()).collect();
        match seen.get(&key) {
            Some(&s) => {
                owner.push(kept[s]);
                slot.push(s);
            }
            None => {
                seen.insert(key, kept.len());
                slot.push(kept.len());
                owner.push(i);
                kept.push(i);
            }
        }
    }
    let reduced =
        if kept.len() == d.n { d.clone() } else { d.select(&kept).expect("representatives form a valid dataset") };
    (reduced, DedupMap { kept, owner, slot })
}

/// Diagonal length of the axis-aligned bounding box of all points.
pub fn mbr_diagonal(d: &Dataset) -> f64 {
    let mut sq = 0.0;
    for c in 0..d.dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for row in d.rows() {
            lo = lo.min(row[c]);
            hi = hi.max(row[c]);
        }
        sq += (hi - lo) * (hi - lo);
    }
    sq.sqrt()
}
