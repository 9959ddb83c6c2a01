//! External validation: clustering accuracy (ACC), normalized mutual
//! information (NMI) and the adjusted Rand index (ARI).
//!
//! All three work from one contingency table. Label values are arbitrary
//! integers; `-1` in a prediction marks noise. For ACC a noise point never
//! counts as a match, while NMI and ARI treat noise as one more cluster.
//! Logarithms are natural.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub const NOISE: i64 = -1;

/// Overlap counts between predicted clusters (rows) and true classes
/// (columns). Rows and columns follow ascending label value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub pred_labels: Vec<i64>,
    pub truth_labels: Vec<i64>,
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

impl ContingencyTable {
    /// True when both labelings induce the same set partition.
    pub fn is_bijective(&self) -> bool {
        let rows_ok = self.counts.iter().all(|r| r.iter().filter(|&&c| c > 0).count() == 1);
        rows_ok && self.pred_labels.len() == self.truth_labels.len()
    }
}

fn dense(labels: &[i64]) -> (Vec<i64>, Vec<usize>) {
    let mut ids: BTreeMap<i64, usize> = labels.iter().map(|&l| (l, 0)).collect();
    for (pos, v) in ids.values_mut().enumerate() {
        *v = pos;
    }
    let keys = ids.keys().copied().collect();
    (keys, labels.iter().map(|l| ids[l]).collect())
}

pub fn contingency(truth: &[i64], pred: &[i64]) -> Result<ContingencyTable> {
    if truth.len() != pred.len() {
        return Err(Error::SizeMismatch { expected: truth.len(), found: pred.len() });
    }
    if truth.is_empty() {
        return Err(Error::Empty);
    }
    let (truth_labels, t) = dense(truth);
    let (pred_labels, p) = dense(pred);
    let mut counts = vec![vec![0u64; truth_labels.len()]; pred_labels.len()];
    for (&i, &j) in p.iter().zip(&t) {
        counts[i][j] += 1;
    }
    let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums = (0..truth_labels.len()).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
    Ok(ContingencyTable { pred_labels, truth_labels, counts, row_sums, col_sums, n: truth.len() as u64 })
}

/// Row-to-column matching of minimum total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Column chosen for each row; `None` only when rows outnumber columns.
    pub cols: Vec<Option<usize>>,
    pub cost: f64,
}

/// Minimum-cost assignment for a rectangular cost matrix.
///
/// The matrix is padded with zero-cost rows or columns to square and solved
/// with the O(n^3) shortest augmenting path method using row and column
/// potentials.
pub fn hungarian(cost: &[Vec<f64>]) -> Result<Assignment> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    for (i, r) in cost.iter().enumerate() {
        if r.len() != cols {
            return Err(Error::SizeMismatch { expected: cols, found: r.len() });
        }
        if let Some(j) = r.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCost { row: i, col: j });
        }
    }
    let n = rows.max(cols);
    if n == 0 {
        return Ok(Assignment { cols: vec![None; rows], cost: 0.0 });
    }
    let a = |i: usize, j: usize| if i < rows && j < cols { cost[i][j] } else { 0.0 };

    // 1-based arrays; p[j] is the row matched to column j
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut out = vec![None; rows];
    for j in 1..=n {
        let i = p[j] - 1;
        if i < rows && j - 1 < cols {
            out[i] = Some(j - 1);
        }
    }
    let total = out.iter().enumerate().filter_map(|(i, c)| c.map(|j| cost[i][j])).sum();
    Ok(Assignment { cols: out, cost: total })
}

/// Fraction of points whose predicted cluster maps to their true class
/// under the best one-to-one mapping.
pub fn acc(truth: &[i64], pred: &[i64]) -> Result<f64> {
    let t = contingency(truth, pred)?;
    let cost: Vec<Vec<f64>> = t
        .counts
        .iter()
        .zip(&t.pred_labels)
        .filter(|(_, &l)| l != NOISE)
        .map(|(r, _)| r.iter().map(|&c| -(c as f64)).collect())
        .collect();
    let matched = if cost.is_empty() { 0.0 } else { -hungarian(&cost)?.cost };
    Ok(matched / t.n as f64)
}

fn entropy(sums: &[u64], n: f64) -> f64 {
    sums.iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

pub fn nmi(truth: &[i64], pred: &[i64]) -> Result<f64> {
    let t = contingency(truth, pred)?;
    let n = t.n as f64;
    let hs = entropy(&t.row_sums, n);
    let ht = entropy(&t.col_sums, n);
    if hs == 0.0 || ht == 0.0 {
        return Ok(if t.is_bijective() { 1.0 } else { 0.0 });
    }
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (n * c / (t.row_sums[i] as f64 * t.col_sums[j] as f64)).ln();
            }
        }
    }
    Ok((mi / (hs * ht).sqrt()).clamp(0.0, 1.0))
}

fn pairs(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

/// Hubert-Arabie adjusted Rand index.
pub fn ari(truth: &[i64], pred: &[i64]) -> Result<f64> {
    let t = contingency(truth, pred)?;
    let index: f64 = t.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let sa: f64 = t.row_sums.iter().map(|&a| pairs(a)).sum();
    let sb: f64 = t.col_sums.iter().map(|&b| pairs(b)).sum();
    let total = pairs(t.n);
    let expected = if total > 0.0 { sa * sb / total } else { 0.0 };
    let maximum = 0.5 * (sa + sb);
    if maximum == expected {
        return Ok(if t.is_bijective() { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (maximum - expected))
}
