//! Grid search over the KNN size and junction percentile.

use crate::dataset::{dedup, Dataset};
use crate::dgf::{cluster_split, density_scores, dgf_scores, knn, split_junction, Params};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::metrics::{acc, ari, nmi};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Acc,
    Nmi,
    Ari,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acc" => Ok(Self::Acc),
            "nmi" => Ok(Self::Nmi),
            "ari" => Ok(Self::Ari),
            other => Err(Error::InvalidParameter(format!("unknown metric {other:?}"))),
        }
    }
}

/// Inclusive arithmetic range `start, start + step, ..., <= stop`.
///
/// Values are produced as `start + i * step` and rounded to 12 decimals so
/// that grids such as `0.6..0.99` by `0.01` hit their endpoints.
pub fn float_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidParameter(format!("bad range {start}..{stop} step {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub percentile: f64,
    pub acc: f64,
    pub nmi: f64,
    pub ari: f64,
    pub k_pred: usize,
}

impl SweepRow {
    pub fn score(&self, m: Metric) -> f64 {
        match m {
            Metric::Acc => self.acc,
            Metric::Nmi => self.nmi,
            Metric::Ari => self.ari,
        }
    }
}

/// Fixed part of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBase {
    pub kernel: Kernel,
    pub ratio: f64,
    pub noise_threshold: usize,
}

/// Runs the junction-aware pipeline at every `(K, percentile)` pair and
/// scores it against the dataset's truth labels.
///
/// Grid points where K does not fit the deduplicated data or fewer than two
/// internal points remain are skipped. Rows come back in grid order.
pub fn run_grid(d: &Dataset, base: &SweepBase, ks: &[usize], percentiles: &[f64]) -> Result<Vec<SweepRow>> {
    let truth = d.truth().ok_or_else(|| Error::InvalidDataset("sweeping needs truth labels".into()))?;
    let (u, map) = dedup(d);
    let mut rows = Vec::new();
    for &k in ks {
        if k == 0 || k >= u.n() {
            continue;
        }
        let idx = knn(&u, k)?;
        let scores = dgf_scores(&idx, &density_scores(&idx))?;
        for &percentile in percentiles {
            let split = split_junction(&scores, percentile)?;
            if split.internal.len() < 2 {
                continue;
            }
            let p =
                Params { kernel: base.kernel, ratio: base.ratio, k, percentile, noise_threshold: base.noise_threshold };
            let labels = map.broadcast(&cluster_split(&u, &split, &p)?)?;
            let k_pred = labels.iter().copied().max().map_or(0, |m| (m + 1).max(0) as usize);
            rows.push(SweepRow {
                k,
                percentile,
                acc: acc(truth, &labels)?,
                nmi: nmi(truth, &labels)?,
                ari: ari(truth, &labels)?,
                k_pred,
            });
        }
    }
    Ok(rows)
}

/// Sorts rows by the chosen metric, best first; ties keep grid order.
pub fn rank(rows: &mut [SweepRow], by: Metric) {
    rows.sort_by(|a, b| b.score(by).total_cmp(&a.score(by)));
}

/// Best value of each metric over the rows, each maximized separately.
pub fn best_scores(rows: &[SweepRow]) -> (f64, f64, f64) {
    rows.iter().fold((f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY), |(a, n, r), row| {
        (a.max(row.acc), n.max(row.nmi), r.max(row.ari))
    })
}
