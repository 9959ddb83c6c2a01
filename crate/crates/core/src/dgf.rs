//! KNN density, the density gradient factor (DGF) and the junction-aware
//! clustering pipeline.
//!
//! `density` is the mean distance to the K nearest neighbors, so a larger
//! value means a sparser neighborhood. DGF averages the density difference to
//! each neighbor divided by the distance to it; points sitting in low-density
//! saddles between clusters get strongly negative scores. The lowest-scoring
//! fraction of points (the junction set) is held out while the rest is
//! clustered, then labeled from the nearest clustered point.

use crate::cut::{apply_noise_threshold, greedy_cluster, Labeling};
use crate::dataset::{dedup, Dataset};
use crate::error::{Error, Result};
use crate::kernel::{degrees, dist, Kernel};
use crate::pathsim::pathsim_pipeline;

/// Exact K nearest neighbors of every point, self excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnIndex {
    k: usize,
    idx: Vec<usize>,
    dist: Vec<f64>,
}

impl KnnIndex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.idx.len() / self.k
        }
    }

    /// Neighbor indices of point `i`, nearest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.idx[i * self.k..(i + 1) * self.k]
    }

    pub fn distances(&self, i: usize) -> &[f64] {
        &self.dist[i * self.k..(i + 1) * self.k]
    }
}

/// Brute-force KNN; distance ties go to the smaller index.
pub fn knn(d: &Dataset, k: usize) -> Result<KnnIndex> {
    let n = d.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("K must lie in 1..={}, got {k}", n.saturating_sub(1))));
    }
    let mut idx = Vec::with_capacity(n * k);
    let mut out = Vec::with_capacity(n * k);
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        cand.clear();
        let a = d.row(i);
        cand.extend((0..n).filter(|&j| j != i).map(|j| (dist(a, d.row(j)), j)));
        let cmp = |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1));
        if k < cand.len() {
            cand.select_nth_unstable_by(k - 1, cmp);
            cand.truncate(k);
        }
        cand.sort_unstable_by(cmp);
        for &(dj, j) in &cand {
            idx.push(j);
            out.push(dj);
        }
    }
    Ok(KnnIndex { k, idx, dist: out })
}

/// Mean distance from each point to its K neighbors.
pub fn density_scores(idx: &KnnIndex) -> Vec<f64> {
    let kf = idx.k as f64;
    (0..idx.n()).map(|i| idx.distances(i).iter().sum::<f64>() / kf).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DgfScores {
    pub density: Vec<f64>,
    pub dgf: Vec<f64>,
}

pub fn dgf_scores(idx: &KnnIndex, density: &[f64]) -> Result<DgfScores> {
    let n = idx.n();
    if density.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: density.len() });
    }
    let kf = idx.k as f64;
    let mut dgf = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = 0.0;
        for (&j, &dij) in idx.neighbors(i).iter().zip(idx.distances(i)) {
            if dij == 0.0 {
                return Err(Error::ZeroNeighborDistance(i, j));
            }
            s += (density[j] - density[i]) / dij;
        }
        dgf.push(s / kf);
    }
    Ok(DgfScores { density: density.to_vec(), dgf })
}

/// Partition of point indices into held-out junction points and the
/// internal points that get clustered. Both lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSplit {
    pub internal: Vec<usize>,
    pub junction: Vec<usize>,
}

/// Number of junction points for a percentile over `n` points.
///
/// The tiny offset keeps products such as `0.29 * 100` from rounding down
/// a whole point.
pub fn junction_count(percentile: f64, n: usize) -> usize {
    let raw = percentile * n as f64;
    ((raw + 1e-9 * raw.max(1.0)).floor() as usize).min(n)
}

/// The `floor(percentile * n)` lowest-DGF points (ties by index) become
/// junction points.
pub fn split_junction(s: &DgfScores, percentile: f64) -> Result<PointSplit> {
    if !(0.0..1.0).contains(&percentile) {
        return Err(Error::InvalidParameter(format!("percentile must lie in [0, 1), got {percentile}")));
    }
    let n = s.dgf.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s.dgf[a].total_cmp(&s.dgf[b]).then(a.cmp(&b)));
    let cut = junction_count(percentile, n);
    let mut junction = order[..cut].to_vec();
    let mut internal = order[cut..].to_vec();
    junction.sort_unstable();
    internal.sort_unstable();
    Ok(PointSplit { internal, junction })
}

/// Parameters of one clustering run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub kernel: Kernel,
    pub ratio: f64,
    pub k: usize,
    pub percentile: f64,
    pub noise_threshold: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self { kernel: Kernel::default(), ratio: 0.2, k: 10, percentile: 0.0, noise_threshold: 0 }
    }
}

/// Everything produced by a run, indexed by deduplicated point unless noted.
#[derive(Debug, Clone)]
pub struct Run {
    /// One label per original input row.
    pub labeling: Labeling,
    pub scores: DgfScores,
    pub split: PointSplit,
    /// Position of each original row among the deduplicated points.
    pub slot: Vec<usize>,
}

/// Plain MeanCut: dedup, spanning tree, path-based similarities, greedy
/// clustering, noise threshold.
pub fn meancut_cluster(d: &Dataset, k: &Kernel, ratio: f64, noise_threshold: usize) -> Result<Labeling> {
    let (u, map) = dedup(d);
    let labels = cluster_points(&u, k, ratio, noise_threshold)?;
    Labeling::new(map.broadcast(labels.labels())?)
}

fn cluster_points(d: &Dataset, k: &Kernel, ratio: f64, noise_threshold: usize) -> Result<Labeling> {
    let w = pathsim_pipeline(d, k, ratio)?;
    let deg = degrees(&w);
    let l = greedy_cluster(&w, &deg)?;
    Ok(apply_noise_threshold(&l, noise_threshold))
}

pub fn improved_meancut(
    d: &Dataset,
    k: &Kernel,
    ratio: f64,
    knn_k: usize,
    percentile: f64,
    noise_threshold: usize,
) -> Result<Labeling> {
    let p = Params { kernel: *k, ratio, k: knn_k, percentile, noise_threshold };
    Ok(improved_meancut_run(d, &p)?.labeling)
}

pub fn improved_meancut_run(d: &Dataset, p: &Params) -> Result<Run> {
    let (u, map) = dedup(d);
    let idx = knn(&u, p.k)?;
    let density = density_scores(&idx);
    let scores = dgf_scores(&idx, &density)?;
    let split = split_junction(&scores, p.percentile)?;
    let labels = cluster_split(&u, &split, p)?;
    let labeling = Labeling::new(map.broadcast(&labels)?)?;
    Ok(Run { labeling, scores, split, slot: map.slot })
}

/// Clusters the internal points and labels junction points from their
/// nearest internal neighbor. Input must be duplicate-free.
pub fn cluster_split(u: &Dataset, split: &PointSplit, p: &Params) -> Result<Vec<i64>> {
    if split.internal.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: split.internal.len() });
    }
    let inner = u.select(&split.internal)?;
    let inner_labels = cluster_points(&inner, &p.kernel, p.ratio, p.noise_threshold)?;

    let mut labels = vec![Labeling::NOISE; u.n()];
    for (&i, &l) in split.internal.iter().zip(inner_labels.labels()) {
        labels[i] = l;
    }
    for &j in &split.junction {
        let a = u.row(j);
        let mut best = (f64::INFINITY, Labeling::NOISE);
        for &i in &split.internal {
            let dj = dist(a, u.row(i));
            if dj < best.0 {
                best = (dj, labels[i]);
            }
        }
        labels[j] = best.1;
    }
    Ok(labels)
}
