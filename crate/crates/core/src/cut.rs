//! The MeanCut objective and its greedy degree-descent minimization.
//!
//! For a cluster with indicator vector `x` holding `m` of `n` points,
//!
//! ```text
//! MeanCut(x) = n / (n - m) * (x'Lx) / (x'Dx),   x'Lx = x'Dx - x'Wx
//! ```
//!
//! `x'Dx` is the degree sum of the members and `x'Wx` the sum of path-based
//! similarities over ordered member pairs (diagonal included), so both are
//! kept as running sums and a candidate point is scored in O(1) given its
//! link weight to the current members.

use crate::error::{Error, Result};
use crate::kernel::{Degrees, SimilarityMatrix};

/// Evaluates the objective from its three sufficient statistics.
///
/// A cluster holding every point has `x'Lx = 0` exactly and is given value 0.
#[inline]
fn objective(n: usize, m: usize, sum_deg: f64, sum_intra: f64) -> f64 {
    if m >= n {
        return 0.0;
    }
    let cut = (sum_deg - sum_intra).max(0.0);
    (n as f64 / (n - m) as f64) * cut / sum_deg
}

/// One growing cluster and the running sums realizing `x'Dx` and `x'Wx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState {
    members: Vec<usize>,
    in_cluster: Vec<bool>,
    sum_deg: f64,
    sum_intra: f64,
}

/// Sums the cluster would have after adding one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proposal {
    pub point: usize,
    pub value: f64,
    pub sum_deg: f64,
    pub sum_intra: f64,
}

impl ClusterState {
    pub fn new(n: usize) -> Self {
        Self { members: Vec::new(), in_cluster: vec![false; n], sum_deg: 0.0, sum_intra: 0.0 }
    }

    /// Builds a cluster from scratch, summing in the given member order.
    pub fn from_members(members: &[usize], w: &SimilarityMatrix, deg: &Degrees) -> Result<Self> {
        let mut st = Self::new(w.n());
        for &j in members {
            let p = st.try_add(j, w, deg)?;
            st.accept(p);
        }
        Ok(st)
    }

    pub fn n(&self) -> usize {
        self.in_cluster.len()
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, j: usize) -> bool {
        self.in_cluster.get(j).copied().unwrap_or(false)
    }

    pub fn sum_deg(&self) -> f64 {
        self.sum_deg
    }

    pub fn sum_intra(&self) -> f64 {
        self.sum_intra
    }

    /// Scores the cluster with `j` added without changing it.
    pub fn try_add(&self, j: usize, w: &SimilarityMatrix, deg: &Degrees) -> Result<Proposal> {
        let n = self.n();
        if w.n() != n || deg.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: w.n().min(deg.len()) });
        }
        if j >= n {
            return Err(Error::InvalidParameter(format!("point {j} out of range for {n} points")));
        }
        if self.in_cluster[j] {
            return Err(Error::AlreadyMember(j));
        }
        let row = w.row(j);
        let link: f64 = self.members.iter().map(|&i| row[i]).sum();
        let sum_deg = self.sum_deg + deg[j];
        let sum_intra = self.sum_intra + 2.0 * link + row[j];
        let value = objective(n, self.m() + 1, sum_deg, sum_intra);
        Ok(Proposal { point: j, value, sum_deg, sum_intra })
    }

    /// Commits a proposal produced by [`ClusterState::try_add`] on this state.
    pub fn accept(&mut self, p: Proposal) {
        debug_assert!(!self.in_cluster[p.point]);
        self.in_cluster[p.point] = true;
        self.members.push(p.point);
        self.sum_deg = p.sum_deg;
        self.sum_intra = p.sum_intra;
    }
}

pub fn meancut_value(st: &ClusterState) -> Result<f64> {
    if st.m() == 0 {
        return Err(Error::EmptyCluster);
    }
    Ok(objective(st.n(), st.m(), st.sum_deg, st.sum_intra))
}

/// Per-point cluster ids; `-1` marks noise, other ids are dense from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<i64>,
    k: usize,
}

impl Labeling {
    pub const NOISE: i64 = -1;

    /// Wraps raw labels, requiring ids `0..k` to all be used.
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        let k = labels.iter().copied().max().map_or(0, |m| (m + 1).max(0) as usize);
        let mut seen = vec![false; k];
        for &l in &labels {
            if l < Self::NOISE {
                return Err(Error::InvalidParameter(format!("label {l} is below the noise label")));
            }
            if l >= 0 {
                seen[l as usize] = true;
            }
        }
        if let Some(gap) = seen.iter().position(|s| !s) {
            return Err(Error::MissingLabel(gap as i64));
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<i64> {
        self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of non-noise clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Self::NOISE).count()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            if l >= 0 {
                sizes[l as usize] += 1;
            }
        }
        sizes
    }
}

/// Points ordered by degree, largest first; ties by ascending index.
pub fn degree_order(deg: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..deg.len()).collect();
    order.sort_by(|&a, &b| deg[b].total_cmp(&deg[a]).then(a.cmp(&b)));
    order
}

/// Greedy MeanCut clustering in degree-descending order.
///
/// Each round seeds a cluster with the highest-degree unassigned point and
/// sweeps the remaining unassigned points in the same order, keeping a point
/// whenever the objective does not increase. Rejected points stay in line
/// for later rounds.
pub fn greedy_cluster(w: &SimilarityMatrix, deg: &Degrees) -> Result<Labeling> {
    let n = w.n();
    if deg.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: deg.len() });
    }
    if !w.is_pathbased() {
        return Err(Error::InvalidParameter("greedy clustering expects a path-based matrix".into()));
    }
    let mut labels = vec![Labeling::NOISE; n];
    let mut pending = degree_order(deg);
    // link[j]: similarity mass between j and the current cluster
    let mut link = vec![0.0; n];
    let mut cluster = 0i64;

    while let Some((&seed, rest)) = pending.split_first() {
        labels[seed] = cluster;
        let mut m = 1;
        let mut sum_deg = deg[seed];
        let mut sum_intra = w.get(seed, seed);
        let mut value = objective(n, m, sum_deg, sum_intra);
        let seed_row = w.row(seed);
        for &j in rest {
            link[j] = seed_row[j];
        }

        let mut left = Vec::with_capacity(rest.len());
        for (pos, &j) in rest.iter().enumerate() {
            let cand_deg = sum_deg + deg[j];
            let cand_intra = sum_intra + 2.0 * link[j] + w.get(j, j);
            let cand = objective(n, m + 1, cand_deg, cand_intra);
            if cand <= value {
                value = cand;
                m += 1;
                sum_deg = cand_deg;
                sum_intra = cand_intra;
                labels[j] = cluster;
                let row = w.row(j);
                for &q in &rest[pos + 1..] {
                    link[q] += row[q];
                }
            } else {
                left.push(j);
            }
        }
        pending = left;
        cluster += 1;
    }
    Labeling::new(labels)
}

/// Relabels clusters smaller than `min_size` as noise and renumbers the
/// survivors in their original order.
pub fn apply_noise_threshold(l: &Labeling, min_size: usize) -> Labeling {
    let sizes = l.sizes();
    let mut remap = vec![Labeling::NOISE; sizes.len()];
    let mut next = 0;
    for (c, &s) in sizes.iter().enumerate() {
        if s >= min_size {
            remap[c] = next;
            next += 1;
        }
    }
    let labels = l.labels.iter().map(|&x| if x < 0 { Labeling::NOISE } else { remap[x as usize] }).collect();
    Labeling { labels, k: next as usize }
}

/// Smallest margin found for each of the three cluster-structure
/// assumptions behind the degree-descent argument.
///
/// A margin of `+inf` means the assumption had nothing to quantify over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionReport {
    pub a1_holds: bool,
    pub a2_holds: bool,
    pub a3_holds: bool,
    pub a1_margin: f64,
    pub a2_margin: f64,
    pub a3_margin: f64,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.a1_holds && self.a2_holds && self.a3_holds
    }
}

fn groups(truth: &[i64]) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &t) in truth.iter().enumerate() {
        if t < 0 {
            return Err(Error::InvalidParameter(format!("point {i} is labeled as noise")));
        }
        let t = t as usize;
        if out.len() <= t {
            out.resize_with(t + 1, Vec::new);
        }
        out[t].push(i);
    }
    Ok(out)
}

/// Checks, over all quantified tuples, with `r != s` drawn from one cluster:
///
/// 1. `w[r][s] >= max(w[r][t], w[s][t])` for every `t` outside the cluster;
/// 2. `w[r][s] >= max(d[r], d[s]) / n`;
/// 3. `w[r][s] - d[r] / n >= w[r][t] - w[s][t]` for every `t` in the cluster.
pub fn check_assumptions(w: &SimilarityMatrix, deg: &Degrees, truth: &[i64]) -> Result<AssumptionReport> {
    let n = w.n();
    if deg.len() != n || truth.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: deg.len().min(truth.len()) });
    }
    let clusters = groups(truth)?;
    let nf = n as f64;

    // strongest tie from each point to any other cluster
    let mut outside = vec![f64::NEG_INFINITY; n];
    for (r, out) in outside.iter_mut().enumerate() {
        let row = w.row(r);
        for (t, &v) in row.iter().enumerate() {
            if truth[t] != truth[r] && v > *out {
                *out = v;
            }
        }
    }

    let (mut a1, mut a2, mut a3) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for members in &clusters {
        for &r in members {
            let row_r = w.row(r);
            for &s in members {
                if r == s {
                    continue;
                }
                let rs = row_r[s];
                let ext = outside[r].max(outside[s]);
                if ext.is_finite() {
                    a1 = a1.min(rs - ext);
                }
                a2 = a2.min(rs - deg[r].max(deg[s]) / nf);
                let row_s = w.row(s);
                let worst = members.iter().map(|&t| row_r[t] - row_s[t]).fold(f64::NEG_INFINITY, f64::max);
                a3 = a3.min(rs - deg[r] / nf - worst);
            }
        }
    }
    Ok(AssumptionReport {
        a1_holds: a1 >= 0.0,
        a2_holds: a2 >= 0.0,
        a3_holds: a3 >= 0.0,
        a1_margin: a1,
        a2_margin: a2,
        a3_margin: a3,
    })
}

/// Objective values while the true members of one cluster are added in
/// degree-descending order.
pub fn monotone_trace(w: &SimilarityMatrix, deg: &Degrees, truth: &[i64], cluster_id: i64) -> Result<Vec<f64>> {
    let n = w.n();
    if deg.len() != n || truth.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: deg.len().min(truth.len()) });
    }
    let members: Vec<usize> = degree_order(deg).into_iter().filter(|&i| truth[i] == cluster_id).collect();
    if members.is_empty() {
        return Err(Error::MissingLabel(cluster_id));
    }
    let mut st = ClusterState::new(n);
    let mut trace = Vec::with_capacity(members.len());
    for j in members {
        let p = st.try_add(j, w, deg)?;
        st.accept(p);
        trace.push(p.value);
    }
    Ok(trace)
}
