//! Spanning trees over the complete Euclidean graph.
//!
//! Trees are built in distance space: under a strictly decreasing kernel the
//! minimum spanning tree by distance is the maximum spanning tree by
//! similarity, so kernel values are attached to the chosen edges only.
//! Equal distances are ordered by `(min index, max index)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dataset::{mbr_diagonal, Dataset};
use crate::error::{Error, Result};
use crate::kernel::{dist, Kernel, DEFAULT_DENSE_CAP};
use crate::unionfind::DisjointSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub dist: f64,
    pub sim: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub n: usize,
    pub edges: Vec<TreeEdge>,
}

impl SpanningTree {
    /// Checks that the edges form a spanning tree on `0..n`.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::NotSpanning { n: self.n, reason });
        if self.n == 0 {
            return fail("no points".into());
        }
        if self.edges.len() != self.n - 1 {
            return fail(format!("{} edges, expected {}", self.edges.len(), self.n - 1));
        }
        let mut ds = DisjointSet::new(self.n);
        for e in &self.edges {
            if e.u >= self.n || e.v >= self.n {
                return fail(format!("edge ({}, {}) leaves the point range", e.u, e.v));
            }
            if e.u == e.v {
                return fail(format!("self loop at {}", e.u));
            }
            if !ds.union(e.u, e.v) {
                return fail(format!("edge ({}, {}) closes a cycle", e.u, e.v));
            }
        }
        Ok(())
    }

    /// Sorted `(min, max)` endpoint pairs, for comparing edge sets.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut set: Vec<_> = self.edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        set.sort_unstable();
        set
    }

    /// Writes one `u,v,dist,sim` line per edge in construction order.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            writeln!(out, "{},{},{:?},{:?}", e.u, e.v, e.dist, e.sim).expect("writing to a String");
        }
        out
    }

    /// Reads the format produced by [`SpanningTree::to_dump`] and validates
    /// the result as a tree on `n` points.
    pub fn from_dump(text: &str, n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::TreeDump { line: i + 1, reason: reason.to_string() };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(bad("expected 4 fields"));
            }
            let u = fields[0].parse().map_err(|_| bad("bad endpoint"))?;
            let v = fields[1].parse().map_err(|_| bad("bad endpoint"))?;
            let dist: f64 = fields[2].parse().map_err(|_| bad("bad distance"))?;
            let sim: f64 = fields[3].parse().map_err(|_| bad("bad similarity"))?;
            if !(dist.is_finite() && dist >= 0.0) || !(sim.is_finite() && sim > 0.0 && sim <= 1.0) {
                return Err(bad("weight out of range"));
            }
            edges.push(TreeEdge { u, v, dist, sim });
        }
        let tree = SpanningTree { n, edges };
        tree.validate()?;
        Ok(tree)
    }
}

/// Sum of edge distances and of edge similarities.
pub fn tree_total(t: &SpanningTree) -> (f64, f64) {
    t.edges.iter().fold((0.0, 0.0), |(d, s), e| (d + e.dist, s + e.sim))
}

/// Connected components of the `eps`-neighborhood graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabels {
    /// Component id per point; ids are numbered by smallest member index.
    pub comp: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ComponentLabels {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Number of point pairs whose endpoints lie in different components.
    pub fn cross_pairs(&self) -> usize {
        let n = self.comp.len();
        let sq: usize = self.sizes.iter().map(|a| a * a).sum();
        (n * n - sq) / 2
    }

    fn from_forest(ds: &mut DisjointSet) -> Self {
        let n = ds.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut comp = Vec::with_capacity(n);
        let mut sizes = Vec::new();
        for i in 0..n {
            let r = ds.find(i);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = sizes.len();
                sizes.push(0);
            }
            comp.push(id_of_root[r]);
            sizes[id_of_root[r]] += 1;
        }
        Self { comp, sizes }
    }
}

type Candidate = (f64, u32, u32);

fn by_dist(a: &Candidate, b: &Candidate) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
}

fn check_cap(n: usize) -> Result<()> {
    if n > DEFAULT_DENSE_CAP {
        return Err(Error::TooLarge { n, cap: DEFAULT_DENSE_CAP });
    }
    Ok(())
}

/// Runs Kruskal over sorted candidates, appending accepted edges to `out`.
fn kruskal_pass(cands: &[Candidate], ds: &mut DisjointSet, k: &Kernel, out: &mut Vec<TreeEdge>) {
    for &(d, u, v) in cands {
        if ds.sets() == 1 {
            break;
        }
        if ds.union(u as usize, v as usize) {
            out.push(TreeEdge { u: u as usize, v: v as usize, dist: d, sim: k.eval(d) });
        }
    }
}

/// Kruskal on the complete graph.
pub fn kruskal_full(d: &Dataset, k: &Kernel) -> Result<SpanningTree> {
    let n = d.n();
    check_cap(n)?;
    let mut cands = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            cands.push((dist(d.row(u), d.row(v)), u as u32, v as u32));
        }
    }
    cands.sort_unstable_by(by_dist);
    let mut ds = DisjointSet::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    kruskal_pass(&cands, &mut ds, k, &mut edges);
    Ok(SpanningTree { n, edges })
}

/// Every pair `u < v` with distance at most `eps`.
///
/// Data with at most three features goes through a uniform grid of cell
/// width `eps`; higher dimensions scan all pairs.
fn eps_pairs(d: &Dataset, eps: f64) -> Vec<Candidate> {
    let n = d.n();
    let mut out = Vec::new();
    if d.dim() > 3 || eps <= 0.0 {
        for u in 0..n {
            for v in (u + 1)..n {
                let dd = dist(d.row(u), d.row(v));
                if dd <= eps {
                    out.push((dd, u as u32, v as u32));
                }
            }
        }
        return out;
    }

    let dim = d.dim();
    let mut lo = [0.0f64; 3];
    for (c, l) in lo.iter_mut().enumerate().take(dim) {
        *l = d.rows().map(|r| r[c]).fold(f64::INFINITY, f64::min);
    }
    let cell_of = |row: &[f64]| -> [i64; 3] {
        let mut key = [0i64; 3];
        for c in 0..dim {
            key[c] = ((row[c] - lo[c]) / eps).floor() as i64;
        }
        key
    };
    let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
    let cells: Vec<[i64; 3]> = d.rows().map(cell_of).collect();
    for (i, key) in cells.iter().enumerate() {
        grid.entry(*key).or_default().push(i as u32);
    }
    let span = |c: usize| if c < dim { -1..=1 } else { 0..=0 };
    for (u, key) in cells.iter().enumerate() {
        for dx in span(0) {
            for dy in span(1) {
                for dz in span(2) {
                    let nb = [key[0] + dx, key[1] + dy, key[2] + dz];
                    let Some(members) = grid.get(&nb) else { continue };
                    for &v in members {
                        if (v as usize) <= u {
                            continue;
                        }
                        let dd = dist(d.row(u), d.row(v as usize));
                        if dd <= eps {
                            out.push((dd, u as u32, v));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Connected components of the graph linking points at distance `<= eps`
/// (DBSCAN with `minPts = 1`, which flags no noise).
pub fn eps_components(d: &Dataset, eps: f64) -> Result<ComponentLabels> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let mut ds = DisjointSet::new(d.n());
    for (_, u, v) in eps_pairs(d, eps) {
        ds.union(u as usize, v as usize);
    }
    Ok(ComponentLabels::from_forest(&mut ds))
}

/// A two-phase tree together with the bookkeeping of how it was built.
#[derive(Debug, Clone)]
pub struct FastMst {
    pub tree: SpanningTree,
    pub eps: f64,
    pub components: ComponentLabels,
    /// Candidate edges inside components (distance `<= eps`).
    pub phase1_candidates: usize,
    /// Candidate edges between components.
    pub phase2_candidates: usize,
}

pub fn fast_mst(d: &Dataset, k: &Kernel, ratio: f64) -> Result<SpanningTree> {
    fast_mst_with_stats(d, k, ratio).map(|f| f.tree)
}

/// Two-phase Kruskal: sub-trees inside the `eps`-components, where
/// `eps = ratio * bounding-box diagonal`, then Kruskal over the
/// cross-component pairs starting from that forest.
pub fn fast_mst_with_stats(d: &Dataset, k: &Kernel, ratio: f64) -> Result<FastMst> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter(format!("ratio must lie in (0, 1), got {ratio}")));
    }
    let n = d.n();
    check_cap(n)?;
    let eps = mbr_diagonal(d) * ratio;

    let mut inner = eps_pairs(d, eps);
    inner.sort_unstable_by(by_dist);
    let mut ds = DisjointSet::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    kruskal_pass(&inner, &mut ds, k, &mut edges);
    let phase1_candidates = inner.len();
    drop(inner);

    let components = ComponentLabels::from_forest(&mut ds);
    let m = components.count();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (i, &c) in components.comp.iter().enumerate() {
        members[c].push(i as u32);
    }
    let mut cross = Vec::with_capacity(components.cross_pairs());
    for a in 0..m {
        for b in (a + 1)..m {
            for &u in &members[a] {
                for &v in &members[b] {
                    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                    cross.push((dist(d.row(lo as usize), d.row(hi as usize)), lo, hi));
                }
            }
        }
    }
    assert_eq!(cross.len(), components.cross_pairs(), "cross-component candidate count");
    cross.sort_unstable_by(by_dist);
    kruskal_pass(&cross, &mut ds, k, &mut edges);
    let phase2_candidates = cross.len();

    Ok(FastMst { tree: SpanningTree { n, edges }, eps, components, phase1_candidates, phase2_candidates })
}
