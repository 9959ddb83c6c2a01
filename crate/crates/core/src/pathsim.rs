//! Maximin (widest-path) similarity.
//!
//! The path-based similarity of two points is the largest, over all paths
//! joining them, of the smallest edge weight on the path. Its values are
//! fully determined by a maximum spanning tree: the answer for `(i, j)` is
//! the weakest edge on the tree path between them.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, SimilarityMatrix};
use crate::mst::{fast_mst, SpanningTree};
use crate::unionfind::DisjointSet;

/// Largest point count accepted by the cubic Floyd-Warshall route.
pub const DEFAULT_ORACLE_CAP: usize = 1_000;

/// Floyd-Warshall in the (max, min) semiring over a raw kernel matrix.
pub fn floyd_warshall_maximin(s: &SimilarityMatrix) -> Result<SimilarityMatrix> {
    floyd_warshall_maximin_capped(s, DEFAULT_ORACLE_CAP)
}

pub fn floyd_warshall_maximin_capped(s: &SimilarityMatrix, cap: usize) -> Result<SimilarityMatrix> {
    if s.is_pathbased() {
        return Err(Error::InvalidParameter("input is already path-based".into()));
    }
    let n = s.n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let mut w = s.as_slice().to_vec();
    for t in 0..n {
        let via: Vec<f64> = w[t * n..(t + 1) * n].to_vec();
        for r in 0..n {
            let rt = w[r * n + t];
            let row = &mut w[r * n..(r + 1) * n];
            for (cell, &ts) in row.iter_mut().zip(&via) {
                let cand = if rt < ts { rt } else { ts };
                if *cell < cand {
                    *cell = cand;
                }
            }
        }
    }
    for i in 0..n {
        w[i * n + i] = 1.0;
    }
    Ok(SimilarityMatrix::from_raw(n, w, true))
}

/// Path-based similarities read off a spanning tree.
///
/// Edges are merged in descending similarity; each merge of two components
/// gives every pair straddling them the merging edge's similarity.
pub fn tree_pathsim(t: &SpanningTree, n: usize) -> Result<SimilarityMatrix> {
    if t.n != n {
        return Err(Error::NotSpanning { n, reason: format!("tree covers {} points", t.n) });
    }
    t.validate()?;

    let mut order: Vec<usize> = (0..t.edges.len()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&t.edges[a], &t.edges[b]);
        eb.sim.total_cmp(&ea.sim).then(ea.dist.total_cmp(&eb.dist)).then(a.cmp(&b))
    });

    let mut w = vec![0.0; n * n];
    for i in 0..n {
        w[i * n + i] = 1.0;
    }
    let mut ds = DisjointSet::new(n);
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for idx in order {
        let e = &t.edges[idx];
        let (ra, rb) = (ds.find(e.u), ds.find(e.v));
        let a = std::mem::take(&mut members[ra]);
        let b = std::mem::take(&mut members[rb]);
        let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
        for &i in small {
            for &j in large {
                w[i * n + j] = e.sim;
                w[j * n + i] = e.sim;
            }
        }
        ds.union(ra, rb);
        let root = ds.find(ra);
        let (mut small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut merged = large;
        merged.append(&mut small);
        members[root] = merged;
    }
    Ok(SimilarityMatrix::from_raw(n, w, true))
}

/// Two-phase spanning tree followed by the tree sweep.
pub fn pathsim_pipeline(d: &Dataset, k: &Kernel, ratio: f64) -> Result<SimilarityMatrix> {
    let tree = fast_mst(d, k, ratio)?;
    tree_pathsim(&tree, d.n())
}
