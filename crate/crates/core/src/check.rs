//! Randomized equivalence checks between fast routines and brute-force
//! references, shared by the command-line `oracle` command and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cut::ClusterState;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernel::{degrees, similarity_matrix, Kernel};
use crate::metrics::hungarian;
use crate::mst::{fast_mst_with_stats, kruskal_full};
use crate::pathsim::{floyd_warshall_maximin, tree_pathsim, DEFAULT_ORACLE_CAP};

/// Largest side accepted by the permutation-enumeration reference.
pub const PERMUTATION_CAP: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Pathsim,
    Mst,
    Hungarian,
    Meancut,
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pathsim" => Ok(Self::Pathsim),
            "mst" => Ok(Self::Mst),
            "hungarian" => Ok(Self::Hungarian),
            "meancut" => Ok(Self::Meancut),
            other => Err(Error::InvalidParameter(format!("unknown oracle {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub trials: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, trial: usize, outcome: std::result::Result<(), String>) {
        self.trials += 1;
        if let Err(msg) = outcome {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(format!("trial {trial}: {msg}"));
            }
        }
    }
}

/// Uniform points in the unit cube, one stream per (seed, trial).
pub fn random_points(n: usize, dim: usize, seed: u64, trial: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let pts = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    Dataset::new(pts, dim, None).expect("finite coordinates")
}

/// MST ratios 0.05, 0.10, ..., 0.95.
pub fn ratio_grid() -> Vec<f64> {
    (1..20).map(|i| i as f64 * 0.05).collect()
}

pub fn run(kind: OracleKind, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    match kind {
        OracleKind::Pathsim => check_pathsim(n, trials, seed),
        OracleKind::Mst => check_mst(n, trials, seed),
        OracleKind::Hungarian => check_hungarian(n, trials, seed),
        OracleKind::Meancut => check_meancut(n, trials, seed),
    }
}

/// Tree-derived path similarities against Floyd-Warshall; dimension
/// alternates between 2 and 8.
pub fn check_pathsim(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    if n > DEFAULT_ORACLE_CAP {
        return Err(Error::TooLarge { n, cap: DEFAULT_ORACLE_CAP });
    }
    let k = Kernel::default();
    let mut rep = CheckReport { trials: 0, failures: 0, first_counterexample: None };
    for t in 0..trials {
        let dim = if t % 2 == 0 { 2 } else { 8 };
        let d = random_points(n, dim, seed, t as u64);
        let fast = tree_pathsim(&kruskal_full(&d, &k)?, n)?;
        let slow = floyd_warshall_maximin(&similarity_matrix(&d, &k)?)?;
        let outcome = match (0..n * n).find(|&x| fast.as_slice()[x] != slow.as_slice()[x]) {
            None => Ok(()),
            Some(x) => Err(format!(
                "dim {dim}: entry ({}, {}) tree {} vs closure {}",
                x / n,
                x % n,
                fast.as_slice()[x],
                slow.as_slice()[x]
            )),
        };
        rep.record(t, outcome);
    }
    Ok(rep)
}

/// Two-phase tree against full Kruskal at every grid ratio, including the
/// phase-two candidate count.
pub fn check_mst(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let k = Kernel::default();
    let mut rep = CheckReport { trials: 0, failures: 0, first_counterexample: None };
    for t in 0..trials {
        let dim = [2, 3, 5][t % 3];
        let d = random_points(n, dim, seed, t as u64);
        let want = kruskal_full(&d, &k)?.edge_set();
        let mut outcome = Ok(());
        for ratio in ratio_grid() {
            let f = fast_mst_with_stats(&d, &k, ratio)?;
            let sq: usize = f.components.sizes.iter().map(|a| a * a).sum();
            if 2 * f.phase2_candidates != n * n - sq {
                outcome = Err(format!("ratio {ratio:.2}: {} cross candidates", f.phase2_candidates));
                break;
            }
            if f.tree.edge_set() != want {
                outcome = Err(format!("ratio {ratio:.2}, dim {dim}: edge sets differ"));
                break;
            }
        }
        rep.record(t, outcome);
    }
    Ok(rep)
}

/// Smallest total over all injective row-to-column maps (rows <= cols).
pub fn brute_force_assignment(cost: &[Vec<f64>]) -> Result<f64> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    if cols > PERMUTATION_CAP {
        return Err(Error::TooLarge { n: cols, cap: PERMUTATION_CAP });
    }
    if rows > cols {
        return Err(Error::InvalidParameter("more rows than columns".into()));
    }
    fn go(cost: &[Vec<f64>], row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        if row == cost.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                go(cost, row + 1, used, acc + cost[row][j], best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, 0, &mut vec![false; cols], 0.0, &mut best);
    Ok(if rows == 0 { 0.0 } else { best })
}

/// Hungarian totals against permutation enumeration on random integer
/// costs, alternating square and wide shapes.
pub fn check_hungarian(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    if n > PERMUTATION_CAP {
        return Err(Error::TooLarge { n, cap: PERMUTATION_CAP });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CheckReport { trials: 0, failures: 0, first_counterexample: None };
    for t in 0..trials {
        let rows = if t % 2 == 0 || n == 0 { n } else { rng.gen_range(1..=n) };
        let cost: Vec<Vec<f64>> = (0..rows).map(|_| (0..n).map(|_| rng.gen_range(0..100) as f64).collect()).collect();
        let got = hungarian(&cost)?;
        let want = brute_force_assignment(&cost)?;
        let outcome = if got.cost == want {
            Ok(())
        } else {
            Err(format!("{rows}x{n} costs {cost:?}: solver {} vs enumeration {want}", got.cost))
        };
        rep.record(t, outcome);
    }
    Ok(rep)
}

/// Incremental objective values against dense evaluation along random
/// growth orders, to 1e-12 relative error.
pub fn check_meancut(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    if n > DEFAULT_ORACLE_CAP {
        return Err(Error::TooLarge { n, cap: DEFAULT_ORACLE_CAP });
    }
    let k = Kernel::default();
    let mut rep = CheckReport { trials: 0, failures: 0, first_counterexample: None };
    for t in 0..trials {
        let d = random_points(n, 2, seed, t as u64);
        let w = floyd_warshall_maximin(&similarity_matrix(&d, &k)?)?;
        let deg = degrees(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut st = ClusterState::new(n);
        let mut outcome = Ok(());
        for (m, &j) in order.iter().enumerate() {
            let p = st.try_add(j, &w, &deg)?;
            st.accept(p);
            let dense = dense_objective(&w, &deg, &order[..=m]);
            let tol = 1e-12 * dense.abs().max(f64::MIN_POSITIVE);
            if (p.value - dense).abs() > tol && (p.value - dense).abs() > 1e-15 {
                outcome = Err(format!("after {} members: incremental {} vs dense {dense}", m + 1, p.value));
                break;
            }
        }
        rep.record(t, outcome);
    }
    Ok(rep)
}

/// Objective with explicit indicator vector and quadratic forms.
fn dense_objective(w: &crate::kernel::SimilarityMatrix, deg: &[f64], members: &[usize]) -> f64 {
    let n = w.n();
    let mut x = vec![0.0; n];
    for &i in members {
        x[i] = 1.0;
    }
    let m: f64 = x.iter().sum();
    if members.len() == n {
        return 0.0;
    }
    let mut xdx = 0.0;
    let mut xwx = 0.0;
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        xdx += deg[i];
        for j in 0..n {
            xwx += x[j] * w.get(i, j);
        }
    }
    n as f64 / (n as f64 - m) * (xdx - xwx) / xdx
}
