//! MeanCut clustering: path-based similarities read off a spanning tree,
//! greedy degree-descent minimization of the MeanCut objective, and a
//! density-gradient pre-pass that holds out points between clusters.
//!
//! ```
//! use meancut::{gen_synthetic, improved_meancut, metrics, Kernel, Preset, SynthParams};
//!
//! let s = gen_synthetic(Preset::Blobs, 90, 7, &SynthParams::default()).unwrap();
//! let labels = improved_meancut(&s.data, &Kernel::default(), 0.2, 10, 0.2, 0).unwrap();
//! let ari = metrics::ari(s.data.truth().unwrap(), labels.labels()).unwrap();
//! assert!(ari > 0.9);
//! ```

pub mod check;
pub mod cut;
pub mod dataset;
pub mod dgf;
mod error;
pub mod kernel;
pub mod metrics;
pub mod mst;
pub mod pathsim;
pub mod sweep;
pub mod unionfind;

pub use cut::{apply_noise_threshold, greedy_cluster, meancut_value, ClusterState, Labeling};
pub use dataset::{
    dedup, gen_synthetic, load_csv, minmax_normalize, parse_csv, Dataset, DedupMap, Preset, SynthParams, TruthColumn,
};
pub use dgf::{improved_meancut, improved_meancut_run, meancut_cluster, Params};
pub use error::{Error, Result};
pub use kernel::{degrees, similarity_matrix, Degrees, Kernel, KernelKind, SimilarityMatrix};
pub use mst::{fast_mst, kruskal_full, SpanningTree};
pub use pathsim::{floyd_warshall_maximin, tree_pathsim};
