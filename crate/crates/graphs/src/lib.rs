//! Metric graphs with exact rational lengths: geodesics, volume growth, node
//! multisets, tree reconstruction, fixture generators and merge trees.

pub mod canon;
pub mod discretize;
pub mod error;
pub mod generators;
pub mod graph;
pub mod merge;
pub mod pwl;
pub mod reconstruct;
pub mod volume;

pub use canon::{tree_canonical_form, trees_isomorphic};
pub use discretize::{discretize_graph, discretize_graph_with, edge_partition_witness, Discretization, GraphMorphism, SampleLabel, SampleRule};
pub use error::{GraphError, Result};
pub use graph::{graph_distance, GraphPoint, MetricGraph};
pub use pwl::{Pwl, PwlCDF};
pub use reconstruct::reconstruct_tree;
pub use volume::{ball_volume_function, node_count_recovery, node_multiset, NodeMultiset};
