//! Rooted subgraph extension counts: structure of rooted graphs, exact
//! moments in `G(n,p)`, counting in concrete hosts, sampling and
//! simulation experiments.

pub mod classify;
pub mod count;
pub mod exact;
pub mod experiment;
pub mod graph;
pub mod host;
pub mod par;
pub mod presets;
pub mod random;
pub mod stats;

pub use classify::{classify, ClassificationReport, Density, TheoremCase};
pub use count::{
    count_extensions, count_ordered_extensions, extension_extrema, list_extensions, per_vertex_copy_counts,
    EngineError, Extension, ExtensionCounter, ExtensionStats,
};
pub use graph::{builtin_fixture, load_rooted_graph, parse_rooted_graph, PatternGraph, RootTuple, RootedGraph, VertexSet};
pub use host::HostGraph;
pub use par::Execution;
pub use presets::{preset, run_preset, PRESET_NAMES};
