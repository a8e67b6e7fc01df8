//! Concept-graph and classification-flow exports.

mod graph;
mod sankey;

pub use graph::{export_graph, EdgeKind, GraphEdge, GraphExport, GraphNode, NodeKind};
pub use sankey::{evaluation_label, export_sankey, SankeyExport, SankeyLink, SankeyNode, STAGES};
