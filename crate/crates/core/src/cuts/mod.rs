//! Minimum cuts of the support graph and the hierarchy of critical sets.

mod enumerate;
mod hierarchy;

pub use enumerate::{
    crosses, enumerate_min_cuts, enumerate_min_cuts_with, EnumerationConfig, TightSet, EXHAUSTIVE_LIMIT,
};
pub use hierarchy::{build_from_cuts, build_hierarchy, CutHierarchy, EdgeClass, EdgeRole, HierarchyNode, NodeKind};

use std::fmt::Write;

impl CutHierarchy {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Graphviz rendering of the hierarchy tree.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hierarchy {\n  node [shape=box, fontsize=10];\n");
        for node in &self.nodes {
            let label = match node.kind {
                NodeKind::Leaf => format!("v{}", node.id),
                NodeKind::DegreeCut => format!("degree #{} ({})", node.id, node.members.len()),
                NodeKind::CycleCut => format!("cycle #{} ({})", node.id, node.members.len()),
                NodeKind::RootCycle => format!("root ({} nodes)", node.children.len()),
            };
            let shape = if node.kind == NodeKind::Leaf { "ellipse" } else { "box" };
            writeln!(s, "  n{} [label=\"{label}\", shape={shape}];", node.id).unwrap();
        }
        for node in &self.nodes {
            for &c in &node.children {
                writeln!(s, "  n{} -> n{};", node.id, c).unwrap();
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests;
