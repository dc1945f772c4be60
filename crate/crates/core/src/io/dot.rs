//! Graphviz export.

use std::fmt::Write;

use crate::diagram::GaussDiagram;

/// Strands become solid chains, interactions dashed arrows from the agent
/// to the tail of the acted edge, labeled with the sign.
pub fn export_dot(d: &GaussDiagram) -> String {
    let mut out = String::from("digraph inca {\n  node [shape=circle];\n");
    for v in d.vertices() {
        let name = d.vertex_name(v);
        let shape = if d.is_marked(v) { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  \"{name}\" [label=\"{name}\"{shape}];");
    }
    for e in d.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [style=solid];",
            d.vertex_name(d.tail(e)),
            d.vertex_name(d.head(e))
        );
    }
    for (e, i) in d.interactions() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [style=dashed, label=\"{}\", tooltip=\"{}\"];",
            d.vertex_name(i.agent),
            d.vertex_name(d.tail(*e)),
            i.sign.symbol(),
            d.edge_name(*e)
        );
    }
    out.push_str("}\n");
    out
}
