//! Graphviz output with vertices colored by part.

use std::fmt::Write as _;

use maglap_core::{GroupElement, SignedGraph};

const PALETTE: [&str; 8] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf"];

/// `labels[u]` is the part of `u`, if any. Edges with nontrivial signature
/// are dashed and labelled with their signature.
pub fn to_dot(g: &SignedGraph, names: Option<&[String]>, labels: &[Option<u32>]) -> String {
    let name = |u: usize| names.and_then(|n| n.get(u).cloned()).unwrap_or_else(|| u.to_string());
    let mut out = String::from("graph G {\n  node [style=filled];\n");
    for u in 0..g.num_vertices() {
        let color = match labels.get(u).copied().flatten() {
            Some(p) => PALETTE[p as usize % PALETTE.len()],
            None => "#ffffff",
        };
        writeln!(out, "  {u} [label=\"{}\", fillcolor=\"{color}\"];", name(u).replace('"', "\\\"")).unwrap();
    }
    for e in g.canonical_edges() {
        if e.signature.is_identity() {
            writeln!(out, "  {} -- {};", e.u, e.v).unwrap();
        } else {
            let tok = match e.signature {
                GroupElement::Cyclic { .. } => e.signature.token(),
                GroupElement::Circle(t) => format!("{t:.3}"),
            };
            writeln!(out, "  {} -- {} [style=dashed, label=\"{tok}\"];", e.u, e.v).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
