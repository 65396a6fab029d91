//! Graphviz output.

use std::fmt::Write as _;

use crate::auxgraph::AuxGraph;
use crate::poset::Poset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, drawn bottom-up with one `rank=same` group per level.
pub fn hasse(p: &Poset) -> String {
    let mut out = String::new();
    let name = p.name().unwrap_or("P");
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle, width=0.3];");
    for (i, level) in p.mirsky_levels().levels.iter().enumerate() {
        let ids: Vec<String> = level.iter().map(|&e| quote(p.name_of(e))).collect();
        let _ = writeln!(out, "  {{ rank=same; /* L{} */ {}; }}", i + 1, ids.join("; "));
    }
    for &(a, b) in p.covers() {
        let _ = writeln!(out, "  {} -> {};", quote(p.name_of(a)), quote(p.name_of(b)));
    }
    out.push_str("}\n");
    out
}

/// Undirected auxiliary graph; labels read `name:type:Vj`.
pub fn aux_graph(g: &AuxGraph, p: &Poset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", quote(&format!("G_{}", p.name().unwrap_or("P"))));
    for (id, v) in g.vertices().iter().enumerate() {
        let label = format!(
            "{{{}}}:{}:V{}",
            v.names(p).join(","),
            v.vtype.symbol(),
            v.pair_index
        );
        let _ = writeln!(out, "  v{id} [label={}];", quote(&label));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  v{a} -- v{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_has_one_edge_per_cover() {
        let p = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let d = hasse(&p);
        assert_eq!(d.matches("->").count(), 2);
        assert_eq!(d.matches("rank=same").count(), 2);
        assert!(d.starts_with("digraph"));
    }
}
