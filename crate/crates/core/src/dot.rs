//! Graphviz DOT text for snake graphs, loop graphs, quivers and lattices.
//!
//! Graph vertices carry `pos` attributes, so `neato -n` draws tiles where
//! they sit.

use std::fmt::Write;

use crate::expansion::VariableAssignment;
use crate::loopgraph::{GoodMatching, LoopGraph};
use crate::poset::{HasseQuiver, Lattice};
use crate::snakegraph::{Matching, SnakeGraph, Vertex};
use crate::surface::Surface;

const SCALE: i32 = 72;

fn vertex_id(v: Vertex) -> String {
    format!("\"v{}_{}\"", v.0, v.1)
}

fn write_vertices(out: &mut String, g: &SnakeGraph) {
    for &v in g.vertices() {
        let _ = writeln!(
            out,
            "  {} [shape=point, pos=\"{},{}!\"];",
            vertex_id(v),
            v.0 * SCALE,
            v.1 * SCALE
        );
    }
}

fn write_diagonals(out: &mut String, s: &Surface, g: &SnakeGraph) {
    for (j, t) in g.tiles().iter().enumerate() {
        let _ = writeln!(
            out,
            "  {} -- {} [style=dotted, label=\"{}\", tooltip=\"tile {}\"];",
            vertex_id(t.nw()),
            vertex_id(t.se()),
            s.label_name(t.diagonal),
            j + 1
        );
    }
}

/// A snake graph with edge labels; edges of `highlight` are drawn bold.
pub fn snake_graph_dot(s: &Surface, g: &SnakeGraph, highlight: Option<&Matching>) -> String {
    let mut out = String::from("graph snake {\n  node [label=\"\"];\n");
    write_vertices(&mut out, g);
    for (e, edge) in g.edges().iter().enumerate() {
        let bold = highlight.is_some_and(|m| m.contains(e));
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\"{}];",
            vertex_id(edge.ends.0),
            vertex_id(edge.ends.1),
            s.label_name(edge.label),
            if bold { ", penwidth=4" } else { "" }
        );
    }
    write_diagonals(&mut out, s, g);
    out.push_str("}\n");
    out
}

/// A loop graph: the base snake graph with `c` red, `c'` dashed red and the
/// identified vertices joined by dashed blue lines. With `overlay`, the
/// matched edges of the glued graph are bold.
pub fn loop_graph_dot(s: &Surface, lg: &LoopGraph, overlay: Option<&GoodMatching>) -> String {
    let g = lg.base();
    let mut out = String::from("graph loop {\n  node [label=\"\"];\n");
    write_vertices(&mut out, g);
    for (e, edge) in g.edges().iter().enumerate() {
        let mut attrs = vec![format!("label=\"{}\"", s.label_name(edge.label))];
        for c in lg.cuts() {
            if c.c == e {
                attrs.push("color=red".into());
            } else if c.c_prime == e {
                attrs.push("color=red, style=dashed".into());
            }
        }
        if overlay.is_some_and(|p| p.matching.contains(e)) {
            attrs.push("penwidth=4".into());
        }
        let _ = writeln!(
            out,
            "  {} -- {} [{}];",
            vertex_id(edge.ends.0),
            vertex_id(edge.ends.1),
            attrs.join(", ")
        );
    }
    write_diagonals(&mut out, s, g);
    for c in lg.cuts() {
        for (a, b) in [(c.x, c.x_prime), (c.y, c.y_prime)] {
            let _ = writeln!(
                out,
                "  {} -- {} [color=blue, style=dashed, constraint=false];",
                vertex_id(a),
                vertex_id(b)
            );
        }
    }
    out.push_str("}\n");
    out
}

/// The quiver on tiles `1..d`, arrows as stored.
pub fn quiver_dot(q: &HasseQuiver) -> String {
    let mut out = String::from("digraph quiver {\n");
    for i in 0..q.len() {
        let _ = writeln!(out, "  t{} [label=\"{}\"];", i + 1, i + 1);
    }
    for &(a, b) in q.arrows() {
        let _ = writeln!(out, "  t{} -> t{};", a + 1, b + 1);
    }
    out.push_str("}\n");
    out
}

fn matching_label(s: &Surface, lg: &LoopGraph, p: &GoodMatching, va: &VariableAssignment) -> String {
    let names = va.names();
    let x = p
        .matching
        .edges
        .iter()
        .fold(crate::laurent::Monomial::one(), |acc, &e| {
            acc.mul(va.x_of(lg.base().edge(e).label))
        });
    let h: Vec<String> = p
        .height
        .iter()
        .map(|&j| s.label_name(lg.base().tile(j).diagonal).to_string())
        .collect();
    format!("{}\\nh = {{{}}}", x.to_string_with(names), h.join(", "))
}

/// The lattice of good matchings, one vertex per matching labelled by its
/// weight monomial and the diagonals in its height, one arrow per positive
/// twist labelled by the tile.
pub fn lattice_dot(s: &Surface, lg: &LoopGraph, lat: &Lattice, va: &VariableAssignment) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, p) in lat.matchings.iter().enumerate() {
        let _ = writeln!(out, "  m{} [label=\"{}\"];", i, matching_label(s, lg, p, va));
    }
    for &(a, b, j) in &lat.arrows {
        let _ = writeln!(out, "  m{a} -> m{b} [label=\"{}\"];", j + 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::HasseQuiver;

    #[test]
    fn quiver_lists_every_arrow() {
        let q = HasseQuiver::new(3, &[(0, 1), (2, 1)]).unwrap();
        let d = quiver_dot(&q);
        assert!(d.starts_with("digraph quiver {"));
        assert!(d.contains("t1 -> t2;"));
        assert!(d.contains("t3 -> t2;"));
        assert_eq!(d.matches("->").count(), 2);
    }
}
