//! DOT and SVG drawings of stored graphs.

use std::f64::consts::PI;
use std::fmt::Write;

use efg_core::{Graph, GraphCode};

pub fn graph_name(code: GraphCode) -> String {
    format!("g{}_{}", code.order, code.bits)
}

pub fn dot(code: GraphCode) -> String {
    let g = code.graph();
    let mut out = String::new();
    writeln!(out, "graph {} {{", graph_name(code)).unwrap();
    writeln!(out, "  label=\"{}\";", g.to_graph6()).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in 0..g.order() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

const SIZE: f64 = 200.0;
const RADIUS: f64 = 80.0;

/// Vertex `k` of `n` at angle `2 pi k / n` on a fixed circle.
fn position(k: usize, n: usize) -> (f64, f64) {
    let angle = 2.0 * PI * k as f64 / n as f64;
    (
        SIZE / 2.0 + RADIUS * angle.cos(),
        SIZE / 2.0 + RADIUS * angle.sin(),
    )
}

pub fn svg(code: GraphCode) -> String {
    let g: Graph = code.graph();
    let n = g.order();
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    writeln!(out, "  <title>{}</title>", g.to_graph6()).unwrap();
    for (u, v) in g.edges() {
        let (x1, y1) = position(u, n);
        let (x2, y2) = position(v, n);
        writeln!(
            out,
            "  <line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"black\"/>"
        )
        .unwrap();
    }
    for k in 0..n {
        let (x, y) = position(k, n);
        writeln!(
            out,
            "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"6\" fill=\"white\" stroke=\"black\"/>"
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
