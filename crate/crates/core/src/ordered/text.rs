//! Plain-text graph formats.
//!
//! Ordered graphs: a header `n m`, then `m` lines `u v` with `0 <= u < v < n`.
//! Hypercube graphs: a header `d m`, then `m` lines holding two bitstrings.
//! Writers emit edges sorted, one space between fields, `\n` line endings,
//! so a canonical file survives parse-then-write byte for byte.

use std::fmt::Write as _;

use super::bitstring::BitString;
use super::graph::OrderedGraph;
use super::hypercube::HypercubeGraph;
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Non-empty lines with 1-based line numbers.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
}

fn parse_header(fields: Option<(usize, Vec<&str>)>) -> Result<(usize, usize, usize)> {
    let Some((line, f)) = fields else { return parse_err(1, "missing header") };
    if f.len() != 2 {
        return parse_err(line, format!("header wants 2 fields, found {}", f.len()));
    }
    let a = f[0].parse().or_else(|_| parse_err(line, format!("bad count {:?}", f[0])))?;
    let b = f[1].parse().or_else(|_| parse_err(line, format!("bad count {:?}", f[1])))?;
    Ok((line, a, b))
}

pub fn parse_ordered(text: &str) -> Result<OrderedGraph> {
    let mut lines = numbered_lines(text);
    let (_, n, m) = parse_header(lines.next())?;
    let mut g = OrderedGraph::new(n);
    let mut seen = 0;
    for (line, f) in lines {
        if f.len() != 2 {
            return parse_err(line, "edge line wants 2 fields");
        }
        let u: usize = f[0].parse().or_else(|_| parse_err(line, format!("bad vertex {:?}", f[0])))?;
        let v: usize = f[1].parse().or_else(|_| parse_err(line, format!("bad vertex {:?}", f[1])))?;
        if !(u < v && v < n) {
            return parse_err(line, format!("need 0 <= u < v < {n}, got {u} {v}"));
        }
        if !g.add_edge(u, v).expect("checked range") {
            return parse_err(line, format!("duplicate edge {u} {v}"));
        }
        seen += 1;
    }
    if seen != m {
        return parse_err(0, format!("header promises {m} edges, found {seen}"));
    }
    Ok(g)
}

pub fn write_ordered(g: &OrderedGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_hypercube(text: &str) -> Result<HypercubeGraph> {
    let mut lines = numbered_lines(text);
    let (hline, d, m) = parse_header(lines.next())?;
    let mut g = HypercubeGraph::new(d as u32).or_else(|e| parse_err(hline, e.to_string()))?;
    let mut seen = 0;
    for (line, f) in lines {
        if f.len() != 2 {
            return parse_err(line, "edge line wants 2 bitstrings");
        }
        let x: BitString = f[0].parse().or_else(|e: Error| parse_err(line, e.to_string()))?;
        let y: BitString = f[1].parse().or_else(|e: Error| parse_err(line, e.to_string()))?;
        match g.add_edge(x, y) {
            Ok(true) => {}
            Ok(false) => return parse_err(line, format!("duplicate edge {x} {y}")),
            Err(e) => return parse_err(line, e.to_string()),
        }
        seen += 1;
    }
    if seen != m {
        return parse_err(0, format!("header promises {m} edges, found {seen}"));
    }
    Ok(g)
}

pub fn write_hypercube(g: &HypercubeGraph) -> String {
    let mut out = format!("{} {}\n", g.dim(), g.edge_count());
    for (x, y) in g.edge_strings() {
        writeln!(out, "{x} {y}").unwrap();
    }
    out
}
