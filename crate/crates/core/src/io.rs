//! Plain-text formats. All are whitespace-separated integers, one record per
//! line; lines starting with `#` and blank lines are ignored.
//!
//! * graph: `n m`, then `m` lines `u v` (edge ids follow line order)
//! * bounds: `n` lines `v lower upper`, each vertex exactly once
//! * instance: a graph section optionally followed by a bounds section
//! * orientation result: `m` lines `tail head` in edge order
//! * factor result: `m` lines `u v flag` in edge order, `flag` 1 for member edges

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::bounds::{validate_bounds, BoundsRole, DegreeBounds};
use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::graph::{Graph, Orientation};

/// Numbered data lines (1-based line numbers).
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn integers(line: usize, s: &str, expected: usize) -> Result<Vec<usize>> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != expected {
        return Err(Error::parse(
            line,
            format!("expected {expected} integers, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("not a non-negative integer: {f:?}")))
        })
        .collect()
}

fn at_line(line: usize, e: Error) -> Error {
    Error::AtLine {
        line,
        source: Box::new(e),
    }
}

/// A graph section and whatever data lines follow it.
fn parse_graph_section(text: &str) -> Result<(Graph, Vec<(usize, &str)>)> {
    let mut lines = data_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing \"n m\" header"))?;
    let nm = integers(header_line, header, 2)?;
    let (n, m) = (nm[0], nm[1]);
    let mut pairs = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    for _ in 0..m {
        let (line, s) = lines
            .next()
            .ok_or_else(|| Error::parse(header_line, format!("expected {m} edge lines")))?;
        let uv = integers(line, s, 2)?;
        let (u, v) = (uv[0], uv[1]);
        for vertex in [u, v] {
            if vertex >= n {
                return Err(at_line(line, Error::VertexOutOfRange { vertex, n }));
            }
        }
        if u == v {
            return Err(at_line(line, Error::LoopEdge(u)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(at_line(line, Error::DuplicateEdge(u.min(v), u.max(v))));
        }
        pairs.push((u, v));
    }
    Ok((Graph::new(n, pairs)?, lines.collect()))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let (g, rest) = parse_graph_section(text)?;
    if let Some(&(line, _)) = rest.first() {
        return Err(Error::parse(line, "unexpected data after the edge list"));
    }
    Ok(g)
}

fn parse_bounds_lines(lines: &[(usize, &str)], g: &Graph, role: BoundsRole) -> Result<DegreeBounds> {
    let n = g.vertex_count();
    let mut entries: Vec<Option<(usize, usize)>> = vec![None; n];
    for &(line, s) in lines {
        let vals = integers(line, s, 3)?;
        let (v, lo, hi) = (vals[0], vals[1], vals[2]);
        if v >= n {
            return Err(at_line(line, Error::VertexOutOfRange { vertex: v, n }));
        }
        if entries[v].is_some() {
            return Err(at_line(line, Error::DuplicateVertex(v)));
        }
        if lo > hi {
            return Err(at_line(
                line,
                Error::BoundsOutOfRange {
                    vertex: v,
                    lower: lo,
                    upper: hi,
                    degree: g.degree(v),
                },
            ));
        }
        entries[v] = Some((lo, hi));
    }
    if let Some(v) = entries.iter().position(Option::is_none) {
        return Err(Error::MissingVertex(v));
    }
    let b = DegreeBounds::from_fn(n, role, |v| entries[v].expect("checked above"))?;
    match role {
        BoundsRole::Orientation => validate_bounds(g, &b)?,
        BoundsRole::Factor => b.check_range(g)?,
    }
    Ok(b)
}

/// Parses a bounds table. Orientation bounds get full validation; factor
/// bounds only the range check, since `(g, f)`-factors allow `g = f`.
pub fn parse_bounds(text: &str, g: &Graph, role: BoundsRole) -> Result<DegreeBounds> {
    let lines: Vec<_> = data_lines(text).collect();
    parse_bounds_lines(&lines, g, role)
}

/// A graph plus an optional trailing bounds section.
pub fn parse_instance(text: &str, role: BoundsRole) -> Result<(Graph, Option<DegreeBounds>)> {
    let (g, rest) = parse_graph_section(text)?;
    if rest.is_empty() {
        return Ok((g, None));
    }
    let b = parse_bounds_lines(&rest, &g, role)?;
    Ok((g, Some(b)))
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn emit_bounds(b: &DegreeBounds) -> String {
    let mut out = String::new();
    for v in 0..b.len() {
        let _ = writeln!(out, "{v} {} {}", b.lower(v), b.upper(v));
    }
    out
}

pub fn emit_instance(g: &Graph, b: &DegreeBounds) -> String {
    emit_graph(g) + &emit_bounds(b)
}

/// One `tail head` line per edge, in edge order.
pub fn emit_orientation(d: &Orientation<'_>) -> String {
    let mut out = String::new();
    for (a, b) in d.directed_pairs() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

/// One `u v flag` line per edge, in edge order.
pub fn emit_factor(f: &Factor<'_>) -> String {
    let g = f.graph();
    let mut out = String::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(out, "{u} {v} {}", u8::from(f.contains(e)));
    }
    out
}

pub fn parse_orientation<'g>(text: &str, g: &'g Graph) -> Result<Orientation<'g>> {
    let lines: Vec<_> = data_lines(text).collect();
    if lines.len() != g.edge_count() {
        let line = lines.get(g.edge_count()).map_or(lines.len() + 1, |l| l.0);
        return Err(Error::EdgeListMismatch { line });
    }
    let mut forward = Vec::with_capacity(lines.len());
    for (e, &(line, s)) in lines.iter().enumerate() {
        let ab = integers(line, s, 2)?;
        let (u, v) = g.endpoints(e);
        match (ab[0], ab[1]) {
            (a, b) if (a, b) == (u, v) => forward.push(true),
            (a, b) if (a, b) == (v, u) => forward.push(false),
            _ => return Err(Error::EdgeListMismatch { line }),
        }
    }
    Orientation::new(g, forward)
}

pub fn parse_factor<'g>(text: &str, g: &'g Graph) -> Result<Factor<'g>> {
    let lines: Vec<_> = data_lines(text).collect();
    if lines.len() != g.edge_count() {
        let line = lines.get(g.edge_count()).map_or(lines.len() + 1, |l| l.0);
        return Err(Error::EdgeListMismatch { line });
    }
    let mut member = Vec::with_capacity(lines.len());
    for (e, &(line, s)) in lines.iter().enumerate() {
        let vals = integers(line, s, 3)?;
        if (vals[0], vals[1]) != g.endpoints(e) {
            return Err(Error::EdgeListMismatch { line });
        }
        match vals[2] {
            0 => member.push(false),
            1 => member.push(true),
            other => return Err(Error::parse(line, format!("membership flag {other} is not 0 or 1"))),
        }
    }
    Factor::new(g, member)
}
