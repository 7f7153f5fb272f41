//! Deciding and constructing `(p, q)`-orientations, plus balanced orientations.

use crate::bounds::{validate_bounds, DegreeBounds};
use crate::error::{Error, Result};
use crate::flow::{feasible_flow, FlowNetwork};
use crate::graph::{EdgeId, Graph, Orientation, VertexId, VertexSet};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetVerdict {
    Feasible,
    /// The first subset, in ascending mask order, with
    /// `e(S) > min(sum_S q, sum_S (d - p))`.
    Violating(VertexSet),
}

impl SubsetVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SubsetVerdict::Feasible)
    }
}

/// Exhaustive subset test of the Frank–Gyárfás condition.
///
/// Only `p <= q` is assumed, so bounds above the degree are allowed here.
pub fn frank_gyarfas_check(g: &Graph, b: &DegreeBounds, cap: usize) -> Result<SubsetVerdict> {
    let n = g.vertex_count();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    if n > cap.min(63) {
        return Err(Error::TooLargeForExhaustive { n, cap });
    }
    let adjacency: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).fold(0u64, |acc, w| acc | 1 << w))
        .collect();
    for mask in 0u64..(1u64 << n) {
        let mut twice_inside = 0u64;
        let mut upper_sum = 0u64;
        let mut slack_sum = 0i64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_inside += (adjacency[v] & mask).count_ones() as u64;
            upper_sum += b.upper(v) as u64;
            slack_sum += g.degree(v) as i64 - b.lower(v) as i64;
        }
        let inside = (twice_inside / 2) as i64;
        if inside > (upper_sum as i64).min(slack_sum) {
            return Ok(SubsetVerdict::Violating(VertexSet::from_mask(n, mask)));
        }
    }
    Ok(SubsetVerdict::Feasible)
}

/// A `(p, q)`-orientation after full bounds validation.
pub fn orient_pq<'g>(g: &'g Graph, b: &DegreeBounds) -> Result<Orientation<'g>> {
    validate_bounds(g, b)?;
    orient_pq_relaxed(g, b)
}

/// A `(p, q)`-orientation assuming only `p <= q`; returns
/// [`Error::Infeasible`] when none exists.
///
/// Network: source -> one node per edge (exactly one unit), edge node -> each
/// endpoint (at most one unit), vertex node -> sink within `[p(v), q(v)]`. The
/// endpoint that absorbs an edge's unit becomes its tail.
pub fn orient_pq_relaxed<'g>(g: &'g Graph, b: &DegreeBounds) -> Result<Orientation<'g>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    let source = 0;
    let sink = 1;
    let edge_node = |e: EdgeId| 2 + e;
    let vertex_node = |v: VertexId| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + n, source, sink)?;
    let mut to_smaller = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(source, edge_node(e), 1, 1)?;
        to_smaller.push(net.add_arc(edge_node(e), vertex_node(u), 0, 1)?);
        net.add_arc(edge_node(e), vertex_node(v), 0, 1)?;
    }
    for v in 0..n {
        net.add_arc(vertex_node(v), sink, b.lower(v) as u64, b.upper(v) as u64)?;
    }
    let flow = feasible_flow(&net)?.ok_or(Error::Infeasible)?;
    let forward = to_smaller.iter().map(|&arc| flow.flow[arc] == 1).collect();
    let d = Orientation::new(g, forward)?;
    if let Some(v) = (0..n).find(|&v| !b.contains(v, d.out_degree(v))) {
        return Err(Error::invariant(format!(
            "flow orientation violates bounds at vertex {v}"
        )));
    }
    Ok(d)
}

/// An orientation with `|d+(v) - d-(v)| <= 1` everywhere.
///
/// Odd-degree vertices are joined to one auxiliary vertex; every component of
/// the augmented graph is then Eulerian and each edge takes the direction in
/// which an Euler circuit traverses it.
pub fn balanced_orientation(g: &Graph) -> Orientation<'_> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let aux = n;
    let mut ends: Vec<(VertexId, VertexId)> = g.edges().to_vec();
    let mut adjacency: Vec<Vec<EdgeId>> = (0..n).map(|v| g.incident_edges(v).to_vec()).collect();
    adjacency.push(Vec::new());
    for v in 0..n {
        if g.degree(v) % 2 == 1 {
            let id = ends.len();
            ends.push((v, aux));
            adjacency[v].push(id);
            adjacency[aux].push(id);
        }
    }
    let other = |e: EdgeId, v: VertexId| {
        let (a, b) = ends[e];
        if a == v {
            b
        } else {
            a
        }
    };

    let mut forward = vec![true; m];
    let mut used = vec![false; ends.len()];
    let mut cursor = vec![0usize; n + 1];
    for start in 0..=n {
        for (e, from, to) in euler_circuit(start, &adjacency, &other, &mut used, &mut cursor) {
            if e < m {
                forward[e] = from < to;
            }
        }
    }
    Orientation::new(g, forward).expect("one direction per edge")
}

/// Hierholzer's algorithm from `start` over unused edges. Returns the circuit
/// as `(edge, from, to)` steps in walk order.
fn euler_circuit<F>(
    start: VertexId,
    adjacency: &[Vec<EdgeId>],
    other: &F,
    used: &mut [bool],
    cursor: &mut [usize],
) -> Vec<(EdgeId, VertexId, VertexId)>
where
    F: Fn(EdgeId, VertexId) -> VertexId,
{
    let mut circuit = Vec::new();
    let mut stack: Vec<(VertexId, Option<(EdgeId, VertexId)>)> = vec![(start, None)];
    while let Some(&(v, _)) = stack.last() {
        while cursor[v] < adjacency[v].len() && used[adjacency[v][cursor[v]]] {
            cursor[v] += 1;
        }
        if let Some(&e) = adjacency[v].get(cursor[v]) {
            used[e] = true;
            stack.push((other(e, v), Some((e, v))));
        } else {
            let (v, via) = stack.pop().expect("stack is non-empty");
            if let Some((e, from)) = via {
                circuit.push((e, from, v));
            }
        }
    }
    circuit.reverse();
    circuit
}
