//! Factors of bipartite graphs through the orientation correspondence.
//!
//! With sides `(X, Y)`, the edges directed from X to Y form a factor `F`
//! with `d_F(v) = d+(v)` on X and `d_F(v) = d(v) - d+(v)` on Y, and every
//! factor arises from exactly one orientation this way.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::boundary::{orient_boundary, BoundaryOptions, StepRecord};
use crate::bounds::{BoundsRole, DegreeBounds};
use crate::error::{Error, Result};
use crate::feasibility::{balanced_orientation, orient_pq_relaxed};
use crate::graph::{Bipartition, EdgeId, Graph, Orientation, Side, VertexId};

/// An edge subset with its degree table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor<'g> {
    graph: &'g Graph,
    member: Vec<bool>,
    degree: Vec<usize>,
}

impl<'g> Factor<'g> {
    pub fn new(graph: &'g Graph, member: Vec<bool>) -> Result<Self> {
        if member.len() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                actual: member.len(),
            });
        }
        let mut degree = vec![0; graph.vertex_count()];
        for (e, _) in member.iter().enumerate().filter(|(_, &m)| m) {
            let (u, v) = graph.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        Ok(Factor {
            graph,
            member,
            degree,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.member[e]
    }

    pub fn membership(&self) -> &[bool] {
        &self.member
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(e, &m)| m.then_some(e))
    }

    pub fn size(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }
}

/// Admissible degrees per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeListFunction {
    lists: Vec<BTreeSet<usize>>,
}

impl DegreeListFunction {
    pub fn new(lists: Vec<BTreeSet<usize>>) -> Self {
        DegreeListFunction { lists }
    }

    pub fn from_vecs<I, L>(lists: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: IntoIterator<Item = usize>,
    {
        DegreeListFunction {
            lists: lists.into_iter().map(|l| l.into_iter().collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: VertexId) -> &BTreeSet<usize> {
        &self.lists[v]
    }

    pub fn admits(&self, v: VertexId, degree: usize) -> bool {
        self.lists[v].contains(&degree)
    }
}

/// Keeps X lists, mirrors Y lists through `i -> d(v) - i`; values outside
/// `[0, d(v)]` are dropped.
pub fn transform_lists(g: &Graph, part: &Bipartition, lists: &DegreeListFunction) -> DegreeListFunction {
    let lists = (0..g.vertex_count())
        .map(|v| {
            let d = g.degree(v);
            let in_range = lists.list(v).iter().copied().filter(|&i| i <= d);
            match part.side(v) {
                Side::X => in_range.collect(),
                Side::Y => in_range.map(|i| d - i).collect(),
            }
        })
        .collect();
    DegreeListFunction { lists }
}

fn x_endpoint(g: &Graph, part: &Bipartition, e: EdgeId) -> VertexId {
    let (u, v) = g.endpoints(e);
    if part.side(u) == Side::X {
        u
    } else {
        v
    }
}

/// The factor of edges directed from X to Y.
pub fn orientation_to_factor<'g>(part: &Bipartition, d: &Orientation<'g>) -> Factor<'g> {
    let g = d.graph();
    let member = (0..g.edge_count())
        .map(|e| d.tail(e) == x_endpoint(g, part, e))
        .collect();
    let f = Factor::new(g, member).expect("one flag per edge");
    debug_assert!((0..g.vertex_count()).all(|v| f.degree(v) == factor_degree(g, part, d, v)));
    f
}

/// `d+(v)` on X, `d(v) - d+(v)` on Y.
pub fn factor_degree(g: &Graph, part: &Bipartition, d: &Orientation<'_>, v: VertexId) -> usize {
    match part.side(v) {
        Side::X => d.out_degree(v),
        Side::Y => g.degree(v) - d.out_degree(v),
    }
}

/// Factor edges go X -> Y, all others Y -> X.
pub fn factor_to_orientation<'g>(part: &Bipartition, f: &Factor<'g>) -> Orientation<'g> {
    let g = f.graph();
    Orientation::from_tails(g, |e| {
        let x = x_endpoint(g, part, e);
        if f.contains(e) {
            x
        } else {
            g.other_endpoint(e, x)
        }
    })
    .expect("tails are endpoints")
}

/// Orientation bounds equivalent to factor bounds `(g, f)`: unchanged on X,
/// `(d - f, d - g)` on Y. Requires `f <= d`.
pub fn orientation_bounds(g: &Graph, part: &Bipartition, b: &DegreeBounds) -> Result<DegreeBounds> {
    b.check_range(g)?;
    DegreeBounds::from_fn(g.vertex_count(), BoundsRole::Orientation, |v| {
        let d = g.degree(v);
        match part.side(v) {
            Side::X => (b.lower(v), b.upper(v)),
            Side::Y => (d - b.upper(v), d - b.lower(v)),
        }
    })
}

/// Side-sensitive hypotheses for boundary factors, in scaled integers:
/// on X `2f >= d` and `2g >= f - 4`; on Y `2g <= d` and `2f <= d + g + 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorHypothesisReport {
    pub per_vertex: Vec<bool>,
    pub all_ok: bool,
}

impl FactorHypothesisReport {
    pub fn failures(&self) -> Vec<VertexId> {
        (0..self.per_vertex.len())
            .filter(|&v| !self.per_vertex[v])
            .collect()
    }
}

pub fn check_factor_hypotheses(g: &Graph, part: &Bipartition, b: &DegreeBounds) -> FactorHypothesisReport {
    let per_vertex: Vec<bool> = (0..g.vertex_count())
        .map(|v| {
            let d = g.degree(v) as i64;
            let lo = b.lower(v) as i64;
            let hi = b.upper(v) as i64;
            match part.side(v) {
                Side::X => 2 * hi >= d && 2 * lo >= hi - 4,
                Side::Y => 2 * lo <= d && 2 * hi <= d + lo + 4,
            }
        })
        .collect();
    let all_ok = per_vertex.iter().all(|&ok| ok);
    FactorHypothesisReport { per_vertex, all_ok }
}

/// A `(g, f)`-factor using the given sides.
pub fn factor_gf_with<'g>(
    g: &'g Graph,
    part: &Bipartition,
    b: &DegreeBounds,
) -> Result<Factor<'g>> {
    let oriented = orientation_bounds(g, part, b)?;
    let d = orient_pq_relaxed(g, &oriented)?;
    let f = orientation_to_factor(part, &d);
    if let Some(v) = (0..g.vertex_count()).find(|&v| !b.contains(v, f.degree(v))) {
        return Err(Error::invariant(format!("factor degree out of range at {v}")));
    }
    Ok(f)
}

/// A `(g, f)`-factor of a bipartite graph, sides from [`Graph::bipartition`].
pub fn factor_gf<'g>(g: &'g Graph, b: &DegreeBounds) -> Result<Factor<'g>> {
    let part = g.bipartition()?;
    factor_gf_with(g, &part, b)
}

#[derive(Debug, Clone)]
pub struct FactorRun<'g> {
    pub factor: Factor<'g>,
    pub steps: usize,
    pub trace: Option<Vec<StepRecord>>,
}

/// A factor with every degree in `{g, g+1, f-1, f}` using the given sides.
pub fn factor_boundary_with<'g>(
    g: &'g Graph,
    part: &Bipartition,
    b: &DegreeBounds,
    opts: BoundaryOptions,
) -> Result<FactorRun<'g>> {
    b.check_range(g)?;
    b.check_strict(g)?;
    let report = check_factor_hypotheses(g, part, b);
    if !report.all_ok && !opts.force {
        return Err(Error::HypothesesNotSatisfied {
            vertices: report.failures(),
        });
    }
    let oriented = orientation_bounds(g, part, b)?;
    let run = orient_boundary(
        g,
        &oriented,
        BoundaryOptions {
            force: true,
            ..opts
        },
    )?;
    let factor = orientation_to_factor(part, &run.orientation);
    if let Some(v) = (0..g.vertex_count()).find(|&v| !b.in_boundary_set(v, factor.degree(v))) {
        return Err(Error::invariant(format!(
            "factor degree at {v} outside its boundary set"
        )));
    }
    Ok(FactorRun {
        factor,
        steps: run.steps,
        trace: run.trace,
    })
}

pub fn factor_boundary<'g>(
    g: &'g Graph,
    b: &DegreeBounds,
    opts: BoundaryOptions,
) -> Result<FactorRun<'g>> {
    let part = g.bipartition()?;
    factor_boundary_with(g, &part, b, opts)
}

/// A factor with `floor(d/2) <= d_F(v) <= ceil(d/2)` at every vertex.
pub fn near_half_factor(g: &Graph) -> Result<Factor<'_>> {
    let part = g.bipartition()?;
    Ok(orientation_to_factor(&part, &balanced_orientation(g)))
}
