//! Undirected simple graphs, vertex sets, bipartitions and orientations.
//!
//! Edge ids are positions in the input edge list and never change. Every
//! traversal visits incident edges in ascending edge-id order, which is the
//! single tie-breaking rule the rest of the crate builds on.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// An undirected simple graph with stable edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    incidence: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph from raw vertex pairs. Each pair is stored as `(min, max)`.
    pub fn new<I>(n: usize, raw_edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges = Vec::new();
        let mut incidence = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (a, b) in raw_edges {
            for vertex in [a, b] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            let pair = (a.min(b), a.max(b));
            if !seen.insert(pair) {
                return Err(Error::DuplicateEdge(pair.0, pair.1));
            }
            let id = edges.len();
            edges.push(pair);
            incidence[pair.0].push(id);
            incidence[pair.1].push(id);
        }
        Ok(Graph { n, edges, incidence })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            incidence: vec![Vec::new(); n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(u, v)` pairs with `u < v`, indexed by edge id.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    /// Incident edge ids of `v` in ascending order.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incidence[v]
            .iter()
            .map(move |&e| self.other_endpoint(e, v))
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| s.contains(u) && s.contains(v))
            .count()
    }

    /// Two-colors the graph by breadth-first layering. The smallest vertex of
    /// each component lands on side X. Fails with an odd cycle otherwise.
    pub fn bipartition(&self) -> Result<Bipartition> {
        let mut side: Vec<Option<Side>> = vec![None; self.n];
        let mut parent: Vec<Option<EdgeId>> = vec![None; self.n];
        let mut depth = vec![0usize; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(Side::X);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &e in &self.incidence[u] {
                    let w = self.other_endpoint(e, u);
                    match side[w] {
                        None => {
                            side[w] = Some(su.opposite());
                            parent[w] = Some(e);
                            depth[w] = depth[u] + 1;
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => {
                            return Err(Error::NotBipartite {
                                cycle: self.odd_cycle(e, u, w, &parent, &depth),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(Bipartition {
            side: side.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Closes the BFS-tree paths from `u` and `w` with the conflict edge.
    fn odd_cycle(
        &self,
        closing: EdgeId,
        u: VertexId,
        w: VertexId,
        parent: &[Option<EdgeId>],
        depth: &[usize],
    ) -> Vec<EdgeId> {
        let (mut a, mut b) = (u, w);
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let e = parent[a].expect("non-root vertex has a parent");
                from_a.push(e);
                a = self.other_endpoint(e, a);
            } else {
                let e = parent[b].expect("non-root vertex has a parent");
                from_b.push(e);
                b = self.other_endpoint(e, b);
            }
        }
        // u -> ... -> lca -> ... -> w -> u
        let mut cycle = from_a;
        cycle.extend(from_b.into_iter().rev());
        cycle.push(closing);
        cycle
    }
}

/// A subset of the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    member: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            member: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            member: vec![true; n],
            len: n,
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(n: usize, vertices: I) -> Result<Self> {
        let mut set = VertexSet::new(n);
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            set.insert(v);
        }
        Ok(set)
    }

    /// Vertices whose bit is set in `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut set = VertexSet::new(n);
        for v in 0..n.min(64) {
            if mask >> v & 1 == 1 {
                set.insert(v);
            }
        }
        set
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.member[v];
        if fresh {
            self.member[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Capacity, i.e. the vertex count of the associated graph.
    pub fn universe(&self) -> usize {
        self.member.len()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<Side>,
}

impl Bipartition {
    /// Checks that every edge of `g` crosses the given labeling.
    pub fn new(g: &Graph, side: Vec<Side>) -> Result<Self> {
        if side.len() != g.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: g.vertex_count(),
                actual: side.len(),
            });
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if side[u] == side[v] {
                return Err(Error::NotBipartite { cycle: vec![e] });
            }
        }
        Ok(Bipartition { side })
    }

    pub fn side(&self, v: VertexId) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            side: self.side.iter().map(|s| s.opposite()).collect(),
        }
    }

    pub fn x_side(&self) -> VertexSet {
        let mut set = VertexSet::new(self.side.len());
        for (v, &s) in self.side.iter().enumerate() {
            if s == Side::X {
                set.insert(v);
            }
        }
        set
    }

    pub fn y_side(&self) -> VertexSet {
        let mut set = VertexSet::new(self.side.len());
        for (v, &s) in self.side.iter().enumerate() {
            if s == Side::Y {
                set.insert(v);
            }
        }
        set
    }
}

/// A direction for every edge of a graph, with cached out-degrees.
///
/// `forward[e]` is true when edge `e = (u, v)` (with `u < v`) points `u -> v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation<'g> {
    graph: &'g Graph,
    forward: Vec<bool>,
    out_degree: Vec<usize>,
}

impl<'g> Orientation<'g> {
    pub fn new(graph: &'g Graph, forward: Vec<bool>) -> Result<Self> {
        if forward.len() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                actual: forward.len(),
            });
        }
        let mut out_degree = vec![0; graph.vertex_count()];
        for (e, &f) in forward.iter().enumerate() {
            let (u, v) = graph.endpoints(e);
            out_degree[if f { u } else { v }] += 1;
        }
        Ok(Orientation {
            graph,
            forward,
            out_degree,
        })
    }

    /// Every edge directed from its smaller endpoint to its larger one.
    pub fn all_forward(graph: &'g Graph) -> Self {
        Orientation::new(graph, vec![true; graph.edge_count()]).expect("lengths agree")
    }

    /// Orients each edge out of the vertex chosen by `tail`.
    pub fn from_tails<F>(graph: &'g Graph, mut tail: F) -> Result<Self>
    where
        F: FnMut(EdgeId) -> VertexId,
    {
        let mut forward = Vec::with_capacity(graph.edge_count());
        for e in 0..graph.edge_count() {
            let (u, v) = graph.endpoints(e);
            let t = tail(e);
            if t != u && t != v {
                return Err(Error::invariant(format!(
                    "vertex {t} is not an endpoint of edge {e}"
                )));
            }
            forward.push(t == u);
        }
        Orientation::new(graph, forward)
    }

    /// Builds an orientation from directed `(tail, head)` pairs listed in edge order.
    pub fn from_directed_pairs(graph: &'g Graph, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        if pairs.len() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                actual: pairs.len(),
            });
        }
        let mut forward = Vec::with_capacity(pairs.len());
        for (e, &(a, b)) in pairs.iter().enumerate() {
            let (u, v) = graph.endpoints(e);
            if (a, b) == (u, v) {
                forward.push(true);
            } else if (a, b) == (v, u) {
                forward.push(false);
            } else {
                return Err(Error::EdgeListMismatch { line: e + 1 });
            }
        }
        Orientation::new(graph, forward)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn is_forward(&self, e: EdgeId) -> bool {
        self.forward[e]
    }

    pub fn directions(&self) -> &[bool] {
        &self.forward
    }

    pub fn tail(&self, e: EdgeId) -> VertexId {
        let (u, v) = self.graph.endpoints(e);
        if self.forward[e] {
            u
        } else {
            v
        }
    }

    pub fn head(&self, e: EdgeId) -> VertexId {
        let (u, v) = self.graph.endpoints(e);
        if self.forward[e] {
            v
        } else {
            u
        }
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_degree[v]
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.graph.degree(v) - self.out_degree[v]
    }

    pub fn out_degrees(&self) -> &[usize] {
        &self.out_degree
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.graph
            .incident_edges(v)
            .iter()
            .copied()
            .filter(move |&e| self.tail(e) == v)
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.graph
            .incident_edges(v)
            .iter()
            .copied()
            .filter(move |&e| self.head(e) == v)
    }

    /// `(tail, head)` per edge, in edge-id order.
    pub fn directed_pairs(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.graph.edge_count())
            .map(|e| (self.tail(e), self.head(e)))
            .collect()
    }

    /// Flips every listed edge. Ids must be in range and pairwise distinct;
    /// on error the orientation is left untouched.
    pub fn reverse_edges(&mut self, edge_ids: &[EdgeId]) -> Result<()> {
        let m = self.graph.edge_count();
        let mut seen = HashSet::with_capacity(edge_ids.len());
        for &e in edge_ids {
            if e >= m {
                return Err(Error::EdgeOutOfRange { edge: e, m });
            }
            if !seen.insert(e) {
                return Err(Error::DuplicateEdgeId(e));
            }
        }
        for &e in edge_ids {
            self.flip(e);
        }
        Ok(())
    }

    pub(crate) fn flip(&mut self, e: EdgeId) {
        let old_tail = self.tail(e);
        let old_head = self.head(e);
        self.forward[e] = !self.forward[e];
        self.out_degree[old_tail] -= 1;
        self.out_degree[old_head] += 1;
    }

    /// Every vertex reachable from `x` along directed edges, with a BFS
    /// in-tree of parent edges.
    pub fn reachable_set(&self, x: VertexId) -> Reach {
        let n = self.graph.vertex_count();
        let mut set = VertexSet::new(n);
        let mut parent = vec![None; n];
        let mut queue = VecDeque::new();
        set.insert(x);
        queue.push_back(x);
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(u) {
                let w = self.head(e);
                if set.insert(w) {
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        Reach {
            root: x,
            set,
            parent,
        }
    }

    /// Edges inside `s` directed toward `v`.
    pub fn induced_in_degree(&self, s: &VertexSet, v: VertexId) -> Result<usize> {
        if !s.contains(v) {
            return Err(Error::VertexNotInSet(v));
        }
        Ok(self.in_edges(v).filter(|&e| s.contains(self.tail(e))).count())
    }

    /// Recounts out-degrees from the direction flags and compares with the cache.
    pub fn is_consistent(&self) -> bool {
        Orientation::new(self.graph, self.forward.clone())
            .map(|fresh| fresh.out_degree == self.out_degree)
            .unwrap_or(false)
    }
}

/// Result of a directed reachability search.
#[derive(Debug, Clone)]
pub struct Reach {
    pub root: VertexId,
    pub set: VertexSet,
    /// Edge through which each reached vertex (other than the root) was discovered.
    pub parent: Vec<Option<EdgeId>>,
}

impl Reach {
    /// Edge ids of the tree path from the root to `v`, root side first.
    pub fn path_to(&self, g: &Graph, v: VertexId) -> Option<Vec<EdgeId>> {
        if !self.set.contains(v) {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = v;
        while cur != self.root {
            let e = self.parent[cur]?;
            path.push(e);
            cur = g.other_endpoint(e, cur);
        }
        path.reverse();
        Some(path)
    }
}
