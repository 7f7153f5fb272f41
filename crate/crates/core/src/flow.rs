//! Integral maximum flow (Dinic's blocking-flow method) and feasible flows
//! under arc lower bounds.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Capacity large enough to act as "unbounded" without overflowing sums.
pub const UNBOUNDED: u64 = u64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub lower: u64,
    pub upper: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<Arc>,
    source: NodeId,
    sink: NodeId,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: NodeId, sink: NodeId) -> Result<Self> {
        if source >= node_count || sink >= node_count {
            return Err(Error::InvalidNetwork(format!(
                "terminals ({source}, {sink}) out of range for {node_count} nodes"
            )));
        }
        if source == sink {
            return Err(Error::InvalidNetwork("source equals sink".into()));
        }
        Ok(FlowNetwork {
            node_count,
            arcs: Vec::new(),
            source,
            sink,
        })
    }

    /// Appends an arc and returns its id.
    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, lower: u64, upper: u64) -> Result<usize> {
        if tail >= self.node_count || head >= self.node_count {
            return Err(Error::InvalidNetwork(format!(
                "arc ({tail}, {head}) out of range for {} nodes",
                self.node_count
            )));
        }
        if lower > upper {
            return Err(Error::InvalidNetwork(format!(
                "arc ({tail}, {head}) has lower {lower} > upper {upper}"
            )));
        }
        self.arcs.push(Arc {
            tail,
            head,
            lower,
            upper,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }
}

/// Flow value per arc, indexed like [`FlowNetwork::arcs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    pub flow: Vec<u64>,
}

impl FlowAssignment {
    /// Net flow out of the source.
    pub fn value(&self, net: &FlowNetwork) -> i128 {
        -self.excess(net)[net.source]
    }

    fn excess(&self, net: &FlowNetwork) -> Vec<i128> {
        let mut excess = vec![0i128; net.node_count];
        for (arc, &f) in net.arcs.iter().zip(&self.flow) {
            excess[arc.tail] -= f as i128;
            excess[arc.head] += f as i128;
        }
        excess
    }

    /// Checks arc windows and conservation at every non-terminal node.
    pub fn check(&self, net: &FlowNetwork) -> Result<()> {
        if self.flow.len() != net.arcs.len() {
            return Err(Error::invariant("flow length differs from arc count"));
        }
        for (i, (arc, &f)) in net.arcs.iter().zip(&self.flow).enumerate() {
            if f < arc.lower || f > arc.upper {
                return Err(Error::invariant(format!(
                    "arc {i} carries {f} outside [{}, {}]",
                    arc.lower, arc.upper
                )));
            }
        }
        for (v, &ex) in self.excess(net).iter().enumerate() {
            if v != net.source && v != net.sink && ex != 0 {
                return Err(Error::invariant(format!(
                    "conservation fails at node {v} (excess {ex})"
                )));
            }
        }
        Ok(())
    }
}

/// Residual graph for Dinic's algorithm. Residual edge `2i` is the forward
/// copy of input arc `i`, `2i + 1` its reverse.
struct Dinic {
    head: Vec<NodeId>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

const UNREACHED: u32 = u32::MAX;

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![UNREACHED; n],
            cursor: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: NodeId, to: NodeId, cap: u64) -> usize {
        let id = self.head.len();
        self.head.push(to);
        self.cap.push(cap);
        self.adj[from].push(id);
        self.head.push(from);
        self.cap.push(0);
        self.adj[to].push(id + 1);
        id
    }

    fn tail(&self, edge: usize) -> NodeId {
        self.head[edge ^ 1]
    }

    fn build_levels(&mut self, s: NodeId, t: NodeId) -> bool {
        self.level.fill(UNREACHED);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let w = self.head[e];
                if self.cap[e] > 0 && self.level[w] == UNREACHED {
                    self.level[w] = self.level[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != UNREACHED
    }

    /// Saturates a blocking flow in the current level graph.
    fn blocking_flow(&mut self, s: NodeId, t: NodeId, limit: u64) -> u64 {
        self.cursor.fill(0);
        let mut total = 0u64;
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        while total < limit {
            if u == t {
                let bottleneck = path
                    .iter()
                    .map(|&e| self.cap[e])
                    .min()
                    .unwrap_or(0)
                    .min(limit - total);
                for &e in &path {
                    self.cap[e] -= bottleneck;
                    self.cap[e ^ 1] += bottleneck;
                }
                total += bottleneck;
                // Retreat to the tail of the first saturated edge.
                let cut = path
                    .iter()
                    .position(|&e| self.cap[e] == 0)
                    .unwrap_or(path.len());
                path.truncate(cut);
                u = path.last().map_or(s, |&e| self.head[e]);
                continue;
            }
            let mut advanced = false;
            while self.cursor[u] < self.adj[u].len() {
                let e = self.adj[u][self.cursor[u]];
                let w = self.head[e];
                if self.cap[e] > 0 && self.level[w] == self.level[u] + 1 {
                    path.push(e);
                    u = w;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if !advanced {
                // Dead end: prune u from the level graph and back up.
                self.level[u] = UNREACHED;
                match path.pop() {
                    Some(e) => {
                        u = self.tail(e);
                        self.cursor[u] += 1;
                    }
                    None => break,
                }
            }
        }
        total
    }

    fn run(&mut self, s: NodeId, t: NodeId, limit: u64) -> u64 {
        let mut total = 0u64;
        while total < limit && self.build_levels(s, t) {
            let pushed = self.blocking_flow(s, t, limit - total);
            if pushed == 0 {
                break;
            }
            total += pushed;
        }
        total
    }
}

/// Maximum source-sink flow. Every arc must have a zero lower bound.
pub fn max_flow(net: &FlowNetwork) -> Result<(FlowAssignment, u64)> {
    if let Some(i) = net.arcs.iter().position(|a| a.lower > 0) {
        return Err(Error::InvalidNetwork(format!(
            "arc {i} has a positive lower bound; use feasible_flow"
        )));
    }
    let mut dinic = Dinic::new(net.node_count);
    for arc in &net.arcs {
        dinic.add_edge(arc.tail, arc.head, arc.upper);
    }
    let value = dinic.run(net.source, net.sink, u64::MAX);
    let flow = net
        .arcs
        .iter()
        .enumerate()
        .map(|(i, arc)| arc.upper - dinic.cap[2 * i])
        .collect();
    let assignment = FlowAssignment { flow };
    assignment.check(net)?;
    Ok((assignment, value))
}

/// Some flow meeting every arc window with conservation at all non-terminal
/// nodes, or `None` when none exists.
///
/// Lower bounds are shifted into node demands served from an auxiliary
/// source/sink pair, with an unbounded return arc sink -> source.
pub fn feasible_flow(net: &FlowNetwork) -> Result<Option<FlowAssignment>> {
    let n = net.node_count;
    let super_source = n;
    let super_sink = n + 1;
    let mut dinic = Dinic::new(n + 2);
    let mut balance = vec![0i128; n];
    for arc in &net.arcs {
        dinic.add_edge(arc.tail, arc.head, arc.upper - arc.lower);
        balance[arc.head] += arc.lower as i128;
        balance[arc.tail] -= arc.lower as i128;
    }
    dinic.add_edge(net.sink, net.source, UNBOUNDED);
    let mut demand = 0u64;
    for (v, &b) in balance.iter().enumerate() {
        if b > 0 {
            dinic.add_edge(super_source, v, b as u64);
            demand += b as u64;
        } else if b < 0 {
            dinic.add_edge(v, super_sink, (-b) as u64);
        }
    }
    let pushed = dinic.run(super_source, super_sink, demand);
    if pushed < demand {
        return Ok(None);
    }
    let flow = net
        .arcs
        .iter()
        .enumerate()
        .map(|(i, arc)| arc.upper - dinic.cap[2 * i])
        .collect();
    let assignment = FlowAssignment { flow };
    assignment.check(net)?;
    Ok(Some(assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parallel_unit_paths() {
        let mut net = FlowNetwork::new(4, 0, 3).unwrap();
        net.add_arc(0, 1, 0, 1).unwrap();
        net.add_arc(1, 3, 0, 1).unwrap();
        net.add_arc(0, 2, 0, 1).unwrap();
        net.add_arc(2, 3, 0, 1).unwrap();
        let (flow, value) = max_flow(&net).unwrap();
        assert_eq!(value, 2);
        assert_eq!(flow.flow, vec![1, 1, 1, 1]);
    }

    #[test]
    fn zero_bottleneck() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, 0, 1).unwrap();
        net.add_arc(1, 2, 0, 0).unwrap();
        assert_eq!(max_flow(&net).unwrap().1, 0);
    }

    #[test]
    fn no_arcs() {
        let net = FlowNetwork::new(2, 0, 1).unwrap();
        assert_eq!(max_flow(&net).unwrap().1, 0);
    }

    #[test]
    fn max_flow_rejects_lower_bounds() {
        let mut net = FlowNetwork::new(2, 0, 1).unwrap();
        net.add_arc(0, 1, 1, 2).unwrap();
        assert!(matches!(max_flow(&net), Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn invalid_networks() {
        assert!(FlowNetwork::new(2, 0, 0).is_err());
        assert!(FlowNetwork::new(2, 0, 2).is_err());
        let mut net = FlowNetwork::new(2, 0, 1).unwrap();
        assert!(net.add_arc(0, 1, 3, 2).is_err());
        assert!(net.add_arc(0, 5, 0, 2).is_err());
    }

    #[test]
    fn lower_bound_with_return_arc() {
        let mut net = FlowNetwork::new(2, 0, 1).unwrap();
        net.add_arc(0, 1, 2, 3).unwrap();
        net.add_arc(1, 0, 0, UNBOUNDED).unwrap();
        let flow = feasible_flow(&net).unwrap().expect("feasible");
        assert!((2..=3).contains(&flow.flow[0]));
        assert_eq!(flow.flow[0], flow.flow[1]);
    }

    #[test]
    fn conflicting_mandatory_arcs_are_infeasible() {
        // Terminals are 2 and 3 so that a and b must conserve flow.
        let (a, b) = (0, 1);
        let mut net = FlowNetwork::new(4, 2, 3).unwrap();
        net.add_arc(a, b, 2, 3).unwrap();
        net.add_arc(b, a, 5, 5).unwrap();
        assert_eq!(feasible_flow(&net).unwrap(), None);
    }

    #[test]
    fn zero_lower_bounds_are_always_feasible() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, 0, 4).unwrap();
        net.add_arc(1, 2, 0, 1).unwrap();
        assert!(feasible_flow(&net).unwrap().is_some());
    }

    fn min_cut_by_enumeration(net: &FlowNetwork) -> u64 {
        let n = net.node_count();
        let mut best = u64::MAX;
        for mask in 0u32..(1 << n) {
            let in_s = |v: usize| mask >> v & 1 == 1;
            if !in_s(net.source()) || in_s(net.sink()) {
                continue;
            }
            let cut: u64 = net
                .arcs()
                .iter()
                .filter(|a| in_s(a.tail) && !in_s(a.head))
                .map(|a| a.upper)
                .sum();
            best = best.min(cut);
        }
        best
    }

    fn arb_network() -> impl Strategy<Value = FlowNetwork> {
        (2usize..=10).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, 0u64..6), 0..30).prop_map(move |arcs| {
                let mut net = FlowNetwork::new(n, 0, n - 1).unwrap();
                for (u, v, c) in arcs {
                    net.add_arc(u, v, 0, c).unwrap();
                }
                net
            })
        })
    }

    proptest! {
        #[test]
        fn max_flow_equals_min_cut(net in arb_network()) {
            let (flow, value) = max_flow(&net).unwrap();
            flow.check(&net).unwrap();
            prop_assert_eq!(flow.value(&net), value as i128);
            prop_assert_eq!(value, min_cut_by_enumeration(&net));
        }

        #[test]
        fn feasible_flow_respects_windows(
            n in 3usize..=7,
            arcs in prop::collection::vec((0usize..7, 0usize..7, 0u64..3, 0u64..4), 0..20),
        ) {
            let mut net = FlowNetwork::new(n, 0, n - 1).unwrap();
            for (u, v, lo, extra) in arcs {
                net.add_arc(u % n, v % n, lo, lo + extra).unwrap();
            }
            if let Some(flow) = feasible_flow(&net).unwrap() {
                flow.check(&net).unwrap();
            }
        }
    }
}
