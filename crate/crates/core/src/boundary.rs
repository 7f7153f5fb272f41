//! Pushing out-degrees to the boundary values `{p, p+1, q-1, q}`.
//!
//! Starting from any `(p, q)`-orientation, each step picks the smallest
//! interior vertex `x` (one with `p+1 < d+(x) < q-1`) and either
//!
//! * reverses a directed path from `x` to a vertex whose out-degree is `p` or
//!   `q-1` (path reversal),
//! * or, when no such vertex is reachable, works inside the out-closed set `S`
//!   reachable from `x`: it turns `x` itself up to `q(x)-1` by reversing
//!   in-edges from `S` (case 1), or reverses a path to some `y` with a surplus
//!   of in-edges inside `S` and then turns `y` up to `q(y)-1` (case 2).
//!
//! The potential, the sum of `d+(v) - p(v)` over interior vertices, drops
//! strictly on every step, so the loop ends after at most that many steps.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bounds::{check_hypotheses, validate_bounds, DegreeBounds};
use crate::error::{Error, Result};
use crate::feasibility::{balanced_orientation, orient_pq_relaxed};
use crate::graph::{EdgeId, Graph, Orientation, VertexId, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Done,
    PathReversal,
    Case1,
    Case2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepOutcome {
    pub kind: StepKind,
    /// The interior vertex acted on.
    pub x: Option<VertexId>,
    /// `v` for a path reversal, `y` for case 2.
    pub partner: Option<VertexId>,
    pub reversed: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub kind: StepKind,
    pub x: VertexId,
    pub partner: Option<VertexId>,
    pub reversed: Vec<EdgeId>,
    pub potential_before: u64,
    pub potential_after: u64,
}

fn is_interior(b: &DegreeBounds, v: VertexId, out: usize) -> bool {
    out > b.lower(v) + 1 && out + 1 < b.upper(v)
}

fn contribution(b: &DegreeBounds, v: VertexId, out: usize) -> u64 {
    if is_interior(b, v, out) {
        (out - b.lower(v)) as u64
    } else {
        0
    }
}

fn check_within(d: &Orientation<'_>, b: &DegreeBounds) -> Result<()> {
    if b.len() != d.graph().vertex_count() {
        return Err(Error::LengthMismatch {
            expected: d.graph().vertex_count(),
            actual: b.len(),
        });
    }
    match (0..b.len()).find(|&v| !b.contains(v, d.out_degree(v))) {
        Some(v) => Err(Error::BoundsViolatedByOrientation {
            vertex: v,
            out_degree: d.out_degree(v),
        }),
        None => Ok(()),
    }
}

/// Vertices with `p(v)+1 < d+(v) < q(v)-1`.
pub fn interior_set(d: &Orientation<'_>, b: &DegreeBounds) -> Result<VertexSet> {
    check_within(d, b)?;
    let n = d.graph().vertex_count();
    VertexSet::from_vertices(n, (0..n).filter(|&v| is_interior(b, v, d.out_degree(v))))
}

/// Sum of `d+(v) - p(v)` over the interior set.
pub fn potential(d: &Orientation<'_>, b: &DegreeBounds) -> Result<u64> {
    check_within(d, b)?;
    Ok((0..b.len())
        .map(|v| contribution(b, v, d.out_degree(v)))
        .sum())
}

/// Reusable BFS buffers; `stamp[v] == epoch` marks `v` as reached.
#[derive(Debug, Clone)]
struct Search {
    stamp: Vec<u32>,
    epoch: u32,
    parent: Vec<EdgeId>,
    order: Vec<VertexId>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            stamp: vec![0; n],
            epoch: 0,
            parent: vec![usize::MAX; n],
            order: Vec::new(),
        }
    }

    fn reached(&self, v: VertexId) -> bool {
        self.stamp[v] == self.epoch
    }

    /// Directed BFS from `root`. Stops at the first newly discovered vertex
    /// accepted by `stop` and returns it; otherwise explores everything
    /// reachable and returns `None`.
    fn run<F>(&mut self, d: &Orientation<'_>, root: VertexId, stop: F) -> Option<VertexId>
    where
        F: Fn(VertexId) -> bool,
    {
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.order.clear();
        self.stamp[root] = self.epoch;
        self.order.push(root);
        let g = d.graph();
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            for &e in g.incident_edges(u) {
                if d.tail(e) != u {
                    continue;
                }
                let w = d.head(e);
                if self.stamp[w] == self.epoch {
                    continue;
                }
                self.stamp[w] = self.epoch;
                self.parent[w] = e;
                self.order.push(w);
                if stop(w) {
                    return Some(w);
                }
            }
        }
        None
    }

    fn path_to(&self, g: &Graph, root: VertexId, v: VertexId) -> Vec<EdgeId> {
        let mut path = Vec::new();
        let mut cur = v;
        while cur != root {
            let e = self.parent[cur];
            path.push(e);
            cur = g.other_endpoint(e, cur);
        }
        path.reverse();
        path
    }

    /// In-edges of `v` whose tails were reached, ascending by id.
    fn in_edges_from_reached(&self, d: &Orientation<'_>, v: VertexId) -> Vec<EdgeId> {
        d.in_edges(v).filter(|&e| self.reached(d.tail(e))).collect()
    }
}

/// Orientation plus the incrementally maintained interior set and potential.
#[derive(Debug, Clone)]
pub struct PushState<'g> {
    orientation: Orientation<'g>,
    interior: BTreeSet<VertexId>,
    contribution: Vec<u64>,
    potential: u64,
    iteration: usize,
    trace: Option<Vec<StepRecord>>,
    search: Search,
}

impl<'g> PushState<'g> {
    /// Requires `p <= d+ <= q` everywhere.
    pub fn new(orientation: Orientation<'g>, b: &DegreeBounds, trace: bool) -> Result<Self> {
        check_within(&orientation, b)?;
        let n = orientation.graph().vertex_count();
        let contribution: Vec<u64> = (0..n)
            .map(|v| contribution(b, v, orientation.out_degree(v)))
            .collect();
        let interior = (0..n).filter(|&v| contribution[v] > 0).collect();
        let potential = contribution.iter().sum();
        Ok(PushState {
            orientation,
            interior,
            contribution,
            potential,
            iteration: 0,
            trace: trace.then(Vec::new),
            search: Search::new(n),
        })
    }

    pub fn orientation(&self) -> &Orientation<'g> {
        &self.orientation
    }

    pub fn into_orientation(self) -> Orientation<'g> {
        self.orientation
    }

    pub fn interior(&self) -> VertexSet {
        let n = self.orientation.graph().vertex_count();
        VertexSet::from_vertices(n, self.interior.iter().copied()).expect("ids in range")
    }

    pub fn potential(&self) -> u64 {
        self.potential
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn trace(&self) -> Option<&[StepRecord]> {
        self.trace.as_deref()
    }

    pub fn take_trace(&mut self) -> Option<Vec<StepRecord>> {
        self.trace.take()
    }

    fn refresh(&mut self, b: &DegreeBounds, v: VertexId) {
        let fresh = contribution(b, v, self.orientation.out_degree(v));
        self.potential = self.potential - self.contribution[v] + fresh;
        self.contribution[v] = fresh;
        if fresh > 0 {
            self.interior.insert(v);
        } else {
            self.interior.remove(&v);
        }
    }

    /// Recomputes interior set and potential from scratch and compares.
    pub fn check_invariants(&self, b: &DegreeBounds) -> Result<()> {
        let d = &self.orientation;
        if !d.is_consistent() {
            return Err(Error::invariant("out-degree cache is stale"));
        }
        check_within(d, b)?;
        let interior: BTreeSet<_> = interior_set(d, b)?.iter().collect();
        if interior != self.interior {
            return Err(Error::invariant("interior set out of sync"));
        }
        if potential(d, b)? != self.potential {
            return Err(Error::invariant("potential out of sync"));
        }
        Ok(())
    }
}

/// Performs one improvement step on `state`.
pub fn push_step(state: &mut PushState<'_>, b: &DegreeBounds) -> Result<StepOutcome> {
    let Some(&x) = state.interior.iter().next() else {
        return Ok(StepOutcome {
            kind: StepKind::Done,
            x: None,
            partner: None,
            reversed: Vec::new(),
        });
    };
    let before = state.potential;
    let g = state.orientation.graph();
    let d = &state.orientation;

    let at_lower_or_below_upper =
        |v: VertexId| d.out_degree(v) == b.lower(v) || d.out_degree(v) + 1 == b.upper(v);
    let target = state.search.run(d, x, at_lower_or_below_upper);

    let (kind, partner, reversed) = if let Some(v) = target {
        let path = state.search.path_to(g, x, v);
        for &e in &path {
            state.orientation.flip(e);
        }
        (StepKind::PathReversal, Some(v), path)
    } else {
        let search = &state.search;
        let reach = &search.order;

        let mut inside_in = vec![0usize; reach.len()];
        let mut in_sum = 0usize;
        let mut out_sum = 0usize;
        for (i, &v) in reach.iter().enumerate() {
            inside_in[i] = d.in_edges(v).filter(|&e| search.reached(d.tail(e))).count();
            in_sum += inside_in[i];
            out_sum += d.out_degree(v);
            if at_lower_or_below_upper(v) {
                return Err(Error::invariant(format!(
                    "vertex {v} reachable from {x} sits at p or q-1"
                )));
            }
        }
        if in_sum != out_sum {
            return Err(Error::invariant(format!(
                "reachable set of {x} is not closed under out-edges"
            )));
        }

        let out_x = d.out_degree(x);
        if inside_in[0] >= out_x {
            let count = b.upper(x) as i64 - 1 - out_x as i64;
            let candidates = search.in_edges_from_reached(d, x);
            if count < 1 || count as usize > candidates.len() {
                return Err(Error::invariant(format!(
                    "case 1 at {x} needs {count} in-edges, {} available",
                    candidates.len()
                )));
            }
            let chosen = candidates[..count as usize].to_vec();
            for &e in &chosen {
                state.orientation.flip(e);
            }
            (StepKind::Case1, None, chosen)
        } else {
            let y = reach
                .iter()
                .zip(&inside_in)
                .skip(1)
                .filter(|&(&v, &inn)| inn > d.out_degree(v))
                .map(|(&v, _)| v)
                .min()
                .ok_or_else(|| {
                    Error::invariant(format!("no surplus vertex in the reachable set of {x}"))
                })?;
            let old_out_y = d.out_degree(y);
            let count = b.upper(y) as i64 - 2 - old_out_y as i64;
            let path = search.path_to(g, x, y);
            for &e in &path {
                state.orientation.flip(e);
            }
            let candidates = state.search.in_edges_from_reached(&state.orientation, y);
            if count < 0 || count as usize > candidates.len() {
                return Err(Error::invariant(format!(
                    "case 2 at {y} needs {count} in-edges, {} available",
                    candidates.len()
                )));
            }
            let mut reversed = path;
            for &e in &candidates[..count as usize] {
                state.orientation.flip(e);
                reversed.push(e);
            }
            (StepKind::Case2, Some(y), reversed)
        }
    };

    let mut touched: Vec<VertexId> = reversed
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.endpoints(e);
            [u, v]
        })
        .collect();
    touched.sort_unstable();
    touched.dedup();
    for &v in &touched {
        let out = state.orientation.out_degree(v);
        if !b.contains(v, out) {
            return Err(Error::invariant(format!(
                "{kind:?} step pushed vertex {v} to out-degree {out}"
            )));
        }
        state.refresh(b, v);
    }
    if state.potential >= before {
        return Err(Error::invariant(format!(
            "{kind:?} step did not lower the potential ({before} -> {})",
            state.potential
        )));
    }
    state.iteration += 1;
    if let Some(trace) = state.trace.as_mut() {
        trace.push(StepRecord {
            kind,
            x,
            partner,
            reversed: reversed.clone(),
            potential_before: before,
            potential_after: state.potential,
        });
    }
    Ok(StepOutcome {
        kind,
        x: Some(x),
        partner,
        reversed,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundaryOptions {
    /// Run even when the hypotheses fail.
    pub force: bool,
    /// Record a [`StepRecord`] per step.
    pub trace: bool,
    /// Recompute all state invariants after every step.
    pub check_every_step: bool,
}

#[derive(Debug, Clone)]
pub struct BoundaryRun<'g> {
    pub orientation: Orientation<'g>,
    pub initial_potential: u64,
    pub steps: usize,
    pub trace: Option<Vec<StepRecord>>,
}

/// Iterates [`push_step`] from `start` until no interior vertex remains.
pub fn improve_to_boundary<'g>(
    start: Orientation<'g>,
    b: &DegreeBounds,
    opts: BoundaryOptions,
) -> Result<BoundaryRun<'g>> {
    let mut state = PushState::new(start, b, opts.trace)?;
    let initial_potential = state.potential();
    loop {
        let outcome = push_step(&mut state, b)?;
        if outcome.kind == StepKind::Done {
            break;
        }
        if opts.check_every_step {
            state.check_invariants(b)?;
        }
        if state.iteration() as u64 > initial_potential {
            return Err(Error::invariant(format!(
                "step count exceeded the initial potential {initial_potential}"
            )));
        }
    }
    let steps = state.iteration();
    let trace = state.take_trace();
    let orientation = state.into_orientation();
    if let Some(v) = (0..b.len()).find(|&v| !b.in_boundary_set(v, orientation.out_degree(v))) {
        return Err(Error::invariant(format!(
            "vertex {v} ended outside its boundary set"
        )));
    }
    Ok(BoundaryRun {
        orientation,
        initial_potential,
        steps,
        trace,
    })
}

/// An orientation with every out-degree in `{p, p+1, q-1, q}`, or
/// [`Error::Infeasible`] when no `(p, q)`-orientation exists.
pub fn orient_boundary<'g>(
    g: &'g Graph,
    b: &DegreeBounds,
    opts: BoundaryOptions,
) -> Result<BoundaryRun<'g>> {
    validate_bounds(g, b)?;
    let report = check_hypotheses(g, b);
    if !report.theorem_ok && !opts.force {
        return Err(Error::HypothesesNotSatisfied {
            vertices: report.theorem_failures(),
        });
    }
    let start = orient_pq_relaxed(g, b)?;
    improve_to_boundary(start, b, opts)
}

/// Same target, starting from a balanced orientation; never infeasible
/// inside the corollary window.
pub fn orient_corollary<'g>(
    g: &'g Graph,
    b: &DegreeBounds,
    opts: BoundaryOptions,
) -> Result<BoundaryRun<'g>> {
    validate_bounds(g, b)?;
    let report = check_hypotheses(g, b);
    if !report.corollary_ok {
        return Err(Error::HypothesesNotSatisfied {
            vertices: report.corollary_failures(),
        });
    }
    let start = balanced_orientation(g);
    if let Err(e) = check_within(&start, b) {
        return Err(Error::invariant(format!(
            "balanced orientation left the corollary window: {e}"
        )));
    }
    improve_to_boundary(start, b, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundsRole;

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn uniform(n: usize, p: usize, q: usize) -> DegreeBounds {
        DegreeBounds::uniform(n, p, q, BoundsRole::Orientation).unwrap()
    }

    /// Regular tournament on K7: i -> i+1, i+2, i+3 (mod 7).
    fn regular_tournament(g: &Graph) -> Orientation<'_> {
        Orientation::from_tails(g, |e| {
            let (u, v) = g.endpoints(e);
            if (v - u) <= 3 {
                u
            } else {
                v
            }
        })
        .unwrap()
    }

    fn star_bounds(leaves: usize) -> (Graph, DegreeBounds) {
        let g = Graph::new(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap();
        let b = DegreeBounds::from_fn(leaves + 1, BoundsRole::Orientation, |v| {
            if v == 0 {
                (1, 6)
            } else {
                (0, 1)
            }
        })
        .unwrap();
        (g, b)
    }

    #[test]
    fn interior_and_potential_of_tournament() {
        let g = complete(7);
        let d = regular_tournament(&g);
        assert!(d.out_degrees().iter().all(|&o| o == 3));
        let b = uniform(7, 1, 6);
        assert_eq!(interior_set(&d, &b).unwrap().len(), 7);
        assert_eq!(potential(&d, &b).unwrap(), 14);
    }

    #[test]
    fn directed_four_cycle_has_no_interior() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let d = Orientation::from_directed_pairs(&g, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = uniform(4, 0, 2);
        assert!(interior_set(&d, &b).unwrap().is_empty());
        assert_eq!(potential(&d, &b).unwrap(), 0);
    }

    #[test]
    fn single_interior_term() {
        let (g, b) = star_bounds(6);
        // Center with out-degree 3 = p + 2.
        let d = Orientation::from_tails(&g, |e| if e < 3 { 0 } else { e + 1 }).unwrap();
        assert_eq!(d.out_degree(0), 3);
        assert_eq!(potential(&d, &b).unwrap(), 2);
    }

    #[test]
    fn out_of_bounds_orientation_is_rejected() {
        let g = complete(3);
        let d = Orientation::all_forward(&g);
        let b = uniform(3, 0, 1);
        assert_eq!(
            interior_set(&d, &b),
            Err(Error::BoundsViolatedByOrientation {
                vertex: 0,
                out_degree: 2
            })
        );
    }

    #[test]
    fn star_center_drops_by_path_reversal() {
        let (g, b) = star_bounds(6);
        let d = Orientation::from_tails(&g, |e| if e < 3 { 0 } else { e + 1 }).unwrap();
        let mut state = PushState::new(d, &b, true).unwrap();
        assert_eq!(state.interior().to_vec(), vec![0]);
        loop {
            let outcome = push_step(&mut state, &b).unwrap();
            if outcome.kind == StepKind::Done {
                break;
            }
            assert_eq!(outcome.kind, StepKind::PathReversal);
        }
        assert_eq!(state.orientation().out_degree(0), 2);
        assert_eq!(state.iteration(), 1);
    }

    #[test]
    fn empty_interior_is_done() {
        let g = complete(3);
        let d = balanced_orientation(&g);
        let b = uniform(3, 0, 2);
        let mut state = PushState::new(d.clone(), &b, false).unwrap();
        let outcome = push_step(&mut state, &b).unwrap();
        assert_eq!(outcome.kind, StepKind::Done);
        assert_eq!(state.orientation(), &d);
    }

    #[test]
    fn tournament_first_step_lowers_potential() {
        let g = complete(7);
        let b = uniform(7, 1, 6);
        let mut state = PushState::new(regular_tournament(&g), &b, true).unwrap();
        assert_eq!(state.potential(), 14);
        let outcome = push_step(&mut state, &b).unwrap();
        assert_ne!(outcome.kind, StepKind::Done);
        assert!(state.potential() <= 13);
        state.check_invariants(&b).unwrap();
    }

    #[test]
    fn tournament_runs_to_the_boundary() {
        let g = complete(7);
        let b = uniform(7, 1, 6);
        let run = improve_to_boundary(
            regular_tournament(&g),
            &b,
            BoundaryOptions {
                trace: true,
                check_every_step: true,
                ..Default::default()
            },
        )
        .unwrap();
        let trace = run.trace.unwrap();
        assert_eq!(trace.len(), run.steps);
        assert!(run.steps as u64 <= run.initial_potential);
        for w in trace.windows(2) {
            assert_eq!(w[0].potential_after, w[1].potential_before);
        }
        for v in 0..7 {
            assert!(b.in_boundary_set(v, run.orientation.out_degree(v)));
        }
    }

    #[test]
    fn k7_boundary_orientation() {
        let g = complete(7);
        let b = uniform(7, 1, 6);
        let run = orient_boundary(&g, &b, BoundaryOptions::default()).unwrap();
        let out = run.orientation.out_degrees();
        assert!(out.iter().all(|o| [1, 2, 5, 6].contains(o)));
        assert_eq!(out.iter().sum::<usize>(), 21);
    }

    #[test]
    fn collapsed_boundary_keeps_first_orientation() {
        let g = complete(3);
        let b = uniform(3, 0, 2);
        let run = orient_boundary(&g, &b, BoundaryOptions::default()).unwrap();
        assert_eq!(run.steps, 0);
    }

    #[test]
    fn invalid_bounds_rejected_before_work() {
        let g = complete(3);
        let b = uniform(3, 0, 0);
        assert!(matches!(
            orient_boundary(&g, &b, BoundaryOptions::default()),
            Err(Error::StrictnessViolated { .. })
        ));
    }

    #[test]
    fn hypotheses_enforced_unless_forced() {
        let g = complete(7);
        let b = uniform(7, 0, 6);
        assert!(matches!(
            orient_boundary(&g, &b, BoundaryOptions::default()),
            Err(Error::HypothesesNotSatisfied { .. })
        ));
        // Forced runs either finish or surface a broken invariant; never loop.
        let forced = orient_boundary(
            &g,
            &b,
            BoundaryOptions {
                force: true,
                ..Default::default()
            },
        );
        match forced {
            Ok(run) => {
                for v in 0..7 {
                    assert!(b.in_boundary_set(v, run.orientation.out_degree(v)));
                }
            }
            Err(e) => assert!(matches!(e, Error::InternalInvariantBroken(_))),
        }
    }

    #[test]
    fn corollary_examples() {
        let g = complete(7);
        let b = uniform(7, 1, 4);
        let run = orient_corollary(&g, &b, BoundaryOptions::default()).unwrap();
        assert!(run.orientation.out_degrees().iter().all(|&o| (1..=4).contains(&o)));
        assert_eq!(run.steps, 0);

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let run = orient_corollary(&c4, &uniform(4, 0, 2), BoundaryOptions::default()).unwrap();
        assert_eq!(run.orientation.out_degrees(), &[1, 1, 1, 1]);

        let k3 = complete(3);
        let run = orient_corollary(&k3, &uniform(3, 0, 2), BoundaryOptions::default()).unwrap();
        assert_eq!(run.orientation.out_degrees(), &[1, 1, 1]);
    }

    #[test]
    fn corollary_window_enforced() {
        let g = complete(7);
        assert!(matches!(
            orient_corollary(&g, &uniform(7, 1, 6), BoundaryOptions::default()),
            Err(Error::HypothesesNotSatisfied { .. })
        ));
    }
}
