//! Brute-force ground truth by enumerating direction masks or edge subsets,
//! and a harness that compares every decision route on one instance.
//!
//! Bit `e` of a mask is edge `e`: set means "directed smaller -> larger" for
//! orientations and "in the factor" for factors. Witnesses are the smallest
//! accepted mask. The search fixes edges from the highest id down and tries
//! 0 before 1, which visits masks in ascending numeric order while letting
//! per-vertex checks prune whole subtrees.

use serde::Serialize;

use crate::boundary::{orient_boundary, BoundaryOptions};
use crate::bounds::{check_hypotheses, validate_bounds, DegreeBounds};
use crate::error::{Error, Result};
use crate::factor::{
    check_factor_hypotheses, factor_boundary_with, factor_gf_with, orientation_bounds,
    DegreeListFunction, Factor,
};
use crate::feasibility::{frank_gyarfas_check, orient_pq_relaxed, DEFAULT_EXHAUSTIVE_CAP};
use crate::graph::{Bipartition, Graph, Orientation, VertexId};

pub const DEFAULT_ENUMERATION_CAP: usize = 22;

/// Per-vertex acceptance test on a final degree.
#[derive(Clone, Copy)]
pub enum DegreePredicate<'a> {
    /// `p(v) <= deg <= q(v)`
    Interval(&'a DegreeBounds),
    /// `deg` in `{p, p+1, q-1, q}`
    Boundary(&'a DegreeBounds),
    Lists(&'a DegreeListFunction),
    Custom(&'a dyn Fn(VertexId, usize) -> bool),
}

impl DegreePredicate<'_> {
    pub fn accepts(&self, v: VertexId, degree: usize) -> bool {
        match self {
            DegreePredicate::Interval(b) => b.contains(v, degree),
            DegreePredicate::Boundary(b) => b.in_boundary_set(v, degree),
            DegreePredicate::Lists(l) => l.admits(v, degree),
            DegreePredicate::Custom(f) => f(v, degree),
        }
    }

    /// `[min, max]` of acceptable degrees, when the predicate has a finite range.
    fn range(&self, v: VertexId) -> Option<(usize, usize)> {
        match self {
            DegreePredicate::Interval(b) | DegreePredicate::Boundary(b) => {
                Some((b.lower(v), b.upper(v)))
            }
            DegreePredicate::Lists(l) => {
                let list = l.list(v);
                match (list.first(), list.last()) {
                    (Some(&lo), Some(&hi)) => Some((lo, hi)),
                    _ => Some((1, 0)),
                }
            }
            DegreePredicate::Custom(_) => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Orientation,
    Factor,
}

struct Enumerator<'a> {
    g: &'a Graph,
    pred: DegreePredicate<'a>,
    mode: Mode,
    ranges: Vec<Option<(usize, usize)>>,
    count: Vec<usize>,
    remaining: Vec<usize>,
    bits: Vec<bool>,
    found: u64,
    stop_at_first: bool,
}

impl<'a> Enumerator<'a> {
    fn new(g: &'a Graph, pred: DegreePredicate<'a>, mode: Mode, stop_at_first: bool) -> Self {
        let n = g.vertex_count();
        Enumerator {
            g,
            pred,
            mode,
            ranges: (0..n).map(|v| pred.range(v)).collect(),
            count: vec![0; n],
            remaining: g.degrees(),
            bits: vec![false; g.edge_count()],
            found: 0,
            stop_at_first,
        }
    }

    /// Checks vertex `v` after its tally changed or an incident edge was fixed.
    fn viable(&self, v: VertexId) -> bool {
        let c = self.count[v];
        if self.remaining[v] == 0 {
            return self.pred.accepts(v, c);
        }
        match self.ranges[v] {
            Some((lo, hi)) => c <= hi && c + self.remaining[v] >= lo,
            None => true,
        }
    }

    fn credited(&self, e: usize, bit: bool) -> ([VertexId; 2], usize) {
        let (u, v) = self.g.endpoints(e);
        match (self.mode, bit) {
            (Mode::Orientation, true) => ([u, u], 1),
            (Mode::Orientation, false) => ([v, v], 1),
            (Mode::Factor, true) => ([u, v], 2),
            (Mode::Factor, false) => ([u, v], 0),
        }
    }

    /// Returns true to abort the search.
    fn descend(&mut self, level: usize) -> bool {
        if level == 0 {
            self.found += 1;
            return self.stop_at_first;
        }
        let e = level - 1;
        let (u, v) = self.g.endpoints(e);
        self.remaining[u] -= 1;
        self.remaining[v] -= 1;
        for bit in [false, true] {
            let (who, k) = self.credited(e, bit);
            for &w in &who[..k] {
                self.count[w] += 1;
            }
            self.bits[e] = bit;
            if self.viable(u) && self.viable(v) && self.descend(e) {
                return true;
            }
            for &w in &who[..k] {
                self.count[w] -= 1;
            }
        }
        self.remaining[u] += 1;
        self.remaining[v] += 1;
        false
    }

    fn run(&mut self) -> bool {
        let m = self.g.edge_count();
        let isolated_ok = (0..self.g.vertex_count())
            .filter(|&v| self.g.degree(v) == 0)
            .all(|v| self.pred.accepts(v, 0));
        isolated_ok && self.descend(m)
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    let m = g.edge_count();
    if m > cap.min(63) {
        return Err(Error::TooLargeForEnumeration { m, cap });
    }
    Ok(())
}

/// The smallest-mask orientation whose out-degrees all pass `pred`.
pub fn enum_orientations<'g>(
    g: &'g Graph,
    pred: DegreePredicate<'_>,
    cap: usize,
) -> Result<Option<Orientation<'g>>> {
    check_cap(g, cap)?;
    let mut en = Enumerator::new(g, pred, Mode::Orientation, true);
    if en.run() {
        Ok(Some(Orientation::new(g, en.bits)?))
    } else {
        Ok(None)
    }
}

/// The smallest-mask edge subset whose degrees all pass `pred`.
pub fn enum_factors<'g>(
    g: &'g Graph,
    pred: DegreePredicate<'_>,
    cap: usize,
) -> Result<Option<Factor<'g>>> {
    check_cap(g, cap)?;
    let mut en = Enumerator::new(g, pred, Mode::Factor, true);
    if en.run() {
        Ok(Some(Factor::new(g, en.bits)?))
    } else {
        Ok(None)
    }
}

/// Number of accepted orientations.
pub fn count_orientations(g: &Graph, pred: DegreePredicate<'_>, cap: usize) -> Result<u64> {
    check_cap(g, cap)?;
    let mut en = Enumerator::new(g, pred, Mode::Orientation, false);
    en.run();
    Ok(en.found)
}

/// Number of accepted edge subsets.
pub fn count_factors(g: &Graph, pred: DegreePredicate<'_>, cap: usize) -> Result<u64> {
    check_cap(g, cap)?;
    let mut en = Enumerator::new(g, pred, Mode::Factor, false);
    en.run();
    Ok(en.found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMode {
    Orientation,
    Factor,
}

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest vertex count for the subset test.
    pub exhaustive: usize,
    /// Largest edge count for enumeration.
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            exhaustive: DEFAULT_EXHAUSTIVE_CAP,
            enumeration: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Verdicts from every applicable route; `None` means the route was skipped
/// (over a cap, or hypotheses not met for the boundary routes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub mode: ValidationMode,
    pub flow: Option<bool>,
    pub frank_gyarfas: Option<bool>,
    pub enumeration: Option<bool>,
    pub hypotheses_hold: bool,
    pub boundary_enumeration: Option<bool>,
    pub boundary_algorithm: Option<bool>,
    /// Directed pairs for orientations, member edge ids for factors.
    pub witness: Option<Vec<(VertexId, VertexId)>>,
    pub agreement: bool,
}

fn verdict<T>(r: Result<T>) -> Result<bool> {
    match r {
        Ok(_) => Ok(true),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

fn finish(mut report: OracleReport) -> OracleReport {
    let verdicts = [
        report.flow,
        report.frank_gyarfas,
        report.enumeration,
        report.boundary_enumeration,
        report.boundary_algorithm,
    ];
    let mut seen = verdicts.iter().flatten();
    report.agreement = match seen.next() {
        Some(first) => seen.all(|v| v == first),
        None => true,
    };
    report
}

/// Runs all routes on one instance and records whether they agree.
///
/// `part` is only used in factor mode; it defaults to the graph's own
/// bipartition.
pub fn cross_validate(
    g: &Graph,
    b: &DegreeBounds,
    mode: ValidationMode,
    part: Option<&Bipartition>,
    caps: Caps,
) -> Result<OracleReport> {
    let instance = format!("n={} m={}", g.vertex_count(), g.edge_count());
    let enumerable = g.edge_count() <= caps.enumeration;
    match mode {
        ValidationMode::Orientation => {
            validate_bounds(g, b)?;
            let flow = verdict(orient_pq_relaxed(g, b))?;
            let frank_gyarfas = if g.vertex_count() <= caps.exhaustive {
                Some(frank_gyarfas_check(g, b, caps.exhaustive)?.is_feasible())
            } else {
                None
            };
            let mut witness = None;
            let enumeration = if enumerable {
                let found = enum_orientations(g, DegreePredicate::Interval(b), caps.enumeration)?;
                witness = found.as_ref().map(Orientation::directed_pairs);
                Some(found.is_some())
            } else {
                None
            };
            let hypotheses_hold = check_hypotheses(g, b).theorem_ok;
            let (boundary_enumeration, boundary_algorithm) = if hypotheses_hold {
                let by_enum = if enumerable {
                    Some(
                        enum_orientations(g, DegreePredicate::Boundary(b), caps.enumeration)?
                            .is_some(),
                    )
                } else {
                    None
                };
                let by_algo = verdict(orient_boundary(g, b, BoundaryOptions::default()))?;
                (by_enum, Some(by_algo))
            } else {
                (None, None)
            };
            Ok(finish(OracleReport {
                instance,
                mode,
                flow: Some(flow),
                frank_gyarfas,
                enumeration,
                hypotheses_hold,
                boundary_enumeration,
                boundary_algorithm,
                witness,
                agreement: false,
            }))
        }
        ValidationMode::Factor => {
            let own;
            let part = match part {
                Some(p) => p,
                None => {
                    own = g.bipartition()?;
                    &own
                }
            };
            b.check_range(g)?;
            let flow = verdict(factor_gf_with(g, part, b))?;
            let oriented = orientation_bounds(g, part, b)?;
            let frank_gyarfas = if g.vertex_count() <= caps.exhaustive {
                Some(frank_gyarfas_check(g, &oriented, caps.exhaustive)?.is_feasible())
            } else {
                None
            };
            let mut witness = None;
            let enumeration = if enumerable {
                let found = enum_factors(g, DegreePredicate::Interval(b), caps.enumeration)?;
                witness = found
                    .as_ref()
                    .map(|f| f.edges().map(|e| g.endpoints(e)).collect());
                Some(found.is_some())
            } else {
                None
            };
            let hypotheses_hold =
                b.check_strict(g).is_ok() && check_factor_hypotheses(g, part, b).all_ok;
            let (boundary_enumeration, boundary_algorithm) = if hypotheses_hold {
                let by_enum = if enumerable {
                    Some(enum_factors(g, DegreePredicate::Boundary(b), caps.enumeration)?.is_some())
                } else {
                    None
                };
                let by_algo = verdict(factor_boundary_with(g, part, b, BoundaryOptions::default()))?;
                (by_enum, Some(by_algo))
            } else {
                (None, None)
            };
            Ok(finish(OracleReport {
                instance,
                mode,
                flow: Some(flow),
                frank_gyarfas,
                enumeration,
                hypotheses_hold,
                boundary_enumeration,
                boundary_algorithm,
                witness,
                agreement: false,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundsRole;

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn c4() -> Graph {
        Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    fn uniform(n: usize, p: usize, q: usize) -> DegreeBounds {
        DegreeBounds::uniform(n, p, q, BoundsRole::Orientation).unwrap()
    }

    /// Plain loop over all masks, no pruning.
    fn naive_orientation_count(g: &Graph, accept: impl Fn(VertexId, usize) -> bool) -> (u64, Option<u64>) {
        let mut count = 0;
        let mut first = None;
        for mask in 0u64..1 << g.edge_count() {
            let mut out = vec![0; g.vertex_count()];
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                out[if mask >> e & 1 == 1 { u } else { v }] += 1;
            }
            if (0..g.vertex_count()).all(|v| accept(v, out[v])) {
                count += 1;
                first.get_or_insert(mask);
            }
        }
        (count, first)
    }

    fn mask_of(d: &Orientation<'_>) -> u64 {
        d.directions()
            .iter()
            .enumerate()
            .map(|(e, &f)| (f as u64) << e)
            .sum()
    }

    #[test]
    fn triangle_out_degree_one() {
        let g = complete(3);
        let one = |_: VertexId, d: usize| d == 1;
        assert_eq!(naive_orientation_count(&g, one).0, 2);
        assert_eq!(count_orientations(&g, DegreePredicate::Custom(&one), 22).unwrap(), 2);
        let b = uniform(3, 1, 1);
        assert_eq!(count_orientations(&g, DegreePredicate::Interval(&b), 22).unwrap(), 2);
        let w = enum_orientations(&g, DegreePredicate::Interval(&b), 22).unwrap().unwrap();
        assert_eq!(w.out_degrees(), &[1, 1, 1]);
        assert_eq!(Some(mask_of(&w)), naive_orientation_count(&g, one).1);
    }

    #[test]
    fn triangle_out_degree_two_is_impossible() {
        let g = complete(3);
        let two = |_: VertexId, d: usize| d == 2;
        assert!(enum_orientations(&g, DegreePredicate::Custom(&two), 22).unwrap().is_none());
    }

    #[test]
    fn single_edge_out_of_zero() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let pred = |v: VertexId, d: usize| if v == 0 { d == 1 } else { true };
        let w = enum_orientations(&g, DegreePredicate::Custom(&pred), 22).unwrap().unwrap();
        assert_eq!(w.directed_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn c4_factor_counts() {
        let g = c4();
        let one = |_: VertexId, d: usize| d == 1;
        assert_eq!(count_factors(&g, DegreePredicate::Custom(&one), 22).unwrap(), 2);
        let w = enum_factors(&g, DegreePredicate::Custom(&one), 22).unwrap().unwrap();
        assert_eq!(w.degrees(), &[1, 1, 1, 1]);

        let two = |_: VertexId, d: usize| d == 2;
        assert_eq!(count_factors(&g, DegreePredicate::Custom(&two), 22).unwrap(), 1);
        assert_eq!(
            enum_factors(&g, DegreePredicate::Custom(&two), 22).unwrap().unwrap().size(),
            4
        );

        let zero = |_: VertexId, d: usize| d == 0;
        let g5 = complete(5);
        let w = enum_factors(&g5, DegreePredicate::Custom(&zero), 22)
            .unwrap()
            .unwrap();
        assert_eq!(w.size(), 0);
    }

    #[test]
    fn enumeration_cap() {
        let g = complete(8);
        let b = uniform(8, 0, 7);
        assert!(matches!(
            enum_orientations(&g, DegreePredicate::Interval(&b), 22),
            Err(Error::TooLargeForEnumeration { m: 28, cap: 22 })
        ));
    }

    #[test]
    fn pruned_and_naive_witnesses_agree() {
        // Boundary predicate on K5 with p = 1, q = 4 and a few list functions.
        let g = complete(5);
        let b = uniform(5, 1, 4);
        let pred = |v: VertexId, d: usize| b.in_boundary_set(v, d);
        let (count, first) = naive_orientation_count(&g, pred);
        assert_eq!(count_orientations(&g, DegreePredicate::Boundary(&b), 22).unwrap(), count);
        let w = enum_orientations(&g, DegreePredicate::Boundary(&b), 22).unwrap();
        assert_eq!(w.as_ref().map(mask_of), first);

        let lists = DegreeListFunction::from_vecs([vec![0, 4], vec![2], vec![1, 3], vec![2], vec![]]);
        let (count, _) = naive_orientation_count(&g, |v, d| lists.admits(v, d));
        assert_eq!(count, 0);
        assert_eq!(count_orientations(&g, DegreePredicate::Lists(&lists), 22).unwrap(), 0);
    }

    #[test]
    fn cross_validate_triangle() {
        let g = complete(3);
        let report = cross_validate(&g, &uniform(3, 0, 1), ValidationMode::Orientation, None, Caps::default())
            .unwrap();
        assert_eq!(report.flow, Some(true));
        assert_eq!(report.frank_gyarfas, Some(true));
        assert_eq!(report.enumeration, Some(true));
        assert!(report.agreement);
    }

    #[test]
    fn cross_validate_rejects_invalid_bounds() {
        let g = complete(3);
        assert!(matches!(
            cross_validate(&g, &uniform(3, 0, 0), ValidationMode::Orientation, None, Caps::default()),
            Err(Error::StrictnessViolated { .. })
        ));
    }

    #[test]
    fn cross_validate_k7() {
        let g = complete(7);
        let report = cross_validate(&g, &uniform(7, 1, 6), ValidationMode::Orientation, None, Caps::default())
            .unwrap();
        assert!(report.hypotheses_hold);
        assert_eq!(report.flow, Some(true));
        assert_eq!(report.enumeration, Some(true));
        assert_eq!(report.boundary_enumeration, Some(true));
        assert_eq!(report.boundary_algorithm, Some(true));
        assert!(report.agreement);
    }

    #[test]
    fn cross_validate_factor_mode() {
        let g = c4();
        let b = DegreeBounds::uniform(4, 0, 1, BoundsRole::Factor).unwrap();
        let report = cross_validate(&g, &b, ValidationMode::Factor, None, Caps::default()).unwrap();
        assert_eq!(report.flow, Some(true));
        assert_eq!(report.boundary_algorithm, Some(true));
        assert!(report.agreement);
    }
}
