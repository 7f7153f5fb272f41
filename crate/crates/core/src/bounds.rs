//! Per-vertex degree bounds and the exact-integer hypothesis checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Whether a bounds table constrains out-degrees `(p, q)` or factor degrees `(g, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundsRole {
    Orientation,
    Factor,
}

/// Lower and upper integer bounds per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBounds {
    lower: Vec<usize>,
    upper: Vec<usize>,
    role: BoundsRole,
}

impl DegreeBounds {
    /// Requires equal lengths and `lower[v] <= upper[v]`.
    pub fn new(lower: Vec<usize>, upper: Vec<usize>, role: BoundsRole) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::LengthMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (v, (&p, &q)) in lower.iter().zip(&upper).enumerate() {
            if p > q {
                return Err(Error::BoundsOutOfRange {
                    vertex: v,
                    lower: p,
                    upper: q,
                    degree: q,
                });
            }
        }
        Ok(DegreeBounds { lower, upper, role })
    }

    pub fn uniform(n: usize, lower: usize, upper: usize, role: BoundsRole) -> Result<Self> {
        DegreeBounds::new(vec![lower; n], vec![upper; n], role)
    }

    /// Builds bounds vertex by vertex from a closure over the vertex id.
    pub fn from_fn<F>(n: usize, role: BoundsRole, mut f: F) -> Result<Self>
    where
        F: FnMut(VertexId) -> (usize, usize),
    {
        let (lower, upper) = (0..n).map(&mut f).unzip();
        DegreeBounds::new(lower, upper, role)
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self, v: VertexId) -> usize {
        self.lower[v]
    }

    pub fn upper(&self, v: VertexId) -> usize {
        self.upper[v]
    }

    pub fn lowers(&self) -> &[usize] {
        &self.lower
    }

    pub fn uppers(&self) -> &[usize] {
        &self.upper
    }

    pub fn role(&self) -> BoundsRole {
        self.role
    }

    pub fn with_role(mut self, role: BoundsRole) -> Self {
        self.role = role;
        self
    }

    pub fn contains(&self, v: VertexId, degree: usize) -> bool {
        self.lower[v] <= degree && degree <= self.upper[v]
    }

    /// The collapsed four-value target `{p, p+1, q-1, q}`, sorted.
    pub fn boundary_set(&self, v: VertexId) -> Vec<usize> {
        let (p, q) = (self.lower[v], self.upper[v]);
        let mut set = vec![p, p + 1, q.saturating_sub(1), q];
        set.retain(|&x| p <= x && x <= q);
        set.sort_unstable();
        set.dedup();
        set
    }

    pub fn in_boundary_set(&self, v: VertexId, degree: usize) -> bool {
        let (p, q) = (self.lower[v], self.upper[v]);
        self.contains(v, degree)
            && (degree == p || degree == p + 1 || degree + 1 == q || degree == q)
    }

    /// `0 <= lower <= upper <= degree` at every vertex.
    pub fn check_range(&self, g: &Graph) -> Result<()> {
        if self.len() != g.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: g.vertex_count(),
                actual: self.len(),
            });
        }
        for v in 0..self.len() {
            let d = g.degree(v);
            if self.upper[v] > d {
                return Err(Error::BoundsOutOfRange {
                    vertex: v,
                    lower: self.lower[v],
                    upper: self.upper[v],
                    degree: d,
                });
            }
        }
        Ok(())
    }

    /// `lower < upper` at every vertex of positive degree.
    pub fn check_strict(&self, g: &Graph) -> Result<()> {
        for v in 0..self.len() {
            if g.degree(v) > 0 && self.lower[v] == self.upper[v] {
                return Err(Error::StrictnessViolated {
                    vertex: v,
                    bound: self.lower[v],
                });
            }
        }
        Ok(())
    }
}

/// Full validation: range plus strictness.
pub fn validate_bounds(g: &Graph, b: &DegreeBounds) -> Result<()> {
    b.check_range(g)?;
    b.check_strict(g)
}

/// Per-vertex hypothesis flags, evaluated in scaled integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    /// `2q >= d`
    pub half_upper: Vec<bool>,
    /// `2p >= q - 4`
    pub gap_lower: Vec<bool>,
    /// `3p >= d - 4`, `2p <= d <= 2q` and `3q <= 2d + 4`
    pub corollary_window: Vec<bool>,
    pub theorem_ok: bool,
    pub corollary_ok: bool,
}

impl HypothesisReport {
    pub fn theorem_failures(&self) -> Vec<VertexId> {
        (0..self.half_upper.len())
            .filter(|&v| !(self.half_upper[v] && self.gap_lower[v]))
            .collect()
    }

    pub fn corollary_failures(&self) -> Vec<VertexId> {
        (0..self.corollary_window.len())
            .filter(|&v| !self.corollary_window[v])
            .collect()
    }
}

pub fn check_hypotheses(g: &Graph, b: &DegreeBounds) -> HypothesisReport {
    let n = g.vertex_count();
    let mut half_upper = Vec::with_capacity(n);
    let mut gap_lower = Vec::with_capacity(n);
    let mut corollary_window = Vec::with_capacity(n);
    for v in 0..n {
        let d = g.degree(v) as i64;
        let p = b.lower(v) as i64;
        let q = b.upper(v) as i64;
        half_upper.push(2 * q >= d);
        gap_lower.push(2 * p >= q - 4);
        corollary_window.push(3 * p >= d - 4 && 2 * p <= d && d <= 2 * q && 3 * q <= 2 * d + 4);
    }
    let theorem_ok = half_upper.iter().zip(&gap_lower).all(|(&a, &b)| a && b);
    let corollary_ok = corollary_window.iter().all(|&c| c);
    HypothesisReport {
        half_upper,
        gap_lower,
        corollary_window,
        theorem_ok,
        corollary_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, pairs).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn validation() {
        let k3 = complete(3);
        let ok = DegreeBounds::uniform(3, 0, 1, BoundsRole::Orientation).unwrap();
        assert_eq!(validate_bounds(&k3, &ok), Ok(()));

        let too_high = DegreeBounds::uniform(3, 0, 3, BoundsRole::Orientation).unwrap();
        assert!(matches!(
            validate_bounds(&k3, &too_high),
            Err(Error::BoundsOutOfRange { vertex: 0, .. })
        ));

        let p2 = Graph::new(2, [(0, 1)]).unwrap();
        let tight = DegreeBounds::uniform(2, 1, 1, BoundsRole::Orientation).unwrap();
        assert_eq!(
            validate_bounds(&p2, &tight),
            Err(Error::StrictnessViolated { vertex: 0, bound: 1 })
        );

        assert!(DegreeBounds::new(vec![2], vec![1], BoundsRole::Orientation).is_err());
    }

    #[test]
    fn isolated_vertices_need_zero_bounds() {
        let g = Graph::empty(1);
        let zero = DegreeBounds::uniform(1, 0, 0, BoundsRole::Orientation).unwrap();
        assert_eq!(validate_bounds(&g, &zero), Ok(()));
        let one = DegreeBounds::uniform(1, 0, 1, BoundsRole::Orientation).unwrap();
        assert!(validate_bounds(&g, &one).is_err());
    }

    #[test]
    fn hypotheses_on_k7() {
        let k7 = complete(7);
        let pass = DegreeBounds::uniform(7, 1, 6, BoundsRole::Orientation).unwrap();
        let report = check_hypotheses(&k7, &pass);
        assert!(report.theorem_ok);
        assert!(report.theorem_failures().is_empty());

        let fail = DegreeBounds::uniform(7, 0, 6, BoundsRole::Orientation).unwrap();
        let report = check_hypotheses(&k7, &fail);
        assert!(!report.theorem_ok);
        assert!(report.half_upper.iter().all(|&h| h));
        assert!(report.gap_lower.iter().all(|&g| !g));
    }

    #[test]
    fn hypotheses_on_star() {
        let g = star(6);
        let b = DegreeBounds::from_fn(7, BoundsRole::Orientation, |v| {
            if v == 0 {
                (1, 6)
            } else {
                (0, 1)
            }
        })
        .unwrap();
        let report = check_hypotheses(&g, &b);
        assert!(report.gap_lower[0]);
        assert!(report.theorem_ok);
    }

    #[test]
    fn corollary_window_on_k7() {
        let k7 = complete(7);
        let b = DegreeBounds::uniform(7, 1, 4, BoundsRole::Orientation).unwrap();
        assert!(check_hypotheses(&k7, &b).corollary_ok);
        let b = DegreeBounds::uniform(7, 1, 6, BoundsRole::Orientation).unwrap();
        // 3 * 6 > 2 * 6 + 4
        assert!(!check_hypotheses(&k7, &b).corollary_ok);
    }

    #[test]
    fn boundary_sets() {
        let b = DegreeBounds::new(vec![1, 0, 0, 0], vec![6, 2, 1, 0], BoundsRole::Orientation)
            .unwrap();
        assert_eq!(b.boundary_set(0), vec![1, 2, 5, 6]);
        assert_eq!(b.boundary_set(1), vec![0, 1, 2]);
        assert_eq!(b.boundary_set(2), vec![0, 1]);
        assert_eq!(b.boundary_set(3), vec![0]);
        for v in 0..4 {
            for d in 0..8 {
                assert_eq!(b.in_boundary_set(v, d), b.boundary_set(v).contains(&d));
            }
        }
    }
}
