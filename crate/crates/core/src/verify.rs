//! Independent re-checking of result files against an instance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::DegreeBounds;
use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::graph::{Graph, Orientation, VertexId};
use crate::io::{parse_factor, parse_orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// `p <= d+ <= q`
    Pq,
    /// `d+` in `{p, p+1, q-1, q}`
    Boundary,
    /// `g <= d_F <= f`
    Gf,
    /// `d_F` in `{g, g+1, f-1, f}`
    FactorBoundary,
    /// `|d+ - d-| <= 1`
    Balanced,
}

impl Claim {
    pub fn is_factor_claim(self) -> bool {
        matches!(self, Claim::Gf | Claim::FactorBoundary)
    }

    pub fn needs_bounds(self) -> bool {
        !matches!(self, Claim::Balanced)
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pq" => Ok(Claim::Pq),
            "boundary" => Ok(Claim::Boundary),
            "gf" => Ok(Claim::Gf),
            "factor-boundary" => Ok(Claim::FactorBoundary),
            "balanced" => Ok(Claim::Balanced),
            other => Err(format!("unknown claim {other:?}")),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Pq => "pq",
            Claim::Boundary => "boundary",
            Claim::Gf => "gf",
            Claim::FactorBoundary => "factor-boundary",
            Claim::Balanced => "balanced",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: VertexId,
    pub degree: usize,
    pub allowed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub claim: Claim,
    pub pass: bool,
    /// Out-degrees for orientation claims, factor degrees for factor claims.
    pub degrees: Vec<usize>,
    pub violations: Vec<Violation>,
}

fn bounds_for(claim: Claim, bounds: Option<&DegreeBounds>, n: usize) -> Result<Option<&DegreeBounds>> {
    if !claim.needs_bounds() {
        return Ok(None);
    }
    let b = bounds.ok_or_else(|| Error::parse(0, format!("claim {claim} needs bounds")))?;
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    Ok(Some(b))
}

fn report(claim: Claim, degrees: Vec<usize>, check: impl Fn(VertexId, usize) -> Option<String>) -> VerifyReport {
    let violations: Vec<Violation> = degrees
        .iter()
        .enumerate()
        .filter_map(|(v, &d)| {
            check(v, d).map(|allowed| Violation {
                vertex: v,
                degree: d,
                allowed,
            })
        })
        .collect();
    VerifyReport {
        claim,
        pass: violations.is_empty(),
        degrees,
        violations,
    }
}

fn boundary_text(b: &DegreeBounds, v: VertexId) -> String {
    format!("{:?}", b.boundary_set(v))
}

pub fn verify_orientation(d: &Orientation<'_>, bounds: Option<&DegreeBounds>, claim: Claim) -> Result<VerifyReport> {
    let g = d.graph();
    if claim.is_factor_claim() {
        return Err(Error::parse(0, format!("claim {claim} applies to factors")));
    }
    let b = bounds_for(claim, bounds, g.vertex_count())?;
    // Recount from the direction flags rather than trusting the cache.
    let mut out = vec![0usize; g.vertex_count()];
    for e in 0..g.edge_count() {
        out[d.tail(e)] += 1;
    }
    Ok(report(claim, out, |v, o| {
        let deg = g.degree(v);
        match claim {
            Claim::Pq => {
                let b = b.expect("bounds present");
                (!b.contains(v, o)).then(|| format!("[{}, {}]", b.lower(v), b.upper(v)))
            }
            Claim::Boundary => {
                let b = b.expect("bounds present");
                (!b.in_boundary_set(v, o)).then(|| boundary_text(b, v))
            }
            Claim::Balanced => {
                (o.abs_diff(deg - o) > 1).then(|| format!("[{}, {}]", deg / 2, deg.div_ceil(2)))
            }
            Claim::Gf | Claim::FactorBoundary => unreachable!(),
        }
    }))
}

pub fn verify_factor(f: &Factor<'_>, bounds: Option<&DegreeBounds>, claim: Claim) -> Result<VerifyReport> {
    let g = f.graph();
    if !claim.is_factor_claim() {
        return Err(Error::parse(0, format!("claim {claim} applies to orientations")));
    }
    let b = bounds_for(claim, bounds, g.vertex_count())?.expect("factor claims need bounds");
    let mut deg = vec![0usize; g.vertex_count()];
    for e in f.edges() {
        let (u, v) = g.endpoints(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    Ok(report(claim, deg, |v, d| match claim {
        Claim::Gf => (!b.contains(v, d)).then(|| format!("[{}, {}]", b.lower(v), b.upper(v))),
        _ => (!b.in_boundary_set(v, d)).then(|| boundary_text(b, v)),
    }))
}

/// Parses `result` against the instance and checks `claim` at every vertex.
pub fn verify(g: &Graph, bounds: Option<&DegreeBounds>, result: &str, claim: Claim) -> Result<VerifyReport> {
    if claim.is_factor_claim() {
        let f = parse_factor(result, g)?;
        verify_factor(&f, bounds, claim)
    } else {
        let d = parse_orientation(result, g)?;
        verify_orientation(&d, bounds, claim)
    }
}
